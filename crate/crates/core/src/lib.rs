//! Numerical laboratory for the radiation damping of the soliton internal mode
//! in the 1D quadratic Klein-Gordon equation
//!
//! ```text
//!     phi_tt - phi_xx + phi = phi^2,        phi(t,x) = S(x) + u(t,x),
//!     u_tt + L u = u^2,                     L = -d^2/dx^2 - 3 sech^2(x/2) + 1.
//! ```
//!
//! The soliton `S(x) = (3/2) sech^2(x/2)` carries an internal mode `psi`
//! (omega^2 = 3/4), an unstable mode `xi` (L xi = -lambda^2 xi, lambda^2 = 5/4)
//! and an odd zero mode `chi`. On the codimension-one manifold where the
//! instability is tuned away, the internal mode decays by resonant energy
//! transfer into the continuum at frequency 2*omega:
//!
//! ```text
//!     R(t) = eps / sqrt(1 + eps^2 Gamma t),
//!     theta(t) = (gamma/Gamma) ln(1 + eps^2 Gamma t),
//! ```
//!
//! with `Gamma` a Fermi-golden-rule coefficient and `gamma = gamma1 + gamma2
//! + gamma3` the cubic frequency shift. The crate computes every constant
//! from first principles ([`spectral`], [`jost`], [`normalform`]), evolves
//! fine-tuned perturbations with repeated shooting to the blowup/dispersion
//! threshold ([`evolver`], [`threshold`]), and fits the measured decay and
//! frequency drift against the predictions ([`analysis`]).

pub mod analysis;
pub(crate) mod bisect;
pub mod evolver;
pub mod grid;
pub mod io;
pub mod jost;
pub mod normalform;
pub mod spectral;
pub mod threshold;

/// omega^2 = 3/4, squared frequency of the internal mode.
pub const OMEGA2: f64 = 0.75;
/// omega = sqrt(3)/2, frequency of the internal mode.
pub const OMEGA: f64 = 0.8660254037844386;
/// lambda^2 = 5/4, squared growth rate of the unstable mode.
pub const LAMBDA2: f64 = 1.25;
/// lambda = sqrt(5)/2, growth rate of the unstable mode.
pub const LAMBDA: f64 = 1.118033988749895;
/// p = sqrt(4 omega^2 - 1) = sqrt(2), wavenumber resonant with 2*omega.
pub const P_RES: f64 = std::f64::consts::SQRT_2;

/// Errors shared by every stage of the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("field length {got} does not match grid size {expected}")]
    GridMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("Jost functions are singular at k = 0")]
    ZeroWavenumber,

    #[error("{what}: routes disagree by {deviation:.3e} (tolerance {tol:.1e})")]
    ConsistencyCheck {
        what: &'static str,
        deviation: f64,
        tol: f64,
    },

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("residual {got:.3e} exceeds tolerance {tol:.1e} for {what}")]
    ResidualTooLarge {
        what: &'static str,
        got: f64,
        tol: f64,
    },

    #[error("non-finite field values at t = {t}")]
    NonFinite { t: f64 },

    #[error("bracket ends classify to the same branch after widening")]
    SameBranchBracket,

    #[error("classification still undecided at horizon {horizon}")]
    UndecidedPersistent { horizon: f64 },

    #[error("correction |db| = {db:.3e} diverges segment over segment")]
    CorrectionDivergence { db: f64 },

    #[error("reduced trajectory escaped (b = {b:.3e}) at t = {t}")]
    ReducedDivergence { t: f64, b: f64 },

    #[error("fit window ({lo}, {hi}) selects fewer than {need} points")]
    EmptyWindow { lo: f64, hi: f64, need: usize },

    #[error("non-positive peak value {value:.3e} at t = {t} inside fit window")]
    NonPositivePeak { t: f64, value: f64 },

    #[error("probe at x0 = {x0} sits at a zero of psi (|psi(x0)| = {psi:.3e})")]
    ProbeAtPsiZero { x0: f64, psi: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
