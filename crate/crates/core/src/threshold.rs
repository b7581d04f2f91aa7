//! Shooting to the blowup/dispersion threshold and long-time tracking of the
//! codimension-one stable manifold.
//!
//! Initial data `u = eps psi + b0 xi` blows up for b0 above a critical value
//! and disperses below it (the orientation is pinned by an explicit
//! calibration test, not assumed). Bisection on b0 lands on the threshold to
//! machine precision, but round-off grows along the unstable direction as
//! `e^{lambda t}`, which limits any single fine-tuned evolution to
//! `t ~ ln(1e16)/lambda ~ 33`. [`renormalized_evolve`] therefore re-shoots a
//! small correction `db xi` every `t_corr`, tracking the manifold to
//! arbitrary times.

use crate::bisect::{bisect_threshold, BisectSettings};
use crate::evolver::{Evolver, ExitStatus, FieldState, ObserverSpec, Records};
use crate::normalform::coupling_closed_forms;
use crate::{Error, Result};
use serde::Serialize;

pub use crate::bisect::Branch;

/// Second-order stable-manifold estimate `b0 = -44 c2 eps^2 / 85`, the
/// center of the first shooting bracket.
pub fn manifold_b0_estimate(eps: f64) -> f64 {
    let c2 = coupling_closed_forms()[1];
    -44.0 * c2 * eps * eps / 85.0
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifySettings {
    /// |<xi,u>| beyond this classifies the branch; far above the manifold
    /// oscillations O(eps^2), far below the blowup bound.
    pub b_crit: f64,
    /// Classification horizon per probe.
    pub horizon: f64,
}

impl Default for ClassifySettings {
    fn default() -> Self {
        ClassifySettings {
            b_crit: 0.5,
            horizon: 45.0,
        }
    }
}

/// Evolves a throwaway copy of `state` until the unstable-mode coefficient
/// escapes past `+-b_crit` or the field amplitude trips the blowup bound.
/// Returns the branch and the escape time (horizon end if undecided).
pub fn classify(ev: &Evolver, state: &FieldState, settings: &ClassifySettings) -> (Branch, f64) {
    let mut s = state.clone();
    let mut ws = ev.workspace();
    let steps = (settings.horizon / ev.config().dt).round() as usize;
    for _ in 0..steps {
        if let crate::evolver::StepSignal::Blowup { .. } = ev.step(&mut s, &mut ws) {
            return (Branch::Blowup, s.t);
        }
        let b = ev.unstable_projection(&s);
        if b > settings.b_crit {
            return (Branch::Blowup, s.t);
        }
        if b < -settings.b_crit {
            return (Branch::Dispersal, s.t);
        }
    }
    (Branch::Undecided, s.t)
}

#[derive(Debug, Clone)]
pub struct ShootSettings {
    /// Bracket center; `None` uses [`manifold_b0_estimate`].
    pub b_center: Option<f64>,
    /// Initial bracket half-width; `None` scales with the center and eps^3.
    pub seed_half_width: Option<f64>,
    /// Bisection stops below this bracket width.
    pub tol_b: f64,
    pub classify: ClassifySettings,
}

impl Default for ShootSettings {
    fn default() -> Self {
        ShootSettings {
            b_center: None,
            seed_half_width: None,
            tol_b: 1e-16,
            classify: ClassifySettings::default(),
        }
    }
}

/// Outcome of one bisection to the threshold.
#[derive(Debug, Clone, Serialize)]
pub struct ShootingResult {
    pub b_star: f64,
    pub bracket: (f64, f64),
    pub evaluations: usize,
    /// Branch label of every classified probe, in evaluation order.
    pub classifications: Vec<(f64, Branch)>,
}

/// Bisects the initial unstable coefficient of `u(0) = eps psi + b0 xi` to
/// the blowup/dispersion threshold.
pub fn shoot(ev: &Evolver, eps: f64, settings: &ShootSettings) -> Result<ShootingResult> {
    let center = settings
        .b_center
        .unwrap_or_else(|| manifold_b0_estimate(eps));
    let seed = settings
        .seed_half_width
        .unwrap_or_else(|| (0.5 * center.abs()).max(2.0 * eps.powi(3).abs()).max(1e-5));
    let mut labels = Vec::new();
    let outcome = bisect_threshold(
        |db| {
            let state = ev.init_state(eps, center + db);
            let (branch, _) = classify(ev, &state, &settings.classify);
            labels.push((center + db, branch));
            branch
        },
        BisectSettings {
            seed_half_width: seed,
            tol: settings.tol_b,
            max_probes: 400,
        },
    )?;
    Ok(ShootingResult {
        b_star: center + outcome.value,
        bracket: (center + outcome.bracket.0, center + outcome.bracket.1),
        evaluations: outcome.probes,
        classifications: labels,
    })
}

/// One evolve-and-reshoot segment of a renormalized run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SegmentInfo {
    pub t_start: f64,
    /// Correction applied along xi at `t_start`.
    pub db: f64,
    /// Bisection probes spent on this correction.
    pub probes: usize,
    /// Final bisection bracket around the correction.
    pub bracket: (f64, f64),
}

/// Long-time evolution held on the stable manifold by repeated corrections.
#[derive(Debug)]
pub struct RenormalizedRun {
    pub eps: f64,
    pub t_corr: f64,
    /// Initial threshold coefficient (center + first correction).
    pub b0: f64,
    pub segments: Vec<SegmentInfo>,
    pub records: Records,
    pub exit: ExitStatus,
    pub final_state: FieldState,
}

/// Evolves `u(0) = eps psi + b0 xi` to `t_end`, re-shooting a correction
/// `db xi` every `t_corr`. The first correction doubles as the initial b0
/// fine-tuning. Observer records accumulate across segments.
pub fn renormalized_evolve(
    ev: &Evolver,
    eps: f64,
    t_end: f64,
    t_corr: f64,
    observers: &ObserverSpec,
    settings: &ShootSettings,
) -> Result<RenormalizedRun> {
    let center = settings
        .b_center
        .unwrap_or_else(|| manifold_b0_estimate(eps));
    let mut state = ev.init_state(eps, center);
    let mut records = Records::default();
    let mut segments: Vec<SegmentInfo> = Vec::new();
    let mut t = 0.0;
    let mut exit = ExitStatus::Completed;
    while t < t_end - 1e-9 {
        let first = segments.is_empty();
        let seed = if first {
            settings
                .seed_half_width
                .unwrap_or_else(|| (0.5 * center.abs()).max(2.0 * eps.powi(3).abs()).max(1e-5))
        } else {
            // post-correction drift is round-off amplified over one segment
            4e-6
        };
        let mut probes = 0usize;
        let outcome = bisect_threshold(
            |db| {
                probes += 1;
                let mut probe_state = state.clone();
                ev.kick_unstable(&mut probe_state, db);
                classify(ev, &probe_state, &settings.classify).0
            },
            BisectSettings {
                seed_half_width: seed,
                tol: settings.tol_b,
                max_probes: 400,
            },
        )?;
        let db = outcome.value;
        if !first && db.abs() > 1e-3 {
            return Err(Error::CorrectionDivergence { db });
        }
        ev.kick_unstable(&mut state, db);
        segments.push(SegmentInfo {
            t_start: t,
            db,
            probes,
            bracket: outcome.bracket,
        });
        let seg_end = (t + t_corr).min(t_end);
        exit = ev.evolve(&mut state, seg_end, observers, &mut records);
        if let ExitStatus::Blowup { .. } = exit {
            break;
        }
        t = seg_end;
    }
    let b0 = center + segments.first().map(|s| s.db).unwrap_or(0.0);
    Ok(RenormalizedRun {
        eps,
        t_corr,
        b0,
        segments,
        records,
        exit,
        final_state: state,
    })
}
