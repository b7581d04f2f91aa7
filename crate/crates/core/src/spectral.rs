//! Closed-form spectral data of the linearized operator
//! `L = -d^2/dx^2 - 3 sech^2(x/2) + 1`.
//!
//! The discrete spectrum consists of three orthonormal eigenfunctions:
//!
//! ```text
//!   unstable  L xi  = -(5/4) xi,   xi  = sqrt(15/32) sech^3(x/2)
//!   zero      L chi = 0,           chi = sqrt(15/8) tanh(x/2) sech^2(x/2)
//!   internal  L psi = (3/4) psi,   psi = sqrt(3/32) (1 - 4 sinh^2(x/2)) / cosh^3(x/2)
//! ```
//!
//! and the continuous spectrum fills `[1, inf)`. All profiles are evaluated
//! from the closed forms; analytic unit L2 normalization is kept (the
//! normal-form constants assume it) and the discrete quadrature norms are
//! recorded for diagnostics only.
//!
//! Sign note: with psi as written (psi(0) = +sqrt(3/32)), the overlap
//! integrals come out as `int psi^3 < 0` and `int psi xi^2 > 0`. The
//! dynamics is invariant under psi -> -psi, which flips both signs; every
//! derived constant uses only the invariant combinations.

use crate::grid::Grid;
use crate::{Result, LAMBDA2, OMEGA2};

/// Soliton profile `S(x) = (3/2) sech^2(x/2)`.
pub fn soliton(x: f64) -> f64 {
    let s = sech(0.5 * x);
    1.5 * s * s
}

/// Internal mode `psi`, eigenvalue omega^2 = 3/4, even, unit L2 norm.
pub fn psi(x: f64) -> f64 {
    let h = 0.5 * x;
    let s = sech(h);
    (3.0 / 32.0f64).sqrt() * (1.0 - 4.0 * h.sinh() * h.sinh()) * s * s * s
}

/// Unstable mode `xi`, eigenvalue -lambda^2 = -5/4, even, unit L2 norm.
pub fn xi(x: f64) -> f64 {
    let s = sech(0.5 * x);
    (15.0 / 32.0f64).sqrt() * s * s * s
}

/// Zero mode `chi`, odd, unit L2 norm; tied to translation invariance.
pub fn chi(x: f64) -> f64 {
    let h = 0.5 * x;
    let s = sech(h);
    (15.0 / 8.0f64).sqrt() * h.tanh() * s * s
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// Positive root of `psi(x) = 0`: x = 2 arcsinh(1/2).
pub fn psi_zero() -> f64 {
    2.0 * 0.5f64.asinh()
}

/// Discretized soliton and eigenmodes on a grid, with quadrature norms.
#[derive(Debug, Clone)]
pub struct ModeSet {
    grid: Grid,
    s: Vec<f64>,
    psi: Vec<f64>,
    xi: Vec<f64>,
    chi: Vec<f64>,
    /// Discrete L2 norms of (S, psi, xi, chi); diagnostics only.
    pub discrete_norms: [f64; 4],
}

/// Evaluates the closed-form profiles on `grid` and records their discrete
/// norms. The eigenvalue constants live in [`crate::OMEGA2`] and
/// [`crate::LAMBDA2`].
pub fn build_modes(grid: &Grid) -> ModeSet {
    let s = grid.sample(soliton);
    let psi_v = grid.sample(psi);
    let xi_v = grid.sample(xi);
    let chi_v = grid.sample(chi);
    let discrete_norms = [
        grid.norm(&s),
        grid.norm(&psi_v),
        grid.norm(&xi_v),
        grid.norm(&chi_v),
    ];
    ModeSet {
        grid: grid.clone(),
        s,
        psi: psi_v,
        xi: xi_v,
        chi: chi_v,
        discrete_norms,
    }
}

impl ModeSet {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn soliton(&self) -> &[f64] {
        &self.s
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    /// `P_c f = f - <xi,f> xi - <psi,f> psi`, the projection onto the
    /// continuous spectrum (for even fields; chi is odd and drops out).
    pub fn project_continuum(&self, f: &[f64]) -> Vec<f64> {
        let a = self.grid.inner(&self.psi, f);
        let b = self.grid.inner(&self.xi, f);
        f.iter()
            .zip(self.psi.iter().zip(&self.xi))
            .map(|(&v, (&p, &q))| v - a * p - b * q)
            .collect()
    }

    /// Mode coefficients `(a, b) = (<psi,f>, <xi,f>)`.
    pub fn project(&self, f: &[f64]) -> (f64, f64) {
        (self.grid.inner(&self.psi, f), self.grid.inner(&self.xi, f))
    }
}

/// Discrete `L f` with the grid's stencil and zero-extension ghosts.
pub fn apply_l(grid: &Grid, f: &[f64]) -> Result<Vec<f64>> {
    grid.check_len(f)?;
    let mut out = grid.second_deriv(f);
    for ((o, &x), &v) in out.iter_mut().zip(grid.points()).zip(f) {
        let s = sech(0.5 * x);
        *o = -*o + (1.0 - 3.0 * s * s) * v;
    }
    Ok(out)
}

/// Relative L2 eigen-residuals `||L psi - omega^2 psi|| / ||psi||` and
/// `||L xi + lambda^2 xi|| / ||xi||`.
pub fn eigen_residuals(modes: &ModeSet) -> Result<(f64, f64)> {
    let g = modes.grid();
    let lp = apply_l(g, modes.psi())?;
    let lx = apply_l(g, modes.xi())?;
    let rp: Vec<f64> = lp
        .iter()
        .zip(modes.psi())
        .map(|(l, m)| l - OMEGA2 * m)
        .collect();
    let rx: Vec<f64> = lx
        .iter()
        .zip(modes.xi())
        .map(|(l, m)| l + LAMBDA2 * m)
        .collect();
    Ok((
        g.norm(&rp) / g.norm(modes.psi()),
        g.norm(&rx) / g.norm(modes.xi()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modes() -> ModeSet {
        build_modes(&Grid::spectral_default())
    }

    #[test]
    fn closed_forms_at_origin() {
        assert!((soliton(0.0) - 1.5).abs() < 1e-15);
        assert!((psi(0.0) - (3.0 / 32.0f64).sqrt()).abs() < 1e-15);
        assert!((xi(0.0) - (15.0 / 32.0f64).sqrt()).abs() < 1e-15);
        assert_eq!(chi(0.0), 0.0);
    }

    #[test]
    fn psi_vanishes_at_two_arcsinh_half() {
        // independent oracle: bisect 1 - 4 sinh^2(x/2) on [0.5, 1.5]
        let f = |x: f64| 1.0 - 4.0 * (0.5 * x).sinh().powi(2);
        let (mut lo, mut hi) = (0.5, 1.5);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root - 0.9624236501192069).abs() < 1e-12);
        assert!((psi_zero() - root).abs() < 1e-12);
        assert!(psi(psi_zero()).abs() < 1e-15);
    }

    #[test]
    fn modes_have_unit_norms_and_are_orthogonal() {
        let m = modes();
        for (i, n) in m.discrete_norms.iter().enumerate().skip(1) {
            assert!((n - 1.0).abs() < 1e-10, "mode {i} norm {n}");
        }
        let g = m.grid();
        let tol_orth = 1e-8;
        assert!(g.inner(m.psi(), m.xi()).abs() < tol_orth);
        assert!(g.inner(m.psi(), m.chi()).abs() < tol_orth);
        assert!(g.inner(m.xi(), m.chi()).abs() < tol_orth);
    }

    #[test]
    fn eigenmode_parities() {
        let m = modes();
        let n = m.grid().len();
        for i in 0..n {
            let j = n - 1 - i;
            assert!((m.psi()[i] - m.psi()[j]).abs() < 1e-15, "psi even");
            assert!((m.xi()[i] - m.xi()[j]).abs() < 1e-15, "xi even");
            assert!((m.chi()[i] + m.chi()[j]).abs() < 1e-15, "chi odd");
        }
    }

    #[test]
    fn apply_l_reproduces_eigenvalues() {
        let m = modes();
        let (rp, rx) = eigen_residuals(&m).unwrap();
        assert!(rp < 1e-6, "psi residual {rp:.3e}");
        assert!(rx < 1e-6, "xi residual {rx:.3e}");
    }

    #[test]
    fn apply_l_is_linear_and_rejects_mismatch() {
        let g = Grid::spectral_default();
        let zero = vec![0.0; g.len()];
        let lz = apply_l(&g, &zero).unwrap();
        assert!(lz.iter().all(|&v| v == 0.0));
        assert!(matches!(
            apply_l(&g, &zero[1..]),
            Err(crate::Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn eigen_residuals_scale_with_stencil_order() {
        // refinement in dx at fixed order 4: residual ~ dx^4
        let coarse = build_modes(&Grid::new(50.0, 0.1, 4).unwrap());
        let fine = build_modes(&Grid::new(50.0, 0.05, 4).unwrap());
        let (rc, _) = eigen_residuals(&coarse).unwrap();
        let (rf, _) = eigen_residuals(&fine).unwrap();
        let ratio = rc / rf;
        assert!(
            ratio > 12.0 && ratio < 20.0,
            "4th-order refinement ratio {ratio:.1} should be near 16"
        );
    }

    #[test]
    fn projector_annihilates_modes_and_is_idempotent() {
        let m = modes();
        let g = m.grid();
        let pp = m.project_continuum(m.psi());
        assert!(g.norm(&pp) < 1e-8, "P_c psi = 0");
        let f = g.sample(|x| (-0.3 * x * x).exp() * (1.0 + 0.2 * x * x));
        let p1 = m.project_continuum(&f);
        let p2 = m.project_continuum(&p1);
        let diff: f64 = p1
            .iter()
            .zip(&p2)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12, "idempotence: {diff:.3e}");
    }

    #[test]
    fn psi_cubed_overlap_matches_closed_form() {
        // <psi^2, psi> with psi(0) > 0 as implemented; magnitude
        // sqrt(3/2)*603*pi/8192, sign negative (see module docs).
        let m = modes();
        let psi2: Vec<f64> = m.psi().iter().map(|p| p * p).collect();
        let c1 = m.grid().inner(&psi2, m.psi());
        let expect = -(1.5f64).sqrt() * 603.0 * std::f64::consts::PI / 8192.0;
        assert!((c1 - expect).abs() < 1e-12, "c1 = {c1:.9} vs {expect:.9}");
        assert!((c1.abs() - 0.283220).abs() < 1e-6);
    }
}
