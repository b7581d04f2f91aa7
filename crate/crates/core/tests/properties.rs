//! Property tests of the spec invariants that hold for whole parameter
//! families, not just the paper's values.

use kg_soliton::analysis::{combined_gamma, fit_damping, fit_frequency_shift, track_peaks};
use kg_soliton::grid::Grid;
use kg_soliton::normalform::{integrate_reduced, reduced_hamiltonian, ReducedState};
use kg_soliton::spectral::build_modes;
use kg_soliton::OMEGA;
use proptest::prelude::*;
use std::sync::OnceLock;

fn modes() -> &'static kg_soliton::spectral::ModeSet {
    static CELL: OnceLock<kg_soliton::spectral::ModeSet> = OnceLock::new();
    CELL.get_or_init(|| build_modes(&Grid::new(40.0, 0.05, 4).unwrap()))
}

fn coupling() -> &'static kg_soliton::normalform::CouplingConstants {
    static CELL: OnceLock<kg_soliton::normalform::CouplingConstants> = OnceLock::new();
    CELL.get_or_init(|| kg_soliton::normalform::coupling_constants(modes()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// P_c annihilates the discrete modes and is idempotent for any smooth
    /// even test field.
    #[test]
    fn projector_properties(center in -10.0f64..10.0, width in 0.5f64..4.0, amp in -2.0f64..2.0) {
        let m = modes();
        let g = m.grid();
        let f: Vec<f64> = g.points().iter()
            .map(|&x| amp * (-(x - center).powi(2) / (width * width)).exp()
                + 0.3 * (-(x + center).powi(2) / (width * width)).exp())
            .collect();
        let p1 = m.project_continuum(&f);
        prop_assert!(g.inner(m.psi(), &p1).abs() < 1e-10);
        prop_assert!(g.inner(m.xi(), &p1).abs() < 1e-10);
        let p2 = m.project_continuum(&p1);
        let dev = p1.iter().zip(&p2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-12, "idempotence violated by {dev:.3e}");
    }

    /// The closed decay law satisfies R^2 (eps^-2 + Gamma t) = 1 identically
    /// and theta grows monotonically.
    #[test]
    fn decay_law_identity(eps in 0.01f64..0.6, t in 0.0f64..1e5, gg in 1e-4f64..0.1) {
        let r = eps / (1.0 + eps * eps * gg * t).sqrt();
        prop_assert!((r * r * (1.0 / (eps * eps) + gg * t) - 1.0).abs() < 1e-12);
        let theta = |tt: f64| (1.0 + eps * eps * gg * tt).ln() / gg;
        prop_assert!(theta(t + 1.0) > theta(t));
    }

    /// fit_damping and fit_frequency_shift invert the synthetic decay law
    /// across the whole constant family, not just the paper's values.
    #[test]
    fn fits_recover_synthetic_constants(
        eps in 0.1f64..0.4,
        gg in 0.004f64..0.02,
        gamma in 0.02f64..0.08,
    ) {
        let dt = 0.02;
        let t_end = 900.0;
        let n = (t_end / dt) as usize;
        let psi0 = kg_soliton::spectral::psi(0.0);
        let mut ts = Vec::with_capacity(n);
        let mut us = Vec::with_capacity(n);
        for k in 0..n {
            let t = k as f64 * dt;
            let s = 1.0 + eps * eps * gg * t;
            let r = eps / s.sqrt();
            let theta = gamma / gg * s.ln();
            ts.push(t);
            us.push(psi0 * r * (OMEGA * t - theta).cos());
        }
        let peaks = track_peaks(&ts, &us, 0.0).unwrap();
        let window = (50.0, t_end);
        let damping = fit_damping(&peaks, psi0, window).unwrap();
        prop_assert!((damping.gamma_big - gg).abs() / gg < 1e-5,
            "Gamma {} vs {gg}", damping.gamma_big);
        prop_assert!((damping.eps - eps).abs() / eps < 1e-5);
        let freq = fit_frequency_shift(&peaks, window).unwrap();
        let gamma_fit = combined_gamma(&damping, &freq);
        prop_assert!((gamma_fit - gamma).abs() / gamma < 1e-3,
            "gamma {gamma_fit} vs {gamma}");
    }

    /// The reduced truncation conserves its Hamiltonian along any bounded
    /// trajectory.
    #[test]
    fn reduced_system_conserves_hamiltonian(
        a in -0.08f64..0.08,
        b in -0.01f64..0.0,
        adot in -0.05f64..0.05,
    ) {
        let c = coupling();
        let init = ReducedState { a, a_dot: adot, b, b_dot: 0.0, time: 0.0 };
        // unstable direction may escape; only bounded stretches are checked
        if let Ok(traj) = integrate_reduced(init, 6.0, 1e-3, c) {
            let h0 = reduced_hamiltonian(&init, c);
            let drift = traj.iter()
                .map(|s| (reduced_hamiltonian(s, c) - h0).abs())
                .fold(0.0, f64::max);
            prop_assert!(drift < 1e-11, "Hamiltonian drift {drift:.3e}");
        }
    }

    /// Quadrature and stencils are exact for the constant zero field and
    /// linear in their input.
    #[test]
    fn operator_linearity(scale in -3.0f64..3.0) {
        let g = Grid::new(20.0, 0.1, 4).unwrap();
        let f: Vec<f64> = g.sample(|x| (-(x * x) / 3.0).exp());
        let lf = kg_soliton::spectral::apply_l(&g, &f).unwrap();
        let fs: Vec<f64> = f.iter().map(|v| v * scale).collect();
        let lfs = kg_soliton::spectral::apply_l(&g, &fs).unwrap();
        for (a, b) in lf.iter().zip(&lfs) {
            prop_assert!((a * scale - b).abs() < 1e-12 * (1.0 + a.abs() * scale.abs()));
        }
    }
}
