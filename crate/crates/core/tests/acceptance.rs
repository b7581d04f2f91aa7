//! Acceptance suite: one test per criterion, each printing pass/fail lines
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! The three long-horizon runs (eps = 0.2, 0.3, 0.5 to t = 2000) are shared
//! across criteria through lazy statics; expect a few minutes of compute on
//! one core. The full-scale reproduction (t = 5000) is `#[ignore]`d; run it
//! with `cargo test --release --test acceptance -- --ignored --nocapture`.

use kg_soliton::analysis::{
    collapse_deviation, combined_gamma, fit_damping, fit_frequency_shift, radiation_compare,
    track_peaks, universal_collapse, PeakSeries,
};
use kg_soliton::evolver::{Evolver, EvolverConfig, ExitStatus, ObserverSpec};
use kg_soliton::grid::Grid;
use kg_soliton::jost::wronskian_deviation;
use kg_soliton::normalform::{
    approx_trajectories, compute_constants, gamma1, predict_amplitude_phase, track_reduced,
    ConstantsReport,
};
use kg_soliton::spectral::{eigen_residuals, psi};
use kg_soliton::threshold::{renormalized_evolve, RenormalizedRun, ShootSettings};
use kg_soliton::{LAMBDA2, OMEGA, OMEGA2, P_RES};
use std::sync::OnceLock;

const GAMMA1_REF: f64 = 0.041732;
const GAMMA2_REF: f64 = 0.003433;
const GAMMA3_REF: f64 = 0.000772;
const GAMMA_BIG_REF: f64 = 0.008966;
const GAMMA_REF: f64 = 0.045938;

struct Checks {
    criterion: &'static str,
    failures: Vec<String>,
}

impl Checks {
    fn new(criterion: &'static str) -> Self {
        Checks {
            criterion,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        println!("  [{}] {}", if ok { "pass" } else { "FAIL" }, detail);
        if !ok {
            self.failures.push(detail);
        }
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("criterion {}: PASS", self.criterion);
        } else {
            println!("criterion {}: FAIL", self.criterion);
            panic!(
                "criterion {} failed:\n{}",
                self.criterion,
                self.failures.join("\n")
            );
        }
    }
}

fn constants() -> &'static ConstantsReport {
    static CELL: OnceLock<ConstantsReport> = OnceLock::new();
    CELL.get_or_init(|| compute_constants(&Grid::spectral_default()).expect("constants pipeline"))
}

fn headline_run(eps: f64) -> RenormalizedRun {
    let ev = Evolver::new(EvolverConfig::default()).expect("default evolver");
    renormalized_evolve(
        &ev,
        eps,
        2000.0,
        20.0,
        &ObserverSpec {
            probes: vec![0.0, 50.0],
            probe_stride: 1,
            projection_stride: 50,
            energy_stride: 0,
        },
        &ShootSettings::default(),
    )
    .expect("renormalized run")
}

fn run_eps_02() -> &'static RenormalizedRun {
    static CELL: OnceLock<RenormalizedRun> = OnceLock::new();
    CELL.get_or_init(|| headline_run(0.2))
}

fn run_eps_03() -> &'static RenormalizedRun {
    static CELL: OnceLock<RenormalizedRun> = OnceLock::new();
    CELL.get_or_init(|| headline_run(0.3))
}

fn run_eps_05() -> &'static RenormalizedRun {
    static CELL: OnceLock<RenormalizedRun> = OnceLock::new();
    CELL.get_or_init(|| headline_run(0.5))
}

fn peaks_at_origin(run: &RenormalizedRun) -> PeakSeries {
    track_peaks(&run.records.probe_times, &run.records.probe_values[0], 0.0).expect("peak tracking")
}

#[test]
fn criterion_1_constants() {
    let mut c = Checks::new("1 (normal-form constants)");
    let r = constants();
    let g1 = r.constants.gamma1.value;
    c.check(
        (g1 - GAMMA1_REF).abs() < 1e-6,
        format!("gamma1 = {g1:.7} vs {GAMMA1_REF} +- 1e-6"),
    );
    let g2 = r.constants.gamma2.quadrature.unwrap();
    c.check(
        (g2 - GAMMA2_REF).abs() < 1e-5,
        format!("gamma2 via <psi f2, psi>/omega = {g2:.7} vs {GAMMA2_REF} +- 1e-5"),
    );
    let g2dev = r.constants.gamma2.deviation().unwrap();
    c.check(
        g2dev < 1e-6,
        format!("gamma2 quadrature vs closed form: {g2dev:.2e}"),
    );
    let g3 = r.constants.gamma3.value;
    c.check(
        (g3 - GAMMA3_REF).abs() < 2e-5,
        format!("gamma3 via <psi f1, psi> = {g3:.7} vs {GAMMA3_REF} +- 2e-5"),
    );
    let gg_cf = r.golden.closed_form;
    let gg_quad = r.golden.quadrature;
    c.check(
        (gg_cf - GAMMA_BIG_REF).abs() < 1e-6,
        format!("Gamma closed form = {gg_cf:.7} vs {GAMMA_BIG_REF} +- 1e-6"),
    );
    c.check(
        (gg_quad - GAMMA_BIG_REF).abs() < 1e-6,
        format!("Gamma matrix-element quadrature = {gg_quad:.7} vs {GAMMA_BIG_REF} +- 1e-6"),
    );
    let g = r.constants.gamma.value;
    c.check(
        (g - GAMMA_REF).abs() < 3e-5,
        format!("gamma = {g:.7} vs {GAMMA_REF} +- 3e-5"),
    );
    c.finish();
}

#[test]
fn criterion_2_spectral_residuals() {
    let mut c = Checks::new("2 (spectral residuals)");
    let r = constants();
    let (rp, rx) = eigen_residuals(&r.modes).unwrap();
    c.check(
        rp < 1e-6,
        format!("||L psi - omega^2 psi||/||psi|| = {rp:.2e} < 1e-6"),
    );
    c.check(
        rx < 1e-6,
        format!("||L xi + lambda^2 xi||/||xi|| = {rx:.2e} < 1e-6"),
    );
    // Jost residual over the interior (oscillatory field: the zero-extension
    // rows at the boundary do not represent L there)
    let g = &r.grid;
    let re: Vec<f64> = r.pair.j_plus.iter().map(|z| z.re).collect();
    let im: Vec<f64> = r.pair.j_plus.iter().map(|z| z.im).collect();
    let lre = kg_soliton::spectral::apply_l(g, &re).unwrap();
    let lim = kg_soliton::spectral::apply_l(g, &im).unwrap();
    let mut jres = 0.0f64;
    for i in g.interior(2.0) {
        let v =
            num_complex::Complex64::new(lre[i], lim[i]) - (1.0 + P_RES * P_RES) * r.pair.j_plus[i];
        jres = jres.max(v.norm());
    }
    c.check(
        jres < 1e-5,
        format!("||(L-1) j+ - 2 j+||_inf = {jres:.2e} < 1e-5"),
    );
    let tmod = r.pair.transmission.norm();
    c.check(
        (tmod - 1.0).abs() < 1e-10,
        format!("|T(sqrt 2)| = 1 {:+.2e}", tmod - 1.0),
    );
    let wdev = wronskian_deviation(&r.pair);
    c.check(
        wdev < 1e-8,
        format!("Wronskian x-independence: {wdev:.2e} < 1e-8"),
    );
    c.finish();
}

#[test]
fn criterion_3_bvp_residuals() {
    let mut c = Checks::new("3 (radiation profile residuals)");
    let r = constants();
    c.check(
        r.profiles.f1_residual < 1e-6,
        format!(
            "||(L-3) f1 - (1/4) Pc psi^2||_inf = {:.2e} < 1e-6",
            r.profiles.f1_residual
        ),
    );
    c.check(
        r.profiles.f2_residual < 1e-8,
        format!(
            "||L f2 - (1/2) Pc psi^2||_inf = {:.2e} < 1e-8",
            r.profiles.f2_residual
        ),
    );
    let n = r.grid.len();
    let far = 0.5 * (r.profiles.f1[0].norm() + r.profiles.f1[n - 1].norm());
    let predicted = r.constants.f1_farfield();
    c.check(
        (far - predicted).abs() < 1e-4,
        format!("far-field |f1| = {far:.7} vs 6^(1/4) sqrt(Gamma)/8 = {predicted:.7} +- 1e-4"),
    );
    c.finish();
}

#[test]
fn criterion_4_reduced_model() {
    let mut c = Checks::new("4 (reduced-model consistency)");
    let r = constants();
    let eps = 0.02;
    let g1 = gamma1(&r.coupling);
    let period = 2.0 * std::f64::consts::PI / (OMEGA - g1 * eps * eps);
    // 10 periods against the second-order expansions
    let traj = track_reduced(eps, 10.0 * period, 12.0, 1e-3, 1, &r.coupling).unwrap();
    let mut worst = 0.0f64;
    for (i, &t) in traj.times.iter().enumerate() {
        let (a_pred, b_pred) = approx_trajectories(eps, t, &r.coupling);
        worst = worst.max((traj.a[i] - a_pred).abs().max((traj.b[i] - b_pred).abs()));
    }
    let bound = 5.0 * eps.powi(3);
    c.check(
        worst < bound,
        format!("10-period tracking error {worst:.2e} < 5 eps^3 = {bound:.2e}"),
    );
    // frequency shift from peak spacings over the same horizon
    let peaks = track_peaks(&traj.times, &traj.a, 0.0).unwrap();
    let np = peaks.times.len();
    let w_meas =
        2.0 * std::f64::consts::PI * (np - 1) as f64 / (peaks.times[np - 1] - peaks.times[0]);
    let shift = (OMEGA - w_meas) / (eps * eps);
    c.check(
        (shift - g1).abs() / g1 < 0.02,
        format!("frequency shift / eps^2 = {shift:.6} vs gamma1 = {g1:.6} (2%)"),
    );
    // no amplitude decay over 100 periods
    let long = track_reduced(eps, 100.0 * period, 12.0, 1e-3, 10, &r.coupling).unwrap();
    let lp = track_peaks(&long.times, &long.a, 0.0).unwrap();
    let pmax = lp.values.iter().cloned().fold(f64::MIN, f64::max);
    let pmin = lp.values.iter().cloned().fold(f64::MAX, f64::min);
    c.check(
        pmax - pmin < 1e-8,
        format!(
            "peak amplitude spread over 100 periods = {:.2e} < 1e-8 ({} peaks)",
            pmax - pmin,
            lp.values.len()
        ),
    );
    c.finish();
}

#[test]
fn criterion_5_headline_fits_desk_scale() {
    let mut c = Checks::new("5 (headline experiment, desk scale)");
    let run = run_eps_02();
    assert_eq!(run.exit, ExitStatus::Completed, "run must stay bounded");
    let peaks = peaks_at_origin(run);
    let psi0 = psi(0.0);
    let window = (200.0, 2000.0);
    let damping = fit_damping(&peaks, psi0, window).unwrap();
    let rel_g = (damping.gamma_big - GAMMA_BIG_REF).abs() / GAMMA_BIG_REF;
    c.check(
        rel_g < 0.05,
        format!(
            "Gamma_fit = {:.6} vs {GAMMA_BIG_REF} ({:+.2}% of closed form, 5% allowed)",
            damping.gamma_big,
            100.0 * (damping.gamma_big / GAMMA_BIG_REF - 1.0)
        ),
    );
    let freq = fit_frequency_shift(&peaks, window).unwrap();
    let gamma_fit = combined_gamma(&damping, &freq);
    let rel = (gamma_fit - GAMMA_REF).abs() / GAMMA_REF;
    c.check(
        rel < 0.05,
        format!(
            "gamma_fit = {gamma_fit:.6} vs {GAMMA_REF} ({:+.2}%, 5% allowed)",
            100.0 * (gamma_fit / GAMMA_REF - 1.0)
        ),
    );
    println!(
        "  (eps_fit = {:.4}, 1/theta_dot slope = {:.5}, b0 = {:.6e}, {} corrections)",
        damping.eps,
        freq.gamma_ratio,
        run.b0,
        run.segments.len()
    );
    c.finish();
}

#[test]
fn criterion_6_universality() {
    let mut c = Checks::new("6 (universality of the decay)");
    let gg = constants().golden.closed_form;
    let psi0 = psi(0.0);
    let mut collapsed = Vec::new();
    for (eps, run) in [(0.2, run_eps_02()), (0.3, run_eps_03())] {
        let peaks = peaks_at_origin(run);
        collapsed.push(universal_collapse(
            &peaks,
            psi0,
            eps,
            gg,
            20.0 / (eps * eps),
        ));
    }
    // both runs must fall on one curve of the scaled time c = eps^2 Gamma t;
    // the comparison pairs equal c (equal-t pairing compares different
    // points of the universal curve and is reported as context only)
    let dev = collapse_deviation(&collapsed[0], &collapsed[1]).unwrap();
    c.check(
        dev < 0.03,
        format!(
            "R sqrt(Gamma t) collapse deviation = {:.2}% < 3%",
            100.0 * dev
        ),
    );
    let equal_t = {
        let a = &collapsed[0];
        let b = &collapsed[1];
        // translate both back to t and compare at equal t > 500
        let bt: Vec<(f64, f64)> = b.iter().map(|&(cc, v)| (cc / (0.09 * gg), v)).collect();
        let at: Vec<(f64, f64)> = a.iter().map(|&(cc, v)| (cc / (0.04 * gg), v)).collect();
        collapse_deviation(&at, &bt).unwrap_or(f64::NAN)
    };
    println!(
        "  (equal-time pairing deviation {:.1}% — the universal curve is still rising there)",
        100.0 * equal_t
    );
    c.finish();
}

#[test]
fn criterion_7_radiation_comparison() {
    let mut c = Checks::new("7 (radiation vs second-order backreaction)");
    let r = constants();
    let run = run_eps_05();
    let eps = 0.5;
    // probe series eta(t, 50); psi(50), xi(50) < 1e-10 so u(t,50) is eta
    let t_lo = 1700.0;
    let sel: Vec<usize> = run
        .records
        .probe_times
        .iter()
        .enumerate()
        .filter(|(_, &t)| t > t_lo)
        .map(|(i, _)| i)
        .collect();
    let times: Vec<f64> = sel.iter().map(|&i| run.records.probe_times[i]).collect();
    let eta: Vec<f64> = sel
        .iter()
        .map(|&i| run.records.probe_values[1][i])
        .collect();
    // spatial snapshot of eta at the end of the run
    let ev = Evolver::new(EvolverConfig::default()).unwrap();
    let (a, b, _) = ev.project_modes(&run.final_state);
    let u_full = ev.full_line(&run.final_state.u);
    let g = ev.grid();
    let (i_lo, i_hi) = (g.index_of(20.0), g.index_of(65.0));
    let snap_x: Vec<f64> = g.points()[i_lo..=i_hi].to_vec();
    let snap_eta: Vec<f64> = (i_lo..=i_hi)
        .map(|i| {
            u_full[i]
                - a * kg_soliton::spectral::psi(g.points()[i])
                - b * kg_soliton::spectral::xi(g.points()[i])
        })
        .collect();
    let probe_index = r.grid.index_of(50.0);
    let report = radiation_compare(
        &times,
        &eta,
        probe_index,
        &snap_x,
        &snap_eta,
        eps,
        &r.profiles,
        &r.constants,
    );
    let freq_ref = 3.0f64.sqrt();
    c.check(
        (report.carrier_frequency - freq_ref).abs() / freq_ref < 0.01,
        format!(
            "carrier frequency = {:.5} vs sqrt(3) = {freq_ref:.5} (1%)",
            report.carrier_frequency
        ),
    );
    let k_ref = std::f64::consts::SQRT_2;
    c.check(
        (report.carrier_wavenumber - k_ref).abs() / k_ref < 0.01,
        format!(
            "carrier wavenumber = {:.5} vs sqrt(2) = {k_ref:.5} (1%)",
            report.carrier_wavenumber
        ),
    );
    c.check(
        (report.amplitude_ratio - 1.0).abs() < 0.15,
        format!(
            "amplitude ratio measured/model = {:.3} (15% allowed, offset {:.3})",
            report.amplitude_ratio, report.time_offset
        ),
    );
    println!(
        "  (rms mismatch after offset = {:.1}%, c = {:.4})",
        100.0 * report.rms_mismatch,
        report.backreaction_amplitude
    );
    c.finish();
}

#[test]
fn criterion_8_synthetic_oracle_fits() {
    let mut c = Checks::new("8 (synthetic-signal fit recovery)");
    let r = constants();
    let eps = 0.2;
    let psi0 = psi(0.0);
    let dt = 0.002;
    let n = (5000.0 / dt) as usize;
    let mut ts = Vec::with_capacity(n);
    let mut us = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 * dt;
        let (rr, theta) = predict_amplitude_phase(eps, t, &r.constants);
        ts.push(t);
        us.push(psi0 * rr * (OMEGA * t - theta).cos());
    }
    let peaks = track_peaks(&ts, &us, 0.0).unwrap();
    let window = (500.0, 5000.0);
    let damping = fit_damping(&peaks, psi0, window).unwrap();
    let gg = r.constants.big_gamma.value;
    let freq = fit_frequency_shift(&peaks, window).unwrap();
    let gamma_fit = combined_gamma(&damping, &freq);
    let rel_gg = (damping.gamma_big - gg).abs() / gg;
    let rel_eps = (damping.eps - eps).abs() / eps;
    let rel_gamma = (gamma_fit - r.constants.gamma.value).abs() / r.constants.gamma.value;
    c.check(
        rel_gg < 1e-6,
        format!("Gamma recovered to {rel_gg:.2e} (< 1e-6)"),
    );
    c.check(
        rel_eps < 1e-6,
        format!("eps recovered to {rel_eps:.2e} (< 1e-6)"),
    );
    c.check(
        rel_gamma < 1e-6,
        format!("gamma recovered to {rel_gamma:.2e} (< 1e-6)"),
    );
    c.finish();
}

/// Full-scale reproduction: t = 5000, fit window (500, 5000), compared with
/// the published fitted values (not the closed forms) at 1.5%.
#[test]
#[ignore]
fn full_scale_reproduction() {
    let mut c = Checks::new("5-full (t = 5000 reproduction)");
    let ev = Evolver::new(EvolverConfig::default()).unwrap();
    let run = renormalized_evolve(
        &ev,
        0.2,
        5000.0,
        20.0,
        &ObserverSpec {
            probes: vec![0.0],
            probe_stride: 1,
            projection_stride: 100,
            energy_stride: 0,
        },
        &ShootSettings::default(),
    )
    .unwrap();
    assert_eq!(run.segments.len(), 250, "t = 5000 at t_corr = 20");
    let peaks = peaks_at_origin(&run);
    let psi0 = psi(0.0);
    let window = (500.0, 5000.0);
    let damping = fit_damping(&peaks, psi0, window).unwrap();
    let freq = fit_frequency_shift(&peaks, window).unwrap();
    let gamma_fit = combined_gamma(&damping, &freq);
    c.check(
        (damping.gamma_big / 0.009011 - 1.0).abs() < 0.015,
        format!(
            "Gamma_fit = {:.6} vs published 0.009011 (1.5%)",
            damping.gamma_big
        ),
    );
    c.check(
        (gamma_fit / 0.04564 - 1.0).abs() < 0.015,
        format!("gamma_fit = {gamma_fit:.6} vs published 0.04564 (1.5%)"),
    );
    c.finish();
}

#[test]
fn constants_are_mutually_consistent() {
    // not a numbered criterion: eigenvalue constants and closed forms agree
    // with the spectral data end to end
    assert!((OMEGA * OMEGA - OMEGA2).abs() < 1e-15);
    assert!((LAMBDA2 - 1.25).abs() < 1e-15);
    let r = constants();
    let ratio = r.golden.closed_form / r.constants.gamma.value;
    assert!((ratio - 0.19518).abs() < 1e-4, "Gamma/gamma = {ratio}");
}
