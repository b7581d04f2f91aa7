//! Peak tracking, decay/frequency-shift fits and the radiation comparison.
//!
//! The internal-mode amplitude is read off a probe series `u(t, x0)`: the
//! values at successive local maxima follow
//! `u(t_j, x0) ~ psi(x0) R(t_j)` with `R(t) = eps / sqrt(1 + eps^2 Gamma t)`,
//! so `(psi(x0)/u_j)^2` is linear in t with slope `Gamma` and intercept
//! `eps^{-2}`. The instantaneous frequency `2 pi / (t_{j+1} - t_j)` lags
//! omega by `theta_dot = gamma R^2`, so `1/theta_dot` is linear in t with
//! slope `Gamma/gamma`; the two fits together give the measured
//! `(Gamma, gamma, eps)`.

use crate::normalform::{predict_amplitude_phase, NormalFormConstants, RadiationProfiles};
use crate::{Error, Result, OMEGA};
use num_complex::Complex64;
use serde::Serialize;

/// Times and values of successive local maxima of a probe series.
#[derive(Debug, Clone, Serialize)]
pub struct PeakSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub x0: f64,
}

/// Locates local maxima by quadratic interpolation through the three samples
/// around each discrete maximum. The probe must not sit at a zero of psi
/// (x0 ~ 0.9624), where the mode amplitude decouples from the signal at
/// leading order.
pub fn track_peaks(times: &[f64], values: &[f64], x0: f64) -> Result<PeakSeries> {
    let psi0 = crate::spectral::psi(x0);
    if psi0.abs() < 1e-3 {
        return Err(Error::ProbeAtPsiZero { x0, psi: psi0 });
    }
    let mut t_peaks = Vec::new();
    let mut v_peaks = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
        if y1 >= y0 && y1 > y2 {
            let denom = y0 - 2.0 * y1 + y2;
            let d = if denom != 0.0 {
                0.5 * (y0 - y2) / denom
            } else {
                0.0
            };
            let h = times[i + 1] - times[i];
            t_peaks.push(times[i] + d * h);
            v_peaks.push(y1 - 0.25 * (y0 - y2) * d);
        }
    }
    Ok(PeakSeries {
        times: t_peaks,
        values: v_peaks,
        x0,
    })
}

/// Ordinary least squares with residual diagnostics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    pub window: (f64, f64),
    pub residual_rms: f64,
    pub n: usize,
}

fn linear_fit(xs: &[f64], ys: &[f64], window: (f64, f64)) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, _)| x > window.0 && x < window.1)
        .map(|(&x, &y)| (x, y))
        .collect();
    let n = pts.len();
    if n < 3 {
        return Err(Error::EmptyWindow {
            lo: window.0,
            hi: window.1,
            need: 3,
        });
    }
    let nf = n as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let sigma2 = ssr / (nf - 2.0).max(1.0);
    Ok(FitResult {
        slope,
        intercept,
        slope_se: (sigma2 / sxx).sqrt(),
        intercept_se: (sigma2 * (1.0 / nf + mean_x * mean_x / sxx)).sqrt(),
        window,
        residual_rms: (ssr / nf).sqrt(),
        n,
    })
}

/// Damping fit: `(psi(x0)/u_j)^2` against `eps^-2 + Gamma t`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DampingFit {
    pub fit: FitResult,
    /// Fitted decay constant (the slope).
    pub gamma_big: f64,
    /// Fitted initial amplitude (intercept^{-1/2}).
    pub eps: f64,
}

pub fn fit_damping(
    peaks: &PeakSeries,
    psi_at_probe: f64,
    window: (f64, f64),
) -> Result<DampingFit> {
    for (&t, &v) in peaks.times.iter().zip(&peaks.values) {
        if t > window.0 && t < window.1 && v <= 0.0 {
            return Err(Error::NonPositivePeak { t, value: v });
        }
    }
    let ys: Vec<f64> = peaks
        .values
        .iter()
        .map(|&v| (psi_at_probe / v).powi(2))
        .collect();
    let fit = linear_fit(&peaks.times, &ys, window)?;
    Ok(DampingFit {
        fit,
        gamma_big: fit.slope,
        eps: fit.intercept.max(f64::MIN_POSITIVE).powf(-0.5),
    })
}

/// Frequency-shift fit: `1/theta_dot` against `1/(gamma eps^2) + (Gamma/gamma) t`,
/// with `theta_dot(t_j) = omega - 2 pi / (t_{j+1} - t_j)` at midpoint times.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrequencyFit {
    pub fit: FitResult,
    /// Fitted Gamma/gamma (the slope).
    pub gamma_ratio: f64,
}

pub fn fit_frequency_shift(peaks: &PeakSeries, window: (f64, f64)) -> Result<FrequencyFit> {
    if peaks.times.len() < 3 {
        return Err(Error::EmptyWindow {
            lo: window.0,
            hi: window.1,
            need: 3,
        });
    }
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for j in 0..peaks.times.len() - 1 {
        let dt = peaks.times[j + 1] - peaks.times[j];
        let t_mid = 0.5 * (peaks.times[j] + peaks.times[j + 1]);
        if t_mid <= window.0 || t_mid >= window.1 {
            continue;
        }
        let theta_dot = OMEGA - 2.0 * std::f64::consts::PI / dt;
        if theta_dot <= 0.0 {
            return Err(Error::NonPositivePeak {
                t: t_mid,
                value: theta_dot,
            });
        }
        ts.push(t_mid);
        ys.push(1.0 / theta_dot);
    }
    let fit = linear_fit(&ts, &ys, window)?;
    Ok(FrequencyFit {
        fit,
        gamma_ratio: fit.slope,
    })
}

/// `gamma` from the two fits: `Gamma_fit / (Gamma/gamma)_fit`.
pub fn combined_gamma(damping: &DampingFit, freq: &FrequencyFit) -> f64 {
    damping.gamma_big / freq.gamma_ratio
}

// --- universality -------------------------------------------------------------

/// `R(t) sqrt(Gamma t)` against the scaled time `c = eps^2 Gamma t`, from
/// measured peaks; the universal curve is `sqrt(c/(1+c))` independent of eps.
pub fn universal_collapse(
    peaks: &PeakSeries,
    psi_at_probe: f64,
    eps: f64,
    gamma_big: f64,
    t_min: f64,
) -> Vec<(f64, f64)> {
    peaks
        .times
        .iter()
        .zip(&peaks.values)
        .filter(|(&t, _)| t > t_min)
        .map(|(&t, &v)| {
            let r = v / psi_at_probe;
            (eps * eps * gamma_big * t, r * (gamma_big * t).sqrt())
        })
        .collect()
}

/// Maximum relative gap between two collapsed series on their common range
/// of the scaled time, by linear interpolation of the second onto the first.
pub fn collapse_deviation(a: &[(f64, f64)], b: &[(f64, f64)]) -> Option<f64> {
    let (blo, bhi) = (b.first()?.0, b.last()?.0);
    let mut worst: Option<f64> = None;
    for &(c, va) in a {
        if c < blo || c > bhi {
            continue;
        }
        let idx = b.partition_point(|p| p.0 < c).min(b.len() - 1).max(1);
        let (c0, v0) = b[idx - 1];
        let (c1, v1) = b[idx];
        let vb = if c1 > c0 {
            v0 + (v1 - v0) * (c - c0) / (c1 - c0)
        } else {
            v0
        };
        let rel = (va - vb).abs() / vb.abs().max(1e-300);
        worst = Some(worst.map_or(rel, |w: f64| w.max(rel)));
    }
    worst
}

// --- radiation comparison -----------------------------------------------------

/// Second-order backreaction model
/// `eta_app(t,x) = R^2(t) [ f1(x) e^{-2i(omega t - theta)} + c.c. + f2(x) ]`.
pub fn eta_approx(
    t: f64,
    idx: usize,
    eps: f64,
    profiles: &RadiationProfiles,
    constants: &NormalFormConstants,
) -> f64 {
    let (r, theta) = predict_amplitude_phase(eps, t, constants);
    let phase = Complex64::new(0.0, -2.0 * (OMEGA * t - theta)).exp();
    r * r * (2.0 * (profiles.f1[idx] * phase).re + profiles.f2[idx])
}

/// Measured-vs-model report for the radiation probe and snapshot.
#[derive(Debug, Clone, Serialize)]
pub struct RadiationReport {
    /// Carrier frequency of eta(t, x0) from peak spacings; model: 2 omega.
    pub carrier_frequency: f64,
    /// Carrier wavenumber from snapshot zero crossings; model: sqrt(2).
    pub carrier_wavenumber: f64,
    /// Envelope amplitude ratio measured / model after the time offset.
    pub amplitude_ratio: f64,
    /// Global time offset minimizing the rms mismatch.
    pub time_offset: f64,
    /// rms mismatch at the fitted offset, relative to the model rms.
    pub rms_mismatch: f64,
    /// Model amplitude prefactor c = 6^(1/4) / (4 sqrt(Gamma)).
    pub backreaction_amplitude: f64,
}

/// Compares a measured radiation probe series `eta(t, x_probe)` and a spatial
/// snapshot `eta(t_snap, x)` against the second-order model, allowing one
/// global time offset (report-only; nothing fails here).
#[allow(clippy::too_many_arguments)]
pub fn radiation_compare(
    probe_times: &[f64],
    probe_eta: &[f64],
    probe_index: usize,
    snapshot_x: &[f64],
    snapshot_eta: &[f64],
    eps: f64,
    profiles: &RadiationProfiles,
    constants: &NormalFormConstants,
) -> RadiationReport {
    // carrier frequency from peak spacings
    let mut spacings = Vec::new();
    let mut last_peak: Option<f64> = None;
    for i in 1..probe_eta.len() - 1 {
        if probe_eta[i] >= probe_eta[i - 1] && probe_eta[i] > probe_eta[i + 1] {
            let denom = probe_eta[i - 1] - 2.0 * probe_eta[i] + probe_eta[i + 1];
            let d = if denom != 0.0 {
                0.5 * (probe_eta[i - 1] - probe_eta[i + 1]) / denom
            } else {
                0.0
            };
            let t = probe_times[i] + d * (probe_times[i + 1] - probe_times[i]);
            if let Some(tp) = last_peak {
                spacings.push(t - tp);
            }
            last_peak = Some(t);
        }
    }
    let mean_spacing = spacings.iter().sum::<f64>() / spacings.len().max(1) as f64;
    let carrier_frequency = 2.0 * std::f64::consts::PI / mean_spacing;
    // wavenumber from snapshot zero crossings
    let mut crossings = Vec::new();
    for i in 1..snapshot_eta.len() {
        if snapshot_eta[i - 1].signum() != snapshot_eta[i].signum() {
            let frac = snapshot_eta[i - 1] / (snapshot_eta[i - 1] - snapshot_eta[i]);
            crossings.push(snapshot_x[i - 1] + frac * (snapshot_x[i] - snapshot_x[i - 1]));
        }
    }
    let carrier_wavenumber = if crossings.len() > 1 {
        std::f64::consts::PI * (crossings.len() - 1) as f64
            / (crossings.last().unwrap() - crossings.first().unwrap())
    } else {
        f64::NAN
    };
    // global time offset by scan over one carrier period
    let period = std::f64::consts::PI / OMEGA;
    let model = |t: f64| eta_approx(t, probe_index, eps, profiles, constants);
    let mut best = (0.0f64, f64::INFINITY);
    let scan = 240;
    for k in 0..=scan {
        let tau = -period / 2.0 + period * k as f64 / scan as f64;
        let mut ss = 0.0;
        for (&t, &m) in probe_times.iter().zip(probe_eta) {
            let d = m - model(t + tau);
            ss += d * d;
        }
        if ss < best.1 {
            best = (tau, ss);
        }
    }
    let time_offset = best.0;
    let model_rms = {
        let ss: f64 = probe_times
            .iter()
            .map(|&t| model(t + time_offset).powi(2))
            .sum();
        (ss / probe_times.len() as f64).sqrt()
    };
    let rms_mismatch = (best.1 / probe_times.len() as f64).sqrt() / model_rms.max(1e-300);
    // envelope amplitudes
    let half_amp = |v: &[f64]| {
        let mx = v.iter().cloned().fold(f64::MIN, f64::max);
        let mn = v.iter().cloned().fold(f64::MAX, f64::min);
        0.5 * (mx - mn)
    };
    let model_vals: Vec<f64> = probe_times
        .iter()
        .map(|&t| model(t + time_offset))
        .collect();
    let amplitude_ratio = half_amp(probe_eta) / half_amp(&model_vals);
    RadiationReport {
        carrier_frequency,
        carrier_wavenumber,
        amplitude_ratio,
        time_offset,
        rms_mismatch,
        backreaction_amplitude: constants.backreaction_amplitude(),
    }
}
