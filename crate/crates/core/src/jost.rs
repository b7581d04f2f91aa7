//! Jost solutions of the stationary scattering problem `(L - 1) j = k^2 j`.
//!
//! The potential `-3 sech^2(x/2)` is reflectionless, so both Jost solutions
//! are elementary. With `y = tanh(x/2)`:
//!
//! ```text
//!   j_pm(x,k) = nu(k) [ i k^3 -+ 3 y k^2 - i k (15/4 y^2 - 1)
//!                       +- (15/8) y (y^2 - 3/5) ] e^{+-ikx},
//!   nu(k)     = ( i k^3 - 3 k^2 - (11/4) i k + 3/4 )^{-1},
//! ```
//!
//! normalized so that `j_pm e^{-+ikx} -> 1` as `x -> +-inf`. The transmission
//! coefficient is unimodular for real k and the Wronskian
//! `W = j_+ dj_-/dx - j_- dj_+/dx` equals `-2ik / T(k)`.
//!
//! An independent construction applies the adjoint ladder operators
//! `D_l^* = -d/dx + (l/2) tanh(x/2)`, l = 3, 2, 1, to plane waves; it must
//! agree with the explicit formula to round-off (the identity is algebraic).

use crate::grid::Grid;
use crate::{Error, Result};
use num_complex::Complex64;

/// Jost pair at one wavenumber, with analytic x-derivatives attached.
#[derive(Debug, Clone)]
pub struct JostPair {
    pub k: f64,
    pub j_plus: Vec<Complex64>,
    pub j_minus: Vec<Complex64>,
    /// Analytic derivatives d/dx of `j_plus` / `j_minus`.
    pub d_plus: Vec<Complex64>,
    pub d_minus: Vec<Complex64>,
    /// Normalization factor nu(k).
    pub nu: Complex64,
    /// Wronskian `-2ik / T(k)`, x-independent.
    pub wronskian: Complex64,
    /// Transmission coefficient T(k).
    pub transmission: Complex64,
}

/// Transmission coefficient of the reflectionless potential.
pub fn transmission(k: f64) -> Complex64 {
    let i = Complex64::I;
    let k = Complex64::from(k);
    (4.0 * i * k * k * k - 12.0 * k * k - 11.0 * i * k + 3.0)
        / (4.0 * i * k * k * k + 12.0 * k * k - 11.0 * i * k - 3.0)
}

fn nu(k: f64) -> Complex64 {
    let i = Complex64::I;
    let k = Complex64::from(k);
    1.0 / (i * k * k * k - 3.0 * k * k - 2.75 * i * k + 0.75)
}

/// Evaluates the Jost pair on `grid`. Rejects k = 0, where the Wronskian
/// `-2ik/T` degenerates.
pub fn jost(grid: &Grid, k: f64) -> Result<JostPair> {
    if k == 0.0 || !k.is_finite() {
        return Err(Error::ZeroWavenumber);
    }
    let n = grid.len();
    let nu_k = nu(k);
    let t = transmission(k);
    let w = -2.0 * Complex64::I * k / t;
    let mut j_plus = Vec::with_capacity(n);
    let mut j_minus = Vec::with_capacity(n);
    let mut d_plus = Vec::with_capacity(n);
    let mut d_minus = Vec::with_capacity(n);
    for &x in grid.points() {
        let (jp, dp) = eval(nu_k, k, x, 1.0);
        let (jm, dm) = eval(nu_k, k, x, -1.0);
        j_plus.push(jp);
        d_plus.push(dp);
        j_minus.push(jm);
        d_minus.push(dm);
    }
    Ok(JostPair {
        k,
        j_plus,
        j_minus,
        d_plus,
        d_minus,
        nu: nu_k,
        wronskian: w,
        transmission: t,
    })
}

/// Explicit formula and its analytic derivative at one point; `sign = +-1`.
fn eval(nu_k: Complex64, k: f64, x: f64, sign: f64) -> (Complex64, Complex64) {
    let i = Complex64::I;
    let y = (0.5 * x).tanh();
    let dy = 0.5 * (1.0 - y * y);
    let k2 = k * k;
    let pol = i * (k2 * k) - sign * 3.0 * y * k2 - i * k * (3.75 * y * y - 1.0)
        + sign * 1.875 * y * (y * y - 0.6);
    let dpol = (-sign * 3.0 * k2 - i * (7.5 * k * y) + sign * 1.875 * (3.0 * y * y - 0.6)) * dy;
    let phase = (i * (sign * k * x)).exp();
    let j = nu_k * pol * phase;
    let dj = nu_k * (dpol + i * (sign * k) * pol) * phase;
    (j, dj)
}

/// Pointwise Wronskian `j_+ j_-' - j_- j_+'` from the analytic derivatives;
/// deviation from the attached constant is a consistency diagnostic.
pub fn wronskian_deviation(pair: &JostPair) -> f64 {
    pair.j_plus
        .iter()
        .zip(&pair.d_minus)
        .zip(pair.j_minus.iter().zip(&pair.d_plus))
        .map(|((jp, dm), (jm, dp))| (jp * dm - jm * dp - pair.wronskian).norm())
        .fold(0.0, f64::max)
}

// --- ladder-operator construction ------------------------------------------

/// Polynomial in y = tanh(x/2) with complex coefficients, ascending order.
#[derive(Clone)]
struct Poly(Vec<Complex64>);

impl Poly {
    fn deriv(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c * n as f64)
                .collect(),
        )
    }

    fn eval(&self, y: f64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, &c| acc * y + c)
    }
}

/// Applies `D_l^* = -d/dx + (l/2) y` to `Q(y) e^{iqx}`, returning the new
/// polynomial factor. Uses dy/dx = (1 - y^2)/2, so
/// `Q <- -(Q'(y)(1-y^2)/2 + iq Q) + (l/2) y Q`.
fn apply_adjoint_ladder(q_pol: &Poly, iq: Complex64, ell: u32) -> Poly {
    let dq = q_pol.deriv();
    let deg = q_pol.0.len();
    let mut out = vec![Complex64::default(); deg + 1];
    // -(1 - y^2)/2 Q'
    for (n, &c) in dq.0.iter().enumerate() {
        out[n] -= 0.5 * c;
        out[n + 2] += 0.5 * c;
    }
    // -iq Q
    for (n, &c) in q_pol.0.iter().enumerate() {
        out[n] -= iq * c;
    }
    // (l/2) y Q
    for (n, &c) in q_pol.0.iter().enumerate() {
        out[n + 1] += 0.5 * ell as f64 * c;
    }
    Poly(out)
}

/// Jost pair built by acting with `D_3^* D_2^* D_1^*` on plane waves,
/// `j_pm = +- nu(k) D_3^* D_2^* D_1^* e^{+-ikx}`. Exact algebraic identity
/// with [`jost`]; kept as an independent validation route.
pub fn jost_by_ladder(grid: &Grid, k: f64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if k == 0.0 || !k.is_finite() {
        return Err(Error::ZeroWavenumber);
    }
    let nu_k = nu(k);
    let build = |sign: f64| -> Poly {
        let iq = Complex64::I * (sign * k);
        let mut p = Poly(vec![Complex64::from(1.0)]);
        for ell in [1u32, 2, 3] {
            p = apply_adjoint_ladder(&p, iq, ell);
        }
        p
    };
    let p_plus = build(1.0);
    let p_minus = build(-1.0);
    let i = Complex64::I;
    let jp = grid
        .points()
        .iter()
        .map(|&x| nu_k * p_plus.eval((0.5 * x).tanh()) * (i * (k * x)).exp())
        .collect();
    let jm = grid
        .points()
        .iter()
        .map(|&x| -nu_k * p_minus.eval((0.5 * x).tanh()) * (i * (-k * x)).exp())
        .collect();
    Ok((jp, jm))
}
