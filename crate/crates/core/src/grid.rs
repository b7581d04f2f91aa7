//! Uniform symmetric 1D mesh with finite-difference stencils and trapezoidal
//! quadrature.
//!
//! Every x-dependent quantity in the crate lives on a [`Grid`]: nodes
//! `x_i = -L + i*dx` with an odd point count so that x = 0 is a node.
//! Derivatives use central stencils of order 2, 4 or 6 with zero-extension
//! ghost nodes (fields are assumed exponentially small at the boundary;
//! oscillatory fields such as Jost solutions get meaningless values in the
//! outermost `stencil_order/2` rows, which residual diagnostics exclude via
//! [`Grid::interior`]).

use crate::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul};

/// Uniform symmetric mesh on `[-half_width, half_width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    half_width: f64,
    dx: f64,
    points: Vec<f64>,
    stencil_order: usize,
}

impl Grid {
    /// Builds a grid with nodes at integer multiples of `dx`. The requested
    /// half width is rounded to the nearest multiple of `dx`, which keeps the
    /// mesh exactly symmetric with x = 0 a node.
    pub fn new(half_width: f64, dx: f64, stencil_order: usize) -> Result<Self> {
        if !(dx > 0.0) || !half_width.is_finite() || half_width < dx {
            return Err(Error::InvalidGrid(format!(
                "need 0 < dx <= half_width, got dx = {dx}, half_width = {half_width}"
            )));
        }
        if !matches!(stencil_order, 2 | 4 | 6) {
            return Err(Error::InvalidGrid(format!(
                "stencil order {stencil_order} not supported (2, 4, 6)"
            )));
        }
        let n_half = (half_width / dx).round() as usize;
        let points = (-(n_half as i64)..=n_half as i64)
            .map(|i| i as f64 * dx)
            .collect();
        Ok(Self {
            half_width: n_half as f64 * dx,
            dx,
            points,
            stencil_order,
        })
    }

    /// Default mesh for spectral data and normal-form constants.
    ///
    /// dx = 0.05 resolves every closed-form profile to stencil accuracy; the
    /// half width 50 keeps zero-extension boundary errors of the decaying
    /// modes below 1e-7 (psi ~ e^{-x/2} is the slowest to die out).
    pub fn spectral_default() -> Self {
        Self::new(50.0, 0.05, 6).expect("valid default grid")
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn stencil_order(&self) -> usize {
        self.stencil_order
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the node x = 0.
    pub fn mid(&self) -> usize {
        self.points.len() / 2
    }

    /// Index of the node nearest to `x`.
    pub fn index_of(&self, x: f64) -> usize {
        let i = ((x + self.half_width) / self.dx).round() as i64;
        i.clamp(0, self.points.len() as i64 - 1) as usize
    }

    /// Samples a scalar function on every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.points.iter().map(|&x| f(x)).collect()
    }

    pub fn check_len(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.points.len() {
            return Err(Error::GridMismatch {
                expected: self.points.len(),
                got: f.len(),
            });
        }
        Ok(())
    }

    /// Trapezoidal quadrature over the whole line. Spectrally accurate for
    /// smooth integrands that decay below round-off inside the domain.
    pub fn trapz<T>(&self, f: &[T]) -> T
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
    {
        let mut acc = T::default();
        for &v in &f[1..f.len() - 1] {
            acc = acc + v;
        }
        acc = acc + (f[0] + f[f.len() - 1]) * 0.5;
        acc * self.dx
    }

    /// L2 inner product `<f, g> = int f g dx` by trapezoidal quadrature.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), g.len());
        let n = f.len();
        let mut acc = 0.0;
        for i in 1..n - 1 {
            acc += f[i] * g[i];
        }
        acc += 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
        acc * self.dx
    }

    /// `int f g dx` with complex g.
    pub fn inner_complex(&self, f: &[f64], g: &[Complex64]) -> Complex64 {
        debug_assert_eq!(f.len(), g.len());
        let n = f.len();
        let mut acc = Complex64::default();
        for i in 1..n - 1 {
            acc += g[i] * f[i];
        }
        acc += (g[0] * f[0] + g[n - 1] * f[n - 1]) * 0.5;
        acc * self.dx
    }

    pub fn norm(&self, f: &[f64]) -> f64 {
        self.inner(f, f).sqrt()
    }

    /// Second derivative by the configured central stencil, zero ghosts.
    pub fn second_deriv<T>(&self, f: &[T]) -> Vec<T>
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
    {
        let (coeffs, scale): (&[f64], f64) = match self.stencil_order {
            2 => (&[1.0, -2.0, 1.0], 1.0),
            4 => (&[-1.0, 16.0, -30.0, 16.0, -1.0], 1.0 / 12.0),
            _ => (&[2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0], 1.0 / 180.0),
        };
        apply_stencil(f, coeffs, scale / (self.dx * self.dx))
    }

    /// First derivative by the matching central stencil, zero ghosts.
    pub fn first_deriv<T>(&self, f: &[T]) -> Vec<T>
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
    {
        let (coeffs, scale): (&[f64], f64) = match self.stencil_order {
            2 => (&[-1.0, 0.0, 1.0], 0.5),
            4 => (&[1.0, -8.0, 0.0, 8.0, -1.0], 1.0 / 12.0),
            _ => (&[-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0], 1.0 / 60.0),
        };
        apply_stencil(f, coeffs, scale / self.dx)
    }

    /// Cumulative integral `F(x_i) = int_{-L}^{x_i} f`, trapezoidal running
    /// sum with an Euler-Maclaurin endpoint correction. The correction shifts
    /// the composite-rule error from O(dx^2) down to O(dx^4), which the
    /// variation-of-parameters profile needs pointwise.
    pub fn cumulative<T>(&self, f: &[T]) -> Vec<T>
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
    {
        let n = f.len();
        let mut out = Vec::with_capacity(n);
        let mut acc = T::default();
        out.push(acc);
        for i in 1..n {
            acc = acc + (f[i - 1] + f[i]) * (0.5 * self.dx);
            out.push(acc);
        }
        let fp = self.first_deriv(f);
        let c = self.dx * self.dx / 12.0;
        for i in 0..n {
            out[i] = out[i] + (fp[0] + fp[i] * -1.0) * c;
        }
        out
    }

    /// Indices of the nodes with `|x| <= half_width - margin`. Residual
    /// diagnostics of non-decaying fields restrict to this range because the
    /// zero-extension rows near the boundary do not approximate L there.
    pub fn interior(&self, margin: f64) -> std::ops::Range<usize> {
        let skip = (margin / self.dx).ceil() as usize;
        skip..self.points.len() - skip
    }
}

fn apply_stencil<T>(f: &[T], coeffs: &[f64], scale: f64) -> Vec<T>
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = f.len();
    let w = coeffs.len() / 2;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = T::default();
        for (s, &c) in coeffs.iter().enumerate() {
            let j = i as i64 + s as i64 - w as i64;
            if j >= 0 && (j as usize) < n {
                acc = acc + f[j as usize] * c;
            }
        }
        out.push(acc * scale);
    }
    out
}
