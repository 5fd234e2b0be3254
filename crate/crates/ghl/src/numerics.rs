//! Uniform periodic grids, Fourier spectral differentiation, quadrature,
//! Sobolev norms, and evaluation of generated flows on grid data.
//!
//! The domain is `[-L, L)` sampled at `N` points (power of two). Fields are
//! assumed periodic or decayed below roundoff at the box edges; callers are
//! responsible for box sizing. Odd-order derivatives zero the Nyquist mode to
//! keep real data real.

use crate::closedform::Solution;
use crate::hierarchy::HierarchyEquation;
use crate::jet::Jet;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid size {0} must be a power of two >= 16")]
    BadSize(usize),
    #[error("half-width {0} must be positive")]
    BadWidth(f64),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("operands live on different grids")]
    GridMismatch,
}

/// Uniform periodic grid on `[-L, L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    half_width: f64,
    n: usize,
}

impl Grid {
    pub fn new(half_width: f64, n: usize) -> Result<Self, GridError> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(GridError::BadWidth(half_width));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(GridError::BadSize(n));
        }
        Ok(Grid { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Signed wavenumber of FFT bin `k`: `pi k_signed / L`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        let ks = if k <= self.n / 2 {
            k as isize
        } else {
            k as isize - self.n as isize
        };
        std::f64::consts::PI * ks as f64 / self.half_width
    }

    pub fn max_wavenumber(&self) -> f64 {
        std::f64::consts::PI * (self.n / 2) as f64 / self.half_width
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// In-place inverse FFT (unnormalized, matching [`GridFunction::spectrum`]).
pub fn inverse_fft(buf: &mut [Complex64]) {
    plan(buf.len(), true).process(buf);
}

/// Real field sampled on a [`Grid`].
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::BadSize(values.len()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite(i));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        GridFunction { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    fn check_same_grid(&self, o: &GridFunction) {
        assert_eq!(self.grid, o.grid, "operands live on different grids");
    }

    pub fn zip_with(&self, o: &GridFunction, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        self.check_same_grid(o);
        let values = self
            .values
            .iter()
            .zip(&o.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        GridFunction {
            grid: self.grid,
            values,
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, o: &GridFunction) -> GridFunction {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &GridFunction) -> GridFunction {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn mul(&self, o: &GridFunction) -> GridFunction {
        self.zip_with(o, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> GridFunction {
        self.map(|v| s * v)
    }

    pub fn axpy(&self, s: f64, o: &GridFunction) -> GridFunction {
        self.zip_with(o, |a, b| a + s * b)
    }

    /// Unnormalized discrete spectrum.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        plan(self.grid.len(), false).process(&mut buf);
        buf
    }

    fn from_spectrum(grid: Grid, mut buf: Vec<Complex64>) -> GridFunction {
        plan(grid.len(), true).process(&mut buf);
        let n = grid.len() as f64;
        GridFunction {
            grid,
            values: buf.into_iter().map(|c| c.re / n).collect(),
        }
    }

    /// Fourier-multiplier derivative `(ik)^order`, exact for band-limited
    /// data. The Nyquist mode is zeroed for odd orders.
    pub fn derivative(&self, order: u32) -> GridFunction {
        if order == 0 {
            return self.clone();
        }
        let n = self.grid.len();
        let mut buf = self.spectrum();
        for (k, c) in buf.iter_mut().enumerate() {
            let xi = self.grid.wavenumber(k);
            let mult = Complex64::new(0.0, xi).powu(order);
            *c *= mult;
            if order % 2 == 1 && k == n / 2 {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        GridFunction::from_spectrum(self.grid, buf)
    }

    /// Zero every mode with `|k| > N/3` (2/3-rule dealiasing).
    pub fn dealias(&self) -> GridFunction {
        let n = self.grid.len();
        let cut = n / 3;
        let mut buf = self.spectrum();
        for (k, c) in buf.iter_mut().enumerate() {
            let ks = if k <= n / 2 { k } else { n - k };
            if ks > cut {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        GridFunction::from_spectrum(self.grid, buf)
    }

    /// Trapezoid rule `h * sum(values)`; spectrally accurate for periodic or
    /// decayed integrands.
    pub fn quadrature(&self) -> f64 {
        self.grid.spacing() * self.values.iter().sum::<f64>()
    }

    /// `H^s` norm: `sqrt( (h/N) * sum_k (1+xi_k^2)^s |u_k|^2 )`; equals the
    /// `L^2` norm at `s = 0` by Parseval.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let spec = self.spectrum();
        let n = self.grid.len() as f64;
        let h = self.grid.spacing();
        let mut acc = 0.0;
        for (k, c) in spec.iter().enumerate() {
            let xi = self.grid.wavenumber(k);
            acc += (1.0 + xi * xi).powf(s) * c.norm_sqr();
        }
        (acc * h / n).sqrt()
    }

    /// Relative tail size at the box edges (decay diagnostic for box sizing).
    pub fn edge_tail(&self) -> f64 {
        let n = self.grid.len();
        let edge = self.values[0]
            .abs()
            .max(self.values[n - 1].abs())
            .max(self.values[n / 64].abs());
        edge / self.max_abs().max(f64::MIN_POSITIVE)
    }
}

/// Evaluate a real differential polynomial on grid data: numeric `mu`, each
/// derivative computed spectrally once, monomials accumulated pointwise.
pub fn poly_eval(rhs: &crate::diffpoly::DiffPoly, f: &GridFunction, mu: f64) -> GridFunction {
    assert!(rhs.is_real(), "grid evaluation needs a real polynomial");
    let orders: BTreeSet<u32> = rhs
        .terms()
        .flat_map(|(m, _)| m.exps.keys().copied().collect::<Vec<_>>())
        .collect();
    let mut derivs: std::collections::BTreeMap<u32, GridFunction> = Default::default();
    for &j in &orders {
        if j > 0 {
            derivs.insert(j, f.derivative(j));
        }
    }
    let n = f.grid().len();
    let mut out = vec![0.0; n];
    for (m, c) in rhs.terms() {
        let coeff = c.re_f64() * mu.powi(m.mu_power as i32);
        if coeff == 0.0 {
            continue;
        }
        for (i, slot) in out.iter_mut().enumerate() {
            let mut term = coeff;
            for (&j, &e) in &m.exps {
                let v = if j == 0 {
                    f.values()[i]
                } else {
                    derivs[&j].values()[i]
                };
                term *= v.powi(e as i32);
            }
            *slot += term;
        }
    }
    GridFunction::from_values(f.grid(), out).expect("rhs evaluation produced non-finite values")
}

/// Evaluate the flow's right-hand side on grid data.
pub fn rhs_eval(eq: &HierarchyEquation, f: &GridFunction, mu: f64) -> GridFunction {
    poly_eval(&eq.rhs, f, mu)
}

/// Spectrum-in, spectrum-out evaluation of a real differential polynomial:
/// one inverse transform per derivative order, pointwise accumulation, one
/// forward transform, and an optional 2/3-rule mask applied in place. This is
/// the time-stepper's hot path.
pub fn poly_eval_spectral(
    rhs: &crate::diffpoly::DiffPoly,
    grid: Grid,
    hat: &[Complex64],
    mu: f64,
    dealias: bool,
) -> Vec<Complex64> {
    let n = grid.len();
    debug_assert_eq!(hat.len(), n);
    let orders: BTreeSet<u32> = rhs
        .terms()
        .flat_map(|(m, _)| m.exps.keys().copied().collect::<Vec<_>>())
        .collect();
    let inv_n = 1.0 / n as f64;
    let mut fields: std::collections::BTreeMap<u32, Vec<f64>> = Default::default();
    let inverse = plan(n, true);
    for &j in &orders {
        let mut buf: Vec<Complex64> = if j == 0 {
            hat.to_vec()
        } else {
            hat.iter()
                .enumerate()
                .map(|(k, c)| {
                    if j % 2 == 1 && k == n / 2 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c * Complex64::new(0.0, grid.wavenumber(k)).powu(j)
                    }
                })
                .collect()
        };
        inverse.process(&mut buf);
        fields.insert(j, buf.into_iter().map(|c| c.re * inv_n).collect());
    }
    let mut out = vec![0.0f64; n];
    for (m, c) in rhs.terms() {
        let coeff = c.re_f64() * mu.powi(m.mu_power as i32);
        if coeff == 0.0 {
            continue;
        }
        for (i, slot) in out.iter_mut().enumerate() {
            let mut term = coeff;
            for (&j, &e) in &m.exps {
                term *= fields[&j][i].powi(e as i32);
            }
            *slot += term;
        }
    }
    let mut out_hat: Vec<Complex64> = out.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    plan(n, false).process(&mut out_hat);
    if dealias {
        let cut = n / 3;
        for (k, c) in out_hat.iter_mut().enumerate() {
            let ks = if k <= n / 2 { k } else { n - k };
            if ks > cut {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
    out_hat
}

/// Evaluate the flow's right-hand side at one point from an analytic
/// derivative jet of the field (`u.derivative(j)` = j-th x-derivative).
pub fn rhs_eval_at_jet<const K: usize>(eq: &HierarchyEquation, mu: f64, u: &Jet<K>) -> f64 {
    let mut acc = 0.0;
    for (m, c) in eq.rhs.terms() {
        let mut term = c.re_f64() * mu.powi(m.mu_power as i32);
        if term == 0.0 {
            continue;
        }
        for (&j, &e) in &m.exps {
            debug_assert!((j as usize) < K, "jet order too small for this flow");
            term *= u.derivative(j as usize).powi(e as i32);
        }
        acc += term;
    }
    acc
}

/// Sample a closed-form solution on a grid shifted by `shift` (the sampled
/// field is `x -> solution(t, x + shift)`).
pub fn sample_solution(sol: &Solution, t: f64, grid: Grid, shift: f64) -> GridFunction {
    GridFunction::from_fn(grid, |x| sol.eval(t, x + shift))
}

/// Exact chain-rule time derivative of a closed-form solution sampled on a
/// (shifted) grid.
pub fn time_derivative(sol: &Solution, t: f64, grid: Grid, shift: f64) -> GridFunction {
    GridFunction::from_fn(grid, |x| sol.time_derivative_at(t, x + shift))
}
