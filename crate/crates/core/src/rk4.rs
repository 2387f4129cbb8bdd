//! Classical fixed-step fourth-order Runge–Kutta for complex linear systems.
//!
//! Both the reduced amplitude equations and the full Schrödinger equation are
//! integrated with [`Rk4`]. For a time-independent generator the full solver
//! additionally folds the substeps between two samples into one matrix
//! ([`Rk4::propagator`]), which is the same RK4 map applied column by column.

use std::f64::consts::TAU;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest `h · ρ` allowed by the default step rule, with `ρ` a bound on the
/// generator's spectral radius.
pub const DEFAULT_STEP_BOUND: f64 = 5e-3;

/// Steps per period of the reference carrier frequency.
pub const STEPS_PER_CARRIER_PERIOD: f64 = 200.0;

/// Steps per period of the strongest atom–field coupling.
pub const STEPS_PER_COUPLING_PERIOD: f64 = 2000.0;

/// Default maximum step: 200 steps per carrier period, 2000 per coupling
/// period, and `h · ρ ≤ 5e-3`.
pub fn default_step(omega_ref: f64, lambda_max: f64, spectral_bound: f64) -> f64 {
    let mut h = f64::INFINITY;
    if omega_ref > 0.0 {
        h = h.min(TAU / (STEPS_PER_CARRIER_PERIOD * omega_ref));
    }
    if lambda_max > 0.0 {
        h = h.min(TAU / (STEPS_PER_COUPLING_PERIOD * lambda_max));
    }
    if spectral_bound > 0.0 {
        h = h.min(DEFAULT_STEP_BOUND / spectral_bound);
    }
    if h.is_finite() {
        h
    } else {
        1e-3
    }
}

/// Validates a sample grid: nonempty, starting at 0, strictly increasing.
pub fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if t_grid[0] != 0.0 || !t_grid[0].is_finite() {
        return Err(Error::BadGrid(0));
    }
    for i in 1..t_grid.len() {
        if !(t_grid[i] > t_grid[i - 1]) || !t_grid[i].is_finite() {
            return Err(Error::BadGrid(i));
        }
    }
    Ok(())
}

/// Number of equal substeps covering `span` with steps no longer than `max_step`.
pub fn substeps(span: f64, max_step: f64) -> usize {
    ((span / max_step).ceil() as usize).max(1)
}

/// Uniform grid of `samples` points on `[0, t_end]`.
pub fn uniform_grid(t_end: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Scratch space for the four stages.
pub struct Rk4 {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); dim];
        Rk4 { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    /// One step `y ← y + h/6 (k1 + 2k2 + 2k3 + k4)` of the autonomous system
    /// `ẏ = f(y)`, with `f` writing the derivative into its second argument.
    pub fn step<F>(&mut self, f: &mut F, y: &mut [C64], h: f64)
    where
        F: FnMut(&[C64], &mut [C64]),
    {
        let n = y.len();
        f(y, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k1[i] * (h / 2.0);
        }
        f(&self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k2[i] * (h / 2.0);
        }
        f(&self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k3[i] * h;
        }
        f(&self.tmp, &mut self.k4);
        for i in 0..n {
            y[i] += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * (h / 6.0);
        }
    }

    /// Matrix of `n` RK4 steps of size `h` for `ẏ = A y`.
    pub fn propagator(generator: &Array2<C64>, h: f64, n: usize) -> Array2<C64> {
        let dim = generator.nrows();
        let mut rk = Rk4::new(dim);
        let mut f = |y: &[C64], dy: &mut [C64]| matvec(generator, y, dy);
        let mut single = Array2::<C64>::zeros((dim, dim));
        let mut col = vec![C64::new(0.0, 0.0); dim];
        for j in 0..dim {
            col.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            col[j] = C64::new(1.0, 0.0);
            rk.step(&mut f, &mut col, h);
            for i in 0..dim {
                single[[i, j]] = col[i];
            }
        }
        // n-th power by squaring
        let mut result: Option<Array2<C64>> = None;
        let mut base = single;
        let mut k = n.max(1);
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    Some(r) => base.dot(&r),
                    None => base.clone(),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.dot(&base);
        }
        result.expect("n ≥ 1")
    }
}

/// `out = m · x` over contiguous rows.
pub fn matvec(m: &Array2<C64>, x: &[C64], out: &mut [C64]) {
    for (row, o) in m.outer_iter().zip(out.iter_mut()) {
        let mut acc = C64::new(0.0, 0.0);
        for (a, b) in row.iter().zip(x) {
            acc += a * b;
        }
        *o = acc;
    }
}

pub fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Gershgorin bound `max_i Σ_j |m_ij|` over the selected rows.
pub fn gershgorin_bound(m: &Array2<C64>, rows: impl IntoIterator<Item = usize>) -> f64 {
    rows.into_iter().map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn to_array(x: &[C64]) -> Array1<C64> {
    Array1::from(x.to_vec())
}
