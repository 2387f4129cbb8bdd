//! Single-excitation amplitude equations.
//!
//! With one quantum in the array the state is
//! `q1|10000⟩ + f1|01000⟩ + f2|00100⟩ + q3|00010⟩ + f3|00001⟩ (+ k|000001⟩)`
//! and the Schrödinger equation reduces to `i ċ = M c` with a real symmetric
//! `M`. The equations hold at resonance (`ω_a = ω_c = ω`) in the frame
//! rotating at `ω`; the Kerr amplitude then carries the residual detuning
//! `ω_K − ω`.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::rk4::{self, Rk4};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const MINUS_I: C64 = C64 { re: 0.0, im: -1.0 };

/// Amplitudes of the single-excitation kets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub q1: C64,
    pub f1: C64,
    pub f2: C64,
    pub q3: C64,
    pub f3: C64,
    /// Kerr boson amplitude, present only with the Kerr medium.
    pub k: Option<C64>,
}

impl ReducedState {
    /// Excitation on qubit 1, everything else empty.
    pub fn excited_q1(kerr: bool) -> Self {
        let mut s = Self::vacuum(kerr);
        s.q1 = C64::new(1.0, 0.0);
        s
    }

    pub fn excited_q3(kerr: bool) -> Self {
        let mut s = Self::vacuum(kerr);
        s.q3 = C64::new(1.0, 0.0);
        s
    }

    /// All amplitudes zero (not a physical state; a starting point for builders).
    pub fn vacuum(kerr: bool) -> Self {
        ReducedState { q1: ZERO, f1: ZERO, f2: ZERO, q3: ZERO, f3: ZERO, k: kerr.then_some(ZERO) }
    }

    pub fn len(&self) -> usize {
        if self.k.is_some() {
            6
        } else {
            5
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Amplitudes in the order `q1, f1, f2, q3, f3 [, k]`.
    pub fn to_vec(&self) -> Vec<C64> {
        let mut v = vec![self.q1, self.f1, self.f2, self.q3, self.f3];
        v.extend(self.k);
        v
    }

    pub fn from_slice(c: &[C64]) -> Result<Self> {
        if c.len() != 5 && c.len() != 6 {
            return Err(Error::Dimension { expected: 5, got: c.len() });
        }
        Ok(ReducedState { q1: c[0], f1: c[1], f2: c[2], q3: c[3], f3: c[4], k: c.get(5).copied() })
    }

    pub fn norm_sqr(&self) -> f64 {
        rk4::norm_sqr(&self.to_vec())
    }
}

/// How the Kerr amplitude's detuning is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KerrDetuningMode {
    /// `ω_K − ω − q`: the anharmonicity shifts the one-boson level.
    #[default]
    PaperFaithful,
    /// `ω_K − ω`: `b†²b²` annihilates the one-boson state, so `q` drops out.
    FirstPrinciples,
}

impl KerrDetuningMode {
    pub fn kerr_detuning(self, params: &SystemParams) -> Option<f64> {
        params.kerr.map(|k| match self {
            KerrDetuningMode::PaperFaithful => k.omega_k - params.omega_c - k.q,
            KerrDetuningMode::FirstPrinciples => k.omega_k - params.omega_c,
        })
    }
}

/// `i q̇₁ = λ₁f₁`, `i ḟ₁ = λ₁q₁ + J₁₂f₂`, `i ḟ₂ = J₁₂f₁ + J₂₃f₃`,
/// `i q̇₃ = λ₃f₃`, `i ḟ₃ = λ₃q₃ + J₂₃f₂`.
pub fn derivs_no_kerr(state: &ReducedState, params: &SystemParams) -> Result<ReducedState> {
    if params.kerr_enabled() || state.k.is_some() {
        return Err(Error::Unsupported("derivs_no_kerr called with a Kerr medium".into()));
    }
    let mut d = [ZERO; 5];
    no_kerr_field(params, &state.to_vec(), &mut d);
    ReducedState::from_slice(&d)
}

/// The no-Kerr equations with `i ḟ₂` gaining `p k` and
/// `i k̇ = δ_K k + p f₂`, `δ_K` chosen by `mode`.
pub fn derivs_kerr(state: &ReducedState, params: &SystemParams, mode: KerrDetuningMode) -> Result<ReducedState> {
    if !params.kerr_enabled() || state.k.is_none() {
        return Err(Error::Unsupported("derivs_kerr needs a Kerr medium and a k amplitude".into()));
    }
    let mut d = [ZERO; 6];
    kerr_field(params, mode, &state.to_vec(), &mut d);
    ReducedState::from_slice(&d)
}

fn no_kerr_field(p: &SystemParams, c: &[C64], d: &mut [C64]) {
    let (q1, f1, f2, q3, f3) = (c[0], c[1], c[2], c[3], c[4]);
    d[0] = MINUS_I * (f1 * p.lambda1);
    d[1] = MINUS_I * (q1 * p.lambda1 + f2 * p.j12);
    d[2] = MINUS_I * (f1 * p.j12 + f3 * p.j23);
    d[3] = MINUS_I * (f3 * p.lambda3);
    d[4] = MINUS_I * (q3 * p.lambda3 + f2 * p.j23);
}

fn kerr_field(p: &SystemParams, mode: KerrDetuningMode, c: &[C64], d: &mut [C64]) {
    let kerr = p.kerr.expect("kerr parameters");
    let detuning = mode.kerr_detuning(p).expect("kerr parameters");
    no_kerr_field(p, c, d);
    let (f2, k) = (c[2], c[5]);
    d[2] += MINUS_I * (k * kerr.p);
    d[5] = MINUS_I * (k * detuning + f2 * kerr.p);
}

/// Real symmetric `M` of `i ċ = M c`, read off the equations above.
pub fn coefficient_matrix(params: &SystemParams, mode: KerrDetuningMode) -> Array2<C64> {
    let n = if params.kerr_enabled() { 6 } else { 5 };
    let mut m = Array2::zeros((n, n));
    let mut basis = vec![ZERO; n];
    let mut d = vec![ZERO; n];
    for j in 0..n {
        basis.iter_mut().for_each(|z| *z = ZERO);
        basis[j] = C64::new(1.0, 0.0);
        field(params, mode, &basis, &mut d);
        for i in 0..n {
            // ċ = −i M c  ⇒  M = i ċ
            m[[i, j]] = C64::new(0.0, 1.0) * d[i];
        }
    }
    m
}

fn field(params: &SystemParams, mode: KerrDetuningMode, c: &[C64], d: &mut [C64]) {
    if params.kerr_enabled() {
        kerr_field(params, mode, c, d)
    } else {
        no_kerr_field(params, c, d)
    }
}

/// `⟨c|M|c⟩`, the energy in the rotating frame.
pub fn energy(state: &ReducedState, params: &SystemParams, mode: KerrDetuningMode) -> f64 {
    let m = coefficient_matrix(params, mode);
    let c = state.to_vec();
    let mut mc = vec![ZERO; c.len()];
    rk4::matvec(&m, &c, &mut mc);
    c.iter().zip(&mc).map(|(a, b)| (a.conj() * b).re).sum()
}

/// `max_t |E(t) − E(0)| / ‖M c(0)‖` over a series, with `E` from [`energy`].
pub fn energy_drift(series: &ReducedSeries, params: &SystemParams, mode: KerrDetuningMode) -> f64 {
    let Some(first) = series.states.first() else { return 0.0 };
    let m = coefficient_matrix(params, mode);
    let c0 = first.to_vec();
    let mut mc = vec![ZERO; c0.len()];
    rk4::matvec(&m, &c0, &mut mc);
    let e0 = energy(first, params, mode);
    let scale = rk4::norm_sqr(&mc).sqrt().max(e0.abs());
    let worst = series.states.iter().map(|s| (energy(s, params, mode) - e0).abs()).fold(0.0, f64::max);
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IntegrateOptions {
    /// Upper bound on the RK4 step in ns; `None` applies [`rk4::default_step`].
    pub max_step: Option<f64>,
}

/// Amplitudes sampled on a time grid.
#[derive(Debug, Clone)]
pub struct ReducedSeries {
    pub t: Vec<f64>,
    pub states: Vec<ReducedState>,
    /// `Σ|c|² − 1` at each sample.
    pub norm_drift: Vec<f64>,
    /// The RK4 step actually used between the first two samples.
    pub step: f64,
}

impl ReducedSeries {
    pub fn max_norm_drift(&self) -> f64 {
        self.norm_drift.iter().fold(0.0, |a, d| a.max(d.abs()))
    }
}

pub fn step_for(params: &SystemParams, mode: KerrDetuningMode) -> f64 {
    let m = coefficient_matrix(params, mode);
    let rho = rk4::gershgorin_bound(&m, 0..m.nrows());
    rk4::default_step(params.omega_c, params.lambda1.max(params.lambda3), rho)
}

/// Fixed-step RK4 integration of the reduced equations, sampled at `t_grid`.
pub fn integrate(
    initial: &ReducedState,
    params: &SystemParams,
    t_grid: &[f64],
    mode: KerrDetuningMode,
    options: IntegrateOptions,
) -> Result<ReducedSeries> {
    params.validate()?;
    rk4::check_grid(t_grid)?;
    if !params.is_resonant() {
        return Err(Error::Unsupported(format!(
            "reduced equations assume ω_a = ω_c (detuning {} rad/ns); use the full-space solver",
            params.detuning()
        )));
    }
    if params.kerr_enabled() != initial.k.is_some() {
        return Err(Error::Dimension { expected: if params.kerr_enabled() { 6 } else { 5 }, got: initial.len() });
    }
    let n0 = initial.norm_sqr();
    if (n0 - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(n0));
    }

    let max_step = options.max_step.unwrap_or_else(|| step_for(params, mode));
    let mut f = |c: &[C64], d: &mut [C64]| field(params, mode, c, d);
    let mut rk = Rk4::new(initial.len());
    let mut y = initial.to_vec();

    let mut states = Vec::with_capacity(t_grid.len());
    let mut norm_drift = Vec::with_capacity(t_grid.len());
    let mut first_step = max_step;
    states.push(*initial);
    norm_drift.push(n0 - 1.0);
    for (i, w) in t_grid.windows(2).enumerate() {
        let span = w[1] - w[0];
        let n = rk4::substeps(span, max_step);
        let h = span / n as f64;
        if i == 0 {
            first_step = h;
        }
        for _ in 0..n {
            rk.step(&mut f, &mut y, h);
        }
        let norm = rk4::norm_sqr(&y);
        if !norm.is_finite() {
            return Err(Error::Numerical { t: w[1], reason: "non-finite amplitude".into() });
        }
        states.push(ReducedState::from_slice(&y)?);
        norm_drift.push(norm - 1.0);
    }
    Ok(ReducedSeries { t: t_grid.to_vec(), states, norm_drift, step: first_step })
}

/// `|c|²` per amplitude, ordered `q1, f1, f2, q3, f3 [, k]`.
pub fn populations(state: &ReducedState) -> Vec<f64> {
    state.to_vec().iter().map(|z| z.norm_sqr()).collect()
}

/// `(⟨σz⁽¹⁾⟩, ⟨σz⁽³⁾⟩)`: each qubit's population minus everything else.
pub fn inversion(populations: &[f64]) -> (f64, f64) {
    let total: f64 = populations.iter().sum();
    let (p1, p3) = (populations[0], populations[3]);
    (p1 - (total - p1), p3 - (total - p3))
}
