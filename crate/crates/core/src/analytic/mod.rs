//! Closed-form single-excitation dynamics of the symmetric, resonant array.
//!
//! With `λ₁ = λ₃ = λ`, `J₁₂ = J₂₃ = J` and the excitation starting on qubit 1,
//! the antisymmetric combinations `q1 − q3`, `f1 − f3` oscillate at `λ` and the
//! symmetric ones (which also drive `f2`) at `Ω = √(2J² + λ²)`:
//!
//! ```text
//! X  = (λ² cos Ωt + 2J²) / Ω²
//! q1 = ½ [X + cos λt]            q3 = ½ [X − cos λt]
//! f1 = −(i/2)[(λ/Ω) sin Ωt + sin λt]
//! f3 = −(i/2)[(λ/Ω) sin Ωt − sin λt]
//! f2 = (Jλ/Ω²)(cos Ωt − 1)
//! ```
//!
//! [`laplace_solution`] derives the same amplitudes independently as rational
//! functions of s, and [`verify_inverse_transform`] compares the two.

pub mod laplace;
pub mod poly;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::reduced::{self, KerrDetuningMode, ReducedState};

pub use laplace::{PartialFractions, Pole, RationalFunction};
pub use poly::Poly;

/// Symmetric couplings and the derived beat frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricParams {
    lambda: f64,
    j: f64,
    omega_sq: f64,
    omega: f64,
}

impl SymmetricParams {
    pub fn new(lambda: f64, j: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Parameter { name: "lambda", reason: format!("must be > 0, got {lambda}") });
        }
        if !(j >= 0.0) || !j.is_finite() {
            return Err(Error::Parameter { name: "j", reason: format!("must be ≥ 0, got {j}") });
        }
        let omega_sq = 2.0 * j * j + lambda * lambda;
        Ok(SymmetricParams { lambda, j, omega_sq, omega: omega_sq.sqrt() })
    }

    /// Requires `λ₁ = λ₃`, `J₁₂ = J₂₃`, resonance and no Kerr medium.
    pub fn from_system(params: &SystemParams) -> Result<Self> {
        if !params.is_symmetric() {
            return Err(Error::Unsupported("closed forms need λ₁ = λ₃ and J₁₂ = J₂₃".into()));
        }
        if params.kerr_enabled() {
            return Err(Error::Unsupported("no closed form with a Kerr medium".into()));
        }
        if !params.is_resonant() {
            return Err(Error::Unsupported("closed forms assume ω_a = ω_c".into()));
        }
        Self::new(params.lambda1, params.j12)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    /// `Ω = √(2J² + λ²)`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega_sq(&self) -> f64 {
        self.omega_sq
    }
}

struct Phases {
    cos_l: f64,
    sin_l: f64,
    cos_w: f64,
    sin_w: f64,
}

fn phases(p: &SymmetricParams, t: f64) -> Phases {
    let (sin_l, cos_l) = (p.lambda * t).sin_cos();
    let (sin_w, cos_w) = (p.omega * t).sin_cos();
    Phases { cos_l, sin_l, cos_w, sin_w }
}

/// Real parts of q1, q3, f2 and imaginary parts of f1, f3.
fn real_forms(p: &SymmetricParams, t: f64) -> [f64; 5] {
    let ph = phases(p, t);
    let (l, j) = (p.lambda, p.j);
    let x = (l * l * ph.cos_w + 2.0 * j * j) / p.omega_sq;
    let ratio = l / p.omega;
    [
        0.5 * (x + ph.cos_l),
        -0.5 * (ratio * ph.sin_w + ph.sin_l),
        j * l / p.omega_sq * (ph.cos_w - 1.0),
        0.5 * (x - ph.cos_l),
        -0.5 * (ratio * ph.sin_w - ph.sin_l),
    ]
}

/// Amplitudes at time `t` for `q1(0) = 1`.
pub fn closed_form(params: &SymmetricParams, t: f64) -> ReducedState {
    let [q1, f1, f2, q3, f3] = real_forms(params, t);
    ReducedState {
        q1: C64::new(q1, 0.0),
        f1: C64::new(0.0, f1),
        f2: C64::new(f2, 0.0),
        q3: C64::new(q3, 0.0),
        f3: C64::new(0.0, f3),
        k: None,
    }
}

/// `|q1|², |f1|², |f2|², |q3|², |f3|²` (state order), squares of the real forms.
pub fn probabilities(params: &SymmetricParams, t: f64) -> [f64; 5] {
    real_forms(params, t).map(|x| x * x)
}

/// `(⟨σz⁽¹⁾⟩, ⟨σz⁽³⁾⟩)` from the closed-form probabilities.
pub fn inversions(params: &SymmetricParams, t: f64) -> (f64, f64) {
    reduced::inversion(&probabilities(params, t))
}

/// A defective transcription of the closed forms, with the radicals kept as
/// `cosh(t√(−2J² − λ²))`. `f1`, `f2`, `q3` and `f3` are −1 times
/// [`closed_form`], the solution for `q1(0) = −1`; `q1` has a doubled
/// denominator under its `X` term and starts at −3/4. Kept for the deviation
/// checks in `docs/physics-notes.md`.
pub fn defective_closed_form(params: &SymmetricParams, t: f64) -> ReducedState {
    let (l, j) = (params.lambda, params.j);
    let radical = C64::new(-2.0 * j * j - l * l, 0.0).sqrt();
    let arg = radical * t;
    let (cosh, sinh) = (arg.cosh(), arg.sinh());
    let i = C64::new(0.0, 1.0);
    let (cl, sl) = ((l * t).cos(), (l * t).sin());
    let q1 = -0.5 * (cl + (l * l * cosh + 2.0 * j * j) / (4.0 * j * j + 2.0 * l * l));
    let q3 = 0.5 * (cl - (l * l * cosh + 2.0 * j * j) / (2.0 * j * j + l * l));
    let f1 = 0.5 * i * (sl + l * sinh / radical);
    let f3 = -0.5 * i * (sl - l * sinh / radical);
    let f2 = -(j * l * (cosh - 1.0)) / (2.0 * j * j + l * l);
    ReducedState { q1, f1, f2, q3, f3, k: None }
}

pub const AMPLITUDE_NAMES: [&str; 6] = ["q1", "f1", "f2", "q3", "f3", "k"];

/// Per-amplitude rational functions of s.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSolution {
    pub amplitudes: Vec<RationalFunction>,
}

impl RationalSolution {
    pub fn get(&self, name: &str) -> Option<&RationalFunction> {
        AMPLITUDE_NAMES.iter().position(|n| *n == name).and_then(|i| self.amplitudes.get(i))
    }

    /// Union of all amplitude poles.
    pub fn poles(&self) -> Vec<Pole> {
        let mut all: Vec<Pole> = Vec::new();
        for f in &self.amplitudes {
            for p in f.poles() {
                if let Some(existing) = all.iter_mut().find(|e| (e.value - p.value).norm() < 1e-7) {
                    existing.multiplicity = existing.multiplicity.max(p.multiplicity);
                } else {
                    all.push(p);
                }
            }
        }
        all.sort_by(|a, b| a.value.im.total_cmp(&b.value.im));
        all
    }

    /// Inverse transforms of every amplitude.
    pub fn time_domain(&self) -> Vec<PartialFractions> {
        self.amplitudes.iter().map(|f| f.partial_fractions()).collect()
    }
}

fn real_matrix(rows: &[&[f64]]) -> Array2<C64> {
    let n = rows.len();
    Array2::from_shape_fn((n, n), |(i, j)| C64::new(rows[i][j], 0.0))
}

/// Amplitudes as rational functions of s, for `q1(0) = 1`.
pub fn laplace_solution(params: &SymmetricParams) -> RationalSolution {
    let (l, j) = (params.lambda, params.j);
    // i(sX − x(0)) = M X, rows in order q1, f1, f2, q3, f3
    let m = real_matrix(&[
        &[0.0, l, 0.0, 0.0, 0.0],
        &[l, 0.0, j, 0.0, 0.0],
        &[0.0, j, 0.0, 0.0, j],
        &[0.0, 0.0, 0.0, 0.0, l],
        &[0.0, 0.0, j, l, 0.0],
    ]);
    let mut x0 = vec![C64::new(0.0, 0.0); 5];
    x0[0] = C64::new(1.0, 0.0);
    RationalSolution { amplitudes: laplace::solve_s_domain(&m, &x0) }
}

/// The six-amplitude s-domain system with the Kerr mode, for pole inspection.
pub fn kerr_laplace_solution(params: &SystemParams, mode: KerrDetuningMode) -> Result<RationalSolution> {
    let kerr = params.kerr.ok_or_else(|| Error::Unsupported("Kerr medium disabled".into()))?;
    let (l1, l3, j12, j23) = (params.lambda1, params.lambda3, params.j12, params.j23);
    let delta = match mode {
        KerrDetuningMode::PaperFaithful => kerr.omega_k - params.omega_c - kerr.q,
        KerrDetuningMode::FirstPrinciples => kerr.omega_k - params.omega_c,
    };
    let m = real_matrix(&[
        &[0.0, l1, 0.0, 0.0, 0.0, 0.0],
        &[l1, 0.0, j12, 0.0, 0.0, 0.0],
        &[0.0, j12, 0.0, 0.0, j23, kerr.p],
        &[0.0, 0.0, 0.0, 0.0, l3, 0.0],
        &[0.0, 0.0, j23, l3, 0.0, 0.0],
        &[0.0, 0.0, kerr.p, 0.0, 0.0, delta],
    ]);
    let mut x0 = vec![C64::new(0.0, 0.0); 6];
    x0[0] = C64::new(1.0, 0.0);
    Ok(RationalSolution { amplitudes: laplace::solve_s_domain(&m, &x0) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationReport {
    pub max_abs_deviation: f64,
    /// Amplitude name and time of the largest deviation.
    pub worst_amplitude: &'static str,
    pub worst_time: f64,
}

/// Largest `|closed form − inverse transform|` over the grid and amplitudes.
pub fn verify_inverse_transform(params: &SymmetricParams, t_grid: &[f64]) -> DeviationReport {
    let inverse = laplace_solution(params).time_domain();
    let mut report = DeviationReport { max_abs_deviation: 0.0, worst_amplitude: "q1", worst_time: 0.0 };
    for &t in t_grid {
        let closed = closed_form(params, t).to_vec();
        for (i, pf) in inverse.iter().enumerate() {
            let d = (pf.eval(t) - closed[i]).norm();
            if d > report.max_abs_deviation {
                report = DeviationReport { max_abs_deviation: d, worst_amplitude: AMPLITUDE_NAMES[i], worst_time: t };
            }
        }
    }
    report
}
