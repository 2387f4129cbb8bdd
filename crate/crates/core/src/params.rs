//! Physical parameters of the three-cavity array.
//!
//! All rates are angular frequencies in rad/ns with ħ = 1, so a coupling of
//! `0.1 * omega` at 1 GHz is `0.1 * 2π` rad/ns.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Default cavity and Kerr truncation: enough to represent one quantum.
pub const DEFAULT_TRUNCATION: usize = 2;

/// Kerr medium coupled to the middle cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrParams {
    /// Kerr mode angular frequency.
    pub omega_k: f64,
    /// Anharmonicity, the coefficient of b†²b².
    pub q: f64,
    /// Field–medium exchange coupling.
    pub p: f64,
    /// Kerr boson truncation.
    pub nb_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Qubit transition angular frequency.
    pub omega_a: f64,
    /// Cavity mode angular frequency (all three cavities).
    pub omega_c: f64,
    /// Qubit–field coupling in cavity 1.
    pub lambda1: f64,
    /// Qubit–field coupling in cavity 3.
    pub lambda3: f64,
    /// Hopping between cavities 1 and 2.
    pub j12: f64,
    /// Hopping between cavities 2 and 3.
    pub j23: f64,
    /// Photon truncation of each cavity.
    pub n_max: usize,
    pub kerr: Option<KerrParams>,
}

impl SystemParams {
    /// Resonant array at frequency `f_ghz` with `λ = 0.1ω` and `J = j_over_lambda · λ`.
    pub fn resonant(f_ghz: f64, j_over_lambda: f64) -> Self {
        let omega = TAU * f_ghz;
        let lambda = 0.1 * omega;
        let j = j_over_lambda * lambda;
        SystemParams {
            omega_a: omega,
            omega_c: omega,
            lambda1: lambda,
            lambda3: lambda,
            j12: j,
            j23: j,
            n_max: DEFAULT_TRUNCATION,
            kerr: None,
        }
    }

    pub fn with_kerr(mut self, kerr: KerrParams) -> Self {
        self.kerr = Some(kerr);
        self
    }

    pub fn kerr_enabled(&self) -> bool {
        self.kerr.is_some()
    }

    /// Atom–cavity detuning `ω_a − ω_c`.
    pub fn detuning(&self) -> f64 {
        self.omega_a - self.omega_c
    }

    pub fn is_resonant(&self) -> bool {
        self.detuning() == 0.0
    }

    pub fn is_symmetric(&self) -> bool {
        self.lambda1 == self.lambda3 && self.j12 == self.j23
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("omega_a", self.omega_a),
            ("omega_c", self.omega_c),
            ("lambda1", self.lambda1),
            ("lambda3", self.lambda3),
            ("j12", self.j12),
            ("j23", self.j23),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::Parameter { name, reason: format!("{v} is not finite") });
            }
        }
        for (name, v) in [("lambda1", self.lambda1), ("lambda3", self.lambda3), ("j12", self.j12), ("j23", self.j23)] {
            if v < 0.0 {
                return Err(Error::Parameter { name, reason: format!("coupling must be ≥ 0, got {v}") });
            }
        }
        if self.n_max < 2 {
            return Err(Error::Truncation { what: "cavity", dim: self.n_max });
        }
        if let Some(k) = &self.kerr {
            for (name, v) in [("omega_k", k.omega_k), ("q", k.q), ("p", k.p)] {
                if !v.is_finite() {
                    return Err(Error::Parameter { name, reason: format!("{v} is not finite") });
                }
            }
            if k.p < 0.0 {
                return Err(Error::Parameter { name: "p", reason: format!("coupling must be ≥ 0, got {}", k.p) });
            }
            if k.nb_max < 2 {
                return Err(Error::Truncation { what: "Kerr mode", dim: k.nb_max });
            }
        }
        Ok(())
    }
}
