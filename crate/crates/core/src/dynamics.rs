//! Schrödinger evolution on the full truncated space and the observables
//! shared by every solver.
//!
//! Evolution is in the Schrödinger picture under the full Hamiltonian. The
//! free part is diagonal in the product basis, so basis populations agree
//! with the interaction picture used by the reduced equations.

use std::collections::HashMap;

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonian;
use crate::hilbert::{self, build_basis, embed, number, qubit_ops_on, BasisLabel, BasisSet, Matrix, Subsystem};
use crate::params::SystemParams;
use crate::reduced::{self, ReducedSeries, ReducedState};
use crate::rk4::{self, Rk4};

/// Amplitudes over the full product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(pub Array1<C64>);

impl StateVector {
    pub fn basis_state(basis: &BasisSet, label: &BasisLabel) -> Result<Self> {
        let i = basis.index_of(label).ok_or_else(|| Error::Unsupported(format!("{label} is not in the basis")))?;
        let mut v = Array1::zeros(basis.len());
        v[i] = C64::new(1.0, 0.0);
        Ok(StateVector(v))
    }

    /// Embeds single-excitation amplitudes.
    pub fn from_reduced(basis: &BasisSet, state: &ReducedState) -> Result<Self> {
        let mut v = Array1::zeros(basis.len());
        for (label, amp) in single_excitation_labels(basis.has_kerr()).iter().zip(state.to_vec()) {
            let i = basis.index_of(label).ok_or(Error::Dimension { expected: 6, got: 5 })?;
            v[i] = amp;
        }
        Ok(StateVector(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn amplitude(&self, basis: &BasisSet, label: &BasisLabel) -> Option<C64> {
        basis.index_of(label).map(|i| self.0[i])
    }
}

/// `|10000⟩, |01000⟩, |00100⟩, |00010⟩, |00001⟩ [, |000001⟩]`.
pub fn single_excitation_labels(kerr: bool) -> Vec<BasisLabel> {
    let mut v = vec![
        BasisLabel::new(1, 0, 0, 0, 0),
        BasisLabel::new(0, 1, 0, 0, 0),
        BasisLabel::new(0, 0, 1, 0, 0),
        BasisLabel::new(0, 0, 0, 1, 0),
        BasisLabel::new(0, 0, 0, 0, 1),
    ];
    if kerr {
        v.iter_mut().for_each(|l| *l = l.with_kerr(0));
        v.push(BasisLabel::new(0, 0, 0, 0, 0).with_kerr(1));
    }
    v
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvolveOptions {
    /// Explicit upper bound on the RK4 step in ns.
    pub max_step: Option<f64>,
    /// Carrier angular frequency resolved by the default step (0 to ignore).
    pub carrier: f64,
    /// Coupling resolved by the default step (0 to ignore).
    pub coupling: f64,
}

impl EvolveOptions {
    pub fn for_system(params: &SystemParams) -> Self {
        EvolveOptions {
            max_step: None,
            carrier: params.omega_a.abs().max(params.omega_c.abs()),
            coupling: params.lambda1.max(params.lambda3),
        }
    }
}

/// Rows reachable from the support of `psi` through nonzero elements of `h`.
fn reachable_rows(h: &Matrix, psi: &Array1<C64>) -> Vec<usize> {
    let n = h.nrows();
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&i| psi[i] != C64::new(0.0, 0.0)).collect();
    stack.iter().for_each(|&i| seen[i] = true);
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && h[[j, i]] != C64::new(0.0, 0.0) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    (0..n).filter(|&i| seen[i]).collect()
}

/// Default step for evolving `initial` under `h`: see [`rk4::default_step`],
/// with the spectral bound taken over the rows the state can reach.
pub fn default_step(h: &Matrix, initial: &StateVector, options: &EvolveOptions) -> f64 {
    let rho = rk4::gershgorin_bound(h, reachable_rows(h, &initial.0));
    rk4::default_step(options.carrier, options.coupling, rho)
}

/// Solves `i ψ̇ = Hψ` by fixed-step RK4, sampling at `t_grid`.
///
/// The substeps between consecutive samples are folded into one propagator
/// matrix, cached per (substep count, step) so uniform grids build it once.
pub fn evolve(initial: &StateVector, h: &Matrix, t_grid: &[f64], options: &EvolveOptions) -> Result<Vec<StateVector>> {
    if h.nrows() != initial.len() || h.ncols() != initial.len() {
        return Err(Error::Dimension { expected: h.nrows(), got: initial.len() });
    }
    rk4::check_grid(t_grid)?;
    let max_step = options.max_step.unwrap_or_else(|| default_step(h, initial, options));
    let generator = h.mapv(|z| z * C64::new(0.0, -1.0));

    let mut cache: HashMap<(usize, u64), Matrix> = HashMap::new();
    let mut states = Vec::with_capacity(t_grid.len());
    let mut psi = initial.0.to_vec();
    let mut next = psi.clone();
    states.push(initial.clone());
    for w in t_grid.windows(2) {
        let span = w[1] - w[0];
        let n = rk4::substeps(span, max_step);
        let step = span / n as f64;
        let prop = cache.entry((n, step.to_bits())).or_insert_with(|| Rk4::propagator(&generator, step, n));
        rk4::matvec(prop, &psi, &mut next);
        std::mem::swap(&mut psi, &mut next);
        if psi.iter().any(|z| !z.is_finite()) {
            return Err(Error::Numerical { t: w[1], reason: "non-finite amplitude".into() });
        }
        states.push(StateVector(Array1::from(psi.clone())));
    }
    Ok(states)
}

fn quadratic_form(op: &Matrix, state: &StateVector) -> C64 {
    let mut tmp = vec![C64::new(0.0, 0.0); state.len()];
    rk4::matvec(op, state.0.as_slice().expect("contiguous"), &mut tmp);
    state.0.iter().zip(&tmp).map(|(a, b)| a.conj() * b).sum()
}

const RESIDUE_TOL: f64 = 1e-10;

fn real_expectation(op: &Matrix, state: &StateVector) -> Result<f64> {
    let z = quadratic_form(op, state);
    if z.im.abs() > RESIDUE_TOL {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

/// `⟨ψ|O|ψ⟩` for Hermitian `O`.
pub fn expectation(op: &Matrix, state: &StateVector) -> Result<f64> {
    if op.nrows() != state.len() {
        return Err(Error::Dimension { expected: op.nrows(), got: state.len() });
    }
    let defect = hilbert::hermiticity_defect(op);
    if defect > 1e-12 * (1.0 + hamiltonian::max_abs(op)) {
        return Err(Error::NotHermitian(defect));
    }
    real_expectation(op, state)
}

/// Observables at one sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub sigma_z_1: f64,
    pub sigma_z_3: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    /// Kerr boson number, with the Kerr medium only.
    pub nb: Option<f64>,
    /// Populations of the single-excitation kets, ordered `q1, f1, f2, q3, f3 [, k]`.
    pub populations: Vec<f64>,
    /// Total population per excitation number.
    pub sectors: Vec<f64>,
    /// Total probability `Σ|c|²`.
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub samples: Vec<Sample>,
    pub kerr: bool,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn sigma_z_3(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.sigma_z_3).collect()
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.samples.iter().map(|s| (s.norm - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Observables of single-excitation amplitudes (reduced or closed-form).
    pub fn from_amplitudes(t: &[f64], states: &[ReducedState]) -> Self {
        let kerr = states.first().is_some_and(|s| s.k.is_some());
        let samples = states
            .iter()
            .map(|s| {
                let pops = reduced::populations(s);
                let (sz1, sz3) = reduced::inversion(&pops);
                let norm: f64 = pops.iter().sum();
                Sample {
                    sigma_z_1: sz1,
                    sigma_z_3: sz3,
                    n1: pops[1],
                    n2: pops[2],
                    n3: pops[4],
                    nb: s.k.map(|k| k.norm_sqr()),
                    sectors: vec![0.0, norm],
                    populations: pops,
                    norm,
                }
            })
            .collect();
        TimeSeries { t: t.to_vec(), samples, kerr }
    }

    pub fn from_reduced(series: &ReducedSeries) -> Self {
        Self::from_amplitudes(&series.t, &series.states)
    }
}

/// Embedded observables of one basis.
pub struct ObservableSet {
    sigma_z_1: Matrix,
    sigma_z_3: Matrix,
    n1: Matrix,
    n2: Matrix,
    n3: Matrix,
    nb: Option<Matrix>,
    singles: Vec<usize>,
    excitations: Vec<usize>,
}

impl ObservableSet {
    pub fn new(basis: &BasisSet) -> Result<Self> {
        let cav = basis.dim_of(Subsystem::Cavity1).ok_or(Error::MissingSubsystem(Subsystem::Cavity1))?;
        let nb = match basis.dim_of(Subsystem::Kerr) {
            Some(d) => Some(embed(&number(d, Subsystem::Kerr)?, basis)?),
            None => None,
        };
        let singles = single_excitation_labels(basis.has_kerr())
            .iter()
            .map(|l| basis.index_of(l).expect("single-excitation ket in basis"))
            .collect();
        Ok(ObservableSet {
            sigma_z_1: embed(&qubit_ops_on(Subsystem::Qubit1).0, basis)?,
            sigma_z_3: embed(&qubit_ops_on(Subsystem::Qubit3).0, basis)?,
            n1: embed(&number(cav, Subsystem::Cavity1)?, basis)?,
            n2: embed(&number(cav, Subsystem::Cavity2)?, basis)?,
            n3: embed(&number(cav, Subsystem::Cavity3)?, basis)?,
            nb,
            singles,
            excitations: basis.labels().iter().map(|l| l.excitations()).collect(),
        })
    }

    pub fn sample(&self, state: &StateVector) -> Result<Sample> {
        let max_exc = self.excitations.iter().copied().max().unwrap_or(0);
        let mut sectors = vec![0.0; max_exc + 1];
        for (z, &e) in state.0.iter().zip(&self.excitations) {
            sectors[e] += z.norm_sqr();
        }
        Ok(Sample {
            sigma_z_1: real_expectation(&self.sigma_z_1, state)?,
            sigma_z_3: real_expectation(&self.sigma_z_3, state)?,
            n1: real_expectation(&self.n1, state)?,
            n2: real_expectation(&self.n2, state)?,
            n3: real_expectation(&self.n3, state)?,
            nb: self.nb.as_ref().map(|m| real_expectation(m, state)).transpose()?,
            populations: self.singles.iter().map(|&i| state.0[i].norm_sqr()).collect(),
            norm: state.norm_sqr(),
            sectors,
        })
    }
}

/// Observables of every sampled state.
pub fn observables_series(states: &[StateVector], t_grid: &[f64], basis: &BasisSet) -> Result<TimeSeries> {
    if states.len() != t_grid.len() {
        return Err(Error::Dimension { expected: t_grid.len(), got: states.len() });
    }
    let obs = ObservableSet::new(basis)?;
    let samples = states.iter().map(|s| obs.sample(s)).collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries { t: t_grid.to_vec(), samples, kerr: basis.has_kerr() })
}

/// Transfer quality of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMetrics {
    /// Maximum of `⟨σz⁽³⁾⟩` over the window.
    pub peak_sigma_z_3: f64,
    /// Earliest time at which the maximum is attained.
    pub peak_time: f64,
    /// Earliest time with `⟨σz⁽³⁾⟩ ≥ threshold`, if any.
    pub crossing_time: Option<f64>,
}

pub const DEFAULT_THRESHOLD: f64 = 0.9;

pub fn transfer_metrics(series: &TimeSeries, threshold: f64) -> Result<TransferMetrics> {
    if series.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut peak = (f64::NEG_INFINITY, 0.0);
    let mut crossing = None;
    for (t, s) in series.t.iter().zip(&series.samples) {
        if s.sigma_z_3 > peak.0 {
            peak = (s.sigma_z_3, *t);
        }
        if crossing.is_none() && s.sigma_z_3 >= threshold {
            crossing = Some(*t);
        }
    }
    Ok(TransferMetrics { peak_sigma_z_3: peak.0, peak_time: peak.1, crossing_time: crossing })
}

/// `max_t |⟨H⟩(t) − ⟨H⟩(0)| / ‖Hψ(0)‖`.
///
/// The scale `‖Hψ(0)‖ = √⟨H²⟩` stays nonzero when `⟨H⟩(0)` vanishes, as it
/// does for an excited qubit at resonance.
pub fn energy_drift(states: &[StateVector], h: &Matrix) -> Result<f64> {
    let Some(first) = states.first() else { return Err(Error::EmptyGrid) };
    let e0 = real_expectation(h, first)?;
    let mut hpsi = vec![C64::new(0.0, 0.0); first.len()];
    rk4::matvec(h, first.0.as_slice().expect("contiguous"), &mut hpsi);
    let scale = rk4::norm_sqr(&hpsi).sqrt().max(e0.abs());
    let mut worst = 0.0f64;
    for s in states {
        worst = worst.max((real_expectation(h, s)? - e0).abs());
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

/// Largest population outside the excitation sectors occupied at t = 0.
pub fn sector_leakage(series: &TimeSeries) -> f64 {
    let Some(first) = series.samples.first() else { return 0.0 };
    let occupied: Vec<bool> = first.sectors.iter().map(|&p| p > 0.0).collect();
    series
        .samples
        .iter()
        .map(|s| s.sectors.iter().zip(&occupied).filter(|(_, &o)| !o).map(|(p, _)| *p).sum::<f64>())
        .fold(0.0, f64::max)
}

/// A full-space run with its conservation diagnostics.
#[derive(Debug, Clone)]
pub struct FullRun {
    pub series: TimeSeries,
    pub energy_drift: f64,
    pub step: f64,
}

/// Builds basis and Hamiltonian for `params`, evolves `initial` and records observables.
pub fn simulate(params: &SystemParams, initial: &BasisLabel, t_grid: &[f64], max_step: Option<f64>) -> Result<FullRun> {
    params.validate()?;
    let basis = build_basis(params)?;
    let h = hamiltonian::build_total(params, &basis)?;
    let psi0 = StateVector::basis_state(&basis, initial)?;
    let mut options = EvolveOptions::for_system(params);
    options.max_step = max_step;
    let step = options.max_step.unwrap_or_else(|| default_step(&h, &psi0, &options));
    options.max_step = Some(step);
    let states = evolve(&psi0, &h, t_grid, &options)?;
    let series = observables_series(&states, t_grid, &basis)?;
    let drift = energy_drift(&states, &h)?;
    Ok(FullRun { series, energy_drift: drift, step })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::KerrParams;
    use crate::reduced::{integrate, IntegrateOptions, KerrDetuningMode};
    use crate::rk4::uniform_grid;
    use std::f64::consts::TAU;

    fn label(s: &str) -> BasisLabel {
        BasisLabel::parse(s).unwrap()
    }

    #[test]
    fn zero_hamiltonian_keeps_state() {
        let p = SystemParams::resonant(1.0, 0.1);
        let b = build_basis(&p).unwrap();
        let psi = StateVector::basis_state(&b, &label("10000")).unwrap();
        let h = Matrix::zeros((32, 32));
        let out =
            evolve(&psi, &h, &[0.0, 1.0, 2.0], &EvolveOptions { max_step: Some(0.1), ..Default::default() }).unwrap();
        assert!(out.iter().all(|s| *s == psi));
    }

    #[test]
    fn diagonal_hamiltonian_only_adds_phases() {
        let p = SystemParams::resonant(1.0, 0.1);
        let b = build_basis(&p).unwrap();
        let h0 = hamiltonian::build_h0(&p, &b).unwrap();
        let mut v = Array1::zeros(32);
        v[b.index_of(&label("10000")).unwrap()] = C64::new(0.6, 0.0);
        v[b.index_of(&label("11000")).unwrap()] = C64::new(0.0, 0.8);
        let psi = StateVector(v);
        let grid = uniform_grid(5.0, 11);
        let out = evolve(&psi, &h0, &grid, &EvolveOptions::for_system(&p)).unwrap();
        for s in &out {
            for (a, b) in s.0.iter().zip(psi.0.iter()) {
                assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn evolve_rejects_mismatch_and_bad_grids() {
        let p = SystemParams::resonant(1.0, 0.1);
        let b = build_basis(&p).unwrap();
        let psi = StateVector::basis_state(&b, &label("10000")).unwrap();
        let h = Matrix::zeros((31, 31));
        assert!(matches!(evolve(&psi, &h, &[0.0], &Default::default()), Err(Error::Dimension { .. })));
        let h = Matrix::zeros((32, 32));
        assert_eq!(evolve(&psi, &h, &[], &Default::default()), Err(Error::EmptyGrid));
        let mut bad = Matrix::zeros((32, 32));
        bad[[0, 0]] = C64::new(f64::NAN, 0.0);
        let psi0 = StateVector::basis_state(&b, &label("00000")).unwrap();
        assert!(matches!(
            evolve(&psi0, &bad, &[0.0, 1.0], &EvolveOptions { max_step: Some(0.1), ..Default::default() }),
            Err(Error::Numerical { .. })
        ));
    }

    #[test]
    fn expectation_values() {
        let p = SystemParams::resonant(1.0, 0.1);
        let b = build_basis(&p).unwrap();
        let n1 = embed(&number(2, Subsystem::Cavity1).unwrap(), &b).unwrap();
        let sz1 = embed(&qubit_ops_on(Subsystem::Qubit1).0, &b).unwrap();
        let photon = StateVector::basis_state(&b, &label("01000")).unwrap();
        let excited = StateVector::basis_state(&b, &label("10000")).unwrap();
        assert_eq!(expectation(&n1, &photon).unwrap(), 1.0);
        assert_eq!(expectation(&sz1, &excited).unwrap(), 1.0);
        assert_eq!(expectation(&Matrix::eye(32), &excited).unwrap(), 1.0);
        let a1 = embed(&hilbert::annihilation_on(2, Subsystem::Cavity1).unwrap(), &b).unwrap();
        assert!(matches!(expectation(&a1, &photon), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn initial_observables() {
        let p = SystemParams::resonant(1.0, 0.2);
        let run = simulate(&p, &label("10000"), &[0.0, 1.0], None).unwrap();
        let s = &run.series.samples[0];
        assert_eq!((s.sigma_z_1, s.sigma_z_3), (1.0, -1.0));
        assert_eq!((s.n1, s.n2, s.n3), (0.0, 0.0, 0.0));
        assert_eq!(s.populations, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.sectors[1], 1.0);
    }

    #[test]
    fn full_space_matches_reduced() {
        let p = SystemParams::resonant(1.0, 0.2);
        let grid = uniform_grid(150.0, 751);
        let full = simulate(&p, &label("10000"), &grid, None).unwrap();
        let red = integrate(
            &ReducedState::excited_q1(false),
            &p,
            &grid,
            KerrDetuningMode::default(),
            IntegrateOptions::default(),
        )
        .unwrap();
        let red = TimeSeries::from_reduced(&red);
        for (a, b) in full.series.samples.iter().zip(&red.samples) {
            for (x, y) in a.populations.iter().zip(&b.populations) {
                assert!((x - y).abs() < 1e-6);
            }
            assert!((a.sigma_z_1 - b.sigma_z_1).abs() < 1e-6);
            assert!((a.n2 - b.n2).abs() < 1e-6);
        }
        assert!(full.series.max_norm_drift() < 1e-9);
        assert!(full.energy_drift < 1e-8);
        assert!(sector_leakage(&full.series) < 1e-12);
    }

    #[test]
    fn kerr_full_space_matches_first_principles_reduction() {
        let w = TAU;
        let p = SystemParams::resonant(1.0, 0.5).with_kerr(KerrParams {
            omega_k: 0.7 * w,
            q: 0.2 * w,
            p: 0.5 * w,
            nb_max: 2,
        });
        let grid = uniform_grid(60.0, 301);
        let full = simulate(&p, &label("100000"), &grid, None).unwrap();
        let red = integrate(
            &ReducedState::excited_q1(true),
            &p,
            &grid,
            KerrDetuningMode::FirstPrinciples,
            IntegrateOptions::default(),
        )
        .unwrap();
        let red = TimeSeries::from_reduced(&red);
        for (a, b) in full.series.samples.iter().zip(&red.samples) {
            for (x, y) in a.populations.iter().zip(&b.populations) {
                assert!((x - y).abs() < 1e-6);
            }
            assert!((a.nb.unwrap() - b.nb.unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn truncation_independence() {
        let mut p = SystemParams::resonant(1.0, 0.2);
        let grid = uniform_grid(100.0, 201);
        let a = simulate(&p, &label("10000"), &grid, Some(0.005)).unwrap();
        p.n_max = 3;
        let b = simulate(&p, &label("10000"), &grid, Some(0.005)).unwrap();
        for (x, y) in a.series.samples.iter().zip(&b.series.samples) {
            assert!((x.sigma_z_3 - y.sigma_z_3).abs() < 1e-10);
            assert!((x.n2 - y.n2).abs() < 1e-10);
        }
    }

    #[test]
    fn metrics() {
        let mk = |v: &[f64]| TimeSeries {
            t: (0..v.len()).map(|i| i as f64).collect(),
            samples: v
                .iter()
                .map(|&s| Sample {
                    sigma_z_1: 0.0,
                    sigma_z_3: s,
                    n1: 0.0,
                    n2: 0.0,
                    n3: 0.0,
                    nb: None,
                    populations: vec![],
                    sectors: vec![],
                    norm: 1.0,
                })
                .collect(),
            kerr: false,
        };
        let m = transfer_metrics(&mk(&[-1.0, 0.95, 0.5, 0.97, 0.97]), 0.9).unwrap();
        assert_eq!(m.peak_sigma_z_3, 0.97);
        assert_eq!(m.peak_time, 3.0);
        assert_eq!(m.crossing_time, Some(1.0));
        let m = transfer_metrics(&mk(&[-1.0, -1.0]), 0.9).unwrap();
        assert_eq!(m.crossing_time, None);
        assert!(transfer_metrics(&mk(&[]), 0.9).is_err());
    }

    #[test]
    fn no_hopping_never_transfers() {
        let p = SystemParams::resonant(1.0, 0.0);
        let run = simulate(&p, &label("10000"), &uniform_grid(50.0, 101), None).unwrap();
        let m = transfer_metrics(&run.series, DEFAULT_THRESHOLD).unwrap();
        assert!((m.peak_sigma_z_3 + 1.0).abs() < 1e-9);
        assert_eq!(m.crossing_time, None);
    }
}
