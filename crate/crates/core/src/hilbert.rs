//! Truncated tensor-product spaces for the qubit, cavity and Kerr factors.
//!
//! Kets are ordered `|k1 n1 n2 k3 n3 [nb]⟩` and enumerated row-major, so the
//! last factor varies fastest. Qubit level 1 is the excited state.

use std::collections::HashMap;
use std::fmt;

use ndarray::{linalg::kron, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::SystemParams;

pub type Matrix = Array2<C64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Qubit1,
    Cavity1,
    Cavity2,
    Qubit3,
    Cavity3,
    Kerr,
}

impl Subsystem {
    /// Factor order of a ket.
    pub const ORDER: [Subsystem; 6] = [
        Subsystem::Qubit1,
        Subsystem::Cavity1,
        Subsystem::Cavity2,
        Subsystem::Qubit3,
        Subsystem::Cavity3,
        Subsystem::Kerr,
    ];
}

/// One product ket `|k1 n1 n2 k3 n3 [nb]⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub k1: usize,
    pub n1: usize,
    pub n2: usize,
    pub k3: usize,
    pub n3: usize,
    pub nb: Option<usize>,
}

impl BasisLabel {
    pub fn new(k1: usize, n1: usize, n2: usize, k3: usize, n3: usize) -> Self {
        BasisLabel { k1, n1, n2, k3, n3, nb: None }
    }

    pub fn with_kerr(self, nb: usize) -> Self {
        BasisLabel { nb: Some(nb), ..self }
    }

    /// Occupations in factor order.
    pub fn occupations(&self) -> Vec<usize> {
        let mut v = vec![self.k1, self.n1, self.n2, self.k3, self.n3];
        v.extend(self.nb);
        v
    }

    fn from_occupations(occ: &[usize]) -> Self {
        BasisLabel { k1: occ[0], n1: occ[1], n2: occ[2], k3: occ[3], n3: occ[4], nb: occ.get(5).copied() }
    }

    /// Total number of quanta `k1 + n1 + n2 + k3 + n3 (+ nb)`.
    pub fn excitations(&self) -> usize {
        self.occupations().iter().sum()
    }

    /// Parses a digit string such as `"10000"` or `"000001"`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().trim_start_matches('|').trim_end_matches('>').trim_end_matches('⟩');
        let occ: Option<Vec<usize>> = s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
        let occ = occ?;
        match occ.len() {
            5 | 6 => Some(Self::from_occupations(&occ)),
            _ => None,
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for n in self.occupations() {
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Ordered enumeration of product kets with an inverse lookup.
#[derive(Debug, Clone)]
pub struct BasisSet {
    labels: Vec<BasisLabel>,
    dims: Vec<(Subsystem, usize)>,
    index: HashMap<BasisLabel, usize>,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label_at(&self, i: usize) -> BasisLabel {
        self.labels[i]
    }

    pub fn index_of(&self, label: &BasisLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn dims(&self) -> &[(Subsystem, usize)] {
        &self.dims
    }

    pub fn has_kerr(&self) -> bool {
        self.dims.len() == 6
    }

    pub fn dim_of(&self, subsystem: Subsystem) -> Option<usize> {
        self.dims.iter().find(|(s, _)| *s == subsystem).map(|&(_, d)| d)
    }
}

pub fn build_basis(params: &SystemParams) -> Result<BasisSet> {
    if params.n_max < 2 {
        return Err(Error::Truncation { what: "cavity", dim: params.n_max });
    }
    let n = params.n_max;
    let mut dims = vec![
        (Subsystem::Qubit1, 2),
        (Subsystem::Cavity1, n),
        (Subsystem::Cavity2, n),
        (Subsystem::Qubit3, 2),
        (Subsystem::Cavity3, n),
    ];
    if let Some(k) = &params.kerr {
        if k.nb_max < 2 {
            return Err(Error::Truncation { what: "Kerr mode", dim: k.nb_max });
        }
        dims.push((Subsystem::Kerr, k.nb_max));
    }

    let total: usize = dims.iter().map(|&(_, d)| d).product();
    let mut labels = Vec::with_capacity(total);
    let mut occ = vec![0usize; dims.len()];
    for _ in 0..total {
        labels.push(BasisLabel::from_occupations(&occ));
        // odometer increment, last factor fastest
        for pos in (0..dims.len()).rev() {
            occ[pos] += 1;
            if occ[pos] < dims[pos].1 {
                break;
            }
            occ[pos] = 0;
        }
    }
    let index = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    Ok(BasisSet { labels, dims, index })
}

/// A square operator acting on a single factor.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    pub matrix: Matrix,
    pub subsystem: Subsystem,
}

impl LocalOperator {
    pub fn new(matrix: Matrix, subsystem: Subsystem) -> Self {
        LocalOperator { matrix, subsystem }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dagger(&self) -> Self {
        LocalOperator::new(dagger(&self.matrix), self.subsystem)
    }

    /// Same matrix attached to a different factor of equal dimension.
    pub fn on(&self, subsystem: Subsystem) -> Self {
        LocalOperator::new(self.matrix.clone(), subsystem)
    }

    pub fn compose(&self, other: &LocalOperator) -> Self {
        debug_assert_eq!(self.subsystem, other.subsystem);
        LocalOperator::new(self.matrix.dot(&other.matrix), self.subsystem)
    }
}

pub fn dagger(m: &Matrix) -> Matrix {
    m.t().mapv(|z| z.conj())
}

/// Bosonic lowering operator truncated to `dim` levels, attached to `Cavity1`
/// until moved with [`LocalOperator::on`].
pub fn annihilation(dim: usize) -> Result<LocalOperator> {
    annihilation_on(dim, Subsystem::Cavity1)
}

pub fn annihilation_on(dim: usize, subsystem: Subsystem) -> Result<LocalOperator> {
    if dim < 2 {
        return Err(Error::Truncation { what: "bosonic mode", dim });
    }
    let mut m = Matrix::zeros((dim, dim));
    for n in 1..dim {
        m[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(LocalOperator::new(m, subsystem))
}

pub fn number(dim: usize, subsystem: Subsystem) -> Result<LocalOperator> {
    let a = annihilation_on(dim, subsystem)?;
    Ok(a.dagger().compose(&a))
}

/// `(σz, σ+, σ−)` on `Qubit1`; level 0 is ground, level 1 excited.
pub fn qubit_ops() -> (LocalOperator, LocalOperator, LocalOperator) {
    qubit_ops_on(Subsystem::Qubit1)
}

pub fn qubit_ops_on(subsystem: Subsystem) -> (LocalOperator, LocalOperator, LocalOperator) {
    let one = C64::new(1.0, 0.0);
    let mut sz = Matrix::zeros((2, 2));
    sz[[0, 0]] = -one;
    sz[[1, 1]] = one;
    let mut sp = Matrix::zeros((2, 2));
    sp[[1, 0]] = one;
    let sm = dagger(&sp);
    (LocalOperator::new(sz, subsystem), LocalOperator::new(sp, subsystem), LocalOperator::new(sm, subsystem))
}

/// `op ⊗ 1` with the identity on every other factor of `basis`.
pub fn embed(op: &LocalOperator, basis: &BasisSet) -> Result<Matrix> {
    let expected = basis.dim_of(op.subsystem).ok_or(Error::MissingSubsystem(op.subsystem))?;
    if op.dim() != expected || op.matrix.ncols() != expected {
        return Err(Error::OperatorDimension { subsystem: op.subsystem, expected, got: op.dim() });
    }
    let mut full = Matrix::eye(1);
    for &(sub, d) in basis.dims() {
        full = if sub == op.subsystem { kron(&full, &op.matrix) } else { kron(&full, &Matrix::eye(d)) };
    }
    Ok(full)
}

/// Indices of kets carrying exactly `m` quanta, in basis order.
pub fn excitation_sector(basis: &BasisSet, m: usize) -> Vec<usize> {
    basis.labels().iter().enumerate().filter(|(_, l)| l.excitations() == m).map(|(i, _)| i).collect()
}

/// `Σ a†a + Σ σ+σ− (+ b†b)` on the full space.
pub fn total_excitation(basis: &BasisSet) -> Result<Matrix> {
    let mut n = Matrix::zeros((basis.len(), basis.len()));
    for &(sub, d) in basis.dims() {
        let local = match sub {
            Subsystem::Qubit1 | Subsystem::Qubit3 => {
                let (_, sp, sm) = qubit_ops_on(sub);
                sp.compose(&sm)
            }
            _ => number(d, sub)?,
        };
        n += &embed(&local, basis)?;
    }
    Ok(n)
}

/// Frobenius norm of `a − b`.
pub fn diff_norm(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermiticity_defect(m: &Matrix) -> f64 {
    diff_norm(m, &dagger(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{KerrParams, SystemParams};

    fn kerr_params(n_max: usize, nb_max: usize) -> SystemParams {
        let mut p = SystemParams::resonant(1.0, 0.1).with_kerr(KerrParams { omega_k: 6.0, q: 1.0, p: 3.0, nb_max });
        p.n_max = n_max;
        p
    }

    #[test]
    fn basis_sizes() {
        let b = build_basis(&SystemParams::resonant(1.0, 0.1)).unwrap();
        assert_eq!(b.len(), 32);
        let b = build_basis(&kerr_params(2, 2)).unwrap();
        assert_eq!(b.len(), 64);
        let b = build_basis(&kerr_params(3, 2)).unwrap();
        assert_eq!(b.len(), 2 * 27 * 2 * 2);
    }

    #[test]
    fn basis_rejects_small_truncation() {
        let mut p = SystemParams::resonant(1.0, 0.1);
        p.n_max = 1;
        assert!(matches!(build_basis(&p), Err(Error::Truncation { .. })));
        assert!(matches!(build_basis(&kerr_params(2, 1)), Err(Error::Truncation { what: "Kerr mode", .. })));
    }

    #[test]
    fn ordering_is_row_major_in_ket_order() {
        let b = build_basis(&SystemParams::resonant(1.0, 0.1)).unwrap();
        assert_eq!(b.label_at(0), BasisLabel::new(0, 0, 0, 0, 0));
        assert_eq!(b.label_at(1), BasisLabel::new(0, 0, 0, 0, 1));
        assert_eq!(b.label_at(2), BasisLabel::new(0, 0, 0, 1, 0));
        assert_eq!(b.label_at(16), BasisLabel::new(1, 0, 0, 0, 0));
        for (i, l) in b.labels().iter().enumerate() {
            assert_eq!(b.index_of(l), Some(i));
        }
        let mut sorted = b.labels().to_vec();
        sorted.sort();
        assert_eq!(sorted, b.labels());
    }

    #[test]
    fn single_excitation_sector_is_the_ansatz() {
        let b = build_basis(&SystemParams::resonant(1.0, 0.1)).unwrap();
        assert_eq!(excitation_sector(&b, 0).len(), 1);
        let kets: Vec<String> = excitation_sector(&b, 1).iter().map(|&i| b.label_at(i).to_string()).collect();
        let mut expected = vec!["|10000⟩", "|01000⟩", "|00100⟩", "|00010⟩", "|00001⟩"];
        expected.sort();
        let mut got = kets.clone();
        got.sort();
        assert_eq!(got, expected);

        let bk = build_basis(&kerr_params(2, 2)).unwrap();
        let sector = excitation_sector(&bk, 1);
        assert_eq!(sector.len(), 6);
        assert!(sector.contains(&bk.index_of(&BasisLabel::parse("000001").unwrap()).unwrap()));
    }

    #[test]
    fn annihilation_elements() {
        let a = annihilation(2).unwrap();
        let nonzero: Vec<_> = a.matrix.indexed_iter().filter(|(_, z)| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].0, (0, 1));
        assert_eq!(*nonzero[0].1, C64::new(1.0, 0.0));

        let a3 = annihilation(3).unwrap();
        assert!((a3.matrix[[1, 2]].re - 2f64.sqrt()).abs() < 1e-15);
        let n = a3.dagger().compose(&a3);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { i as f64 } else { 0.0 };
                assert!((n.matrix[[i, j]] - C64::new(want, 0.0)).norm() < 1e-14);
            }
        }
        assert!(annihilation(1).is_err());
    }

    #[test]
    fn qubit_algebra() {
        let (sz, sp, sm) = qubit_ops();
        let anti = sp.matrix.dot(&sm.matrix) + sm.matrix.dot(&sp.matrix);
        assert_eq!(anti, Matrix::eye(2));
        let comm = sz.matrix.dot(&sp.matrix) - sp.matrix.dot(&sz.matrix);
        assert_eq!(comm, sp.matrix.mapv(|z| z * 2.0));
        // σ−|e⟩ = |g⟩
        let excited = ndarray::arr1(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let lowered = sm.matrix.dot(&excited);
        assert_eq!(lowered[0], C64::new(1.0, 0.0));
        assert_eq!(lowered[1], C64::new(0.0, 0.0));
        assert_eq!(sz.matrix[[1, 1]].re, 1.0);
    }

    #[test]
    fn embedding() {
        let b = build_basis(&SystemParams::resonant(1.0, 0.1)).unwrap();
        let id = LocalOperator::new(Matrix::eye(2), Subsystem::Cavity2);
        assert_eq!(embed(&id, &b).unwrap(), Matrix::eye(32));

        let a1 = annihilation_on(2, Subsystem::Cavity1).unwrap();
        let a1f = embed(&a1, &b).unwrap();
        let from = b.index_of(&BasisLabel::parse("01000").unwrap()).unwrap();
        let to = b.index_of(&BasisLabel::parse("00000").unwrap()).unwrap();
        assert_eq!(a1f[[to, from]], C64::new(1.0, 0.0));
        assert_eq!(a1f.column(from).iter().filter(|z| z.norm() > 0.0).count(), 1);

        let a2d = embed(&annihilation_on(2, Subsystem::Cavity2).unwrap().dagger(), &b).unwrap();
        assert!(diff_norm(&a1f.dot(&a2d), &a2d.dot(&a1f)) < 1e-15);
    }

    #[test]
    fn embedding_errors() {
        let b = build_basis(&SystemParams::resonant(1.0, 0.1)).unwrap();
        let kerr_op = annihilation_on(2, Subsystem::Kerr).unwrap();
        assert_eq!(embed(&kerr_op, &b), Err(Error::MissingSubsystem(Subsystem::Kerr)));
        let wrong = annihilation_on(3, Subsystem::Cavity1).unwrap();
        assert!(matches!(embed(&wrong, &b), Err(Error::OperatorDimension { .. })));
    }

    #[test]
    fn total_excitation_is_diagonal_with_sector_labels() {
        for params in [SystemParams::resonant(1.0, 0.1), kerr_params(3, 2)] {
            let b = build_basis(&params).unwrap();
            let n = total_excitation(&b).unwrap();
            for ((i, j), z) in n.indexed_iter() {
                if i == j {
                    assert!((z.re - b.label_at(i).excitations() as f64).abs() < 1e-14);
                    assert_eq!(z.im, 0.0);
                } else {
                    assert_eq!(*z, C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        let l = BasisLabel::parse("|10010⟩").unwrap();
        assert_eq!(l, BasisLabel::new(1, 0, 0, 1, 0));
        assert_eq!(l.to_string(), "|10010⟩");
        assert_eq!(BasisLabel::parse("000001").unwrap().nb, Some(1));
        assert!(BasisLabel::parse("10x00").is_none());
        assert!(BasisLabel::parse("1000").is_none());
    }
}
