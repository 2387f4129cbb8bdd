//! Free, interaction and Kerr Hamiltonians as dense full-space matrices (ħ = 1).
//!
//! The atom–field coupling is already in rotating-wave form. The Kerr
//! self-interaction `q b†²b²` belongs to the free part.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{annihilation_on, embed, number, qubit_ops_on, BasisSet, LocalOperator, Matrix, Subsystem};
use crate::params::SystemParams;

fn check_basis(params: &SystemParams, basis: &BasisSet) -> Result<()> {
    let cavity = basis.dim_of(Subsystem::Cavity1).unwrap_or(0);
    if cavity != params.n_max {
        return Err(Error::Dimension { expected: params.n_max, got: cavity });
    }
    match (&params.kerr, basis.dim_of(Subsystem::Kerr)) {
        (Some(k), Some(nb)) if k.nb_max == nb => Ok(()),
        (None, None) => Ok(()),
        (Some(k), got) => Err(Error::Dimension { expected: k.nb_max, got: got.unwrap_or(0) }),
        (None, Some(_)) => Err(Error::Unsupported("basis has a Kerr factor but Kerr is disabled".into())),
    }
}

fn scaled(m: Matrix, c: f64) -> Matrix {
    m.mapv(|z| z * c)
}

/// `Σ ω_c a_i†a_i + (ω_a/2)(σz⁽¹⁾ + σz⁽³⁾) [+ ω_K b†b + q b†²b²]`.
pub fn build_h0(params: &SystemParams, basis: &BasisSet) -> Result<Matrix> {
    check_basis(params, basis)?;
    let n = params.n_max;
    let mut h = Matrix::zeros((basis.len(), basis.len()));
    for cav in [Subsystem::Cavity1, Subsystem::Cavity2, Subsystem::Cavity3] {
        h += &scaled(embed(&number(n, cav)?, basis)?, params.omega_c);
    }
    for qb in [Subsystem::Qubit1, Subsystem::Qubit3] {
        let (sz, _, _) = qubit_ops_on(qb);
        h += &scaled(embed(&sz, basis)?, params.omega_a / 2.0);
    }
    if let Some(k) = &params.kerr {
        let b = annihilation_on(k.nb_max, Subsystem::Kerr)?;
        let bd = b.dagger();
        let nb = bd.compose(&b);
        let pair = bd.compose(&bd).compose(&b).compose(&b);
        h += &scaled(embed(&nb, basis)?, k.omega_k);
        h += &scaled(embed(&pair, basis)?, k.q);
    }
    Ok(h)
}

/// `c (x†y + h.c.)` for operators on two distinct factors.
fn exchange(x: &LocalOperator, y: &LocalOperator, c: f64, basis: &BasisSet) -> Result<Matrix> {
    let xd = embed(&x.dagger(), basis)?;
    let yf = embed(y, basis)?;
    let term = xd.dot(&yf);
    let hc = crate::hilbert::dagger(&term);
    Ok(scaled(term + hc, c))
}

/// `λ₁(a₁†σ−⁽¹⁾ + h.c.) + λ₃(a₃†σ−⁽³⁾ + h.c.) + J₁₂(a₁†a₂ + h.c.) + J₂₃(a₂†a₃ + h.c.) [+ p(a₂†b + h.c.)]`.
pub fn build_hi(params: &SystemParams, basis: &BasisSet) -> Result<Matrix> {
    check_basis(params, basis)?;
    let n = params.n_max;
    let a1 = annihilation_on(n, Subsystem::Cavity1)?;
    let a2 = annihilation_on(n, Subsystem::Cavity2)?;
    let a3 = annihilation_on(n, Subsystem::Cavity3)?;
    let (_, _, sm1) = qubit_ops_on(Subsystem::Qubit1);
    let (_, _, sm3) = qubit_ops_on(Subsystem::Qubit3);

    let mut h = exchange(&a1, &sm1, params.lambda1, basis)?;
    h += &exchange(&a3, &sm3, params.lambda3, basis)?;
    h += &exchange(&a1, &a2, params.j12, basis)?;
    h += &exchange(&a2, &a3, params.j23, basis)?;
    if let Some(k) = &params.kerr {
        let b = annihilation_on(k.nb_max, Subsystem::Kerr)?;
        h += &exchange(&a2, &b, k.p, basis)?;
    }
    Ok(h)
}

pub fn build_total(params: &SystemParams, basis: &BasisSet) -> Result<Matrix> {
    Ok(build_h0(params, basis)? + build_hi(params, basis)?)
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.dot(b) - b.dot(a)
}

/// Sub-block of `m` on the given index set.
pub fn restrict(m: &Matrix, indices: &[usize]) -> Matrix {
    Array2::from_shape_fn((indices.len(), indices.len()), |(i, j)| m[[indices[i], indices[j]]])
}

/// Largest absolute entry.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z: &C64| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_basis, excitation_sector, hermiticity_defect, total_excitation, BasisLabel};
    use crate::params::KerrParams;
    use proptest::prelude::*;

    fn elem(m: &Matrix, basis: &BasisSet, bra: &str, ket: &str) -> C64 {
        let i = basis.index_of(&BasisLabel::parse(bra).unwrap()).unwrap();
        let j = basis.index_of(&BasisLabel::parse(ket).unwrap()).unwrap();
        m[[i, j]]
    }

    fn kerr_preset() -> SystemParams {
        let w = std::f64::consts::TAU;
        SystemParams::resonant(1.0, 0.5).with_kerr(KerrParams { omega_k: w, q: 0.2 * w, p: 0.5 * w, nb_max: 2 })
    }

    #[test]
    fn free_hamiltonian_diagonal() {
        let p = SystemParams::resonant(1.0, 0.1);
        let b = build_basis(&p).unwrap();
        let h0 = build_h0(&p, &b).unwrap();
        assert_eq!(elem(&h0, &b, "10000", "10000"), C64::new(0.0, 0.0));
        let sector = excitation_sector(&b, 1);
        let first = h0[[sector[0], sector[0]]];
        for &i in &sector {
            assert!((h0[[i, i]] - first).norm() < 1e-15);
        }
        assert!(max_abs(&(h0.clone() - Matrix::from_diag(&h0.diag()))) == 0.0);

        let pk = kerr_preset();
        let bk = build_basis(&pk).unwrap();
        let h0k = build_h0(&pk, &bk).unwrap();
        let k = pk.kerr.unwrap();
        let e = elem(&h0k, &bk, "000001", "000001");
        assert!((e.re - (k.omega_k - pk.omega_a)).abs() < 1e-14);
    }

    #[test]
    fn kerr_pair_term_acts_from_two_bosons() {
        let mut pk = kerr_preset();
        pk.kerr.as_mut().unwrap().nb_max = 3;
        let bk = build_basis(&pk).unwrap();
        let h0 = build_h0(&pk, &bk).unwrap();
        let k = pk.kerr.unwrap();
        let e2 = elem(&h0, &bk, "000002", "000002");
        assert!((e2.re - (2.0 * k.omega_k + 2.0 * k.q - pk.omega_a)).abs() < 1e-13);
    }

    #[test]
    fn interaction_elements() {
        let p = SystemParams::resonant(1.0, 0.1);
        let b = build_basis(&p).unwrap();
        let hi = build_hi(&p, &b).unwrap();
        assert!((elem(&hi, &b, "01000", "10000").re - p.lambda1).abs() < 1e-15);
        assert!((elem(&hi, &b, "00100", "01000").re - p.j12).abs() < 1e-15);
        assert!((elem(&hi, &b, "00001", "00100").re - p.j23).abs() < 1e-15);
        assert!((elem(&hi, &b, "00001", "00010").re - p.lambda3).abs() < 1e-15);
        assert_eq!(elem(&hi, &b, "00010", "10000"), C64::new(0.0, 0.0));

        let pk = kerr_preset();
        let bk = build_basis(&pk).unwrap();
        let hik = build_hi(&pk, &bk).unwrap();
        assert!((elem(&hik, &bk, "000001", "001000").re - pk.kerr.unwrap().p).abs() < 1e-15);
    }

    #[test]
    fn resonant_free_and_interaction_commute_on_single_excitations() {
        let p = SystemParams::resonant(1.0, 0.2);
        let b = build_basis(&p).unwrap();
        let c = commutator(&build_h0(&p, &b).unwrap(), &build_hi(&p, &b).unwrap());
        assert!(max_abs(&restrict(&c, &excitation_sector(&b, 1))) < 1e-12);

        // with Kerr only at ω_K = ω_c
        let pk = kerr_preset();
        let bk = build_basis(&pk).unwrap();
        let sector = excitation_sector(&bk, 1);
        let ck = commutator(&build_h0(&pk, &bk).unwrap(), &build_hi(&pk, &bk).unwrap());
        assert!(max_abs(&restrict(&ck, &sector)) < 1e-12);
        let mut off = pk;
        off.kerr.as_mut().unwrap().omega_k = 0.5 * pk.omega_c;
        let ck = commutator(&build_h0(&off, &bk).unwrap(), &build_hi(&off, &bk).unwrap());
        assert!(max_abs(&restrict(&ck, &sector)) > 1e-3);
    }

    #[test]
    fn detuning_breaks_commutation() {
        let mut p = SystemParams::resonant(1.0, 0.2);
        p.omega_c = 0.99 * p.omega_a;
        let b = build_basis(&p).unwrap();
        let c = commutator(&build_h0(&p, &b).unwrap(), &build_hi(&p, &b).unwrap());
        assert!(max_abs(&restrict(&c, &excitation_sector(&b, 1))) > 1e-3);
    }

    #[test]
    fn basis_mismatch_is_rejected() {
        let p = SystemParams::resonant(1.0, 0.1);
        let bk = build_basis(&kerr_preset()).unwrap();
        assert!(build_total(&p, &bk).is_err());
        let b = build_basis(&p).unwrap();
        assert!(build_total(&kerr_preset(), &b).is_err());
    }

    fn arb_params() -> impl Strategy<Value = SystemParams> {
        (
            0.5f64..2.0,
            0.5f64..2.0,
            0.0f64..1.0,
            0.0f64..1.0,
            0.0f64..1.0,
            0.0f64..1.0,
            2usize..4,
            proptest::option::of((0.1f64..3.0, -1.0f64..1.0, 0.0f64..2.0, 2usize..4)),
        )
            .prop_map(|(wa, wc, l1, l3, j12, j23, n_max, kerr)| SystemParams {
                omega_a: wa,
                omega_c: wc,
                lambda1: l1,
                lambda3: l3,
                j12,
                j23,
                n_max,
                kerr: kerr.map(|(omega_k, q, p, nb_max)| KerrParams { omega_k, q, p, nb_max }),
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn hermitian_and_excitation_conserving(p in arb_params()) {
            let b = build_basis(&p).unwrap();
            let h = build_total(&p, &b).unwrap();
            prop_assert!(hermiticity_defect(&h) < 1e-12);
            let n = total_excitation(&b).unwrap();
            prop_assert!(max_abs(&commutator(&h, &n)) < 1e-12);
            // no elements between sectors
            for ((i, j), z) in h.indexed_iter() {
                if b.label_at(i).excitations() != b.label_at(j).excitations() {
                    prop_assert_eq!(*z, C64::new(0.0, 0.0));
                }
            }
        }
    }
}
