//! s-domain solution of `i ċ = M c` and its inverse transform by partial fractions.
//!
//! With `ċ ↦ sC(s) − c(0)` the transformed system is `(sI + iM) C(s) = c(0)`,
//! so every amplitude is `adj(sI + iM) c(0) / det(sI + iM)`. The adjugate and
//! the characteristic polynomial come from the Faddeev–LeVerrier recursion.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::poly::Poly;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Relative tolerance for treating two poles as one.
const CLUSTER_TOL: f64 = 1e-6;
/// Relative tolerance for a Taylor coefficient to count as zero.
const ZERO_TOL: f64 = 1e-8;

/// `num(s) / den(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

/// One pole of multiplicity `coeffs.len()`: contributes
/// `e^{pole·t} Σ_k coeffs[k] t^k / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleTerm {
    pub pole: C64,
    pub coeffs: Vec<C64>,
}

/// Partial-fraction form of a strictly proper rational function.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub terms: Vec<PoleTerm>,
}

impl PartialFractions {
    /// Inverse Laplace transform at `t`.
    pub fn eval(&self, t: f64) -> C64 {
        self.terms
            .iter()
            .map(|term| {
                let mut poly = ZERO;
                let mut tk = 1.0;
                for (k, c) in term.coeffs.iter().enumerate() {
                    if k > 0 {
                        tk *= t / k as f64;
                    }
                    poly += c * tk;
                }
                poly * (term.pole * t).exp()
            })
            .sum()
    }
}

/// Distinct poles with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Pole {
    pub value: C64,
    pub multiplicity: usize,
}

/// Roots of `p` grouped into clusters, each cluster replaced by its mean.
fn clustered_roots(p: &Poly) -> Vec<Pole> {
    if p.degree() == 0 {
        return Vec::new();
    }
    // work with roots of order one
    let scale = root_scale(p);
    let roots: Vec<C64> = p.rescale_var(scale).roots().into_iter().map(|z| z * scale).collect();
    let mut used = vec![false; roots.len()];
    let mut poles = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![roots[i]];
        used[i] = true;
        for j in i + 1..roots.len() {
            if !used[j] && (roots[j] - roots[i]).norm() <= CLUSTER_TOL * scale {
                members.push(roots[j]);
                used[j] = true;
            }
        }
        let mean = members.iter().sum::<C64>() / members.len() as f64;
        let value = polish(p, mean, members.len());
        poles.push(Pole { value, multiplicity: members.len() });
    }
    poles.sort_by(|a, b| a.value.im.total_cmp(&b.value.im).then(a.value.re.total_cmp(&b.value.re)));
    poles
}

/// Newton refinement of a root of multiplicity `m`, which is a simple root of
/// the `(m − 1)`-th derivative.
fn polish(p: &Poly, z0: C64, m: usize) -> C64 {
    let mut q = p.clone();
    for _ in 1..m {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut z = z0;
    for _ in 0..8 {
        let d = dq.eval(z);
        if d == ZERO {
            break;
        }
        let step = q.eval(z) / d;
        if !step.is_finite() || step.norm() > 1e-3 * (1.0 + z0.norm()) {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Magnitude of the largest root, bounded via the coefficients (Fujiwara).
fn root_scale(p: &Poly) -> f64 {
    let n = p.degree();
    let lc = p.leading().norm();
    let bound = (0..n).map(|i| (p.coeffs[i].norm() / lc).powf(1.0 / (n - i) as f64)).fold(0.0, f64::max);
    if bound > 0.0 {
        2.0 * bound
    } else {
        1.0
    }
}

/// How many leading Taylor coefficients of `p` at `r` vanish.
fn zero_order(p: &Poly, r: C64) -> usize {
    let t = p.taylor_at(r);
    let mag = p.taylor_magnitude_at(r);
    t.iter().zip(&mag).take_while(|(c, m)| c.norm() <= ZERO_TOL * m.max(f64::MIN_POSITIVE)).count()
}

impl RationalFunction {
    pub fn eval(&self, s: C64) -> C64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Cancels factors common to numerator and denominator and makes the
    /// denominator monic.
    pub fn reduced(&self) -> RationalFunction {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if num.is_zero() {
            return RationalFunction { num, den: Poly::constant(C64::new(1.0, 0.0)) };
        }
        for pole in clustered_roots(&self.den) {
            let k = zero_order(&num, pole.value).min(pole.multiplicity);
            for _ in 0..k {
                num = num.deflate(pole.value);
                den = den.deflate(pole.value);
            }
        }
        let lc = den.leading();
        RationalFunction { num: num.scale(C64::new(1.0, 0.0) / lc), den: den.scale(C64::new(1.0, 0.0) / lc) }
    }

    pub fn poles(&self) -> Vec<Pole> {
        clustered_roots(&self.den)
    }

    /// Partial fractions over the clustered poles; confluent poles get
    /// polynomial-in-t coefficients.
    pub fn partial_fractions(&self) -> PartialFractions {
        assert!(
            self.num.is_zero() || self.num.degree() < self.den.degree(),
            "partial fractions need a strictly proper function"
        );
        let poles = self.poles();
        let lc = self.den.leading();
        let mut terms = Vec::with_capacity(poles.len());
        for (idx, pole) in poles.iter().enumerate() {
            let m = pole.multiplicity;
            // den = (s − r)^m · rest
            let others: Vec<C64> = poles
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != idx)
                .flat_map(|(_, p)| std::iter::repeat(p.value).take(p.multiplicity))
                .collect();
            let rest = Poly::from_roots(lc, &others);
            let n = self.num.taylor_at(pole.value);
            let g = rest.taylor_at(pole.value);
            // Taylor series of num / rest about the pole
            let mut h = vec![ZERO; m];
            for j in 0..m {
                let mut acc = n.get(j).copied().unwrap_or(ZERO);
                for i in 1..=j {
                    acc -= g.get(i).copied().unwrap_or(ZERO) * h[j - i];
                }
                h[j] = acc / g[0];
            }
            let coeffs = (0..m).map(|k| h[m - 1 - k]).collect();
            terms.push(PoleTerm { pole: pole.value, coeffs });
        }
        PartialFractions { terms }
    }
}

/// `(det(sI − A), [N_0, …, N_{n−1}])` with `adj(sI − A) = Σ_k s^{n−1−k} N_k`.
pub fn faddeev_leverrier(a: &Array2<C64>) -> (Poly, Vec<Array2<C64>>) {
    let n = a.nrows();
    let id = Array2::<C64>::eye(n);
    // det(sI − A) = s^n + c_1 s^{n−1} + … + c_n
    let mut c = vec![C64::new(1.0, 0.0)];
    let mut adj = vec![id.clone()];
    for k in 1..=n {
        let an = a.dot(&adj[k - 1]);
        let ck = -an.diag().sum() / k as f64;
        c.push(ck);
        if k < n {
            adj.push(an + &id.mapv(|z| z * ck));
        }
    }
    // ascending order
    c.reverse();
    (Poly::new(c), adj)
}

/// Each amplitude of `i ċ = M c` with `c(0) = initial`, as a rational function of s.
pub fn solve_s_domain(m: &Array2<C64>, initial: &[C64]) -> Vec<RationalFunction> {
    let n = m.nrows();
    assert_eq!(initial.len(), n);
    // sC − c0 = −iMC  ⇒  (sI − A) C = c0 with A = −iM
    let a = m.mapv(|z| z * C64::new(0.0, -1.0));
    let (det, adj) = faddeev_leverrier(&a);
    (0..n)
        .map(|i| {
            // numerator coefficient of s^{n−1−k} is (N_k c0)_i
            let mut coeffs = vec![ZERO; n];
            for (k, nk) in adj.iter().enumerate() {
                let v: C64 = (0..n).map(|j| nk[[i, j]] * initial[j]).sum();
                coeffs[n - 1 - k] = v;
            }
            RationalFunction { num: Poly::new(coeffs), den: det.clone() }.reduced()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn faddeev_leverrier_matches_direct_determinant() {
        let a = Array2::from_shape_vec((2, 2), vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        let (det, adj) = faddeev_leverrier(&a);
        // s² − 5s − 2
        assert_eq!(det, Poly::from_real(&[-2.0, -5.0, 1.0]));
        // adj(sI − A) = s I + (A − 5I)·… ; N_1 = A − tr(A) I
        assert_eq!(adj[1][[0, 0]], c(-4.0, 0.0));
        assert_eq!(adj[1][[0, 1]], c(2.0, 0.0));
    }

    #[test]
    fn single_rabi_pair() {
        // i ċ = [[0, g],[g, 0]] c, c(0) = (1, 0): c₀ = cos(gt), c₁ = −i sin(gt)
        let g = 0.7;
        let m = Array2::from_shape_vec((2, 2), vec![c(0.0, 0.0), c(g, 0.0), c(g, 0.0), c(0.0, 0.0)]).unwrap();
        let sol = solve_s_domain(&m, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let f0 = sol[0].partial_fractions();
        let f1 = sol[1].partial_fractions();
        for t in [0.0, 0.3, 1.7, 12.0] {
            assert!((f0.eval(t) - c((g * t).cos(), 0.0)).norm() < 1e-13);
            assert!((f1.eval(t) - c(0.0, -(g * t).sin())).norm() < 1e-13);
        }
    }

    #[test]
    fn confluent_pole() {
        // 1/(s+1)² ↔ t e^{−t}
        let f = RationalFunction { num: Poly::from_real(&[1.0]), den: Poly::from_real(&[1.0, 2.0, 1.0]) };
        let pf = f.partial_fractions();
        assert_eq!(pf.terms.len(), 1);
        for t in [0.0, 0.5, 2.0, 5.0] {
            assert!((pf.eval(t).re - t * (-t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn cancellation() {
        // (s − 2)(s + 1) / ((s − 2)(s + 3)(s + 1)) → 1/(s + 3)
        let num = Poly::from_roots(c(2.0, 0.0), &[c(2.0, 0.0), c(-1.0, 0.0)]);
        let den = Poly::from_roots(c(1.0, 0.0), &[c(2.0, 0.0), c(-3.0, 0.0), c(-1.0, 0.0)]);
        let r = RationalFunction { num, den }.reduced();
        assert_eq!(r.den.degree(), 1);
        assert!((r.den.coeffs[0] - c(3.0, 0.0)).norm() < 1e-12);
        assert!((r.num.coeffs[0] - c(2.0, 0.0)).norm() < 1e-12);
    }
}
