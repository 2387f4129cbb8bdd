//! Dense univariate polynomials with complex coefficients.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Coefficients in ascending order: `c[0] + c[1] s + c[2] s² + …`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn constant(c: C64) -> Self {
        Poly::new(vec![c])
    }

    /// `lc · Π (s − r)`.
    pub fn from_roots(lc: C64, roots: &[C64]) -> Self {
        roots.iter().fold(Poly::constant(lc), |p, &r| &p * &Poly::new(vec![-r, C64::new(1.0, 0.0)]))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, s: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::constant(ZERO);
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    /// Drops coefficients below `rel · max|c|` from the top.
    pub fn trimmed(&self, rel: f64) -> Poly {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c.last().unwrap().norm() <= rel * scale {
            c.pop();
        }
        Poly::new(c)
    }

    pub fn scale(&self, k: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// `p(σ s)`.
    pub fn rescale_var(&self, sigma: f64) -> Poly {
        let mut pow = 1.0;
        Poly::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    let v = c * pow;
                    pow *= sigma;
                    v
                })
                .collect(),
        )
    }

    /// Taylor coefficients about `r`: `p(r + x) = Σ t_j x^j`.
    pub fn taylor_at(&self, r: C64) -> Vec<C64> {
        // repeated synthetic division
        let mut c = self.coeffs.clone();
        let n = c.len();
        for j in 0..n {
            for i in (j..n - 1).rev() {
                let hi = c[i + 1];
                c[i] += hi * r;
            }
        }
        c
    }

    /// Same as [`Poly::taylor_at`] with `|coefficients|` and `|r|`: a scale
    /// against which each Taylor coefficient's rounding error is measured.
    pub fn taylor_magnitude_at(&self, r: C64) -> Vec<f64> {
        let abs = Poly::new(self.coeffs.iter().map(|c| C64::new(c.norm(), 0.0)).collect());
        abs.taylor_at(C64::new(r.norm(), 0.0)).iter().map(|c| c.re).collect()
    }

    /// Quotient of division by `(s − r)`, discarding the remainder.
    pub fn deflate(&self, r: C64) -> Poly {
        let n = self.coeffs.len();
        if n == 1 {
            return Poly::constant(ZERO);
        }
        let mut q = vec![ZERO; n - 1];
        let mut carry = ZERO;
        for i in (0..n - 1).rev() {
            carry = self.coeffs[i + 1] + carry * r;
            q[i] = carry;
        }
        Poly::new(q)
    }

    /// All complex roots (Aberth–Ehrlich iteration).
    pub fn roots(&self) -> Vec<C64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let monic = self.scale(C64::new(1.0, 0.0) / self.leading());
        if n == 1 {
            return vec![-monic.coeffs[0]];
        }
        let dp = monic.derivative();
        // Cauchy bound for the initial circle
        let radius = 1.0 + monic.coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut z: Vec<C64> =
            (0..n).map(|k| C64::from_polar(0.5 * radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64)).collect();
        for _ in 0..2000 {
            let mut max_step = 0.0f64;
            for i in 0..n {
                let p = monic.eval(z[i]);
                if p == ZERO {
                    continue;
                }
                let ratio = p / dp.eval(z[i]);
                let repulsion: C64 = (0..n).filter(|&j| j != i).map(|j| C64::new(1.0, 0.0) / (z[i] - z[j])).sum();
                let w = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
                if w.is_finite() {
                    z[i] -= w;
                    max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
                }
            }
            if max_step < 1e-17 {
                break;
            }
        }
        z
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).copied().unwrap_or(ZERO) + rhs.coeffs.get(i).copied().unwrap_or(ZERO))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut c = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}
