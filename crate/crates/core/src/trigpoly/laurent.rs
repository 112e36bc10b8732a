use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::exppoly::ExpPoly1D;
use crate::error::{Error, Result};
use crate::torus::CompactificationMap;

/// A Laurent polynomial `Σ c_k z^k` on the torus `T^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LaurentJson", into = "LaurentJson")]
pub struct LaurentPoly {
    m: usize,
    terms: BTreeMap<Vec<i64>, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    m: usize,
    terms: Vec<LaurentTermJson>,
}

#[derive(Serialize, Deserialize)]
struct LaurentTermJson {
    exp: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl TryFrom<LaurentJson> for LaurentPoly {
    type Error = Error;

    fn try_from(j: LaurentJson) -> Result<Self> {
        LaurentPoly::new(j.m, j.terms.into_iter().map(|t| (t.exp, Complex64::new(t.re, t.im))))
    }
}

impl From<LaurentPoly> for LaurentJson {
    fn from(p: LaurentPoly) -> Self {
        LaurentJson {
            m: p.m,
            terms: p
                .terms
                .into_iter()
                .map(|(exp, c)| LaurentTermJson { exp, re: c.re, im: c.im })
                .collect(),
        }
    }
}

/// Outcome of the self-duality test: `P(z⁻¹) = u z^{−a} P(z)`, i.e. `c_{a−k} = u c_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SelfDuality {
    Yes { a: Vec<i64>, u: Complex64 },
    No,
}

impl LaurentPoly {
    /// Collects terms, summing repeated exponents and dropping exact zeros.
    pub fn new(m: usize, terms: impl IntoIterator<Item = (Vec<i64>, Complex64)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (k, c) in terms {
            if k.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: k.len() });
            }
            *map.entry(k).or_default() += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        if map.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(LaurentPoly { m, terms: map })
    }

    /// Convenience constructor for real coefficients.
    pub fn from_real(m: usize, terms: &[(&[i64], f64)]) -> Result<Self> {
        Self::new(m, terms.iter().map(|(k, c)| (k.to_vec(), Complex64::new(*c, 0.0))))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.terms.get(k).copied().unwrap_or_default()
    }

    /// `Σ c_k exp(2πi kᵀθ)` at a torus point given in turns.
    pub fn eval_torus(&self, theta: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| {
                let phase: f64 = k.iter().zip(theta).map(|(&ki, &t)| ki as f64 * t).sum();
                c * Complex64::cis(2.0 * PI * phase)
            })
            .sum()
    }

    /// Value and gradient with respect to θ (turns).
    pub fn eval_torus_grad(&self, theta: &[f64]) -> (Complex64, Vec<Complex64>) {
        let mut val = Complex64::default();
        let mut grad = vec![Complex64::default(); self.m];
        for (k, c) in &self.terms {
            let phase: f64 = k.iter().zip(theta).map(|(&ki, &t)| ki as f64 * t).sum();
            let term = c * Complex64::cis(2.0 * PI * phase);
            val += term;
            for (g, &ki) in grad.iter_mut().zip(k) {
                *g += term * Complex64::new(0.0, 2.0 * PI * ki as f64);
            }
        }
        (val, grad)
    }

    /// Evaluation at a point of `(C \ {0})^m`.
    pub fn eval_z(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| c * k.iter().zip(z).map(|(&ki, zi)| zi.powi(ki as i32)).product::<Complex64>())
            .sum()
    }

    /// The pullback `P ∘ ψ` as an exponential polynomial with frequencies `Mᵀk`
    /// (requires `n = 1`). Colliding frequencies are merged.
    pub fn pullback(&self, map: &CompactificationMap) -> Result<ExpPoly1D> {
        if map.n() != 1 {
            return Err(Error::InvalidArgument("pullback needs n = 1".into()));
        }
        if map.m() != self.m {
            return Err(Error::DimensionMismatch { expected: map.m(), got: self.m });
        }
        ExpPoly1D::new(self.terms.iter().map(|(k, c)| (map.frequency1(k), *c)))
    }

    /// Decides whether `P(z⁻¹)/P(z)` is a monomial `u z^{−a}` with `|u| = 1`;
    /// coefficients are compared within `tol`.
    pub fn is_self_dual(&self, tol: f64) -> SelfDuality {
        // the map k -> a − k reverses lexicographic order
        let (lo, hi) = (self.terms.keys().next().unwrap(), self.terms.keys().next_back().unwrap());
        let a: Vec<i64> = lo.iter().zip(hi).map(|(x, y)| x + y).collect();
        let u = self.terms[lo] / self.terms[hi];
        if (u.norm() - 1.0).abs() > tol {
            return SelfDuality::No;
        }
        for (k, c) in &self.terms {
            let mirror: Vec<i64> = a.iter().zip(k).map(|(ai, ki)| ai - ki).collect();
            match self.terms.get(&mirror) {
                Some(cm) if (cm - u * c).norm() <= tol * c.norm().max(1.0) => {}
                _ => return SelfDuality::No,
            }
        }
        SelfDuality::Yes { a, u }
    }

    /// Smallest exponent in each coordinate.
    pub fn min_exponents(&self) -> Vec<i64> {
        (0..self.m)
            .map(|i| self.terms.keys().map(|k| k[i]).min().unwrap())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::Slope;

    fn ex1() -> LaurentPoly {
        LaurentPoly::from_real(2, &[(&[1, 1], 2.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 2.0)]).unwrap()
    }

    fn ex2(delta: f64) -> LaurentPoly {
        LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[-1, 0], -1.0), (&[0, 1], -delta), (&[0, -1], delta)])
            .unwrap()
    }

    #[test]
    fn eval_torus_examples() {
        let z1 = LaurentPoly::from_real(2, &[(&[1, 0], 1.0)]).unwrap();
        assert!((z1.eval_torus(&[0.25, 0.0]) - Complex64::i()).norm() < 1e-15);
        assert!((ex1().eval_torus(&[0.0, 0.0]) - 6.0).norm() < 1e-15);
        assert!(ex1().eval_torus(&[0.5, 0.0]).norm() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let p = ex2(0.5);
        let th = [0.123, 0.77];
        let (_, g) = p.eval_torus_grad(&th);
        let h = 1e-6;
        for j in 0..2 {
            let mut a = th;
            let mut b = th;
            a[j] += h;
            b[j] -= h;
            let fd = (p.eval_torus(&a) - p.eval_torus(&b)) / (2.0 * h);
            assert!((fd - g[j]).norm() < 1e-6);
        }
    }

    #[test]
    fn pullback_example_one() {
        let map = CompactificationMap::planar(Slope::sqrt2());
        let (c, s) = (map.entry(0, 0), map.entry(1, 0));
        let p = ex1().pullback(&map).unwrap();
        let want = [(0.0, 2.0), (c, 1.0), (s, 1.0), (c + s, 2.0)];
        assert_eq!(p.terms().len(), 4);
        for ((y, cf), (wy, wc)) in p.terms().iter().zip(want) {
            assert!((y - wy).abs() < 1e-15);
            assert!((cf - wc).norm() < 1e-15);
        }
    }

    #[test]
    fn pullback_example_two_and_constant() {
        let map = CompactificationMap::planar(Slope::sqrt2());
        let (c, s) = (map.entry(0, 0), map.entry(1, 0));
        let d = 0.5;
        let p = ex2(d).pullback(&map).unwrap();
        let want = [(-s, d), (-c, -1.0), (c, 1.0), (s, -d)];
        for ((y, cf), (wy, wc)) in p.terms().iter().zip(want) {
            assert!((y - wy).abs() < 1e-15);
            assert!((cf - wc).norm() < 1e-15);
        }
        let five = LaurentPoly::from_real(2, &[(&[0, 0], 5.0)]).unwrap().pullback(&map).unwrap();
        assert_eq!(five.terms(), &[(0.0, Complex64::new(5.0, 0.0))]);
    }

    #[test]
    fn pullback_cancellation_is_an_error() {
        // M ∝ (1, 1): z1 − z2 pulls back to zero
        let map = CompactificationMap::new(2, 1, &[vec![1.0], vec![1.0]]).unwrap();
        let p = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[0, 1], -1.0)]).unwrap();
        assert_eq!(p.pullback(&map), Err(Error::ZeroPolynomial));
        let q = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[0, 1], 2.0)]).unwrap();
        let e = q.pullback(&map).unwrap();
        assert_eq!(e.terms().len(), 1);
        assert!((e.terms()[0].1 - 3.0).norm() < 1e-15);
    }

    #[test]
    fn self_duality_examples() {
        assert_eq!(ex1().is_self_dual(1e-12), SelfDuality::Yes { a: vec![1, 1], u: Complex64::new(1.0, 0.0) });
        match ex2(0.5).is_self_dual(1e-12) {
            SelfDuality::Yes { a, u } => {
                assert_eq!(a, vec![0, 0]);
                assert!((u + 1.0).norm() < 1e-15);
            }
            SelfDuality::No => panic!(),
        }
        let p = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[0, 0], 2.0)]).unwrap();
        assert_eq!(p.is_self_dual(1e-12), SelfDuality::No);
    }

    #[test]
    fn json_format() {
        let p: LaurentPoly =
            serde_json::from_str(r#"{"m":2,"terms":[{"exp":[1,0],"re":1.0,"im":0.0},{"exp":[0,0],"re":-1.0}]}"#)
                .unwrap();
        assert_eq!(p.len(), 2);
        let back: LaurentPoly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<LaurentPoly>(r#"{"m":2,"terms":[]}"#).is_err());
    }
}
