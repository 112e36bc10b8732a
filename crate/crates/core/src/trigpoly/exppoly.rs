use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Frequencies closer than this are merged.
pub const FREQ_MERGE_TOL: f64 = 1e-12;
/// Merged coefficients below this modulus are dropped.
pub const COEFF_DROP_TOL: f64 = 1e-14;

/// An exponential polynomial `p(x) = Σ c_j exp(2πi y_j x)` with `y_1 < ... < y_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpJson", into = "ExpJson")]
pub struct ExpPoly1D {
    terms: Vec<(f64, Complex64)>,
}

#[derive(Serialize, Deserialize)]
struct ExpJson {
    terms: Vec<ExpTermJson>,
}

#[derive(Serialize, Deserialize)]
struct ExpTermJson {
    freq: f64,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl TryFrom<ExpJson> for ExpPoly1D {
    type Error = Error;

    fn try_from(j: ExpJson) -> Result<Self> {
        ExpPoly1D::new(j.terms.into_iter().map(|t| (t.freq, Complex64::new(t.re, t.im))))
    }
}

impl From<ExpPoly1D> for ExpJson {
    fn from(p: ExpPoly1D) -> Self {
        ExpJson {
            terms: p
                .terms
                .into_iter()
                .map(|(freq, c)| ExpTermJson { freq, re: c.re, im: c.im })
                .collect(),
        }
    }
}

impl ExpPoly1D {
    /// Sorts, merges frequencies within [`FREQ_MERGE_TOL`] and drops negligible terms.
    pub fn new(terms: impl IntoIterator<Item = (f64, Complex64)>) -> Result<Self> {
        let mut raw: Vec<(f64, Complex64)> = terms.into_iter().collect();
        if raw.iter().any(|(y, c)| !y.is_finite() || !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite term".into()));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, Complex64)> = Vec::with_capacity(raw.len());
        for (y, c) in raw {
            match merged.last_mut() {
                Some(last) if (y - last.0).abs() <= FREQ_MERGE_TOL => last.1 += c,
                _ => merged.push((y, c)),
            }
        }
        merged.retain(|(_, c)| c.norm() >= COEFF_DROP_TOL);
        if merged.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(ExpPoly1D { terms: merged })
    }

    /// `χ_y`, a single character.
    pub fn character(y: f64) -> Self {
        ExpPoly1D { terms: vec![(y, Complex64::new(1.0, 0.0))] }
    }

    pub fn from_real(terms: &[(f64, f64)]) -> Result<Self> {
        Self::new(terms.iter().map(|&(y, c)| (y, Complex64::new(c, 0.0))))
    }

    pub fn terms(&self) -> &[(f64, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `y_d − y_1`.
    pub fn bandwidth(&self) -> f64 {
        self.terms.last().unwrap().0 - self.terms[0].0
    }

    pub fn coeff_abs_sum(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|(y, c)| c * Complex64::cis(2.0 * PI * y * x)).sum()
    }

    /// The entire extension `Σ c_j exp(2πi y_j z)`.
    pub fn eval_entire(&self, z: Complex64) -> Complex64 {
        let i2pi = Complex64::new(0.0, 2.0 * PI);
        self.terms.iter().map(|(y, c)| c * (i2pi * y * z).exp()).sum()
    }

    /// Value and derivative of the entire extension.
    pub fn eval_entire_d(&self, z: Complex64) -> (Complex64, Complex64) {
        let i2pi = Complex64::new(0.0, 2.0 * PI);
        let mut v = Complex64::default();
        let mut d = Complex64::default();
        for (y, c) in &self.terms {
            let t = c * (i2pi * y * z).exp();
            v += t;
            d += t * i2pi * y;
        }
        (v, d)
    }

    /// `p'`, or `None` when `p` is a constant.
    pub fn derivative(&self) -> Option<Self> {
        let i2pi = Complex64::new(0.0, 2.0 * PI);
        ExpPoly1D::new(self.terms.iter().map(|(y, c)| (*y, c * i2pi * y))).ok()
    }

    /// `x -> p(x − s)`.
    pub fn translate(&self, s: f64) -> Self {
        ExpPoly1D {
            terms: self
                .terms
                .iter()
                .map(|(y, c)| (*y, c * Complex64::cis(-2.0 * PI * y * s)))
                .collect(),
        }
    }
}
