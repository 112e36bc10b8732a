use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Direction of a line `x -> x [cos θ, sin θ]` given by its slope `tan θ`.
///
/// Symbolic forms (`sqrt2`, `1/sqrt2`, `golden`, `inf`) are expanded with
/// closed-form cosines and sines instead of going through `atan`, so that the
/// irrationality screen never sees a truncated decimal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slope {
    pub label: SlopeLabel,
    cos: f64,
    sin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeLabel {
    Sqrt2,
    InvSqrt2,
    Golden,
    Infinite,
    Value(f64),
}

/// The golden ratio `(1 + √5) / 2`.
pub fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

impl Slope {
    /// Slope from a numeric `tan θ`, with θ in `(-π/2, π/2)`.
    pub fn from_tan(t: f64) -> Self {
        let h = (1.0 + t * t).sqrt();
        Slope { label: SlopeLabel::Value(t), cos: 1.0 / h, sin: t / h }
    }

    pub fn sqrt2() -> Self {
        Slope { label: SlopeLabel::Sqrt2, cos: (1.0f64 / 3.0).sqrt(), sin: (2.0f64 / 3.0).sqrt() }
    }

    pub fn inv_sqrt2() -> Self {
        Slope { label: SlopeLabel::InvSqrt2, cos: (2.0f64 / 3.0).sqrt(), sin: (1.0f64 / 3.0).sqrt() }
    }

    pub fn golden() -> Self {
        // 1 + α² = (5 + √5) / 2
        let s5 = 5f64.sqrt();
        let cos = (2.0 / (5.0 + s5)).sqrt();
        Slope { label: SlopeLabel::Golden, cos, sin: golden() * cos }
    }

    pub fn infinite() -> Self {
        Slope { label: SlopeLabel::Infinite, cos: 0.0, sin: 1.0 }
    }

    pub fn cos(&self) -> f64 {
        self.cos
    }

    pub fn sin(&self) -> f64 {
        self.sin
    }

    pub fn tan(&self) -> f64 {
        match self.label {
            SlopeLabel::Infinite => f64::INFINITY,
            SlopeLabel::Value(t) => t,
            _ => self.sin / self.cos,
        }
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sqrt2" | "sqrt(2)" => Ok(Slope::sqrt2()),
            "1/sqrt2" | "1/sqrt(2)" => Ok(Slope::inv_sqrt2()),
            "golden" | "phi" => Ok(Slope::golden()),
            "inf" | "infinity" => Ok(Slope::infinite()),
            other => other
                .parse::<f64>()
                .map(Slope::from_tan)
                .map_err(|_| Error::Parse(format!("unrecognised slope `{s}`"))),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            SlopeLabel::Sqrt2 => write!(f, "sqrt2"),
            SlopeLabel::InvSqrt2 => write!(f, "1/sqrt2"),
            SlopeLabel::Golden => write!(f, "golden"),
            SlopeLabel::Infinite => write!(f, "inf"),
            SlopeLabel::Value(t) => write!(f, "{t}"),
        }
    }
}
