//! Toral compactification maps `x -> frac(M x)` and the integer lattices attached to them.

mod independence;
pub mod lattice;
mod slope;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use independence::{
    check_rational_independence, default_bound, Independence, DEFAULT_BOUND_ENUM,
    DEFAULT_BOUND_PLANAR, RELATION_TOL,
};
pub use slope::{golden, Slope, SlopeLabel};

const ORTHO_TOL: f64 = 1e-12;

/// The pair `(m, M)` of a toral compactification together with the normal frame `N`.
///
/// The constructor orthonormalises the columns of `M` (Gram–Schmidt), so that
/// `MᵀM = I` and `[M N]` is special orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapJson", into = "MapJson")]
pub struct CompactificationMap {
    m: usize,
    n: usize,
    /// `m x n`, row-major.
    flow: Vec<f64>,
    /// `m x (m - n)`, row-major.
    normal: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    m: usize,
    n: usize,
    #[serde(rename = "M")]
    rows: Vec<Vec<f64>>,
}

impl TryFrom<MapJson> for CompactificationMap {
    type Error = Error;

    fn try_from(j: MapJson) -> Result<Self> {
        if j.rows.len() != j.m {
            return Err(Error::DimensionMismatch { expected: j.m, got: j.rows.len() });
        }
        CompactificationMap::new(j.m, j.n, &j.rows)
    }
}

impl From<CompactificationMap> for MapJson {
    fn from(map: CompactificationMap) -> Self {
        MapJson {
            m: map.m,
            n: map.n,
            rows: (0..map.m).map(|i| (0..map.n).map(|j| map.entry(i, j)).collect()).collect(),
        }
    }
}

impl CompactificationMap {
    /// Builds the map from the rows of `M` (`m` rows of length `n`).
    pub fn new(m: usize, n: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::InvalidArgument(format!("need 1 <= n <= m, got m={m}, n={n}")));
        }
        if rows.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: rows.len() });
        }
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: r.len() });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("non-finite entry in M".into()));
            }
        }
        // Gram–Schmidt on the input columns, then completion from the standard basis
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
        for j in 0..n {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            let v = orthogonalize(&col, &basis).ok_or_else(|| {
                Error::InvalidArgument("columns of M are linearly dependent".into())
            })?;
            basis.push(v);
        }
        let mut e = 0;
        while basis.len() < m {
            let mut unit = vec![0.0; m];
            unit[e] = 1.0;
            if let Some(v) = orthogonalize(&unit, &basis) {
                basis.push(v);
            }
            e += 1;
        }
        if m > n {
            let det = DMatrix::from_fn(m, m, |i, j| basis[j][i]).determinant();
            if det < 0.0 {
                basis[m - 1].iter_mut().for_each(|v| *v = -*v);
            }
        }
        let flow = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| basis[j][i]).collect();
        let normal = (0..m)
            .flat_map(|i| (n..m).map(move |j| (i, j)))
            .map(|(i, j)| basis[j][i])
            .collect();
        Ok(CompactificationMap { m, n, flow, normal })
    }

    /// The line `M = [cos θ, sin θ]ᵀ` in the 2-torus.
    pub fn planar(slope: Slope) -> Self {
        let (c, s) = (slope.cos(), slope.sin());
        // already orthonormal; N = (−sin θ, cos θ) gives det [M N] = 1
        CompactificationMap { m: 2, n: 1, flow: vec![c, s], normal: vec![-s, c] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `M[i][j]`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.flow[i * self.n + j]
    }

    /// Entry `N[i][j]` of the normal frame.
    pub fn normal_entry(&self, i: usize, j: usize) -> f64 {
        self.normal[i * (self.m - self.n) + j]
    }

    pub fn flow_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.m, self.n, |i, j| self.entry(i, j))
    }

    pub fn normal_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.m, self.m - self.n, |i, j| self.normal_entry(i, j))
    }

    /// `Mᵀ k`, the frequency attached to the character `ζ_k`.
    pub fn frequency(&self, k: &[i64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.m).map(|i| self.entry(i, j) * k[i] as f64).sum())
            .collect()
    }

    /// Frequency for `n = 1`.
    pub fn frequency1(&self, k: &[i64]) -> f64 {
        (0..self.m).map(|i| self.entry(i, 0) * k[i] as f64).sum()
    }

    /// `frac(M x)` componentwise, in `[0, 1)^m`.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|i| {
                let v: f64 = (0..self.n).map(|j| self.entry(i, j) * x[j]).sum();
                frac(v)
            })
            .collect()
    }

    /// `M x` without reduction mod 1.
    pub fn lift(&self, x: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|i| (0..self.n).map(|j| self.entry(i, j) * x[j]).sum())
            .collect()
    }

    /// Checks `MᵀM = I` and `[M N] ∈ SO(m)` at tolerance `1e-12`.
    pub fn check_orthonormal(&self) -> bool {
        let q = DMatrix::from_fn(self.m, self.m, |i, j| {
            if j < self.n {
                self.entry(i, j)
            } else {
                self.normal_entry(i, j - self.n)
            }
        });
        let gram = q.transpose() * &q;
        let ident = DMatrix::<f64>::identity(self.m, self.m);
        (gram - ident).amax() < ORTHO_TOL && (q.determinant() - 1.0).abs() < ORTHO_TOL
    }
}

fn orthogonalize(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut w = v.to_vec();
    // two passes for numerical orthogonality
    for _ in 0..2 {
        for b in basis {
            let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
    }
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm0 == 0.0 || norm < 1e-10 * norm0.max(1.0) {
        return None;
    }
    Some(w.into_iter().map(|x| x / norm).collect())
}

/// Fractional part in `[0, 1)`.
pub fn frac(v: f64) -> f64 {
    let f = v - v.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance between two numbers modulo 1.
pub fn circ_dist(a: f64, b: f64) -> f64 {
    let d = frac(a - b);
    d.min(1.0 - d)
}

/// A subgroup of `Z^m` given by linearly independent generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSubgroup {
    m: usize,
    generators: Vec<Vec<i64>>,
}

impl LatticeSubgroup {
    pub fn new(m: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        for g in &generators {
            if g.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: g.len() });
            }
        }
        let r = lattice::rank_of_columns(&generators)?;
        if r != generators.len() {
            return Err(Error::InvalidArgument(
                "generators are not linearly independent over Q".into(),
            ));
        }
        Ok(LatticeSubgroup { m, generators })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    fn as_matrix(&self) -> lattice::IMat {
        (0..self.m)
            .map(|i| self.generators.iter().map(|g| g[i] as i128).collect())
            .collect()
    }

    /// `|S₁/S|`, the index of the subgroup in its projective closure
    /// `S₁ = {k : a k ∈ S for some a ∈ N}`: the product of the Smith invariants.
    pub fn projective_index(&self) -> Result<u64> {
        if self.rank() == 0 {
            return Err(Error::RankZero);
        }
        let inv = lattice::smith_invariants(&self.as_matrix())?;
        let prod = inv
            .iter()
            .try_fold(1i128, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::Overflow)?;
        u64::try_from(prod).map_err(|_| Error::Overflow)
    }

    /// Basis (as columns) of the annihilator lattice `{k ∈ Z^m : kᵀs = 0 ∀ s ∈ S}`,
    /// in canonical Hermite form. Empty when `rank S = m`.
    pub fn annihilator_basis(&self) -> Result<Vec<Vec<i64>>> {
        if self.rank() == self.m {
            return Ok(Vec::new());
        }
        let st = lattice::transpose(&self.as_matrix());
        let st = if st.is_empty() { Vec::new() } else { st };
        let ker = if self.rank() == 0 {
            (0..self.m)
                .map(|j| (0..self.m).map(|i| i128::from(i == j)).collect())
                .collect()
        } else {
            lattice::integer_kernel(&st, self.m)?
        };
        let cols: Vec<Vec<i64>> = ker
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|v| i64::try_from(v).map_err(|_| Error::Overflow))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<_>>()?;
        lattice::hermite_basis(&cols)
    }

    /// Basis of the projective closure `S₁`, the annihilator of the annihilator.
    pub fn projective_closure(&self) -> Result<Vec<Vec<i64>>> {
        let e = self.annihilator_basis()?;
        if e.is_empty() {
            return Ok((0..self.m).map(|j| (0..self.m).map(|i| i64::from(i == j)).collect()).collect());
        }
        LatticeSubgroup { m: self.m, generators: e }.annihilator_basis()
    }
}

/// Density `|S₁/S| |det EᵀM|` of the points whose image lies on a component with
/// homotopy subgroup `S` (rank `m − n`), `E` a basis of the annihilator of `S`.
pub fn homotopy_density(s: &LatticeSubgroup, map: &CompactificationMap) -> Result<HomotopyTerm> {
    if s.m() != map.m() {
        return Err(Error::DimensionMismatch { expected: map.m(), got: s.m() });
    }
    if s.rank() + map.n() != map.m() {
        return Err(Error::InvalidArgument(format!(
            "homotopy subgroup must have rank m - n = {}, got {}",
            map.m() - map.n(),
            s.rank()
        )));
    }
    let index = s.projective_index()?;
    let e = s.annihilator_basis()?;
    let n = map.n();
    let etm = DMatrix::from_fn(n, n, |r, c| {
        (0..map.m()).map(|i| e[r][i] as f64 * map.entry(i, c)).sum::<f64>()
    });
    let det = etm.determinant().abs();
    Ok(HomotopyTerm { index, annihilator: e, abs_det: det, density: index as f64 * det })
}

/// One term of the homotopy density formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopyTerm {
    pub index: u64,
    /// Columns of `E`.
    pub annihilator: Vec<Vec<i64>>,
    pub abs_det: f64,
    pub density: f64,
}
