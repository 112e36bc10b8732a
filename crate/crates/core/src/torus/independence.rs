//! Bounded screening for integer relations `Mᵀ k = 0`.

use serde::{Deserialize, Serialize};

use super::CompactificationMap;

/// Residual below which `‖Mᵀk‖` counts as an exact relation.
pub const RELATION_TOL: f64 = 1e-10;

/// Default search bound for `m = 2` (continued fractions).
pub const DEFAULT_BOUND_PLANAR: u64 = 1_000_000;

/// Default search bound for direct enumeration.
pub const DEFAULT_BOUND_ENUM: u64 = 1_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Independence {
    /// No relation with `‖k‖∞ <= bound`.
    IndependentUpToBound { bound: u64 },
    Relation { k: Vec<i64>, residual: f64 },
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::IndependentUpToBound { .. })
    }
}

/// Primitive representative with first nonzero entry positive.
fn normalize_sign(k: &mut [i64]) {
    let g = k.iter().fold(0i128, |g, &v| super::lattice::gcd(g, v as i128)).abs();
    if g > 1 {
        k.iter_mut().for_each(|v| *v /= g as i64);
    }
    if let Some(&first) = k.iter().find(|&&v| v != 0) {
        if first < 0 {
            k.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn residual(map: &CompactificationMap, k: &[i64]) -> f64 {
    (0..map.n())
        .map(|j| {
            let s: f64 = (0..map.m()).map(|i| map.entry(i, j) * k[i] as f64).sum();
            s * s
        })
        .sum::<f64>()
        .sqrt()
}

/// Default bound for a map: continued fractions reach much further than enumeration.
pub fn default_bound(map: &CompactificationMap) -> u64 {
    if map.m() == 2 && map.n() == 1 {
        DEFAULT_BOUND_PLANAR
    } else {
        DEFAULT_BOUND_ENUM
    }
}

pub fn check_rational_independence(map: &CompactificationMap, bound: u64) -> Independence {
    let bound = bound.max(1);
    if map.m() == 2 && map.n() == 1 {
        planar(map, bound)
    } else {
        enumerate(map, bound)
    }
}

/// `k₁ a + k₂ b = 0`: the best approximations of the ratio are its convergents.
fn planar(map: &CompactificationMap, bound: u64) -> Independence {
    let (a, b) = (map.entry(0, 0), map.entry(1, 0));
    // order so that |x| <= 1 and the denominator bounds ‖k‖∞
    let swapped = a.abs() < b.abs();
    let (big, small) = if swapped { (b, a) } else { (a, b) };
    let x = small / big;
    // convergents p/q of x; relation q·small − p·big = big (q x − p)
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut rem = x - x.floor();
    loop {
        if q1 as u64 > bound {
            break;
        }
        // k on (big, small) coordinates: big·(−p) + small·q
        let mut k = if swapped { vec![q1, -p1] } else { vec![-p1, q1] };
        let r = residual(map, &k);
        if r < RELATION_TOL {
            normalize_sign(&mut k);
            return Independence::Relation { k, residual: r };
        }
        if rem.abs() < 1e-300 {
            break;
        }
        let inv = 1.0 / rem;
        let a_next = inv.floor();
        rem = inv - a_next;
        if a_next > 1e18 {
            break;
        }
        let a_next = a_next as i64;
        let (Some(p2), Some(q2)) = (
            a_next.checked_mul(p1).and_then(|v| v.checked_add(p0)),
            a_next.checked_mul(q1).and_then(|v| v.checked_add(q0)),
        ) else {
            break;
        };
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    Independence::IndependentUpToBound { bound }
}

/// Enumerates the `m − n` free coordinates and solves for the remaining `n`.
fn enumerate(map: &CompactificationMap, bound: u64) -> Independence {
    let (m, n) = (map.m(), map.n());
    let b = bound as i64;
    if m <= n {
        // square case: relation iff M is singular on Z^m; search the full box
        return enumerate_full(map, bound);
    }
    // pick the n rows of M with the best-conditioned square block (greedy pivoting)
    let mut rows: Vec<usize> = Vec::new();
    let mut work: Vec<Vec<f64>> = (0..m).map(|i| (0..n).map(|j| map.entry(i, j)).collect()).collect();
    let mut used = vec![false; m];
    for j in 0..n {
        let (piv, _) = (0..m)
            .filter(|&i| !used[i])
            .map(|i| (i, work[i][j].abs()))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        used[piv] = true;
        rows.push(piv);
        for i in 0..m {
            if i != piv && !used[i] {
                let f = work[i][j] / work[piv][j];
                for jj in j..n {
                    work[i][jj] -= f * work[piv][jj];
                }
            }
        }
    }
    let free: Vec<usize> = (0..m).filter(|i| !rows.contains(i)).collect();
    let sq = nalgebra::DMatrix::from_fn(n, n, |r, c| map.entry(rows[c], r));
    let lu = sq.lu();
    let mut free_k = vec![-b; free.len()];
    loop {
        if free_k.iter().any(|&v| v != 0) {
            // Σ_free k_i M_i + Σ_rows k_r M_r = 0
            let rhs = nalgebra::DVector::from_fn(n, |j, _| {
                -free.iter().zip(&free_k).map(|(&i, &k)| map.entry(i, j) * k as f64).sum::<f64>()
            });
            if let Some(sol) = lu.solve(&rhs) {
                let mut k = vec![0i64; m];
                for (&i, &v) in free.iter().zip(&free_k) {
                    k[i] = v;
                }
                let mut ok = true;
                for (idx, &r) in rows.iter().enumerate() {
                    let v = sol[idx].round();
                    if v.abs() > b as f64 {
                        ok = false;
                        break;
                    }
                    k[r] = v as i64;
                }
                if ok {
                    let res = residual(map, &k);
                    if res < RELATION_TOL {
                        normalize_sign(&mut k);
                        return Independence::Relation { k, residual: res };
                    }
                }
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == free_k.len() {
                return Independence::IndependentUpToBound { bound };
            }
            free_k[i] += 1;
            if free_k[i] > b {
                free_k[i] = -b;
                i += 1;
            } else {
                break;
            }
        }
    }
}

fn enumerate_full(map: &CompactificationMap, bound: u64) -> Independence {
    let m = map.m();
    let b = bound as i64;
    let mut k = vec![-b; m];
    loop {
        if k.iter().any(|&v| v != 0) {
            let r = residual(map, &k);
            if r < RELATION_TOL {
                let mut k = k.clone();
                normalize_sign(&mut k);
                return Independence::Relation { k, residual: r };
            }
        }
        let mut i = 0;
        loop {
            if i == m {
                return Independence::IndependentUpToBound { bound };
            }
            k[i] += 1;
            if k[i] > b {
                k[i] = -b;
                i += 1;
            } else {
                break;
            }
        }
    }
}
