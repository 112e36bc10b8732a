//! Exact integer lattice arithmetic over `i128` with checked operations.
//!
//! Matrices are row-major `Vec<Vec<i128>>`. Nothing here touches floating point.

use crate::error::{Error, Result};

pub(crate) type IMat = Vec<Vec<i128>>;

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// Extended gcd: returns `(g, x, y)` with `g = x a + y b`, `g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

pub(crate) fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return Vec::new();
    }
    let (rows, cols) = (a.len(), a[0].len());
    (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect()
}

fn identity(q: usize) -> IMat {
    (0..q)
        .map(|i| (0..q).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Replaces columns `c`, `j` of `a` by `(x col_c + y col_j, u col_c + v col_j)`.
fn col_combine(a: &mut IMat, c: usize, j: usize, x: i128, y: i128, u: i128, v: i128) -> Result<()> {
    for row in a.iter_mut() {
        let (ac, aj) = (row[c], row[j]);
        row[c] = add(mul(x, ac)?, mul(y, aj)?)?;
        row[j] = add(mul(u, ac)?, mul(v, aj)?)?;
    }
    Ok(())
}

/// Column echelon form by unimodular column operations: returns `(H, U, rank)`
/// with `A U = H`, where the first `rank` columns of `H` are nonzero and the rest vanish.
pub(crate) fn column_echelon(a: &IMat, ncols: usize) -> Result<(IMat, IMat, usize)> {
    let mut h = a.clone();
    let mut u = identity(ncols);
    let mut c = 0usize;
    for i in 0..h.len() {
        if c >= ncols {
            break;
        }
        for j in (c + 1)..ncols {
            let (p, q) = (h[i][c], h[i][j]);
            if q == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(p, q);
            let (u1, v1) = (-q / g, p / g);
            col_combine(&mut h, c, j, x, y, u1, v1)?;
            col_combine(&mut u, c, j, x, y, u1, v1)?;
        }
        if h[i][c] != 0 {
            c += 1;
        }
    }
    Ok((h, u, c))
}

/// Exact rank of the matrix whose columns are `cols`.
pub fn rank_of_columns(cols: &[Vec<i64>]) -> Result<usize> {
    if cols.is_empty() {
        return Ok(0);
    }
    let rows = transpose(&cols.iter().map(|c| c.iter().map(|&v| v as i128).collect()).collect());
    let (_, _, r) = column_echelon(&rows, cols.len())?;
    Ok(r)
}

/// Integer kernel of `a` (a `p x q` matrix): a basis of `{x in Z^q : a x = 0}`, as columns.
pub(crate) fn integer_kernel(a: &IMat, q: usize) -> Result<Vec<Vec<i128>>> {
    let (_, u, r) = column_echelon(a, q)?;
    Ok((r..q).map(|j| (0..q).map(|i| u[i][j]).collect()).collect())
}

/// Absolute Smith invariant factors of `a`, nonzero ones only, in divisibility order.
pub(crate) fn smith_invariants(a: &IMat) -> Result<Vec<i128>> {
    let mut a = a.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in (t + 1)..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    for j in t..cols {
                        a[i][j] = add(a[i][j], -mul(q, a[t][j])?)?;
                    }
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        row[j] = add(row[j], -mul(q, row[t])?)?;
                    }
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility of the trailing block by the pivot
                let p = a[t][t];
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            a[t][j] = add(a[t][j], a[i][j])?;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/col t into the pivot
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    Ok(out)
}

/// Canonical column Hermite normal form of a lattice basis given as columns.
///
/// Two bases span the same lattice iff their canonical forms coincide.
pub fn hermite_basis(cols: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let m = cols[0].len();
    let mat: IMat = (0..m)
        .map(|i| cols.iter().map(|c| c[i] as i128).collect())
        .collect();
    let q = cols.len();
    let (mut h, _, r) = column_echelon(&mat, q)?;
    // make pivots positive and reduce entries to the left of each pivot
    let mut pivot_rows = Vec::with_capacity(r);
    let mut row = 0;
    for c in 0..r {
        while h[row][c] == 0 {
            row += 1;
        }
        if h[row][c] < 0 {
            for hr in h.iter_mut() {
                hr[c] = -hr[c];
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    for c in 0..r {
        let pr = pivot_rows[c];
        let p = h[pr][c];
        for c2 in 0..c {
            let q = h[pr][c2].div_euclid(p);
            if q != 0 {
                for hr in h.iter_mut() {
                    hr[c2] = add(hr[c2], -mul(q, hr[c])?)?;
                }
            }
        }
    }
    (0..r)
        .map(|c| {
            (0..m)
                .map(|i| i64::try_from(h[i][c]).map_err(|_| Error::Overflow))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i128]]) -> IMat {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(12, 18), (-4, 6), (0, 5), (7, 0), (35, -14)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(g, x * a + y * b);
            assert!(g >= 0);
        }
    }

    #[test]
    fn smith_of_diagonalizable() {
        assert_eq!(smith_invariants(&im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).unwrap(), vec![2, 6, 12]);
        assert_eq!(smith_invariants(&im(&[&[2], &[4]])).unwrap(), vec![2]);
        assert_eq!(smith_invariants(&im(&[&[0], &[0]])).unwrap(), Vec::<i128>::new());
    }

    #[test]
    fn kernel_is_exact() {
        let a = im(&[&[1, -1, 0], &[0, 2, 3]]);
        let ker = integer_kernel(&a, 3).unwrap();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            for row in &a {
                assert_eq!(row.iter().zip(v).map(|(x, y)| x * y).sum::<i128>(), 0);
            }
        }
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_basis(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let b = hermite_basis(&[vec![1, 2, 1], vec![-1, -1, 0]]).unwrap();
        assert_eq!(a, b);
    }
}
