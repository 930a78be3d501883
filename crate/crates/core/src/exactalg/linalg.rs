//! Dense rational linear algebra on row-major `Vec<Vec<Rational>>`.

use super::rational::{is_zero_vec, Rational};
use num_traits::{One, Zero};

pub type QMatrix = Vec<Vec<Rational>>;

/// Reduced row echelon form and the pivot columns.
pub fn rref(m: &[Vec<Rational>], cols: usize) -> (QMatrix, Vec<usize>) {
    let mut a: QMatrix = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    rref(m, cols).1.len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &[Vec<Rational>], cols: usize) -> QMatrix {
    let (r, pivots) = rref(m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a x = b`, if one exists.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let aug: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, cols + 1);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

pub fn inverse(m: &[Vec<Rational>]) -> Option<QMatrix> {
    let n = m.len();
    let aug: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| super::rational::dot(row, v)).collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>], b_cols: usize) -> QMatrix {
    a.iter()
        .map(|row| {
            (0..b_cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<Rational>], cols: usize) -> QMatrix {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Independent subset of `vs` spanning the same space (first-come order).
pub fn independent_subset(vs: &[Vec<Rational>]) -> QMatrix {
    let mut out: QMatrix = Vec::new();
    for v in vs {
        if is_zero_vec(v) {
            continue;
        }
        let mut trial = out.clone();
        trial.push(v.clone());
        if rank(&trial) == trial.len() {
            out = trial;
        }
    }
    out
}

pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    if is_zero_vec(v) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let mut m = basis.to_vec();
    let r = rank(&m);
    m.push(v.to_vec());
    rank(&m) == r
}

/// Orthogonal complement under the standard dot product.
pub fn orthogonal_complement(basis: &[Vec<Rational>], n: usize) -> QMatrix {
    if basis.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
    }
    nullspace(basis, n)
}

/// Orthogonal projection onto `span(basis)`.
pub fn project_onto(basis: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    let b = independent_subset(basis);
    if b.is_empty() {
        return vec![Rational::zero(); v.len()];
    }
    let k = b.len();
    let gram: QMatrix = b
        .iter()
        .map(|x| b.iter().map(|y| super::rational::dot(x, y)).collect())
        .collect();
    let rhs: Vec<Rational> = b.iter().map(|x| super::rational::dot(x, v)).collect();
    let coeffs = solve(&gram, &rhs, k).expect("Gram matrix of an independent set is invertible");
    let mut out = vec![Rational::zero(); v.len()];
    for (c, x) in coeffs.iter().zip(&b) {
        for (o, xi) in out.iter_mut().zip(x) {
            *o += c * xi;
        }
    }
    out
}
