//! Integer matrices, Smith and Hermite normal forms, and lattice indices.

use super::rational::{from_big, Rational};
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl LatticeMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LatticeMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Rows of machine integers. All rows must share one length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let big: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_big_rows(&big, rows.first().map_or(0, Vec::len))
    }

    /// `cols` is only consulted when `rows` is empty.
    pub fn from_big_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let cols = rows.first().map_or(cols, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged integer matrix");
            data.extend(r.iter().cloned());
        }
        LatticeMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> Self {
        Self::from_big_rows(cols, rows).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &LatticeMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply_rational(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + from_big(a) * b)
            })
            .collect()
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).iter().map(from_big).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        super::linalg::rank(&self.to_rational_rows())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + k * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + k * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl Serialize for LatticeMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // Entries stay JSON numbers when they fit in i64.
        let rows: Vec<Vec<serde_json::Value>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(big_to_json).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(d)?;
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(serde::de::Error::custom("ragged matrix"));
            }
        }
        Ok(LatticeMatrix::from_rows(&rows))
    }
}

pub fn big_to_json(x: &BigInt) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

/// Serializes integer vectors with the same number-or-string rule as [`big_to_json`].
pub fn serialize_int_rows<S: serde::Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<serde_json::Value>> = rows.iter().map(|r| r.iter().map(big_to_json).collect()).collect();
    v.serialize(s)
}

/// `u * m * v == d`, with `u`, `v` unimodular and `d` diagonal, `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: LatticeMatrix,
    pub d: LatticeMatrix,
    pub v: LatticeMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith_normal_form(m: &LatticeMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = LatticeMatrix::identity(r);
    let mut v = LatticeMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = d.get(i, j);
                if !x.is_zero()
                    && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..r {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t).div_floor(d.get(t, t)));
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d.get(i, t).is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..c {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j).div_floor(d.get(t, t)));
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d.get(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let p = d.get(t, t).clone();
            let bad = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| !(d.get(i, j) % &p).is_zero());
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithForm { u, d, v }
}

/// Row-style Hermite normal form of the row lattice, zero rows dropped.
/// Pivots positive, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &LatticeMatrix) -> LatticeMatrix {
    let mut a = m.clone();
    let (r, c) = (a.rows, a.cols);
    let mut row = 0;
    for col in 0..c {
        if row >= r {
            break;
        }
        loop {
            let piv = (row..r)
                .filter(|&i| !a.get(i, col).is_zero())
                .min_by(|&x, &y| a.get(x, col).abs().cmp(&a.get(y, col).abs()));
            let Some(p) = piv else { break };
            a.swap_rows(row, p);
            let mut done = true;
            for i in row + 1..r {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let q = -(a.get(i, col).div_floor(a.get(row, col)));
                a.add_row(i, row, &q);
                if !a.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(row, col).is_zero() {
            continue;
        }
        if a.get(row, col).is_negative() {
            a.negate_row(row);
        }
        let p = a.get(row, col).clone();
        for i in 0..row {
            let q = -(a.get(i, col).div_floor(&p));
            a.add_row(i, row, &q);
        }
        row += 1;
    }
    let rows: Vec<Vec<BigInt>> = (0..row).map(|i| a.row(i).to_vec()).collect();
    LatticeMatrix::from_big_rows(&rows, c)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(n) => Some(n),
            LatticeIndex::Infinite => None,
        }
    }
}

/// Index in `Z^n` of the lattice spanned by the rows.
pub fn lattice_index(generators: &LatticeMatrix) -> LatticeIndex {
    let snf = smith_normal_form(generators);
    let factors = snf.invariant_factors();
    if factors.len() < generators.cols {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(factors.iter().product())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("zero vector has no primitive part")]
pub struct ZeroVectorError;

pub fn primitive_part(v: &[BigInt]) -> Result<(Vec<BigInt>, BigInt), ZeroVectorError> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(ZeroVectorError);
    }
    Ok((v.iter().map(|x| x / &g).collect(), g))
}

pub fn primitive_part_i64(v: &[i64]) -> Result<(Vec<i64>, i64), ZeroVectorError> {
    use num_traits::ToPrimitive;
    let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    let (p, g) = primitive_part(&big)?;
    Ok((p.iter().map(|x| x.to_i64().unwrap()).collect(), g.to_i64().unwrap()))
}

/// Basis (as HNF rows) of `{x in Z^cols : m x = 0}`.
pub fn integer_kernel(m: &LatticeMatrix) -> LatticeMatrix {
    let n = m.cols;
    if m.rows == 0 {
        return LatticeMatrix::identity(n);
    }
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let cols: Vec<Vec<BigInt>> = (r..n).map(|j| snf.v.column(j)).collect();
    hermite_normal_form(&LatticeMatrix::from_big_rows(&cols, n))
}

/// Basis of `{y in Z^rows : y^T m = 0}`.
pub fn integer_left_kernel(m: &LatticeMatrix) -> LatticeMatrix {
    integer_kernel(&m.transpose())
}

/// HNF basis of `span_Q(rows) ∩ Z^n`.
pub fn saturation(m: &LatticeMatrix) -> LatticeMatrix {
    let k = integer_kernel(m);
    integer_kernel(&k)
}

/// Basis of `{x in Z^n : <x, r> = 0 for all rows r}`, the integral annihilator.
pub fn annihilator(m: &LatticeMatrix) -> LatticeMatrix {
    integer_kernel(m)
}

/// Torsion subgroup order of `Z^cols / rowspan(m)`: product of the invariant factors.
pub fn torsion_order(m: &LatticeMatrix) -> BigInt {
    smith_normal_form(m).invariant_factors().iter().product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &LatticeMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "{diag:?}");
            }
        }
        s
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&LatticeMatrix::identity(2));
        assert_eq!(s.d, LatticeMatrix::identity(2));
        let s = check_snf(&LatticeMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let s = check_snf(&LatticeMatrix::zeros(2, 2));
        assert!(s.d.is_zero());
        check_snf(&LatticeMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
    }

    #[test]
    fn index_examples() {
        assert_eq!(lattice_index(&LatticeMatrix::identity(2)), LatticeIndex::Finite(1.into()));
        let m = LatticeMatrix::from_rows(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(lattice_index(&m), LatticeIndex::Finite(2.into()));
        let m = LatticeMatrix::from_rows(&[vec![1, 0]]);
        assert_eq!(lattice_index(&m), LatticeIndex::Infinite);
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive_part_i64(&[2, 4]).unwrap(), (vec![1, 2], 2));
        assert_eq!(primitive_part_i64(&[-1, -1]).unwrap(), (vec![-1, -1], 1));
        assert_eq!(primitive_part_i64(&[3, 6, 9]).unwrap(), (vec![1, 2, 3], 3));
        assert!(primitive_part_i64(&[0, 0]).is_err());
    }

    #[test]
    fn kernel_and_saturation() {
        let m = LatticeMatrix::from_rows(&[vec![1, 1, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rows(), 2);
        for r in k.row_vecs() {
            assert!(m.apply(&r).iter().all(Zero::is_zero));
        }
        let sat = saturation(&LatticeMatrix::from_rows(&[vec![2, 4]]));
        assert_eq!(sat, LatticeMatrix::from_rows(&[vec![1, 2]]));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hermite_normal_form(&LatticeMatrix::from_rows(&[vec![1, 1], vec![1, -1]]));
        let b = hermite_normal_form(&LatticeMatrix::from_rows(&[vec![2, 0], vec![1, -1]]));
        assert_eq!(a, b);
    }

    #[test]
    fn determinant_small() {
        let m = LatticeMatrix::from_rows(&[vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 5]]);
        assert_eq!(m.determinant(), BigInt::from(-9));
    }
}
