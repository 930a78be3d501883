//! Affine H-systems `a·x >= b`, `e·x = f` with LP-based interior analysis.

use crate::exactalg::linalg::rank;
use crate::exactalg::lp::{LinearProgram, LpOutcome, Relation};
use crate::exactalg::rational::{dot, Rational};
use num_traits::{One, Signed, Zero};

type QVec = Vec<Rational>;

#[derive(Clone, Debug)]
pub struct HPolyhedron {
    pub dim: usize,
    pub ineqs: Vec<(QVec, Rational)>,
    pub eqs: Vec<(QVec, Rational)>,
}

#[derive(Clone, Debug)]
pub struct InteriorInfo {
    pub point: QVec,
    /// Indices of inequalities that hold with equality on the whole set.
    pub implicit: Vec<usize>,
    pub dim: usize,
}

impl HPolyhedron {
    pub fn new(dim: usize, ineqs: Vec<(QVec, Rational)>, eqs: Vec<(QVec, Rational)>) -> Self {
        HPolyhedron { dim, ineqs, eqs }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.eqs.iter().all(|(e, f)| dot(e, x) == *f) && self.ineqs.iter().all(|(a, b)| dot(a, x) >= *b)
    }

    fn base_lp(&self, extra: usize) -> LinearProgram {
        let n = self.dim + extra;
        let mut lp = LinearProgram::new(n);
        for (e, f) in &self.eqs {
            let mut row = e.clone();
            row.resize(n, Rational::zero());
            lp.constrain(row, Relation::Eq, f.clone());
        }
        lp
    }

    pub fn feasible_point(&self) -> Option<QVec> {
        let mut lp = self.base_lp(0);
        for (a, b) in &self.ineqs {
            lp.constrain(a.clone(), Relation::Ge, b.clone());
        }
        lp.feasible_point()
    }

    pub fn is_empty(&self) -> bool {
        self.feasible_point().is_none()
    }

    /// Sum-of-slacks maximization, then one LP per inequality left at zero
    /// slack; the average of all witnesses is a relative-interior point.
    pub fn interior(&self) -> Option<InteriorInfo> {
        let n = self.dim;
        let m = self.ineqs.len();
        let mut lp = self.base_lp(m);
        for (i, (a, b)) in self.ineqs.iter().enumerate() {
            let mut row = a.clone();
            row.resize(n + m, Rational::zero());
            row[n + i] = -Rational::one();
            lp.constrain(row, Relation::Ge, b.clone());
            let mut cap = vec![Rational::zero(); n + m];
            cap[n + i] = Rational::one();
            lp.constrain(cap.clone(), Relation::Le, Rational::one());
            lp.constrain(cap, Relation::Ge, Rational::zero());
        }
        let mut obj = vec![Rational::zero(); n + m];
        for o in obj.iter_mut().skip(n) {
            *o = Rational::one();
        }
        lp.maximize(obj);
        let x0 = match lp.solve() {
            LpOutcome::Optimal { x, .. } => x,
            _ => return None,
        };
        let mut witnesses: Vec<QVec> = vec![x0[..n].to_vec()];
        let mut implicit = Vec::new();
        for (i, (a, b)) in self.ineqs.iter().enumerate() {
            if x0[n + i].is_positive() {
                continue;
            }
            let mut lp = self.base_lp(0);
            for (c, d) in &self.ineqs {
                lp.constrain(c.clone(), Relation::Ge, d.clone());
            }
            lp.constrain(a.clone(), Relation::Le, b + Rational::one());
            lp.maximize(a.clone());
            match lp.solve() {
                LpOutcome::Optimal { x, value } if value > *b => witnesses.push(x),
                _ => implicit.push(i),
            }
        }
        let k = Rational::from_integer(witnesses.len().into());
        let mut point = vec![Rational::zero(); n];
        for w in &witnesses {
            for (p, x) in point.iter_mut().zip(w) {
                *p += x;
            }
        }
        for p in point.iter_mut() {
            *p /= &k;
        }
        let mut rows: Vec<QVec> = self.eqs.iter().map(|(e, _)| e.clone()).collect();
        rows.extend(implicit.iter().map(|&i| self.ineqs[i].0.clone()));
        let r = if rows.is_empty() { 0 } else { rank(&rows) };
        Some(InteriorInfo { point, implicit, dim: n - r })
    }

    pub fn relint_point(&self) -> Option<QVec> {
        self.interior().map(|i| i.point)
    }

    /// Affine dimension, `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        self.interior().map(|i| i.dim)
    }

    /// Maximizes `c·x`; `None` if empty, `Some(None)` if unbounded.
    pub fn maximize(&self, c: &[Rational]) -> Option<Option<(QVec, Rational)>> {
        let mut lp = self.base_lp(0);
        for (a, b) in &self.ineqs {
            lp.constrain(a.clone(), Relation::Ge, b.clone());
        }
        lp.maximize(c.to_vec());
        match lp.solve() {
            LpOutcome::Optimal { x, value } => Some(Some((x, value))),
            LpOutcome::Unbounded => Some(None),
            LpOutcome::Infeasible => None,
        }
    }
}
