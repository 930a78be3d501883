//! Exact two-phase simplex over the rationals, Bland's rule throughout.

use super::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs = super::rational::dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Variables marked here are constrained `>= 0`; the rest are free.
    pub nonneg: Vec<bool>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<Rational>,
    pub maximize: bool,
}

impl LinearProgram {
    /// All variables free, zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            nonneg: vec![false; num_vars],
            constraints: Vec::new(),
            objective: vec![Rational::zero(); num_vars],
            maximize: false,
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) {
        self.objective = objective;
        self.maximize = true;
    }

    pub fn minimize(&mut self, objective: Vec<Rational>) {
        self.objective = objective;
        self.maximize = false;
    }

    pub fn solve(&self) -> LpOutcome {
        Simplex::build(self).run(self)
    }

    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        let mut p = self.clone();
        p.objective = vec![Rational::zero(); self.num_vars];
        match p.solve() {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

struct Simplex {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Column layout: structural columns, then slacks, then artificials.
    structural: Vec<(usize, bool)>,
    first_artificial: usize,
    width: usize,
}

impl Simplex {
    fn build(lp: &LinearProgram) -> Self {
        let mut structural = Vec::new();
        for j in 0..lp.num_vars {
            structural.push((j, false));
            if !lp.nonneg[j] {
                structural.push((j, true));
            }
        }
        let n_struct = structural.len();
        let n_slack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let m = lp.constraints.len();
        let first_artificial = n_struct + n_slack;
        let width = first_artificial + m;
        let mut rows = Vec::with_capacity(m);
        let mut slack = n_struct;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); width + 1];
            for (k, &(j, neg)) in structural.iter().enumerate() {
                row[k] = if neg { -c.coeffs[j].clone() } else { c.coeffs[j].clone() };
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = Rational::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[width] = c.rhs.clone();
            if row[width].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[first_artificial + i] = Rational::one();
            rows.push(row);
        }
        let basis = (0..m).map(|i| first_artificial + i).collect();
        Simplex { rows, basis, structural, first_artificial, width }
    }

    fn pivot(&mut self, obj: &mut [Rational], r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= p * &f;
                    }
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (x, p) in obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= p * &f;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes the objective row in place; `false` means unbounded.
    fn optimize(&mut self, obj: &mut Vec<Rational>, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| obj[j].is_negative()) else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.width] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(obj, r, c),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let w = self.width;
        // Phase one: minimize the sum of artificials.
        let mut obj = vec![Rational::zero(); w + 1];
        for j in self.first_artificial..w {
            obj[j] = Rational::one();
        }
        for row in &self.rows {
            for (o, x) in obj.iter_mut().zip(row) {
                *o -= x;
            }
        }
        self.optimize(&mut obj, w);
        if !obj[w].is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(&mut obj, i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        // Phase two.
        let mut cost = vec![Rational::zero(); w + 1];
        for (k, &(j, neg)) in self.structural.iter().enumerate() {
            let c = if lp.maximize { -lp.objective[j].clone() } else { lp.objective[j].clone() };
            cost[k] = if neg { -c } else { c };
        }
        let mut obj = cost.clone();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if !cost[b].is_zero() {
                for (o, x) in obj.iter_mut().zip(row) {
                    *o -= x * &cost[b];
                }
            }
        }
        if !self.optimize(&mut obj, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![Rational::zero(); w];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            values[b] = row[w].clone();
        }
        let mut x = vec![Rational::zero(); lp.num_vars];
        for (k, &(j, neg)) in self.structural.iter().enumerate() {
            if neg {
                x[j] -= &values[k];
            } else {
                x[j] += &values[k];
            }
        }
        let value = super::rational::dot(&lp.objective, &x);
        LpOutcome::Optimal { x, value }
    }
}
