//! Polyhedral cones with both representations kept in canonical form.
//!
//! The double description method converts between `a·x >= 0` systems and
//! generators; Fourier–Motzkin elimination with exact-LP redundancy removal
//! projects cones. The two routes are independent and tested against each
//! other.

use crate::exactalg::lattice::{hermite_normal_form, saturation, serialize_int_rows, LatticeMatrix};
use crate::exactalg::linalg::{project_onto, rank};
use crate::exactalg::lp::{LinearProgram, LpOutcome, Relation};
use crate::exactalg::rational::{dot, from_big, is_zero_vec, primitive_integer_vector, to_rationals, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

type QVec = Vec<Rational>;

/// Generators `(rays, lineality basis)` of `{x : ineqs·x >= 0, eqs·x = 0}`.
pub fn double_description(n: usize, ineqs: &[QVec], eqs: &[QVec]) -> (Vec<QVec>, Vec<QVec>) {
    let mut lin: Vec<QVec> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut rays: Vec<QVec> = Vec::new();
    for a in eqs {
        if let Some(k) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let l0 = lin.remove(k);
            let al0 = dot(a, &l0);
            for l in lin.iter_mut() {
                let f = dot(a, l) / &al0;
                if !f.is_zero() {
                    for (x, y) in l.iter_mut().zip(&l0) {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    let mut processed: Vec<&QVec> = Vec::new();
    for a in ineqs {
        if let Some(k) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.remove(k);
            let mut al0 = dot(a, &l0);
            if al0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            for v in lin.iter_mut().chain(rays.iter_mut()) {
                let f = dot(a, v) / &al0;
                if !f.is_zero() {
                    for (x, y) in v.iter_mut().zip(&l0) {
                        *x -= &f * y;
                    }
                }
            }
            rays.push(l0);
            rays = rays.iter().map(|r| normalize(r)).collect();
            processed.push(a);
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|r| dot(a, r)).collect();
        let lin_dim = lin.len();
        let mut next: Vec<QVec> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (i, p) in rays.iter().enumerate() {
            if !vals[i].is_positive() {
                continue;
            }
            for (j, q) in rays.iter().enumerate() {
                if !vals[j].is_negative() {
                    continue;
                }
                if adjacent(n, p, q, &processed, eqs, lin_dim) {
                    let comb: QVec = q
                        .iter()
                        .zip(p)
                        .map(|(qx, px)| &vals[i] * qx - &vals[j] * px)
                        .collect();
                    next.push(normalize(&comb));
                }
            }
        }
        dedup(&mut next);
        rays = next;
        processed.push(a);
    }
    dedup(&mut rays);
    (rays, lin)
}

/// The smallest face containing both rays is cut out by the constraints tight
/// at both; they are adjacent iff that face is two-dimensional modulo lineality.
fn adjacent(n: usize, p: &QVec, q: &QVec, processed: &[&QVec], eqs: &[QVec], lin_dim: usize) -> bool {
    let mut rows: Vec<QVec> = eqs.to_vec();
    for a in processed {
        if dot(a, p).is_zero() && dot(a, q).is_zero() {
            rows.push((*a).clone());
        }
    }
    let r = if rows.is_empty() { 0 } else { rank(&rows) };
    n - r == lin_dim + 2
}

fn normalize(v: &[Rational]) -> QVec {
    to_rationals(&primitive_integer_vector(v))
}

fn dedup(v: &mut Vec<QVec>) {
    v.sort();
    v.dedup();
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cone {
    ambient: usize,
    #[serde(serialize_with = "serialize_int_rows")]
    rays: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "serialize_int_rows")]
    lineality: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "serialize_int_rows")]
    facets: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "serialize_int_rows")]
    equations: Vec<Vec<BigInt>>,
}

impl Cone {
    pub fn from_h(n: usize, ineqs: &[QVec], eqs: &[QVec]) -> Cone {
        let (rays, lin) = double_description(n, ineqs, eqs);
        let (facets, eq) = double_description(n, &rays, &lin);
        Cone::canonical(n, rays, lin, facets, eq)
    }

    pub fn from_h_int(n: usize, ineqs: &[Vec<BigInt>], eqs: &[Vec<BigInt>]) -> Cone {
        let i: Vec<QVec> = ineqs.iter().map(|v| to_rationals(v)).collect();
        let e: Vec<QVec> = eqs.iter().map(|v| to_rationals(v)).collect();
        Cone::from_h(n, &i, &e)
    }

    pub fn from_v(n: usize, rays: &[QVec], lineality: &[QVec]) -> Cone {
        let (facets, eq) = double_description(n, rays, lineality);
        let (r, lin) = double_description(n, &facets, &eq);
        Cone::canonical(n, r, lin, facets, eq)
    }

    pub fn from_v_int(n: usize, rays: &[Vec<BigInt>], lineality: &[Vec<BigInt>]) -> Cone {
        let r: Vec<QVec> = rays.iter().map(|v| to_rationals(v)).collect();
        let l: Vec<QVec> = lineality.iter().map(|v| to_rationals(v)).collect();
        Cone::from_v(n, &r, &l)
    }

    pub fn zero(n: usize) -> Cone {
        Cone::from_v(n, &[], &[])
    }

    pub fn full(n: usize) -> Cone {
        Cone::from_h(n, &[], &[])
    }

    fn canonical(n: usize, rays: Vec<QVec>, lin: Vec<QVec>, facets: Vec<QVec>, eqs: Vec<QVec>) -> Cone {
        let lin_lattice = lattice_basis(n, &lin);
        let lin_q: Vec<QVec> = lin_lattice.iter().map(|v| to_rationals(v)).collect();
        let eq_lattice = lattice_basis(n, &eqs);
        let mut span: Vec<QVec> = lin_q.clone();
        span.extend(rays.iter().cloned());
        let mut canon_rays: Vec<Vec<BigInt>> = rays
            .iter()
            .map(|r| {
                let p = project_onto(&lin_q, r);
                let v: QVec = r.iter().zip(&p).map(|(a, b)| a - b).collect();
                primitive_integer_vector(&v)
            })
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        canon_rays.sort();
        canon_rays.dedup();
        let mut canon_facets: Vec<Vec<BigInt>> = facets
            .iter()
            .map(|f| primitive_integer_vector(&project_onto(&span, f)))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        canon_facets.sort();
        canon_facets.dedup();
        Cone { ambient: n, rays: canon_rays, lineality: lin_lattice, facets: canon_facets, equations: eq_lattice }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<BigInt>] {
        &self.lineality
    }

    /// Irredundant `a·x >= 0` constraints, normals taken inside the span.
    pub fn facets(&self) -> &[Vec<BigInt>] {
        &self.facets
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|e| dot(&to_rationals(e), x).is_zero())
            && self.facets.iter().all(|f| !dot(&to_rationals(f), x).is_negative())
    }

    pub fn contains_in_relint(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|e| dot(&to_rationals(e), x).is_zero())
            && self.facets.iter().all(|f| dot(&to_rationals(f), x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(&to_rationals(r)))
            && other.lineality.iter().all(|l| {
                let q = to_rationals(l);
                let neg: QVec = q.iter().map(|x| -x).collect();
                self.contains(&q) && self.contains(&neg)
            })
    }

    /// `{y : <y, x> >= 0 for all x in self}`.
    pub fn dual(&self) -> Cone {
        Cone {
            ambient: self.ambient,
            rays: self.facets.clone(),
            lineality: self.equations.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
        .recanonical()
    }

    fn recanonical(self) -> Cone {
        let n = self.ambient;
        let q = |v: &[Vec<BigInt>]| -> Vec<QVec> { v.iter().map(|x| to_rationals(x)).collect() };
        Cone::canonical(n, q(&self.rays), q(&self.lineality), q(&self.facets), q(&self.equations))
    }

    pub fn linear_span(&self) -> Vec<QVec> {
        let mut s: Vec<QVec> = self.lineality.iter().map(|v| to_rationals(v)).collect();
        s.extend(self.rays.iter().map(|v| to_rationals(v)));
        crate::exactalg::linalg::independent_subset(&s)
    }

    /// Relative-interior point from an exact LP on the H-representation.
    pub fn relint_point(&self) -> QVec {
        let ineqs: Vec<(QVec, Rational)> =
            self.facets.iter().map(|f| (to_rationals(f), Rational::zero())).collect();
        let eqs: Vec<(QVec, Rational)> =
            self.equations.iter().map(|e| (to_rationals(e), Rational::zero())).collect();
        let hp = super::hpoly::HPolyhedron::new(self.ambient, ineqs, eqs);
        hp.relint_point().expect("a cone is never empty")
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut ineqs: Vec<QVec> = self.facets.iter().map(|v| to_rationals(v)).collect();
        ineqs.extend(other.facets.iter().map(|v| to_rationals(v)));
        let mut eqs: Vec<QVec> = self.equations.iter().map(|v| to_rationals(v)).collect();
        eqs.extend(other.equations.iter().map(|v| to_rationals(v)));
        Cone::from_h(self.ambient, &ineqs, &eqs)
    }

    /// Image under `x -> m x` (m has `ambient` columns), from generators.
    pub fn image(&self, m: &[QVec], target_dim: usize) -> Cone {
        let map = |v: &Vec<BigInt>| -> QVec {
            let q = to_rationals(v);
            m.iter().map(|row| dot(row, &q)).collect()
        };
        let rays: Vec<QVec> = self.rays.iter().map(map).collect();
        let lin: Vec<QVec> = self.lineality.iter().map(map).collect();
        Cone::from_v(target_dim, &rays, &lin)
    }

    pub fn ray_sum(&self) -> QVec {
        let mut s = vec![Rational::zero(); self.ambient];
        for r in &self.rays {
            for (a, b) in s.iter_mut().zip(r) {
                *a += from_big(b);
            }
        }
        s
    }
}

/// HNF basis of the saturated lattice in `span(vs)`.
fn lattice_basis(n: usize, vs: &[QVec]) -> Vec<Vec<BigInt>> {
    let ints: Vec<Vec<BigInt>> =
        vs.iter().filter(|v| !is_zero_vec(v)).map(|v| primitive_integer_vector(v)).collect();
    if ints.is_empty() {
        return Vec::new();
    }
    let sat = saturation(&LatticeMatrix::from_big_rows(&ints, n));
    hermite_normal_form(&sat).row_vecs()
}

/// Result of eliminating variables from a homogeneous system.
#[derive(Clone, Debug)]
pub struct HSystem {
    pub dim: usize,
    pub ineqs: Vec<QVec>,
    pub eqs: Vec<QVec>,
}

impl HSystem {
    pub fn holds(&self, x: &[Rational]) -> bool {
        self.eqs.iter().all(|e| dot(e, x).is_zero()) && self.ineqs.iter().all(|a| !dot(a, x).is_negative())
    }

    pub fn to_cone(&self) -> Cone {
        Cone::from_h(self.dim, &self.ineqs, &self.eqs)
    }
}

/// Projects `{x : ineqs·x >= 0, eqs·x = 0}` onto the coordinates in `keep`
/// (in the given order) by Fourier–Motzkin elimination.
pub fn fourier_motzkin(n: usize, ineqs: &[QVec], eqs: &[QVec], keep: &[usize]) -> HSystem {
    let mut ineqs: Vec<QVec> = ineqs.to_vec();
    let mut eqs: Vec<QVec> = eqs.iter().filter(|e| !is_zero_vec(e)).cloned().collect();
    let eliminate: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    for &v in &eliminate {
        if let Some(k) = eqs.iter().position(|e| !e[v].is_zero()) {
            let e = eqs.remove(k);
            let sub = |row: &mut QVec| {
                if !row[v].is_zero() {
                    let f = &row[v] / &e[v];
                    for (x, y) in row.iter_mut().zip(&e) {
                        *x -= &f * y;
                    }
                }
            };
            ineqs.iter_mut().for_each(sub);
            eqs.iter_mut().for_each(sub);
            continue;
        }
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for a in ineqs.drain(..) {
            if a[v].is_positive() {
                pos.push(a);
            } else if a[v].is_negative() {
                neg.push(a);
            } else {
                zero.push(a);
            }
        }
        for p in &pos {
            for q in &neg {
                let c: QVec = p.iter().zip(q).map(|(x, y)| -&q[v] * x + &p[v] * y).collect();
                zero.push(normalize(&c));
            }
        }
        zero.retain(|a| !is_zero_vec(a));
        dedup(&mut zero);
        ineqs = remove_redundant(n, zero, &eqs);
        eqs.retain(|e| !is_zero_vec(e));
    }
    let pick = |row: &QVec| -> QVec { keep.iter().map(|&i| row[i].clone()).collect() };
    let mut out_i: Vec<QVec> = ineqs.iter().map(pick).filter(|a| !is_zero_vec(a)).collect();
    let out_e: Vec<QVec> = eqs.iter().map(pick).filter(|a| !is_zero_vec(a)).collect();
    dedup(&mut out_i);
    HSystem { dim: keep.len(), ineqs: out_i, eqs: out_e }
}

/// Drops inequalities implied by the others (exact LP, one at a time).
pub fn remove_redundant(n: usize, mut ineqs: Vec<QVec>, eqs: &[QVec]) -> Vec<QVec> {
    let mut i = 0;
    while i < ineqs.len() {
        let mut lp = LinearProgram::new(n);
        for (j, a) in ineqs.iter().enumerate() {
            if j != i {
                lp.constrain(a.clone(), Relation::Ge, Rational::zero());
            }
        }
        for e in eqs {
            lp.constrain(e.clone(), Relation::Eq, Rational::zero());
        }
        lp.constrain(ineqs[i].clone(), Relation::Ge, -Rational::one());
        lp.minimize(ineqs[i].clone());
        let redundant = matches!(lp.solve(), LpOutcome::Optimal { value, .. } if !value.is_negative());
        if redundant {
            ineqs.remove(i);
        } else {
            i += 1;
        }
    }
    ineqs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rationals;

    fn iv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn quadrant() {
        let c = Cone::from_h(2, &[rationals(&[1, 0]), rationals(&[0, 1])], &[]);
        assert_eq!(c.rays(), &[iv(&[0, 1]), iv(&[1, 0])]);
        assert_eq!(c.dim(), 2);
        let p = c.relint_point();
        assert!(c.contains_in_relint(&p));
    }

    #[test]
    fn ray_and_zero() {
        let r = Cone::from_v(2, &[rationals(&[1, 1])], &[]);
        assert_eq!(r.dim(), 1);
        let z = Cone::zero(3);
        assert_eq!(z.dim(), 0);
        assert!(z.contains(&rationals(&[0, 0, 0])));
        assert_eq!(Cone::full(2).dim(), 2);
        assert_eq!(z.dual(), Cone::full(3));
    }

    #[test]
    fn halfplane_has_lineality() {
        let c = Cone::from_h(2, &[rationals(&[1, 1])], &[]);
        assert_eq!(c.lineality().len(), 1);
        assert_eq!(c.rays().len(), 1);
        assert_eq!(c, Cone::from_v(2, &[rationals(&[3, 0])], &[rationals(&[-2, 2])]));
    }

    #[test]
    fn square_pyramid_round_trip() {
        let rays = vec![
            rationals(&[1, 1, 1]),
            rationals(&[1, -1, 1]),
            rationals(&[-1, 1, 1]),
            rationals(&[-1, -1, 1]),
            rationals(&[0, 0, 1]),
        ];
        let c = Cone::from_v(3, &rays, &[]);
        assert_eq!(c.rays().len(), 4);
        assert_eq!(c.facets().len(), 4);
        let h = Cone::from_h_int(3, c.facets(), c.equations());
        assert_eq!(h, c);
    }

    #[test]
    fn fm_matches_generators() {
        // Cone over a square in 3-d, projected to the first two coordinates.
        let ineqs = vec![
            rationals(&[1, 0, 1]),
            rationals(&[-1, 0, 1]),
            rationals(&[0, 1, 1]),
            rationals(&[0, -1, 1]),
            rationals(&[0, 0, 1]),
        ];
        let sys = fourier_motzkin(3, &ineqs, &[], &[0, 1]);
        assert_eq!(sys.to_cone(), Cone::full(2));
        let sys = fourier_motzkin(3, &ineqs, &[], &[0, 2]);
        let direct = Cone::from_h(3, &ineqs, &[]).image(&[rationals(&[1, 0, 0]), rationals(&[0, 0, 1])], 2);
        assert_eq!(sys.to_cone(), direct);
    }
}
