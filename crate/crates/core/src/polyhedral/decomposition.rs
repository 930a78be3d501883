//! Polyhedral decompositions of `t^∨` into rational polyhedra closed under
//! taking faces, and the normal fan of a member.

use super::cone::Cone;
use super::polytope::{Face, Polytope};
use crate::exactalg::lattice::{annihilator, LatticeMatrix};
use crate::exactalg::rational::{primitive_integer_vector, to_rationals, Rational};
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

type QVec = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompError {
    #[error("duplicate polytope id {0:?}")]
    DuplicateId(String),
    #[error("unknown polytope id {0:?}")]
    UnknownId(String),
    #[error("polytope {id:?} lives in dimension {got}, decomposition has dimension {expected}")]
    Dimension { id: String, expected: usize, got: usize },
    #[error("invalid decomposition: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    dim: usize,
    ids: Vec<String>,
    polytopes: Vec<Polytope>,
    /// `faces[p]`: members that are faces of `p`, including `p`.
    faces: Vec<BTreeSet<usize>>,
}

impl Decomposition {
    /// Validates the members and computes the face poset. A supplied face
    /// relation `(child, parent)` is checked against the geometry.
    pub fn new(
        dim: usize,
        members: Vec<(String, Polytope)>,
        supplied_faces: Option<&[(String, String)]>,
    ) -> Result<Decomposition, DecompError> {
        let mut seen = BTreeSet::new();
        for (id, p) in &members {
            if !seen.insert(id.clone()) {
                return Err(DecompError::DuplicateId(id.clone()));
            }
            if p.dim() != dim {
                return Err(DecompError::Dimension { id: id.clone(), expected: dim, got: p.dim() });
            }
        }
        let (ids, polytopes): (Vec<String>, Vec<Polytope>) = members.into_iter().unzip();
        let mut violations = Vec::new();
        for (i, p) in polytopes.iter().enumerate() {
            if p.is_empty() {
                violations.push(format!("{} is empty", ids[i]));
            }
        }
        if !violations.is_empty() {
            return Err(DecompError::Invalid(violations));
        }
        let n = polytopes.len();
        let find = |q: &Polytope| -> Option<usize> {
            (0..n).find(|&j| {
                let p = &polytopes[j];
                p.affine_dim() == q.affine_dim() && p.vertices().len() == q.vertices().len() && p.same_set(q)
            })
        };
        for i in 0..n {
            for j in i + 1..n {
                if polytopes[i].same_set(&polytopes[j]) {
                    violations.push(format!("{} and {} are the same polytope", ids[i], ids[j]));
                }
            }
        }
        let mut faces: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (i, p) in polytopes.iter().enumerate() {
            for f in p.faces() {
                let fp = p.face_polytope(&f);
                match find(&fp) {
                    Some(j) => {
                        faces[i].insert(j);
                    }
                    None => violations.push(format!(
                        "face of {} with {} vertices and dimension {} is not a member",
                        ids[i],
                        fp.vertices().len(),
                        f.dim
                    )),
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let x = polytopes[i].intersection(&polytopes[j]);
                if x.is_empty() {
                    continue;
                }
                match find(&x) {
                    Some(k) if faces[i].contains(&k) && faces[j].contains(&k) => {}
                    Some(k) => violations.push(format!(
                        "{} ∩ {} = {} is not a face of both",
                        ids[i], ids[j], ids[k]
                    )),
                    None => violations.push(format!("{} ∩ {} is not a member", ids[i], ids[j])),
                }
            }
        }
        if let Some(rel) = supplied_faces {
            let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
            for (c, p) in rel {
                let ci = *index.get(c.as_str()).ok_or_else(|| DecompError::UnknownId(c.clone()))?;
                let pi = *index.get(p.as_str()).ok_or_else(|| DecompError::UnknownId(p.clone()))?;
                if !faces[pi].contains(&ci) {
                    violations.push(format!("{c} is declared a face of {p} but is not"));
                }
            }
        }
        if !violations.is_empty() {
            return Err(DecompError::Invalid(violations));
        }
        Ok(Decomposition { dim, ids, polytopes, faces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.polytopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polytopes.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index(&self, id: &str) -> Result<usize, DecompError> {
        self.ids.iter().position(|s| s == id).ok_or_else(|| DecompError::UnknownId(id.to_string()))
    }

    pub fn polytope(&self, i: usize) -> &Polytope {
        &self.polytopes[i]
    }

    pub fn polytopes(&self) -> &[Polytope] {
        &self.polytopes
    }

    /// Reflexive face relation.
    pub fn is_face(&self, child: usize, parent: usize) -> bool {
        self.faces[parent].contains(&child)
    }

    pub fn faces_of(&self, p: usize) -> &BTreeSet<usize> {
        &self.faces[p]
    }

    /// Members having `q` as a face, `q` included.
    pub fn cofaces(&self, q: usize) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.faces[p].contains(&q)).collect()
    }

    /// Face pairs `(child, parent)` with `child != parent`.
    pub fn face_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.len() {
            for &c in &self.faces[p] {
                if c != p {
                    out.push((c, p));
                }
            }
        }
        out
    }

    /// Members that are facets of `p` (faces of codimension one in `p`).
    pub fn facets_of(&self, p: usize) -> Vec<usize> {
        let d = self.polytopes[p].affine_dim();
        self.faces[p]
            .iter()
            .copied()
            .filter(|&c| match (self.polytopes[c].affine_dim(), d) {
                (Some(a), Some(b)) => a + 1 == b,
                _ => false,
            })
            .collect()
    }

    /// Every facet of `P` as a face (by active set), so missing members can be detected.
    pub fn geometric_facets(&self, p: usize) -> Vec<Face> {
        self.polytopes[p].facets()
    }

    /// The member whose relative interior contains `x`.
    pub fn locate(&self, x: &[Rational]) -> Option<usize> {
        (0..self.len())
            .filter(|&i| self.polytopes[i].contains(x))
            .min_by_key(|&i| self.polytopes[i].affine_dim())
    }

    /// Integral basis of `t_P`, the annihilator of the tangent space of `P`.
    pub fn annihilator_basis(&self, p: usize) -> Vec<Vec<BigInt>> {
        let dirs: Vec<Vec<BigInt>> =
            self.polytopes[p].directions().iter().map(|d| primitive_integer_vector(d)).collect();
        if dirs.is_empty() {
            return LatticeMatrix::identity(self.dim).row_vecs();
        }
        annihilator(&LatticeMatrix::from_big_rows(&dirs, self.dim)).row_vecs()
    }

    /// `Cone_λ(P) = R>=0 (P - λ)` for `λ` in the relative interior of the face `Q` of `P`.
    pub fn cone_at(&self, p: usize, q: usize) -> Result<Cone, DecompError> {
        if !self.is_face(q, p) {
            return Err(DecompError::Invalid(vec![format!("{} is not a face of {}", self.ids[q], self.ids[p])]));
        }
        let poly = &self.polytopes[p];
        let f = poly.find_face(&self.polytopes[q]).expect("face relation is geometric");
        Ok(poly.tangent_cone(&f))
    }

    /// The fan `{Cone_λ(P) : P ⊇ Q}` at a relative-interior point `λ` of `Q`,
    /// both in `t^∨` and modulo the tangent space of `Q`.
    pub fn normal_fan(&self, q: usize) -> Result<Fan, DecompError> {
        if q >= self.len() {
            return Err(DecompError::UnknownId(format!("#{q}")));
        }
        let point = self.polytopes[q].relint_point().expect("members are nonempty");
        let basis = self.annihilator_basis(q);
        let m: Vec<QVec> = basis.iter().map(|b| to_rationals(b)).collect();
        let mut cones = Vec::new();
        for p in self.cofaces(q) {
            let cone = self.cone_at(p, q)?;
            let quotient = cone.image(&m, m.len());
            cones.push(FanCone { member: self.ids[p].clone(), cone, quotient });
        }
        Ok(Fan { member: self.ids[q].clone(), point, cones })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FanCone {
    pub member: String,
    pub cone: Cone,
    /// The same cone in `t^∨ / TQ`, coordinates given by the annihilator basis.
    pub quotient: Cone,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fan {
    pub member: String,
    #[serde(with = "crate::exactalg::rational::serde_q::vec")]
    pub point: QVec,
    pub cones: Vec<FanCone>,
}

impl Fan {
    /// Some cone contains `v` (checked in `t^∨`).
    pub fn covers(&self, v: &[Rational]) -> bool {
        self.cones.iter().any(|c| c.cone.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rationals};
    use crate::polyhedral::polytope::Halfspace;

    fn hs(n: &[i64], c: i64) -> Halfspace {
        Halfspace::from_ints(n, int(c)).unwrap()
    }

    fn single_cut() -> Decomposition {
        Decomposition::new(
            1,
            vec![
                ("L".into(), Polytope::new(1, vec![hs(&[-1], 0)]).unwrap()),
                ("O".into(), Polytope::new(1, vec![hs(&[-1], 0), hs(&[1], 0)]).unwrap()),
                ("R".into(), Polytope::new(1, vec![hs(&[1], 0)]).unwrap()),
            ],
            Some(&[("O".into(), "L".into()), ("O".into(), "R".into())]),
        )
        .unwrap()
    }

    #[test]
    fn single_cut_fan() {
        let d = single_cut();
        let fan = d.normal_fan(d.index("O").unwrap()).unwrap();
        let mut got: Vec<Cone> = fan.cones.iter().map(|c| c.cone.clone()).collect();
        got.sort_by_key(|c| format!("{c:?}"));
        let mut want = vec![
            Cone::from_v(1, &[rationals(&[-1])], &[]),
            Cone::zero(1),
            Cone::from_v(1, &[rationals(&[1])], &[]),
        ];
        want.sort_by_key(|c| format!("{c:?}"));
        assert_eq!(got, want);
        let top = d.normal_fan(d.index("R").unwrap()).unwrap();
        assert_eq!(top.cones.len(), 1);
        assert!(top.cones[0].quotient.is_zero() && top.cones[0].quotient.ambient() == 0);
    }

    #[test]
    fn missing_face_is_reported() {
        let err = Decomposition::new(
            1,
            vec![
                ("L".into(), Polytope::new(1, vec![hs(&[-1], 0)]).unwrap()),
                ("R".into(), Polytope::new(1, vec![hs(&[1], 0)]).unwrap()),
            ],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, DecompError::Invalid(_)));
    }

    #[test]
    fn overlapping_members_rejected() {
        let err = Decomposition::new(
            1,
            vec![
                ("A".into(), Polytope::new(1, vec![hs(&[1], 0), hs(&[-1], -2)]).unwrap()),
                ("B".into(), Polytope::new(1, vec![hs(&[1], 1), hs(&[-1], -3)]).unwrap()),
                ("a0".into(), Polytope::point(&rationals(&[0]))),
                ("a2".into(), Polytope::point(&rationals(&[2]))),
                ("b1".into(), Polytope::point(&rationals(&[1]))),
                ("b3".into(), Polytope::point(&rationals(&[3]))),
            ],
            None,
        )
        .unwrap_err();
        assert!(format!("{err}").contains("A ∩ B"));
    }

    #[test]
    fn wrong_supplied_relation() {
        let err = Decomposition::new(
            1,
            vec![
                ("L".into(), Polytope::new(1, vec![hs(&[-1], 0)]).unwrap()),
                ("O".into(), Polytope::new(1, vec![hs(&[-1], 0), hs(&[1], 0)]).unwrap()),
                ("R".into(), Polytope::new(1, vec![hs(&[1], 0)]).unwrap()),
            ],
            Some(&[("L".into(), "R".into())]),
        )
        .unwrap_err();
        assert!(format!("{err}").contains("declared"));
    }
}
