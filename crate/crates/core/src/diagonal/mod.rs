//! Cone displacement: for a Delzant polytope and a generic `η ∈ t`, the
//! diagonal of the toric variety is a sum of products `X_{Q₋} × X_{Q₊}` over
//! face pairs whose displaced normal cones meet transversally in a point.

use crate::exactalg::lattice::{lattice_index, saturation, LatticeIndex, LatticeMatrix};
use crate::exactalg::rational::{display_vec, serde_q, Rational};
use crate::exactalg::subspace::RationalSubspace;
use crate::polyhedral::{Cone, HPolyhedron, Polytope};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

type QVec = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagonalError {
    #[error("polytope is not Delzant: {0}")]
    NotDelzant(String),
    #[error("displacement has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("η = {eta} lies in span Cone({minus}) + span Cone({plus}), a proper subspace")]
    NonGeneric { minus: String, plus: String, eta: String },
    #[error("displaced cones {minus} and {plus} meet in a single point that is not transverse")]
    Degenerate { minus: String, plus: String },
}

/// A face `Q` of the polytope with its inward normal cone `Cone(Q) ⊂ t`.
#[derive(Clone, Debug, Serialize)]
pub struct FaceCone {
    /// `P` for the polytope itself, otherwise the tight facets, `F0∩F2`.
    pub id: String,
    /// Indices into the polytope's halfspace list.
    pub facets: Vec<usize>,
    pub dim: usize,
    #[serde(serialize_with = "serialize_points")]
    pub vertices: Vec<QVec>,
    pub cone: Cone,
}

fn serialize_points<S: serde::Serializer>(v: &[QVec], s: S) -> Result<S::Ok, S::Error> {
    use crate::exactalg::rational::format_rational;
    let strings: Vec<Vec<String>> = v.iter().map(|p| p.iter().map(format_rational).collect()).collect();
    serde::Serialize::serialize(&strings, s)
}

impl FaceCone {
    fn span(&self) -> Vec<QVec> {
        self.cone.linear_span()
    }
}

fn face_id(facets: &[usize]) -> String {
    if facets.is_empty() {
        "P".into()
    } else {
        facets.iter().map(|i| format!("F{i}")).join("∩")
    }
}

/// One cone per face of a Delzant polytope, from `P` (zero cone) down to
/// the vertices (full-dimensional cones).
pub fn face_cones(p: &Polytope) -> Result<Vec<FaceCone>, DiagonalError> {
    let report = p.is_delzant().map_err(|e| DiagonalError::NotDelzant(e.to_string()))?;
    if !report.delzant {
        return Err(DiagonalError::NotDelzant(report.detail.unwrap_or_default()));
    }
    if !p.is_bounded() {
        return Err(DiagonalError::NotDelzant("polytope is unbounded".into()));
    }
    let facet_set = p.facet_halfspaces();
    let mut out: Vec<FaceCone> = p
        .faces()
        .into_iter()
        .map(|f| {
            let facets: Vec<usize> = f.active.iter().copied().filter(|i| facet_set.contains(i)).collect();
            FaceCone {
                id: face_id(&facets),
                vertices: f.vertices.iter().map(|&v| p.vertices()[v].clone()).collect(),
                dim: f.dim,
                cone: p.normal_cone(&f),
                facets,
            }
        })
        .collect();
    out.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.facets.cmp(&b.facets)));
    Ok(out)
}

/// `(Cone(Q₋) + η) ∩ Cone(Q₊)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Displacement {
    Empty,
    Point {
        #[serde(with = "serde_q::vec")]
        point: QVec,
    },
    Higher { dim: usize },
}

/// Proper subspaces `span Cone(Q₋) + span Cone(Q₊)`; `η` is generic when it
/// avoids all of them.
pub fn arrangement(cones: &[FaceCone]) -> Vec<RationalSubspace> {
    let n = cones.first().map_or(0, |c| c.cone.ambient());
    let mut out: Vec<RationalSubspace> = Vec::new();
    for (a, b) in cones.iter().tuple_combinations().chain(cones.iter().map(|c| (c, c))) {
        let mut s = a.span();
        s.extend(b.span());
        let sub = RationalSubspace::span(n, &s);
        if sub.is_proper() && !out.contains(&sub) {
            out.push(sub);
        }
    }
    out
}

fn check_generic(minus: &FaceCone, plus: &FaceCone, eta: &[Rational]) -> Result<(), DiagonalError> {
    let mut s = minus.span();
    s.extend(plus.span());
    let sub = RationalSubspace::span(eta.len(), &s);
    if sub.is_proper() && sub.contains(eta) {
        return Err(DiagonalError::NonGeneric {
            minus: minus.id.clone(),
            plus: plus.id.clone(),
            eta: display_vec(eta),
        });
    }
    Ok(())
}

/// Classifies the displaced intersection. A point counts only when it is
/// cut out transversally: complementary spans and the point interior to
/// both displaced cones.
pub fn displaced_intersection(
    minus: &FaceCone,
    plus: &FaceCone,
    eta: &[Rational],
) -> Result<Displacement, DiagonalError> {
    let n = minus.cone.ambient();
    if eta.len() != n {
        return Err(DiagonalError::Dimension { expected: n, got: eta.len() });
    }
    check_generic(minus, plus, eta)?;
    let to_q = |v: &Vec<BigInt>| -> QVec { v.iter().map(|x| Rational::from_integer(x.clone())).collect() };
    let shifted = |row: &QVec| -> Rational { row.iter().zip(eta).map(|(a, b)| a * b).sum() };
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for f in minus.cone.facets() {
        let r = to_q(f);
        let c = shifted(&r);
        ineqs.push((r, c));
    }
    for e in minus.cone.equations() {
        let r = to_q(e);
        let c = shifted(&r);
        eqs.push((r, c));
    }
    ineqs.extend(plus.cone.facets().iter().map(|f| (to_q(f), Rational::zero())));
    eqs.extend(plus.cone.equations().iter().map(|e| (to_q(e), Rational::zero())));
    let hp = HPolyhedron::new(n, ineqs, eqs);
    let Some(info) = hp.interior() else {
        return Ok(Displacement::Empty);
    };
    if info.dim > 0 {
        return Ok(Displacement::Higher { dim: info.dim });
    }
    let point = info.point;
    let back: QVec = point.iter().zip(eta).map(|(a, b)| a - b).collect();
    let transverse = minus.cone.dim() + plus.cone.dim() == n
        && plus.cone.contains_in_relint(&point)
        && minus.cone.contains_in_relint(&back);
    if !transverse {
        return Err(DiagonalError::Degenerate { minus: minus.id.clone(), plus: plus.id.clone() });
    }
    Ok(Displacement::Point { point })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalPair {
    pub minus: String,
    pub plus: String,
    pub minus_dim: usize,
    pub plus_dim: usize,
    /// `[t_ℤ : (span Cone(Q₋) ∩ t_ℤ) + (span Cone(Q₊) ∩ t_ℤ)]`.
    pub multiplicity: u64,
    #[serde(with = "serde_q::vec")]
    pub point: QVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalDecomposition {
    pub dim: usize,
    #[serde(with = "serde_q::vec")]
    pub eta: QVec,
    pub faces: usize,
    pub pairs: Vec<DiagonalPair>,
}

/// Index of the sum of the two saturated span lattices.
pub fn pair_multiplicity(minus: &FaceCone, plus: &FaceCone) -> LatticeIndex {
    let n = minus.cone.ambient();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for c in [minus, plus] {
        let mut gens: Vec<Vec<BigInt>> = c.cone.rays().to_vec();
        gens.extend(c.cone.lineality().iter().cloned());
        if gens.is_empty() {
            continue;
        }
        rows.extend(saturation(&LatticeMatrix::from_big_rows(&gens, n)).row_vecs());
    }
    if rows.is_empty() {
        return if n == 0 { LatticeIndex::Finite(BigInt::from(1)) } else { LatticeIndex::Infinite };
    }
    lattice_index(&LatticeMatrix::from_big_rows(&rows, n))
}

/// Every face pair whose displaced cones meet in a transverse point.
pub fn diagonal_decomposition(p: &Polytope, eta: &[Rational]) -> Result<DiagonalDecomposition, DiagonalError> {
    let cones = face_cones(p)?;
    let n = p.dim();
    if eta.len() != n {
        return Err(DiagonalError::Dimension { expected: n, got: eta.len() });
    }
    // Certify genericity on every pair before classifying any of them.
    for (a, b) in cones.iter().cartesian_product(&cones) {
        check_generic(a, b, eta)?;
    }
    let mut pairs = Vec::new();
    for (a, b) in cones.iter().cartesian_product(&cones) {
        if let Displacement::Point { point } = displaced_intersection(a, b, eta)? {
            let multiplicity = match pair_multiplicity(a, b) {
                LatticeIndex::Finite(k) => k.to_u64().expect("lattice index fits in 64 bits"),
                LatticeIndex::Infinite => unreachable!("transverse spans are complementary"),
            };
            pairs.push(DiagonalPair {
                minus: a.id.clone(),
                plus: b.id.clone(),
                minus_dim: a.dim,
                plus_dim: b.dim,
                multiplicity,
                point,
            });
        }
    }
    Ok(DiagonalDecomposition { dim: n, eta: eta.to_vec(), faces: cones.len(), pairs })
}
