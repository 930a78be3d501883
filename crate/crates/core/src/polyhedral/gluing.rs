//! Gluing data: a dual polytope `P^∨ ⊂ t_P^∨` per member, embedded in `t^∨`
//! through the fixed pairing `t ≅ t^∨`, and the dual complex they form.
//!
//! Coordinates on `t_P^∨` are dual to an integral basis `b_1..b_k` of
//! `t_P = ann(TP)`: the point `x ∈ t^∨` has coordinates `w_j = <b_j, x - anchor>`.
//! The embedding sends `w` to `anchor + G Bᵀ (B G Bᵀ)^{-1} w`.

use super::cone::Cone;
use super::decomposition::{DecompError, Decomposition};
use super::polytope::{Face, Halfspace, Polytope};
use crate::exactalg::lattice::LatticeMatrix;
use crate::exactalg::linalg::{inverse, mat_mul, mat_vec, solve, transpose};
use crate::exactalg::rational::{display_vec, dot, from_big, to_rationals, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

type QVec = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GluingError {
    #[error(transparent)]
    Decomposition(#[from] DecompError),
    #[error("no dual polytope given for {0:?}")]
    MissingDual(String),
    #[error("two dual polytopes given for {0:?}")]
    DuplicateDual(String),
    #[error("dual of {id:?} is given in {got} coordinates but t_P has dimension {expected}")]
    Dimension { id: String, expected: usize, got: usize },
    #[error("pairing must be a {0}x{0} matrix")]
    PairingShape(usize),
    #[error("the pairing is degenerate on t_P for {0:?}")]
    SingularPairing(String),
    #[error("dual vertices of {0:?} do not lie in one fiber of the embedding")]
    NotInFiber(String),
    #[error("dual of {0:?} is empty")]
    Empty(String),
    #[error("gluing datum is invalid: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// How a dual polytope is specified.
#[derive(Clone, Debug)]
pub enum DualInput {
    /// Halfspaces in annihilator coordinates plus an embedding offset in `t^∨`.
    Halfspaces { halfspaces: Vec<Halfspace>, anchor: QVec },
    /// Vertices in `t^∨`; the first one becomes the anchor.
    Vertices(Vec<QVec>),
}

#[derive(Clone, Debug)]
pub struct DualPolytope {
    pub member: usize,
    /// Rows `b_j`, an integral basis of `t_P`.
    pub basis: Vec<Vec<BigInt>>,
    pub polytope: Polytope,
    pub anchor: QVec,
    /// `n x k` matrix of the linear part of the embedding.
    embed: Vec<QVec>,
}

impl DualPolytope {
    pub fn codim(&self) -> usize {
        self.basis.len()
    }

    pub fn embed(&self, w: &[Rational]) -> QVec {
        let lin = mat_vec(&self.embed, w);
        self.anchor.iter().zip(&lin).map(|(a, b)| a + b).collect()
    }

    fn embed_direction(&self, w: &[Rational]) -> QVec {
        mat_vec(&self.embed, w)
    }

    /// Annihilator coordinates of a point of `t^∨`.
    pub fn coordinates(&self, x: &[Rational]) -> QVec {
        let d: QVec = x.iter().zip(&self.anchor).map(|(a, b)| a - b).collect();
        self.basis.iter().map(|b| dot(&to_rationals(b), &d)).collect()
    }

    /// The cell `E_P(P^∨)` as a polytope in `t^∨`.
    pub fn embedded(&self) -> Polytope {
        let n = self.anchor.len();
        let verts: Vec<QVec> = self.polytope.vertices().iter().map(|v| self.embed(v)).collect();
        let rays: Vec<QVec> = self.polytope.rays().iter().map(|r| self.embed_direction(&to_rationals(r))).collect();
        Polytope::from_vertices(n, &verts, &rays).expect("embedding of a nonempty polytope")
    }

    fn embedded_face(&self, f: &Face) -> Polytope {
        let n = self.anchor.len();
        let verts: Vec<QVec> = f.vertices.iter().map(|&i| self.embed(&self.polytope.vertices()[i])).collect();
        let rays: Vec<QVec> =
            f.rays.iter().map(|&i| self.embed_direction(&to_rationals(&self.polytope.rays()[i]))).collect();
        Polytope::from_vertices(n, &verts, &rays).expect("faces are nonempty")
    }
}

#[derive(Clone, Debug)]
pub struct GluingDatum {
    dim: usize,
    pairing: LatticeMatrix,
    duals: Vec<DualPolytope>,
}

impl GluingDatum {
    /// `duals` is keyed by member id; `pairing` defaults to the identity.
    pub fn new(
        decomp: &Decomposition,
        pairing: Option<LatticeMatrix>,
        duals: Vec<(String, DualInput)>,
    ) -> Result<GluingDatum, GluingError> {
        let n = decomp.dim();
        let pairing = pairing.unwrap_or_else(|| LatticeMatrix::identity(n));
        if pairing.rows() != n || pairing.cols() != n {
            return Err(GluingError::PairingShape(n));
        }
        let g = pairing.to_rational_rows();
        let mut slots: Vec<Option<DualPolytope>> = vec![None; decomp.len()];
        for (id, input) in duals {
            let p = decomp.index(&id)?;
            if slots[p].is_some() {
                return Err(GluingError::DuplicateDual(id));
            }
            let basis = decomp.annihilator_basis(p);
            let k = basis.len();
            let bq: Vec<QVec> = basis.iter().map(|b| to_rationals(b)).collect();
            let gbt = mat_mul(&g, &transpose(&bq, n), k);
            let bgbt = mat_mul(&bq, &gbt, k);
            let inv = if k == 0 { Vec::new() } else { inverse(&bgbt).ok_or_else(|| GluingError::SingularPairing(id.clone()))? };
            let embed = if k == 0 { vec![Vec::new(); n] } else { mat_mul(&gbt, &inv, k) };
            let (polytope, anchor) = match input {
                DualInput::Halfspaces { halfspaces, anchor } => {
                    if anchor.len() != n {
                        return Err(GluingError::Dimension { id, expected: n, got: anchor.len() });
                    }
                    for h in &halfspaces {
                        if h.normal.len() != k {
                            return Err(GluingError::Dimension { id, expected: k, got: h.normal.len() });
                        }
                    }
                    let poly = Polytope::new(k, halfspaces).map_err(|_| GluingError::Empty(id.clone()))?;
                    (poly, anchor)
                }
                DualInput::Vertices(vs) => {
                    let Some(anchor) = vs.first().cloned() else {
                        return Err(GluingError::Empty(id));
                    };
                    if vs.iter().any(|v| v.len() != n) {
                        return Err(GluingError::Dimension { id, expected: n, got: vs[0].len() });
                    }
                    let mut ws = Vec::new();
                    for v in &vs {
                        let d: QVec = v.iter().zip(&anchor).map(|(a, b)| a - b).collect();
                        let w: QVec = bq.iter().map(|b| dot(b, &d)).collect();
                        if mat_vec(&embed, &w) != d {
                            return Err(GluingError::NotInFiber(id));
                        }
                        ws.push(w);
                    }
                    let poly = Polytope::from_vertices(k, &ws, &[]).map_err(|_| GluingError::Empty(id.clone()))?;
                    (poly, anchor)
                }
            };
            if polytope.is_empty() {
                return Err(GluingError::Empty(id));
            }
            slots[p] = Some(DualPolytope { member: p, basis, polytope, anchor, embed });
        }
        let mut out = Vec::new();
        for (i, s) in slots.into_iter().enumerate() {
            out.push(s.ok_or_else(|| GluingError::MissingDual(decomp.id(i).to_string()))?);
        }
        Ok(GluingDatum { dim: n, pairing, duals: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairing(&self) -> &LatticeMatrix {
        &self.pairing
    }

    pub fn dual(&self, p: usize) -> &DualPolytope {
        &self.duals[p]
    }

    pub fn duals(&self) -> &[DualPolytope] {
        &self.duals
    }

    /// Matrix `M` with `B_P = M B_Q`, so that `w_P = M w_Q + B_P (a_Q - a_P)`.
    pub fn projection_matrix(&self, q: usize, p: usize) -> Option<Vec<QVec>> {
        let bq: Vec<QVec> = self.duals[q].basis.iter().map(|b| to_rationals(b)).collect();
        let k = bq.len();
        let bqt = transpose(&bq, self.dim);
        let mut m = Vec::new();
        for row in &self.duals[p].basis {
            if k == 0 {
                return if self.duals[p].basis.is_empty() { Some(Vec::new()) } else { None };
            }
            m.push(solve(&bqt, &to_rationals(row), k)?);
        }
        Some(m)
    }

    /// The projection `t_Q^∨ -> t_P^∨` in annihilator coordinates.
    pub fn project(&self, q: usize, p: usize, w: &[Rational]) -> Option<QVec> {
        let m = self.projection_matrix(q, p)?;
        let shift: QVec =
            self.duals[q].anchor.iter().zip(&self.duals[p].anchor).map(|(a, b)| a - b).collect();
        let mw = mat_vec(&m, w);
        Some(
            self.duals[p]
                .basis
                .iter()
                .zip(mw)
                .map(|(b, x)| x + dot(&to_rationals(b), &shift))
                .collect(),
        )
    }

    /// The dual cone of `P^∨` at `f`, pushed into `t^∨`, plus the tangent space of `P`.
    fn pushed_dual_cone(&self, decomp: &Decomposition, p: usize, f: &Face) -> Cone {
        let d = &self.duals[p];
        let g = self.pairing.to_rational_rows();
        let rays: Vec<QVec> = f
            .active
            .iter()
            .map(|&i| {
                let nu = d.polytope.halfspaces()[i].normal_q();
                let mut t = vec![Rational::zero(); self.dim];
                for (b, c) in d.basis.iter().zip(&nu) {
                    for (tj, bj) in t.iter_mut().zip(b) {
                        *tj += from_big(bj) * c;
                    }
                }
                mat_vec(&g, &t)
            })
            .collect();
        Cone::from_v(self.dim, &rays, &decomp.polytope(p).directions())
    }

    /// Checks both gluing conditions and records the face correspondence.
    pub fn validate(&self, decomp: &Decomposition) -> GluingReport {
        let mut violations = Vec::new();
        let mut matches: BTreeMap<usize, BTreeMap<usize, Face>> = BTreeMap::new();
        let mut correspondences = Vec::new();
        let mut checks = 0;
        for p in 0..decomp.len() {
            let fan = match decomp.normal_fan(p) {
                Ok(f) => f,
                Err(e) => {
                    violations.push(e.to_string());
                    continue;
                }
            };
            let cofaces = decomp.cofaces(p);
            let faces = self.duals[p].polytope.faces();
            checks += 1;
            if faces.len() != cofaces.len() {
                violations.push(format!(
                    "dual of {} has {} faces but {} members contain it",
                    decomp.id(p),
                    faces.len(),
                    cofaces.len()
                ));
                continue;
            }
            let mut used = BTreeSet::new();
            let mut m = BTreeMap::new();
            for f in &faces {
                let k = self.pushed_dual_cone(decomp, p, f);
                let hit = cofaces.iter().zip(&fan.cones).find(|(_, c)| c.cone == k).map(|(&q, _)| q);
                match hit {
                    Some(q) if used.insert(q) => {
                        m.insert(q, f.clone());
                        let verts: Vec<String> =
                            f.vertices.iter().map(|&i| display_vec(&self.duals[p].polytope.vertices()[i])).collect();
                        correspondences.push(Correspondence {
                            member: decomp.id(p).to_string(),
                            dual_face: verts,
                            coface: decomp.id(q).to_string(),
                        });
                    }
                    _ => violations.push(format!(
                        "a face of the dual of {} has a dual cone matching no cone of its normal fan",
                        decomp.id(p)
                    )),
                }
            }
            matches.insert(p, m);
        }
        for (q, p) in decomp.face_pairs() {
            checks += 1;
            let Some(f) = matches.get(&q).and_then(|m| m.get(&p)) else {
                violations.push(format!("no face of the dual of {} corresponds to {}", decomp.id(q), decomp.id(p)));
                continue;
            };
            let lhs = self.duals[q].embedded_face(f);
            let rhs = self.duals[p].embedded();
            if !lhs.same_set(&rhs) {
                violations.push(format!(
                    "dual of {} does not match its face in the dual of {} ({:?} vs {:?})",
                    decomp.id(p),
                    decomp.id(q),
                    rhs.vertices().iter().map(|v| display_vec(v)).collect::<Vec<_>>(),
                    lhs.vertices().iter().map(|v| display_vec(v)).collect::<Vec<_>>()
                ));
            }
        }
        GluingReport { valid: violations.is_empty(), checks, violations, correspondences }
    }

    pub fn dual_complex(&self, decomp: &Decomposition) -> Result<DualComplex, GluingError> {
        let report = self.validate(decomp);
        if !report.valid {
            return Err(GluingError::Invalid(report.violations));
        }
        let cells: Vec<DualCell> = (0..decomp.len())
            .map(|p| {
                let cell = self.duals[p].embedded();
                DualCell {
                    member: decomp.id(p).to_string(),
                    dim: cell.affine_dim().unwrap_or(0),
                    vertices: cell.vertices().to_vec(),
                    cell,
                }
            })
            .collect();
        let identifications = decomp
            .face_pairs()
            .into_iter()
            .map(|(q, p)| Identification { face: decomp.id(q).to_string(), coface: decomp.id(p).to_string() })
            .collect();
        Ok(DualComplex { cells, identifications })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Correspondence {
    pub member: String,
    pub dual_face: Vec<String>,
    pub coface: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GluingReport {
    pub valid: bool,
    pub checks: usize,
    pub violations: Vec<String>,
    pub correspondences: Vec<Correspondence>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualCell {
    pub member: String,
    pub dim: usize,
    #[serde(serialize_with = "serialize_points")]
    pub vertices: Vec<QVec>,
    #[serde(skip)]
    pub cell: Polytope,
}

fn serialize_points<S: serde::Serializer>(v: &[QVec], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for p in v {
        let strs: Vec<String> = p.iter().map(crate::exactalg::rational::format_rational).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

/// `λ_P ∼ λ_Q`: the dual of `coface` is glued onto a face of the dual of `face`.
#[derive(Clone, Debug, Serialize)]
pub struct Identification {
    pub face: String,
    pub coface: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualComplex {
    pub cells: Vec<DualCell>,
    pub identifications: Vec<Identification>,
}

impl DualComplex {
    /// Cells containing the point `x ∈ t^∨`.
    pub fn cells_containing(&self, x: &[Rational]) -> Vec<&str> {
        self.cells.iter().filter(|c| c.cell.contains(x)).map(|c| c.member.as_str()).collect()
    }

    /// The lowest-dimensional cell containing `x`, if any.
    pub fn locate(&self, x: &[Rational]) -> Option<&str> {
        self.cells.iter().filter(|c| c.cell.contains(x)).min_by_key(|c| c.dim).map(|c| c.member.as_str())
    }

    pub fn cell(&self, member: &str) -> Option<&DualCell> {
        self.cells.iter().find(|c| c.member == member)
    }
}

/// A decomposition with its gluing datum and the embedded dual cells.
#[derive(Clone, Debug)]
pub struct Glued {
    pub decomp: Decomposition,
    pub gluing: GluingDatum,
    cells: Vec<Polytope>,
}

impl Glued {
    pub fn new(decomp: Decomposition, gluing: GluingDatum) -> Glued {
        let cells = gluing.duals().iter().map(|d| d.embedded()).collect();
        Glued { decomp, gluing, cells }
    }

    pub fn dim(&self) -> usize {
        self.decomp.dim()
    }

    /// `E_P(P^∨)` in `t^∨`.
    pub fn cell(&self, p: usize) -> &Polytope {
        &self.cells[p]
    }

    /// The pairing applied to a vector of `t`.
    pub fn pair(&self, v: &[Rational]) -> QVec {
        self.gluing.pairing().apply_rational(v)
    }
}
