//! Quasi-split and split tropical graphs: a refined graph `Γ̃` collapsing onto
//! a base `Γ̄`, with the slope condition dropped on the split edges.

mod cone;
mod order;
mod symmetry;
mod weights;

pub use cone::{cone_condition, genericity_subspaces, in_discrepancy_cone, strong_cone_check, ConeCondition, Functional, StrongConeReport};
pub use order::{order_split_edges, OrderKey, SplitOrder};
pub use symmetry::{
    exact_sequence_check, framed_multiplicity, split_rigid, symmetry_splitting, ComponentSymmetry, ExactSequenceReport,
    SplitRigidity,
};
pub use weights::{
    diff_matrix, discrepancy_cone, discrepancy_cone_fm, relative_weights, unsigned_relative_weights, DiscrepancyCone,
    UnsignedWeights,
};

use crate::exactalg::rational::Rational;
use crate::exactalg::subspace::RationalSubspace;
use crate::polyhedral::{Decomposition, Glued, Polytope};
use crate::tropical::collapse::check_collapse;
use crate::tropical::weights::{validate_tropical, weight_system_except};
use crate::tropical::{collapse_edges, EdgeRole, GraphError, Resolved, TropicalGraph, ValidationReport, Violation};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("split edge {0:?} is not a node edge of the base graph")]
    UnknownSplitEdge(String),
    #[error("cone direction has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("the refined graph has no root leaf")]
    NoRoot,
    #[error("invalid split type: {}", .0.iter().map(|v| format!("{} ({}): {}", v.clause, v.item, v.message)).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("cone direction is not generic: it lies in {reason}")]
    NonGeneric { reason: String, subspace: RationalSubspace },
    #[error("the framed symmetry group is infinite")]
    InfiniteGroup,
}

/// `Γ̃ → Γ̄` with split edges and a cone direction `η₀ ∈ t^∨`.
#[derive(Clone, Debug, Serialize)]
pub struct SplitType {
    pub refined: TropicalGraph,
    pub base: TropicalGraph,
    /// `κ` on vertex ids.
    pub kappa: BTreeMap<String, String>,
    /// Refined edge id to base edge id, for edges that survive.
    pub edge_map: BTreeMap<String, String>,
    /// Base edge ids.
    pub split_edges: Vec<String>,
    #[serde(with = "crate::exactalg::rational::serde_q::vec")]
    pub cone_direction: Vec<Rational>,
}

impl SplitType {
    /// Builds the base graph by collapsing the refined edges mapped to `None`;
    /// refined edges absent from `base_collapse` keep their id.
    pub fn from_collapse(
        geo: &Glued,
        refined: TropicalGraph,
        base_collapse: &[(String, Option<String>)],
        split_edges: Vec<String>,
        cone_direction: Vec<Rational>,
    ) -> Result<SplitType, SplitError> {
        let collapsed: Vec<String> =
            base_collapse.iter().filter(|(_, b)| b.is_none()).map(|(r, _)| r.clone()).collect();
        let c = collapse_edges(&refined, geo, &collapsed)?;
        let mut edge_map = BTreeMap::new();
        for e in &refined.edges {
            if collapsed.contains(&e.id) {
                continue;
            }
            let image = base_collapse
                .iter()
                .find(|(r, _)| r == &e.id)
                .and_then(|(_, b)| b.clone())
                .unwrap_or_else(|| e.id.clone());
            edge_map.insert(e.id.clone(), image);
        }
        let mut base = c.graph;
        for e in base.edges.iter_mut() {
            e.id = edge_map[&e.id].clone();
        }
        for m in base.markings.iter_mut() {
            if let Some(b) = edge_map.get(&m.edge) {
                m.edge = b.clone();
            }
        }
        if let Some(r) = base.root.as_mut() {
            if let Some(b) = edge_map.get(r) {
                *r = b.clone();
            }
        }
        if let Some(bad) = split_edges.iter().find(|e| base.edge_index(e).is_err()) {
            return Err(SplitError::UnknownSplitEdge(bad.clone()));
        }
        Ok(SplitType { refined, base, kappa: c.vertex_map, edge_map, split_edges, cone_direction })
    }

    /// Refined edge ids mapping onto the split edges, in `split_edges` order.
    pub fn refined_split_edges(&self) -> Result<Vec<String>, SplitError> {
        self.split_edges
            .iter()
            .map(|b| {
                self.edge_map
                    .iter()
                    .find(|(_, v)| *v == b)
                    .map(|(k, _)| k.clone())
                    .ok_or_else(|| SplitError::UnknownSplitEdge(b.clone()))
            })
            .collect()
    }
}

/// Resolved indices shared by the split computations.
pub(crate) struct Ctx<'a> {
    pub geo: &'a Glued,
    pub s: &'a SplitType,
    pub rr: Resolved,
    pub rb: Resolved,
    /// `κ` as base vertex indices.
    pub kappa: Vec<usize>,
    pub roles: Vec<EdgeRole>,
    /// Refined edge indices of the split edges, in `split_edges` order.
    pub split: Vec<usize>,
}

impl<'a> Ctx<'a> {
    pub fn new(s: &'a SplitType, geo: &'a Glued) -> Result<Ctx<'a>, SplitError> {
        let rr = s.refined.resolve(geo)?;
        let rb = s.base.resolve(geo)?;
        if s.cone_direction.len() != geo.dim() {
            return Err(SplitError::Dimension { expected: geo.dim(), got: s.cone_direction.len() });
        }
        let (kappa, mut roles) = check_collapse(&s.refined, &rr, &s.base, &rb, geo, &s.kappa, &s.edge_map)?;
        let mut split = Vec::new();
        for id in s.refined_split_edges()? {
            let e = s.refined.edge_index(&id)?;
            if rr.ends[e].is_none() {
                return Err(SplitError::UnknownSplitEdge(id));
            }
            roles[e] = EdgeRole::Split;
            split.push(e);
        }
        Ok(Ctx { geo, s, rr, rb, kappa, roles, split })
    }

    pub fn n(&self) -> usize {
        self.geo.dim()
    }

    pub fn split_set(&self) -> BTreeSet<usize> {
        self.split.iter().copied().collect()
    }

    /// Base polytope of `κ(v)` for each refined vertex.
    pub fn targets(&self) -> Vec<usize> {
        self.kappa.iter().map(|&k| self.rb.polytope[k]).collect()
    }

    /// `(plus, minus)` of a refined node edge.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.rr.ends[e].expect("node edge")
    }
}

/// Facet-membership proxy for split eligibility: every facet of `p` is one
/// of `members`.
pub fn split_eligible(p: &Polytope, members: &[Polytope]) -> bool {
    p.facets().iter().all(|f| {
        let fp = p.face_polytope(f);
        members.iter().any(|m| m.same_set(&fp))
    })
}

pub fn split_eligible_member(d: &Decomposition, p: usize) -> bool {
    split_eligible(d.polytope(p), d.polytopes())
}

/// Checks every clause of a quasi-split graph.
pub fn validate_split(s: &SplitType, geo: &Glued) -> Result<ValidationReport, SplitError> {
    let mut violations = Vec::new();
    let base = validate_tropical(&s.base, geo)?;
    for v in base.violations {
        violations.push(Violation::new(&format!("base {}", v.clause), &v.item, v.message));
    }
    let rb = s.base.resolve(geo)?;
    for (e, _, _) in s.base.nodes(&rb) {
        if s.base.edges[e].has_zero_slope() {
            violations.push(Violation::new("base", &s.base.edges[e].id, "the base graph has an edge of zero slope"));
        }
    }
    let ctx = match Ctx::new(s, geo) {
        Ok(c) => c,
        Err(SplitError::Graph(GraphError::Collapse(m))) => {
            violations.push(Violation::new("collapse", "κ", m));
            return Ok(ValidationReport { valid: false, violations });
        }
        Err(e) => return Err(e),
    };
    let relaxed = ctx.split_set();
    violations.extend(s.refined.structural_violations(geo, &ctx.rr, &relaxed));
    for (&e, id) in ctx.split.iter().zip(&s.split_edges) {
        let pe = s.refined.edge_polytope(geo, &ctx.rr, e);
        match pe {
            Some(p) if split_eligible_member(&geo.decomp, p) => {}
            Some(p) => violations.push(Violation::new(
                "split",
                id,
                format!("P(e) = {} has a facet outside the decomposition", geo.decomp.id(p)),
            )),
            None => violations.push(Violation::new("split", id, "P(e) is not a member")),
        }
    }
    if weight_system_except(&s.refined, geo, &ctx.rr, &relaxed).is_empty() {
        violations.push(Violation::new(
            "weights",
            "refined",
            "some component of the refined graph minus the split edges has no tropical weight",
        ));
    }
    Ok(ValidationReport { valid: violations.is_empty(), violations })
}

pub(crate) fn require_valid<'a>(s: &'a SplitType, geo: &'a Glued) -> Result<Ctx<'a>, SplitError> {
    let report = validate_split(s, geo)?;
    if !report.valid {
        return Err(SplitError::Invalid(report.violations));
    }
    Ctx::new(s, geo)
}
