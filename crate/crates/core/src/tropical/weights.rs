//! Tropical weights `𝒯(v) ∈ P(v)^∨` with `𝒯(v₊) − 𝒯(v₋) ∈ R≥0 𝒯(e)`, and
//! the balancing condition at a vertex.

use super::graph::{GraphError, Resolved, TropicalGraph, ValidationReport, Violation};
use crate::exactalg::lattice::{annihilator, LatticeMatrix};
use crate::exactalg::rational::{dot_int, primitive_integer_vector, rationals, serde_q, to_rationals, Rational};
use crate::polyhedral::{Glued, HPolyhedron};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeSet;

type QVec = Vec<Rational>;

/// The polyhedral set `𝒲(Γ) ⊆ ⊕_v t^∨`, one block of `n` coordinates per vertex.
#[derive(Clone, Debug)]
pub struct WeightCone {
    pub vertex_ids: Vec<String>,
    pub block: usize,
    pub system: HPolyhedron,
    pub dim: usize,
    /// A relative-interior point, split per vertex.
    pub point: Vec<QVec>,
}

#[derive(Serialize)]
struct Row<'a> {
    #[serde(with = "serde_q::vec")]
    normal: &'a QVec,
    #[serde(with = "serde_q")]
    rhs: &'a Rational,
}

#[derive(Serialize)]
struct WeightView<'a> {
    dim: usize,
    vertices: &'a [String],
    block: usize,
    anchor: Vec<(String, Vec<String>)>,
    inequalities: Vec<Row<'a>>,
    equations: Vec<Row<'a>>,
}

impl Serialize for WeightCone {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use crate::exactalg::rational::format_rational;
        WeightView {
            dim: self.dim,
            vertices: &self.vertex_ids,
            block: self.block,
            anchor: self
                .vertex_ids
                .iter()
                .zip(&self.point)
                .map(|(id, p)| (id.clone(), p.iter().map(format_rational).collect()))
                .collect(),
            inequalities: self.system.ineqs.iter().map(|(a, b)| Row { normal: a, rhs: b }).collect(),
            equations: self.system.eqs.iter().map(|(a, b)| Row { normal: a, rhs: b }).collect(),
        }
        .serialize(s)
    }
}

impl WeightCone {
    pub fn is_point(&self) -> bool {
        self.dim == 0
    }

    pub fn contains(&self, weights: &[QVec]) -> bool {
        self.system.contains(&weights.concat())
    }

    pub fn weight(&self, id: &str) -> Option<&QVec> {
        self.vertex_ids.iter().position(|v| v == id).map(|i| &self.point[i])
    }
}

/// `𝒯(e)` pushed into `t^∨` through the pairing.
pub fn paired_slope(geo: &Glued, slope: &[i64]) -> QVec {
    geo.pair(&rationals(slope))
}

/// Integer rows spanning the linear forms that vanish on `d`.
pub fn perp_rows(d: &[Rational]) -> Vec<QVec> {
    let p = primitive_integer_vector(d);
    let n = d.len();
    annihilator(&LatticeMatrix::from_big_rows(&[p], n)).row_vecs().iter().map(|r| to_rationals(r)).collect()
}

fn placed(n: usize, blocks: usize, parts: &[(usize, &QVec, i64)]) -> QVec {
    let mut row = vec![Rational::zero(); n * blocks];
    for &(b, v, sign) in parts {
        for (k, x) in v.iter().enumerate() {
            row[b * n + k] += x * Rational::from_integer(sign.into());
        }
    }
    row
}

/// The H-system of `𝒲(Γ)`.
pub fn weight_system(g: &TropicalGraph, geo: &Glued, r: &Resolved) -> HPolyhedron {
    weight_system_except(g, geo, r, &BTreeSet::new())
}

/// `𝒲` with the slope condition dropped on the listed edges.
pub fn weight_system_except(g: &TropicalGraph, geo: &Glued, r: &Resolved, free: &BTreeSet<usize>) -> HPolyhedron {
    let n = geo.dim();
    let nv = g.vertices.len();
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for (v, &p) in r.polytope.iter().enumerate() {
        let h = geo.cell(p).hpoly();
        for (a, b) in &h.ineqs {
            ineqs.push((placed(n, nv, &[(v, a, 1)]), b.clone()));
        }
        for (a, b) in &h.eqs {
            eqs.push((placed(n, nv, &[(v, a, 1)]), b.clone()));
        }
    }
    for (e, a, b) in g.nodes(r) {
        let edge = &g.edges[e];
        if free.contains(&e) {
            continue;
        }
        if edge.has_zero_slope() {
            for k in 0..n {
                let mut unit = vec![Rational::zero(); n];
                unit[k] = Rational::from_integer(1.into());
                eqs.push((placed(n, nv, &[(a, &unit, 1), (b, &unit, -1)]), Rational::zero()));
            }
            continue;
        }
        let d = paired_slope(geo, &edge.slope);
        for m in perp_rows(&d) {
            eqs.push((placed(n, nv, &[(a, &m, 1), (b, &m, -1)]), Rational::zero()));
        }
        ineqs.push((placed(n, nv, &[(a, &d, 1), (b, &d, -1)]), Rational::zero()));
    }
    HPolyhedron::new(n * nv, ineqs, eqs)
}

fn split_blocks(x: &[Rational], n: usize) -> Vec<QVec> {
    x.chunks(n.max(1)).map(|c| c.to_vec()).collect()
}

/// `𝒲(Γ)` with its dimension and a relative-interior anchor.
pub fn weight_cone(g: &TropicalGraph, geo: &Glued) -> Result<WeightCone, GraphError> {
    let r = g.resolve(geo)?;
    let system = weight_system(g, geo, &r);
    let info = system.interior().ok_or(GraphError::EmptyWeights)?;
    let n = geo.dim();
    let point = if n == 0 { vec![Vec::new(); g.vertices.len()] } else { split_blocks(&info.point, n) };
    Ok(WeightCone {
        vertex_ids: g.vertices.iter().map(|v| v.id.clone()).collect(),
        block: n,
        dim: info.dim,
        point,
        system,
    })
}

/// Structural clauses plus nonemptiness of `𝒲(Γ)`.
pub fn validate_tropical(g: &TropicalGraph, geo: &Glued) -> Result<ValidationReport, GraphError> {
    let r = g.resolve(geo)?;
    let mut violations = g.structural_violations(geo, &r, &BTreeSet::new());
    if weight_system(g, geo, &r).is_empty() {
        violations.push(Violation::new("weights", "graph", "no tropical weight satisfies the slope cones"));
    }
    Ok(ValidationReport { valid: violations.is_empty(), violations })
}

/// Fails unless the graph is valid.
pub fn require_valid(g: &TropicalGraph, geo: &Glued) -> Result<Resolved, GraphError> {
    let report = validate_tropical(g, geo)?;
    if !report.valid {
        return Err(GraphError::Invalid(report.violations));
    }
    g.resolve(geo)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Balance {
    pub vertex: String,
    pub balanced: bool,
    #[serde(with = "serde_q::vec")]
    pub slope_sum: QVec,
    pub chern: Vec<i64>,
}

/// Outgoing slopes at `v`, summed and projected to `t_{P(v)}^∨`.
pub fn check_balancing(g: &TropicalGraph, geo: &Glued, v: &str) -> Result<Balance, GraphError> {
    let r = g.resolve(geo)?;
    let vi = g.vertex_index(v)?;
    let vert = &g.vertices[vi];
    let n = geo.dim();
    let basis: Vec<Vec<BigInt>> = geo.decomp.annihilator_basis(r.polytope[vi]);
    let chern = match (&vert.chern, vert.constant) {
        (Some(c), _) => c.clone(),
        (None, true) => vec![0; basis.len()],
        (None, false) => return Err(GraphError::MissingChern(v.into())),
    };
    if chern.len() != basis.len() {
        return Err(GraphError::SlopeDimension(format!("chern vector of {v}")));
    }
    let mut total = vec![Rational::zero(); n];
    for (e, edge) in g.edges.iter().enumerate() {
        let sign = match (r.ends[e], r.leaf_vertex[e]) {
            (Some((a, b)), _) if a == vi && b == vi => 0,
            (Some((a, _)), _) if a == vi => -1,
            (Some((_, b)), _) if b == vi => 1,
            (None, Some(l)) if l == vi => 1,
            _ => 0,
        };
        if sign == 0 {
            continue;
        }
        for (t, s) in total.iter_mut().zip(rationals(&edge.slope_or_zero(n))) {
            *t += s * Rational::from_integer(sign.into());
        }
    }
    let paired = geo.pair(&total);
    let slope_sum: QVec = basis.iter().map(|b| dot_int(b, &paired)).collect();
    let balanced = slope_sum.iter().zip(&chern).all(|(s, c)| *s == Rational::from_integer((*c).into()));
    Ok(Balance { vertex: v.into(), balanced, slope_sum, chern })
}

/// Linear span of `{x − y : x, y ∈ 𝒲}`, as a basis.
pub fn difference_span(w: &WeightCone) -> Vec<QVec> {
    use crate::exactalg::linalg::nullspace;
    let total = w.block * w.vertex_ids.len();
    let info = w.system.interior().expect("nonempty weight set");
    let mut rows: Vec<QVec> = w.system.eqs.iter().map(|(a, _)| a.clone()).collect();
    rows.extend(info.implicit.iter().map(|&i| w.system.ineqs[i].0.clone()));
    nullspace(&rows, total)
}
