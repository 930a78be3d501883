//! Tropical edge collapse `κ: Γ' → Γ` and relative weights.

use super::graph::{GraphError, Resolved, Sort, TropicalGraph, Vertex};
use super::weights::{paired_slope, perp_rows};
use crate::exactalg::rational::Rational;
use crate::polyhedral::{Cone, Glued};
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

type QVec = Vec<Rational>;

#[derive(Clone, Debug, Serialize)]
pub struct Collapse {
    pub graph: TropicalGraph,
    /// `κ` on vertex ids.
    pub vertex_map: BTreeMap<String, String>,
    pub collapsed: Vec<String>,
    /// All collapsed slopes zero and no polytope changes.
    pub trivial: bool,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Contracts the given node edges. Each merged vertex is sent to the
/// smallest member containing the polytopes of its parts.
pub fn collapse_edges(g: &TropicalGraph, geo: &Glued, edges: &[String]) -> Result<Collapse, GraphError> {
    let r = g.resolve(geo)?;
    let nv = g.vertices.len();
    let mut parent: Vec<usize> = (0..nv).collect();
    let mut chosen = BTreeSet::new();
    for id in edges {
        let e = g.edge_index(id)?;
        let Some((a, b)) = r.ends[e] else {
            return Err(GraphError::Collapse(format!("{id:?} is a leaf and cannot be collapsed")));
        };
        chosen.insert(e);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi] = lo;
    }
    let d = &geo.decomp;
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..nv {
        let root = find(&mut parent, v);
        classes.entry(root).or_default().push(v);
    }
    let mut new_vertices = Vec::new();
    let mut vertex_map = BTreeMap::new();
    let mut rep_id: BTreeMap<usize, String> = BTreeMap::new();
    let mut trivial = chosen.iter().all(|&e| g.edges[e].has_zero_slope());
    for (root, members) in &classes {
        let target = (0..d.len())
            .filter(|&k| members.iter().all(|&v| d.polytope(k).contains_polytope(d.polytope(r.polytope[v]))))
            .min_by_key(|&k| d.polytope(k).affine_dim());
        let Some(target) = target else {
            let ids: Vec<&str> = members.iter().map(|&v| g.vertices[v].id.as_str()).collect();
            return Err(GraphError::Collapse(format!("no member contains the polytopes of {ids:?}")));
        };
        if members.iter().any(|&v| r.polytope[v] != target) {
            trivial = false;
        }
        let first = &g.vertices[*root];
        let parts: Vec<&Vertex> = members.iter().map(|&v| &g.vertices[v]).collect();
        let constant = parts.iter().all(|v| v.constant && v.chern.is_none());
        let chern = if constant || parts.iter().any(|v| v.chern.is_none() && !v.constant) {
            None
        } else if members.iter().all(|&v| r.polytope[v] == target) {
            let k = d.annihilator_basis(target).len();
            let mut sum = vec![0i64; k];
            for v in &parts {
                for (s, c) in sum.iter_mut().zip(v.chern.clone().unwrap_or_else(|| vec![0; k])) {
                    *s += c;
                }
            }
            Some(sum)
        } else {
            None
        };
        new_vertices.push(Vertex {
            id: first.id.clone(),
            polytope: d.id(target).to_string(),
            sort: if parts.iter().any(|v| v.sort == Sort::Disk) { Sort::Disk } else { Sort::Sphere },
            chern,
            constant,
        });
        rep_id.insert(*root, first.id.clone());
        for &v in members {
            vertex_map.insert(g.vertices[v].id.clone(), first.id.clone());
        }
    }
    let mut new_edges = Vec::new();
    for (e, edge) in g.edges.iter().enumerate() {
        if chosen.contains(&e) {
            continue;
        }
        let mut edge = edge.clone();
        for end in edge.ends.iter_mut() {
            *end = vertex_map[end.as_str()].clone();
        }
        new_edges.push(edge);
    }
    let graph = TropicalGraph { vertices: new_vertices, edges: new_edges, markings: g.markings.clone(), root: g.root.clone() };
    Ok(Collapse {
        graph,
        vertex_map,
        collapsed: chosen.iter().map(|&e| g.edges[e].id.clone()).collect(),
        trivial,
    })
}

/// Role of an edge of `Γ'` in a relative weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRole {
    /// Collapsed by `κ`: difference in `R≥0 𝒯(e)`.
    Collapsed,
    /// Survives in `Γ`: difference in `R 𝒯(e)`.
    Kept,
    /// No condition.
    Split,
}

/// Cone of relative weights in `⊕_{v ∈ Γ'} t^∨`.
#[derive(Clone, Debug, Serialize)]
pub struct RelativeWeights {
    pub vertex_ids: Vec<String>,
    pub block: usize,
    pub cone: Cone,
    pub dim: usize,
}

/// `κ` as vertex indices after checking it is an edge collapse.
pub fn check_collapse(
    gp: &TropicalGraph,
    rp: &Resolved,
    g: &TropicalGraph,
    r: &Resolved,
    geo: &Glued,
    kappa: &BTreeMap<String, String>,
    edge_map: &BTreeMap<String, String>,
) -> Result<(Vec<usize>, Vec<EdgeRole>), GraphError> {
    let d = &geo.decomp;
    let mut k = Vec::new();
    for v in &gp.vertices {
        let target = kappa.get(&v.id).ok_or_else(|| GraphError::Collapse(format!("κ is undefined on {:?}", v.id)))?;
        k.push(g.vertex_index(target)?);
    }
    let image: BTreeSet<usize> = k.iter().copied().collect();
    if image.len() != g.vertices.len() {
        return Err(GraphError::Collapse("κ is not surjective on vertices".into()));
    }
    for (i, &t) in k.iter().enumerate() {
        if !d.polytope(r.polytope[t]).contains_polytope(d.polytope(rp.polytope[i])) {
            return Err(GraphError::Collapse(format!("P({}) is not contained in P(κ of it)", gp.vertices[i].id)));
        }
    }
    let mut roles = Vec::new();
    for (e, edge) in gp.edges.iter().enumerate() {
        let Some((a, b)) = rp.ends[e] else {
            roles.push(EdgeRole::Kept);
            continue;
        };
        if k[a] == k[b] {
            roles.push(EdgeRole::Collapsed);
            continue;
        }
        let image = edge_map.get(&edge.id).unwrap_or(&edge.id);
        let ti = g.edge_index(image).map_err(|_| GraphError::Collapse(format!("edge {:?} has no image", edge.id)))?;
        let target = &g.edges[ti];
        if r.ends[ti] != Some((k[a], k[b])) || target.slope_or_zero(geo.dim()) != edge.slope_or_zero(geo.dim()) {
            return Err(GraphError::Collapse(format!("edge {:?} changes ends or slope under κ", edge.id)));
        }
        roles.push(EdgeRole::Kept);
    }
    Ok((k, roles))
}

/// `Cone(κ,v)`: the tangent cone of `P(v)^∨` along its face `P(κv)^∨`.
pub fn cone_kappa(geo: &Glued, p: usize, pk: usize) -> Result<Cone, GraphError> {
    let cell = geo.cell(p);
    let face = cell.find_face(geo.cell(pk)).ok_or_else(|| {
        GraphError::Collapse(format!(
            "dual cell of {} is not a face of that of {}",
            geo.decomp.id(pk),
            geo.decomp.id(p)
        ))
    })?;
    Ok(cell.tangent_cone(&face))
}

/// Relative weights for `Γ'` given the target polytope of each vertex and the role of each edge.
pub fn relative_cone(
    gp: &TropicalGraph,
    geo: &Glued,
    rp: &Resolved,
    target: &[usize],
    roles: &[EdgeRole],
) -> Result<RelativeWeights, GraphError> {
    let n = geo.dim();
    let nv = gp.vertices.len();
    let total = n * nv;
    let embed = |v: usize, row: &[Rational], sign: i64, into: &mut QVec| {
        for (k, x) in row.iter().enumerate() {
            into[v * n + k] += x * Rational::from_integer(sign.into());
        }
    };
    let mut ineqs: Vec<QVec> = Vec::new();
    let mut eqs: Vec<QVec> = Vec::new();
    for v in 0..nv {
        let c = cone_kappa(geo, rp.polytope[v], target[v])?;
        for f in c.facets() {
            let mut row = vec![Rational::zero(); total];
            embed(v, &crate::exactalg::rational::to_rationals(f), 1, &mut row);
            ineqs.push(row);
        }
        for f in c.equations() {
            let mut row = vec![Rational::zero(); total];
            embed(v, &crate::exactalg::rational::to_rationals(f), 1, &mut row);
            eqs.push(row);
        }
    }
    for (e, a, b) in gp.nodes(rp) {
        let edge = &gp.edges[e];
        if roles[e] == EdgeRole::Split {
            continue;
        }
        let d = paired_slope(geo, &edge.slope_or_zero(n));
        let rows: Vec<QVec> = if edge.has_zero_slope() {
            crate::exactalg::linalg::nullspace(&[], n)
        } else {
            perp_rows(&d)
        };
        for m in rows {
            let mut row = vec![Rational::zero(); total];
            embed(a, &m, 1, &mut row);
            embed(b, &m, -1, &mut row);
            eqs.push(row);
        }
        if roles[e] == EdgeRole::Collapsed && !edge.has_zero_slope() {
            let mut row = vec![Rational::zero(); total];
            embed(a, &d, 1, &mut row);
            embed(b, &d, -1, &mut row);
            ineqs.push(row);
        }
    }
    let cone = Cone::from_h(total, &ineqs, &eqs);
    Ok(RelativeWeights {
        vertex_ids: gp.vertices.iter().map(|v| v.id.clone()).collect(),
        block: n,
        dim: cone.dim(),
        cone,
    })
}

/// Relative weights of a collapse `κ: Γ' → Γ`.
pub fn relative_weight_cone(
    gp: &TropicalGraph,
    g: &TropicalGraph,
    geo: &Glued,
    kappa: &BTreeMap<String, String>,
) -> Result<RelativeWeights, GraphError> {
    let rp = gp.resolve(geo)?;
    let r = g.resolve(geo)?;
    let (k, roles) = check_collapse(gp, &rp, g, &r, geo, kappa, &BTreeMap::new())?;
    let target: Vec<usize> = k.iter().map(|&t| r.polytope[t]).collect();
    relative_cone(gp, geo, &rp, &target, &roles)
}
