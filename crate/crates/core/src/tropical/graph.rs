//! Tropical graphs: trees labelled by decomposition members with integer
//! edge slopes, plus structural validation.

use crate::polyhedral::{DecompError, Glued};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sort {
    Disk,
    #[default]
    Sphere,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeClass {
    #[default]
    InteriorNode,
    BoundaryNode,
    InteriorLeaf,
    BoundaryLeaf,
}

impl EdgeClass {
    pub fn is_node(self) -> bool {
        matches!(self, EdgeClass::InteriorNode | EdgeClass::BoundaryNode)
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, EdgeClass::BoundaryNode | EdgeClass::BoundaryLeaf)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthClass {
    Zero,
    Finite,
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub polytope: String,
    #[serde(default)]
    pub sort: Sort,
    /// First Chern vector in the lattice coordinates of `t_{P(v)}^∨`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chern: Option<Vec<i64>>,
    /// Horizontally constant: the Chern vector is zero.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub constant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    /// `[v+, v-]` for nodes, `[v]` for leaves.
    pub ends: Vec<String>,
    #[serde(default)]
    pub class: EdgeClass,
    /// Empty means zero.
    #[serde(default)]
    pub slope: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<LengthClass>,
}

impl Edge {
    pub fn slope_or_zero(&self, n: usize) -> Vec<i64> {
        if self.slope.is_empty() {
            vec![0; n]
        } else {
            self.slope.clone()
        }
    }

    pub fn has_zero_slope(&self) -> bool {
        self.slope.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marking {
    pub edge: String,
    #[serde(default = "one")]
    pub tangency: u32,
    /// Position in the ordering of interior markings; defaults to list order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u32>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub markings: Vec<Marking>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("edge {edge:?} of class {class:?} has {got} endpoints")]
    Ends { edge: String, class: EdgeClass, got: usize },
    #[error("edge {0:?} has the wrong slope dimension")]
    SlopeDimension(String),
    #[error("vertex {0:?} has neither a Chern vector nor the constant flag")]
    MissingChern(String),
    #[error("{0}")]
    Collapse(String),
    #[error("the weight set is empty")]
    EmptyWeights,
    #[error("invalid tropical graph: {}", .0.iter().map(|v| format!("{} ({}): {}", v.clause, v.item, v.message)).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Decomposition(#[from] DecompError),
}

/// One violated clause of the definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: String,
    pub item: String,
    pub message: String,
}

impl Violation {
    pub fn new(clause: &str, item: &str, message: impl Into<String>) -> Violation {
        Violation { clause: clause.into(), item: item.into(), message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Index-based view of a graph against a glued decomposition.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub polytope: Vec<usize>,
    /// `(plus, minus)` vertex indices for node edges.
    pub ends: Vec<Option<(usize, usize)>>,
    /// Attached vertex for leaves.
    pub leaf_vertex: Vec<Option<usize>>,
}

impl TropicalGraph {
    pub fn vertex_index(&self, id: &str) -> Result<usize, GraphError> {
        self.vertices.iter().position(|v| v.id == id).ok_or_else(|| GraphError::UnknownVertex(id.into()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize, GraphError> {
        self.edges.iter().position(|e| e.id == id).ok_or_else(|| GraphError::UnknownEdge(id.into()))
    }

    pub fn vertex(&self, id: &str) -> Result<&Vertex, GraphError> {
        Ok(&self.vertices[self.vertex_index(id)?])
    }

    pub fn edge(&self, id: &str) -> Result<&Edge, GraphError> {
        Ok(&self.edges[self.edge_index(id)?])
    }

    /// Resolves ids; fails on dangling references or malformed edges.
    pub fn resolve(&self, geo: &Glued) -> Result<Resolved, GraphError> {
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id.clone()) {
                return Err(GraphError::DuplicateId(v.id.clone()));
            }
        }
        let mut eids = BTreeSet::new();
        for e in &self.edges {
            if !eids.insert(e.id.clone()) {
                return Err(GraphError::DuplicateId(e.id.clone()));
            }
        }
        let n = geo.dim();
        let polytope = self
            .vertices
            .iter()
            .map(|v| geo.decomp.index(&v.polytope))
            .collect::<Result<Vec<_>, _>>()?;
        let mut ends = Vec::new();
        let mut leaf_vertex = Vec::new();
        for e in &self.edges {
            if !e.slope.is_empty() && e.slope.len() != n {
                return Err(GraphError::SlopeDimension(e.id.clone()));
            }
            let want = if e.class.is_node() { 2 } else { 1 };
            if e.ends.len() != want {
                return Err(GraphError::Ends { edge: e.id.clone(), class: e.class, got: e.ends.len() });
            }
            if e.class.is_node() {
                ends.push(Some((self.vertex_index(&e.ends[0])?, self.vertex_index(&e.ends[1])?)));
                leaf_vertex.push(None);
            } else {
                ends.push(None);
                leaf_vertex.push(Some(self.vertex_index(&e.ends[0])?));
            }
        }
        for m in &self.markings {
            self.edge_index(&m.edge)?;
        }
        if let Some(r) = &self.root {
            self.edge_index(r)?;
        }
        Ok(Resolved { polytope, ends, leaf_vertex })
    }

    /// Node edges as `(edge index, plus, minus)`.
    pub fn nodes(&self, r: &Resolved) -> Vec<(usize, usize, usize)> {
        r.ends.iter().enumerate().filter_map(|(i, e)| e.map(|(a, b)| (i, a, b))).collect()
    }

    /// Adjacency over node edges: `vertex -> [(edge, other)]`.
    pub fn adjacency(&self, r: &Resolved) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (e, a, b) in self.nodes(r) {
            adj[a].push((e, b));
            adj[b].push((e, a));
        }
        adj
    }

    pub fn is_tree(&self, r: &Resolved) -> bool {
        let nv = self.vertices.len();
        if nv == 0 {
            return false;
        }
        let adj = self.adjacency(r);
        let mut seen = vec![false; nv];
        let mut q = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = q.pop_front() {
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
        seen.iter().all(|&s| s) && self.nodes(r).len() + 1 == nv
    }

    /// Vertices on the far side of node edge `e` as seen from `from`.
    pub fn side(&self, r: &Resolved, e: usize, from: usize) -> BTreeSet<usize> {
        let (a, b) = r.ends[e].expect("node edge");
        let start = if a == from { b } else { a };
        let adj = self.adjacency(r);
        let mut seen = BTreeSet::from([start]);
        let mut q = VecDeque::from([start]);
        while let Some(v) = q.pop_front() {
            for &(f, w) in &adj[v] {
                if f != e && seen.insert(w) {
                    q.push_back(w);
                }
            }
        }
        seen
    }

    /// Vertex carrying the root leaf.
    pub fn root_vertex(&self, r: &Resolved) -> Option<usize> {
        let root = self.root.as_ref()?;
        let e = self.edge_index(root).ok()?;
        r.leaf_vertex[e]
    }

    /// Label of each marking, keyed by edge index.
    pub fn marking_labels(&self) -> BTreeMap<usize, u32> {
        self.markings
            .iter()
            .enumerate()
            .filter_map(|(i, m)| {
                let e = self.edge_index(&m.edge).ok()?;
                Some((e, m.label.unwrap_or(i as u32 + 1)))
            })
            .collect()
    }

    /// The structural clauses of the definition (weights are checked separately).
    /// Edges in `relaxed` skip the polytope and slope clauses.
    pub fn structural_violations(&self, geo: &Glued, r: &Resolved, relaxed: &BTreeSet<usize>) -> Vec<Violation> {
        let n = geo.dim();
        let d = &geo.decomp;
        let mut out = Vec::new();
        if !self.is_tree(r) {
            out.push(Violation::new("tree", "graph", "the node edges do not form a tree"));
        }
        let disks: Vec<usize> = (0..self.vertices.len()).filter(|&v| self.vertices[v].sort == Sort::Disk).collect();
        if !disks.is_empty() {
            let adj = self.adjacency(r);
            let mut seen = BTreeSet::from([disks[0]]);
            let mut q = VecDeque::from([disks[0]]);
            while let Some(v) = q.pop_front() {
                for &(_, w) in &adj[v] {
                    if self.vertices[w].sort == Sort::Disk && seen.insert(w) {
                        q.push_back(w);
                    }
                }
            }
            if seen.len() != disks.len() {
                out.push(Violation::new("boundary", "graph", "disk vertices do not form a connected subtree"));
            }
            for &v in &disks {
                let p = r.polytope[v];
                if d.polytope(p).affine_dim() != Some(n) || r.polytope[v] != r.polytope[disks[0]] {
                    out.push(Violation::new(
                        "boundary",
                        &self.vertices[v].id,
                        "disk vertices must all map to one top-dimensional polytope",
                    ));
                }
            }
        }
        match self.root_vertex(r) {
            Some(v) if self.vertices[v].sort == Sort::Disk => {}
            Some(v) if disks.is_empty() => {
                let _ = v;
            }
            Some(_) => out.push(Violation::new("boundary", "root", "the root leaf is not attached to a disk vertex")),
            None if self.root.is_some() => out.push(Violation::new("boundary", "root", "the root must be a leaf")),
            None => {}
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.class.is_boundary() && !e.has_zero_slope() {
                out.push(Violation::new("boundary", &e.id, "boundary edges must have zero slope"));
            }
            if e.class.is_boundary() {
                let ok = match r.ends[i] {
                    Some((a, b)) => self.vertices[a].sort == Sort::Disk && self.vertices[b].sort == Sort::Disk,
                    None => self.vertices[r.leaf_vertex[i].unwrap()].sort == Sort::Disk,
                };
                if !ok {
                    out.push(Violation::new("boundary", &e.id, "boundary edges must join disk vertices"));
                }
            }
            let Some((a, b)) = r.ends[i] else { continue };
            if relaxed.contains(&i) {
                continue;
            }
            let (pa, pb) = (r.polytope[a], r.polytope[b]);
            if e.has_zero_slope() {
                if pa != pb {
                    out.push(Violation::new("slope", &e.id, "a zero-slope edge must join equal polytopes"));
                }
                continue;
            }
            let meet = d.polytope(pa).intersection(d.polytope(pb));
            if meet.is_empty() {
                out.push(Violation::new("polytope map", &e.id, "P(v+) ∩ P(v-) is empty"));
                continue;
            }
            let pe = (0..d.len()).find(|&k| d.polytope(k).same_set(&meet));
            let Some(pe) = pe else {
                out.push(Violation::new("polytope map", &e.id, "P(v+) ∩ P(v-) is not a member"));
                continue;
            };
            if !d.is_face(pe, pa) || !d.is_face(pe, pb) {
                out.push(Violation::new("polytope map", &e.id, "P(e) is not a face of both ends"));
            }
            let slope = crate::exactalg::rational::rationals(&e.slope_or_zero(n));
            let tangent = d.polytope(pe).directions();
            if tangent.iter().any(|t| !crate::exactalg::rational::dot(t, &slope).is_zero()) {
                out.push(Violation::new("slope", &e.id, format!("slope {:?} is not in t_P(e)", e.slope)));
            }
        }
        for m in &self.markings {
            if m.tangency == 0 {
                out.push(Violation::new("marking", &m.edge, "tangency must be positive"));
            }
            if let Ok(i) = self.edge_index(&m.edge) {
                if self.edges[i].class != EdgeClass::InteriorLeaf {
                    out.push(Violation::new("marking", &m.edge, "markings sit on interior leaves"));
                }
            }
        }
        out
    }

    /// The member `P(e) = P(v+) ∩ P(v-)` of a node edge.
    pub fn edge_polytope(&self, geo: &Glued, r: &Resolved, e: usize) -> Option<usize> {
        let (a, b) = r.ends[e]?;
        let meet = geo.decomp.polytope(r.polytope[a]).intersection(geo.decomp.polytope(r.polytope[b]));
        (0..geo.decomp.len()).find(|&k| geo.decomp.polytope(k).same_set(&meet))
    }
}

use num_traits::Zero;
