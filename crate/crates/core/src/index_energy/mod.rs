//! Index bookkeeping for broken and split maps, toric Maslov indices,
//! intersection multiplicities at nodes, and the area/energy formulas.

mod energy;

pub use energy::*;

use crate::tropical::{EdgeClass, LengthClass, Sort, TropicalGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IndexError {
    #[error("no Maslov index for vertex {0:?}")]
    MissingMaslov(String),
    #[error("sphere vertex {vertex:?} has odd Maslov index {value}")]
    OddSphereMaslov { vertex: String, value: i64 },
    #[error("{got} Morse indices given, the graph has {expected} boundary ends")]
    MorseCount { expected: usize, got: usize },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("node multiplicities of edge {0:?} must be positive")]
    Multiplicity(String),
    #[error("pairing {pairing} of the slope with the facet normal is not positive")]
    Orientation { pairing: i64 },
    #[error("facet normal is not a primitive integer vector")]
    NotPrimitive,
    #[error("slope and normal have different dimensions")]
    Dimension,
}

/// Data for the expected dimension of a stratum of broken maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexInput {
    pub graph: TropicalGraph,
    /// `i(x₀), i(x₁), …, i(x_d)`: the root output first, then the boundary
    /// inputs.
    pub morse_indices: Vec<i64>,
    /// Maslov index `I(Γ_v)` per vertex id.
    pub maslov: BTreeMap<String, i64>,
    /// Intersection multiplicities `(μ₁,…,μ_k)` of a node with the divisors
    /// through it; defaults to the ℓ¹ norm of the slope.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub node_multiplicities: BTreeMap<String, Vec<i64>>,
}

/// `2 Σ μᵢ`, the Maslov index of a toric disk meeting the boundary divisors
/// with multiplicities `μᵢ`.
pub fn maslov_toric(multiplicities: &[u64]) -> u64 {
    2 * multiplicities.iter().sum::<u64>()
}

/// `(𝒯(e), ν_Q)` for the oriented side; it must be positive.
pub fn node_multiplicity(slope: &[i64], facet_normal: &[i64]) -> Result<u64, IndexError> {
    if slope.len() != facet_normal.len() {
        return Err(IndexError::Dimension);
    }
    let g = facet_normal.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    if g != 1 {
        return Err(IndexError::NotPrimitive);
    }
    let pairing: i64 = slope.iter().zip(facet_normal).map(|(a, b)| a * b).sum();
    if pairing <= 0 {
        return Err(IndexError::Orientation { pairing });
    }
    Ok(pairing as u64)
}

/// First Chern number after gluing two pieces at a node with the given
/// multiplicities.
pub fn chern_glue(c_plus: i64, c_minus: i64, multiplicities: &[i64]) -> i64 {
    c_plus + c_minus - 2 * multiplicities.iter().sum::<i64>()
}

/// The same relation for Maslov indices, `I = 2c₁`.
pub fn maslov_glue(i_plus: i64, i_minus: i64, multiplicities: &[i64]) -> i64 {
    2 * chern_glue(0, 0, multiplicities) + i_plus + i_minus
}

/// Term-by-term breakdown of the index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexTerms {
    pub morse: i64,
    pub boundary_inputs: usize,
    pub maslov_sum: i64,
    pub interior_nodes: usize,
    pub boundary_nodes_zero: usize,
    pub boundary_nodes_infinite: usize,
    pub tangency_excess: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluedVertex {
    pub vertices: Vec<String>,
    pub maslov: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub value: i64,
    pub terms: IndexTerms,
    /// Vertices of the unbroken type after gluing every nonzero-slope
    /// interior node.
    pub glued: Vec<GluedVertex>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl IndexInput {
    fn multiplicities(&self, e: usize) -> Vec<i64> {
        let edge = &self.graph.edges[e];
        self.node_multiplicities
            .get(&edge.id)
            .cloned()
            .unwrap_or_else(|| vec![edge.slope.iter().map(|x| x.abs()).sum()])
    }

    fn check(&self) -> Result<(), IndexError> {
        for v in &self.graph.vertices {
            let m = *self.maslov.get(&v.id).ok_or_else(|| IndexError::MissingMaslov(v.id.clone()))?;
            if v.sort == Sort::Sphere && m % 2 != 0 {
                return Err(IndexError::OddSphereMaslov { vertex: v.id.clone(), value: m });
            }
        }
        for e in &self.graph.edges {
            let want = if e.class.is_node() { 2 } else { 1 };
            if e.ends.len() != want {
                return Err(IndexError::UnknownEdge(e.id.clone()));
            }
            for end in &e.ends {
                self.graph.vertex_index(end).map_err(|_| IndexError::UnknownVertex(end.clone()))?;
            }
        }
        for id in self.maslov.keys() {
            self.graph.vertex_index(id).map_err(|_| IndexError::UnknownVertex(id.clone()))?;
        }
        for (id, mu) in &self.node_multiplicities {
            self.graph.edge_index(id).map_err(|_| IndexError::UnknownEdge(id.clone()))?;
            if mu.iter().any(|&m| m <= 0) {
                return Err(IndexError::Multiplicity(id.clone()));
            }
        }
        let expected = self.boundary_leaves() + 1;
        if self.morse_indices.len() != expected {
            return Err(IndexError::MorseCount { expected, got: self.morse_indices.len() });
        }
        Ok(())
    }

    /// `d(∘)`: boundary leaves other than the root.
    pub fn boundary_leaves(&self) -> usize {
        let root = self.graph.root.as_deref();
        self.graph
            .edges
            .iter()
            .filter(|e| e.class == EdgeClass::BoundaryLeaf && Some(e.id.as_str()) != root)
            .count()
    }

    /// Glues the interior nodes in `glue` (edge indices), combining Maslov
    /// indices across each glued node.
    fn glue(&self, glue: &BTreeSet<usize>) -> Vec<GluedVertex> {
        let g = &self.graph;
        let n = g.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        // Maslov correction carried by each class root.
        let mut correction = vec![0i64; n];
        let index = |id: &str| g.vertex_index(id).expect("checked");
        for &e in glue {
            let edge = &g.edges[e];
            let a = find(&mut parent, index(&edge.ends[0]));
            let b = find(&mut parent, index(&edge.ends[1]));
            let c = maslov_glue(0, 0, &self.multiplicities(e));
            if a != b {
                parent[b] = a;
                correction[a] += std::mem::take(&mut correction[b]);
            }
            correction[a] += c;
        }
        let mut groups: BTreeMap<usize, GluedVertex> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            let entry = groups.entry(r).or_insert_with(|| GluedVertex { vertices: Vec::new(), maslov: correction[r] });
            entry.vertices.push(g.vertices[v].id.clone());
            entry.maslov += self.maslov[&g.vertices[v].id];
        }
        let mut out: Vec<GluedVertex> = groups.into_values().collect();
        out.sort_by_key(|gv| index(&gv.vertices[0]));
        out
    }

    fn nonzero_interior_nodes(&self) -> BTreeSet<usize> {
        self.graph
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.class == EdgeClass::InteriorNode && !e.has_zero_slope())
            .map(|(i, _)| i)
            .collect()
    }

    /// The same data on the type obtained by gluing the listed interior
    /// nodes: glued vertices take the first member's id and polytope.
    pub fn glued_input(&self, edges: &[String]) -> Result<IndexInput, IndexError> {
        self.check()?;
        let mut set = BTreeSet::new();
        for id in edges {
            let e = self.graph.edge_index(id).map_err(|_| IndexError::UnknownEdge(id.clone()))?;
            if self.graph.edges[e].class != EdgeClass::InteriorNode {
                return Err(IndexError::UnknownEdge(id.clone()));
            }
            set.insert(e);
        }
        let glued = self.glue(&set);
        let mut rename = BTreeMap::new();
        let mut graph = self.graph.clone();
        let mut maslov = BTreeMap::new();
        graph.vertices.retain(|v| glued.iter().any(|gv| gv.vertices[0] == v.id));
        for gv in &glued {
            for v in &gv.vertices {
                rename.insert(v.clone(), gv.vertices[0].clone());
            }
            maslov.insert(gv.vertices[0].clone(), gv.maslov);
            let disk = gv.vertices.iter().any(|v| self.graph.vertex(v).map(|x| x.sort == Sort::Disk).unwrap_or(false));
            if disk {
                graph.vertices.iter_mut().find(|v| v.id == gv.vertices[0]).unwrap().sort = Sort::Disk;
            }
        }
        let removed: BTreeSet<String> = set.iter().map(|&e| self.graph.edges[e].id.clone()).collect();
        graph.edges.retain(|e| !removed.contains(&e.id));
        for e in graph.edges.iter_mut() {
            for end in e.ends.iter_mut() {
                *end = rename[end].clone();
            }
        }
        let mut node_multiplicities = self.node_multiplicities.clone();
        node_multiplicities.retain(|k, _| !removed.contains(k));
        Ok(IndexInput { graph, morse_indices: self.morse_indices.clone(), maslov, node_multiplicities })
    }

    /// `i(Γ, x)`, evaluated on the type obtained by gluing every interior
    /// node of nonzero slope.
    pub fn expected_dimension(&self) -> Result<IndexReport, IndexError> {
        self.check()?;
        let g = &self.graph;
        let glue = self.nonzero_interior_nodes();
        let glued = self.glue(&glue);
        let count = |f: &dyn Fn(&crate::tropical::Edge) -> bool| g.edges.iter().filter(|e| f(e)).count();
        let interior_nodes = count(&|e| e.class == EdgeClass::InteriorNode && e.has_zero_slope());
        let boundary_nodes_zero = count(&|e| e.class == EdgeClass::BoundaryNode && e.length == Some(LengthClass::Zero));
        let boundary_nodes_infinite =
            count(&|e| e.class == EdgeClass::BoundaryNode && e.length == Some(LengthClass::Infinite));
        let tangency_excess: i64 = g
            .markings
            .iter()
            .filter(|m| g.edge(&m.edge).map(|e| e.class == EdgeClass::InteriorLeaf).unwrap_or(false))
            .map(|m| m.tangency as i64 - 1)
            .sum();
        let morse = self.morse_indices[0] - self.morse_indices[1..].iter().sum::<i64>();
        let d = self.boundary_leaves();
        let maslov_sum: i64 = glued.iter().map(|v| v.maslov).sum();
        let value = morse + d as i64 - 2 + maslov_sum
            - 2 * interior_nodes as i64
            - boundary_nodes_zero as i64
            - boundary_nodes_infinite as i64
            - 2 * tangency_excess;
        Ok(IndexReport {
            value,
            terms: IndexTerms {
                morse,
                boundary_inputs: d,
                maslov_sum,
                interior_nodes,
                boundary_nodes_zero,
                boundary_nodes_infinite,
                tangency_excess,
            },
            glued,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitIndex {
    /// `i(Γ_{≠0})`, the index of the reduced split moduli space.
    pub split_index: i64,
    /// `ĩ_split`, before dividing by the tropical symmetry group.
    pub unreduced: i64,
    /// Refined edges glued to form `Γ_{≠0}`.
    pub glued_edges: Vec<String>,
}

/// Split index of a refined graph whose edges not in `base_edges` are glued
/// when their slope is nonzero.
pub fn split_index(
    inp: &IndexInput,
    base_edges: &BTreeSet<String>,
    split_edge_count: usize,
    dim_t: usize,
) -> Result<SplitIndex, IndexError> {
    let glued_edges: Vec<String> = inp
        .graph
        .edges
        .iter()
        .filter(|e| e.class == EdgeClass::InteriorNode && !e.has_zero_slope() && !base_edges.contains(&e.id))
        .map(|e| e.id.clone())
        .collect();
    let reduced = inp.glued_input(&glued_edges)?.expected_dimension()?.value;
    let extra = 2 * split_edge_count as i64 * (dim_t as i64 - 1);
    Ok(SplitIndex { split_index: reduced, unreduced: reduced + extra, glued_edges })
}
