//! Tropical symmetry groups as kernels of torus homomorphisms.
//!
//! A symmetry is `g_v ∈ T_{P(v)}` per vertex, optionally with `z_e ∈ C^*`
//! per edge, subject to `g_{v₊} g_{v₋}^{-1} = z_e^{𝒯(e)}`. Writing `g_v` in an
//! integral basis of `t_{P(v)}` turns the equations into an integer matrix `A`;
//! the solution group is `Hom(Z^N / rowspan A, C^*)`, so its dimension is
//! `N - rank A` and its component group has order `Π dᵢ` over the Smith
//! invariant factors.

use super::graph::{GraphError, Resolved, TropicalGraph};
use super::weights::{difference_span, require_valid, weight_cone};
use crate::exactalg::lattice::{annihilator, primitive_part_i64, smith_normal_form, LatticeMatrix};
use crate::polyhedral::Glued;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// Order of a group: a positive integer or infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => crate::exactalg::lattice::big_to_json(n).serialize(s),
            Order::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// How one node edge enters the equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeMode {
    /// `g₊ g₋^{-1} = z_e^{𝒯(e)}` with a free `z_e`.
    Framed,
    /// `g₊ g₋^{-1}` lies in the one-parameter subgroup of `𝒯(e)`.
    Unframed,
    /// No condition.
    Free,
}

/// The solution group of a system of character equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusKernel {
    pub unknowns: usize,
    pub dim: usize,
    /// Order of the component group.
    pub components: BigInt,
    /// `(vertex or edge id, width)` for each block of columns.
    pub columns: Vec<(String, usize)>,
}

impl TorusKernel {
    pub fn from_matrix(a: &LatticeMatrix, columns: Vec<(String, usize)>) -> TorusKernel {
        let unknowns = a.cols();
        let snf = smith_normal_form(a);
        let components: BigInt = snf.invariant_factors().iter().product();
        TorusKernel { unknowns, dim: unknowns - snf.rank(), components, columns }
    }

    pub fn order(&self) -> Order {
        if self.dim == 0 {
            Order::Finite(self.components.clone())
        } else {
            Order::Infinite
        }
    }
}

/// Builds the equation matrix with `mode(e)` deciding each node edge.
/// Zero-slope node edges always force `g₊ = g₋`.
pub fn symmetry_kernel(
    g: &TropicalGraph,
    geo: &Glued,
    r: &Resolved,
    mode: impl Fn(usize) -> EdgeMode,
) -> TorusKernel {
    let n = geo.dim();
    let bases: Vec<Vec<Vec<BigInt>>> = r.polytope.iter().map(|&p| geo.decomp.annihilator_basis(p)).collect();
    let mut columns: Vec<(String, usize)> = Vec::new();
    let mut offset = Vec::new();
    let mut total = 0;
    for (v, b) in bases.iter().enumerate() {
        offset.push(total);
        columns.push((g.vertices[v].id.clone(), b.len()));
        total += b.len();
    }
    let nodes = g.nodes(r);
    let mut zcol: BTreeMap<usize, usize> = BTreeMap::new();
    for &(e, _, _) in &nodes {
        if !g.edges[e].has_zero_slope() && mode(e) == EdgeMode::Framed {
            zcol.insert(e, total);
            columns.push((g.edges[e].id.clone(), 1));
            total += 1;
        }
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &(e, a, b) in &nodes {
        let edge = &g.edges[e];
        let m = if edge.has_zero_slope() { EdgeMode::Framed } else { mode(e) };
        // Characters χ tested on g₊ g₋^{-1}; for framed edges every coordinate.
        let chars: Vec<Vec<BigInt>> = match m {
            EdgeMode::Free => continue,
            EdgeMode::Framed => LatticeMatrix::identity(n).row_vecs(),
            EdgeMode::Unframed => {
                let s: Vec<BigInt> = edge.slope.iter().map(|&x| BigInt::from(x)).collect();
                annihilator(&LatticeMatrix::from_big_rows(&[s], n)).row_vecs()
            }
        };
        for (k, chi) in chars.iter().enumerate() {
            let mut row = vec![BigInt::zero(); total];
            for (j, bj) in bases[a].iter().enumerate() {
                row[offset[a] + j] += pair_int(chi, bj);
            }
            for (j, bj) in bases[b].iter().enumerate() {
                row[offset[b] + j] -= pair_int(chi, bj);
            }
            if let Some(&z) = zcol.get(&e) {
                row[z] -= BigInt::from(edge.slope[k]);
            }
            rows.push(row);
        }
    }
    TorusKernel::from_matrix(&LatticeMatrix::from_big_rows(&rows, total), columns)
}

fn pair_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryInfo {
    /// Complex dimension of the identity component.
    pub dim_identity_component: usize,
    /// Number of connected components of `T_trop(Γ)`.
    pub component_count: Order,
    /// `n_e`, the divisibility of `𝒯(e)`, for nonzero-slope node edges.
    pub framing_orders: BTreeMap<String, i64>,
    /// Order of the framed group (with the `z_e`), infinite unless rigid.
    pub framed_order: Order,
    /// Dimension of the span of weight differences, computed independently.
    pub weight_dim: usize,
}

impl SymmetryInfo {
    pub fn framing_product(&self) -> BigInt {
        self.framing_orders.values().map(|&n| BigInt::from(n)).product()
    }
}

pub fn framing_orders(g: &TropicalGraph, r: &Resolved) -> BTreeMap<String, i64> {
    g.nodes(r)
        .into_iter()
        .filter_map(|(e, _, _)| {
            let edge = &g.edges[e];
            primitive_part_i64(&edge.slope).ok().map(|(_, n)| (edge.id.clone(), n))
        })
        .collect()
}

pub fn symmetry_group(g: &TropicalGraph, geo: &Glued) -> Result<SymmetryInfo, GraphError> {
    let r = require_valid(g, geo)?;
    let unframed = symmetry_kernel(g, geo, &r, |_| EdgeMode::Unframed);
    let framed = symmetry_kernel(g, geo, &r, |_| EdgeMode::Framed);
    let w = weight_cone(g, geo)?;
    Ok(SymmetryInfo {
        dim_identity_component: unframed.dim,
        component_count: Order::Finite(unframed.components),
        framing_orders: framing_orders(g, &r),
        framed_order: framed.order(),
        weight_dim: difference_span(&w).len(),
    })
}

/// Rigid iff the symmetry group is finite.
pub fn is_rigid(g: &TropicalGraph, geo: &Glued) -> Result<bool, GraphError> {
    Ok(symmetry_group(g, geo)?.dim_identity_component == 0)
}
