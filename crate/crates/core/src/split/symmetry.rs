//! Rigidity, framed multiplicity and the symmetry groups of split types.

use super::weights::relative_of;
use super::{require_valid, Ctx, SplitError, SplitType};
use crate::exactalg::lattice::{torsion_order, LatticeMatrix};
use crate::polyhedral::Glued;
use crate::tropical::graph::{EdgeClass, LengthClass};
use crate::tropical::{is_rigid, symmetry_kernel, EdgeMode, Order, TorusKernel, TropicalGraph};
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::{BTreeSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitRigidity {
    pub rigid: bool,
    pub base_rigid: bool,
    /// Every zero-slope node edge of `Γ̃` is a boundary edge of finite length.
    pub zero_slope_edges_ok: bool,
    pub tangencies_one: bool,
    pub weight_dim: usize,
    pub expected_dim: usize,
}

pub fn split_rigid(s: &SplitType, geo: &Glued) -> Result<SplitRigidity, SplitError> {
    let ctx = require_valid(s, geo)?;
    let base_rigid = is_rigid(&s.base, geo)?;
    let zero_slope_edges_ok = s.refined.nodes(&ctx.rr).iter().all(|&(e, _, _)| {
        let edge = &s.refined.edges[e];
        !edge.has_zero_slope()
            || (edge.class == EdgeClass::BoundaryNode && edge.length == Some(LengthClass::Finite))
    });
    let tangencies_one = s.refined.markings.iter().all(|m| m.tangency == 1);
    let weight_dim = relative_of(&ctx)?.dim;
    let expected_dim = ctx.split.len() * (ctx.n() - 1);
    Ok(SplitRigidity {
        rigid: base_rigid && zero_slope_edges_ok && tangencies_one && weight_dim == expected_dim,
        base_rigid,
        zero_slope_edges_ok,
        tangencies_one,
        weight_dim,
        expected_dim,
    })
}

fn kernel(ctx: &Ctx, split_mode: EdgeMode, other: EdgeMode) -> TorusKernel {
    let split = ctx.split_set();
    symmetry_kernel(&ctx.s.refined, ctx.geo, &ctx.rr, |e| if split.contains(&e) { split_mode } else { other })
}

/// `|T_trop,fr(Γ̃)|`: framings on every node edge, split ones included.
pub fn framed_multiplicity(s: &SplitType, geo: &Glued) -> Result<BigInt, SplitError> {
    let ctx = require_valid(s, geo)?;
    kernel(&ctx, EdgeMode::Framed, EdgeMode::Framed).order().finite().cloned().ok_or(SplitError::InfiniteGroup)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSymmetry {
    pub vertices: Vec<String>,
    pub dim: usize,
    pub components: String,
}

/// `T_trop(Γ̃,Γ̄)` factor by factor over the components of `Γ̃ ∖ Edge_s`.
pub fn symmetry_splitting(s: &SplitType, geo: &Glued) -> Result<(Vec<ComponentSymmetry>, usize), SplitError> {
    let ctx = require_valid(s, geo)?;
    let g = &s.refined;
    let split = ctx.split_set();
    let adj = g.adjacency(&ctx.rr);
    let mut seen = vec![false; g.vertices.len()];
    let mut out = Vec::new();
    for start in 0..g.vertices.len() {
        if seen[start] {
            continue;
        }
        let mut comp = BTreeSet::from([start]);
        seen[start] = true;
        let mut q = VecDeque::from([start]);
        while let Some(v) = q.pop_front() {
            for &(e, w) in &adj[v] {
                if !split.contains(&e) && !seen[w] {
                    seen[w] = true;
                    comp.insert(w);
                    q.push_back(w);
                }
            }
        }
        let sub = TropicalGraph {
            vertices: comp.iter().map(|&v| g.vertices[v].clone()).collect(),
            edges: g
                .nodes(&ctx.rr)
                .into_iter()
                .filter(|&(e, a, b)| !split.contains(&e) && comp.contains(&a) && comp.contains(&b))
                .map(|(e, _, _)| g.edges[e].clone())
                .collect(),
            markings: Vec::new(),
            root: None,
        };
        let r = sub.resolve(geo)?;
        let k = symmetry_kernel(&sub, geo, &r, |_| EdgeMode::Framed);
        out.push(ComponentSymmetry {
            vertices: sub.vertices.iter().map(|v| v.id.clone()).collect(),
            dim: k.dim,
            components: k.components.to_string(),
        });
    }
    let total = kernel(&ctx, EdgeMode::Free, EdgeMode::Framed).dim;
    Ok((out, total))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactSequenceReport {
    /// `|T_trop,fr(Γ̃)|`.
    pub framed_order: Order,
    /// `|Z_fr|`, from the split slopes alone.
    pub z_fr_order: Order,
    /// `ker ev = im f`: symmetries whose split-edge differences lie in `T_{𝒯(e)}`.
    pub kernel_order: Order,
    pub split_group_dim: usize,
    pub kernel_dim: usize,
    /// `|Edge_s|(dim t − 1)`, the dimension of the target of `ev`.
    pub target_dim: usize,
    pub ev_onto: bool,
    pub consistent: bool,
}

/// Checks `0 → Z_fr → T_trop,fr → T_trop → Π T/T_{𝒯(e)} → 0` numerically.
pub fn exact_sequence_check(s: &SplitType, geo: &Glued) -> Result<ExactSequenceReport, SplitError> {
    let ctx = require_valid(s, geo)?;
    let n = ctx.n();
    let framed = kernel(&ctx, EdgeMode::Framed, EdgeMode::Framed);
    let ker_ev = kernel(&ctx, EdgeMode::Unframed, EdgeMode::Framed);
    let split_group = kernel(&ctx, EdgeMode::Free, EdgeMode::Framed);
    // z ∈ (C^*) with z^{𝒯(e)} = 1, one block per split edge.
    let mut z_fr = BigInt::from(1);
    for &e in &ctx.split {
        let col: Vec<Vec<i64>> = s.refined.edges[e].slope.iter().map(|&x| vec![x]).collect();
        z_fr *= torsion_order(&LatticeMatrix::from_rows(&col));
    }
    let target_dim = ctx.split.len() * (n - 1);
    let ev_onto = split_group.dim >= ker_ev.dim && split_group.dim - ker_ev.dim == target_dim;
    let consistent = match (framed.order(), ker_ev.order()) {
        (Order::Finite(f), Order::Finite(k)) => f == &z_fr * k,
        (Order::Infinite, Order::Infinite) => true,
        _ => false,
    };
    Ok(ExactSequenceReport {
        framed_order: framed.order(),
        z_fr_order: Order::Finite(z_fr),
        kernel_order: ker_ev.order(),
        split_group_dim: split_group.dim,
        kernel_dim: ker_ev.dim,
        target_dim,
        ev_onto,
        consistent,
    })
}
