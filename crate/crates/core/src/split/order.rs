//! Ordering split edges by the least marking in the subtree they cut off.

use super::{Ctx, SplitError, SplitType};
use crate::polyhedral::Glued;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderKey {
    pub edge: String,
    /// Least marking label in the subtree away from the root.
    pub least_marking: Option<u32>,
    /// Edges between the subtree's top vertex and that marking.
    pub distance: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitOrder {
    /// Base edge ids, `≺`-smallest first.
    pub order: Vec<String>,
    pub keys: Vec<OrderKey>,
    /// Adjacent pairs decided only by edge id.
    pub ties: Vec<(String, String)>,
}

impl SplitOrder {
    pub fn position(&self, edge: &str) -> Option<usize> {
        self.order.iter().position(|e| e == edge)
    }
}

fn distances(adj: &[Vec<(usize, usize)>], from: usize) -> Vec<Option<usize>> {
    let mut d = vec![None; adj.len()];
    d[from] = Some(0);
    let mut q = VecDeque::from([from]);
    while let Some(v) = q.pop_front() {
        for &(_, w) in &adj[v] {
            if d[w].is_none() {
                d[w] = Some(d[v].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    d
}

/// `e ≺ f` when the least marking below `e` is smaller, or, for nested
/// subtrees sharing it, when that marking is closer to the node of `e`.
pub fn order_split_edges(s: &SplitType, geo: &Glued) -> Result<SplitOrder, SplitError> {
    let ctx = Ctx::new(s, geo)?;
    let g = &s.refined;
    let root = g.root_vertex(&ctx.rr).ok_or(SplitError::NoRoot)?;
    let adj = g.adjacency(&ctx.rr);
    let labels = g.marking_labels();
    // Vertex carrying each marking.
    let marked: BTreeMap<usize, u32> = labels
        .iter()
        .filter_map(|(&e, &l)| ctx.rr.leaf_vertex[e].map(|v| (v, l)))
        .fold(BTreeMap::new(), |mut m, (v, l)| {
            let entry = m.entry(v).or_insert(l);
            *entry = (*entry).min(l);
            m
        });
    let mut keys = Vec::new();
    for (&e, id) in ctx.split.iter().zip(&s.split_edges) {
        let (a, b) = ctx.ends(e);
        let beyond_a = g.side(&ctx.rr, e, b);
        let (top, subtree): (usize, BTreeSet<usize>) =
            if beyond_a.contains(&root) { (b, g.side(&ctx.rr, e, a)) } else { (a, beyond_a) };
        let least = subtree.iter().filter_map(|v| marked.get(v).map(|&l| (l, *v))).min();
        let distance = least.map(|(_, v)| {
            let d = distances(&adj, top);
            d[v].expect("subtree is connected")
        });
        keys.push(OrderKey { edge: id.clone(), least_marking: least.map(|(l, _)| l), distance });
    }
    let sort_key = |k: &OrderKey| (k.least_marking.is_none(), k.least_marking, k.distance, k.edge.clone());
    keys.sort_by_key(sort_key);
    let ties = keys
        .windows(2)
        .filter(|w| w[0].least_marking == w[1].least_marking && w[0].distance == w[1].distance)
        .map(|w| (w[0].edge.clone(), w[1].edge.clone()))
        .collect();
    Ok(SplitOrder { order: keys.iter().map(|k| k.edge.clone()).collect(), keys, ties })
}
