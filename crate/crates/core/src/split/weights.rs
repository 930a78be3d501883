//! Relative and unsigned relative weights of a quasi-split graph and the
//! discrepancy map `Diff` on the split edges.

use super::{require_valid, Ctx, SplitError, SplitType};
use crate::exactalg::lattice::serialize_int_rows;
use crate::exactalg::linalg::{nullspace, orthogonal_complement, rank};
use crate::exactalg::rational::{primitive_integer_vector, to_rationals, Rational};
use crate::polyhedral::{fourier_motzkin, Cone, Glued};
use crate::tropical::collapse::relative_cone;
use crate::tropical::weights::{paired_slope, perp_rows};
use crate::tropical::{EdgeRole, RelativeWeights};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

type QVec = Vec<Rational>;

/// `𝒲(Γ̃,Γ̄)`: weights in `Cone(κ,v)`, signed slope condition on collapsed
/// edges, unsigned on surviving non-split edges, none on split edges.
pub fn relative_weights(s: &SplitType, geo: &Glued) -> Result<RelativeWeights, SplitError> {
    let ctx = require_valid(s, geo)?;
    relative_of(&ctx)
}

pub(crate) fn relative_of(ctx: &Ctx) -> Result<RelativeWeights, SplitError> {
    Ok(relative_cone(&ctx.s.refined, ctx.geo, &ctx.rr, &ctx.targets(), &ctx.roles)?)
}

/// Coordinates on `t^∨/⟨𝒯(e)⟩` for each split edge: integer rows vanishing on `𝒯(e)`.
pub(crate) fn quotient_rows(ctx: &Ctx) -> Vec<Vec<QVec>> {
    ctx.split
        .iter()
        .map(|&e| perp_rows(&paired_slope(ctx.geo, &ctx.s.refined.edges[e].slope)))
        .collect()
}

/// The linear map `Diff` from `⊕_v t^∨` to `⊕_{split} t^∨/⟨𝒯(e)⟩`.
pub fn diff_matrix(s: &SplitType, geo: &Glued) -> Result<Vec<QVec>, SplitError> {
    let ctx = Ctx::new(s, geo)?;
    Ok(diff_of(&ctx))
}

pub(crate) fn diff_of(ctx: &Ctx) -> Vec<QVec> {
    let n = ctx.n();
    let total = n * ctx.s.refined.vertices.len();
    let mut rows = Vec::new();
    for (&e, m) in ctx.split.iter().zip(quotient_rows(ctx)) {
        let (a, b) = ctx.ends(e);
        for r in m {
            let mut row = vec![Rational::zero(); total];
            for k in 0..n {
                row[a * n + k] += &r[k];
                row[b * n + k] -= &r[k];
            }
            rows.push(row);
        }
    }
    rows
}

#[derive(Clone, Debug, Serialize)]
pub struct UnsignedWeights {
    pub vertex_ids: Vec<String>,
    pub block: usize,
    #[serde(serialize_with = "serialize_int_rows")]
    pub basis: Vec<Vec<BigInt>>,
    pub dim: usize,
    /// The span is cut out by rational equations, so rational points are dense.
    pub rational: bool,
}

/// Linear equations of `𝒲^±`, optionally with `Diff_f = 0` for the split
/// edges `f` listed in `kill`.
fn unsigned_equations(ctx: &Ctx, kill: &[usize]) -> Vec<QVec> {
    let n = ctx.n();
    let g = &ctx.s.refined;
    let nv = g.vertices.len();
    let total = n * nv;
    let mut eqs = Vec::new();
    for (v, &p) in ctx.rr.polytope.iter().enumerate() {
        let dirs = ctx.geo.cell(p).directions();
        for c in orthogonal_complement(&dirs, n) {
            let mut row = vec![Rational::zero(); total];
            row[v * n..(v + 1) * n].clone_from_slice(&c);
            eqs.push(row);
        }
    }
    for (e, a, b) in g.nodes(&ctx.rr) {
        if ctx.roles[e] == EdgeRole::Split {
            continue;
        }
        let edge = &g.edges[e];
        let rows = if edge.has_zero_slope() { identity(n) } else { perp_rows(&paired_slope(ctx.geo, &edge.slope)) };
        for r in rows {
            let mut row = vec![Rational::zero(); total];
            for k in 0..n {
                row[a * n + k] += &r[k];
                row[b * n + k] -= &r[k];
            }
            eqs.push(row);
        }
    }
    let diff = diff_of(ctx);
    let per = n.saturating_sub(1);
    for &f in kill {
        eqs.extend(diff[f * per..(f + 1) * per].iter().cloned());
    }
    eqs
}

fn identity(n: usize) -> Vec<QVec> {
    (0..n)
        .map(|i| {
            let mut r = vec![Rational::zero(); n];
            r[i] = Rational::one();
            r
        })
        .collect()
}

pub fn unsigned_relative_weights(s: &SplitType, geo: &Glued) -> Result<UnsignedWeights, SplitError> {
    let ctx = require_valid(s, geo)?;
    Ok(unsigned_of(&ctx))
}

pub(crate) fn unsigned_of(ctx: &Ctx) -> UnsignedWeights {
    let n = ctx.n();
    let total = n * ctx.s.refined.vertices.len();
    let basis: Vec<Vec<BigInt>> =
        nullspace(&unsigned_equations(ctx, &[]), total).iter().map(|v| primitive_integer_vector(v)).collect();
    UnsignedWeights {
        vertex_ids: ctx.s.refined.vertices.iter().map(|v| v.id.clone()).collect(),
        block: n,
        dim: basis.len(),
        basis,
        rational: true,
    }
}

/// `Diff_e(𝒲^±_e)` inside `t^∨/⟨𝒯(e)⟩` for the `i`-th split edge, as a spanning set.
pub(crate) fn diff_image_of_we(ctx: &Ctx, i: usize) -> Vec<QVec> {
    let n = ctx.n();
    let total = n * ctx.s.refined.vertices.len();
    let kill: Vec<usize> = (0..ctx.split.len()).filter(|&f| f != i).collect();
    let w = nullspace(&unsigned_equations(ctx, &kill), total);
    let diff = diff_of(ctx);
    let per = n - 1;
    let rows = &diff[i * per..(i + 1) * per];
    w.iter().map(|x| rows.iter().map(|r| crate::exactalg::rational::dot(r, x)).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyCone {
    /// Split edges (base ids) in coordinate order, each with `dim t − 1` coordinates.
    pub edges: Vec<String>,
    /// Rows giving the coordinates on `t^∨/⟨𝒯(e)⟩`, per split edge.
    pub coordinates: Vec<Vec<Vec<i64>>>,
    pub cone: Cone,
    pub dim: usize,
    /// `|Edge_s|(dim t − 1)`.
    pub expected_dim: usize,
}

pub fn discrepancy_cone(s: &SplitType, geo: &Glued) -> Result<DiscrepancyCone, SplitError> {
    let ctx = require_valid(s, geo)?;
    discrepancy_of(&ctx)
}

pub(crate) fn discrepancy_of(ctx: &Ctx) -> Result<DiscrepancyCone, SplitError> {
    use num_traits::ToPrimitive;
    let w = relative_of(ctx)?;
    let diff = diff_of(ctx);
    let target = diff.len();
    let cone = w.cone.image(&diff, target);
    let coordinates = quotient_rows(ctx)
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(|x| x.to_integer().to_i64().expect("small")).collect()).collect())
        .collect();
    Ok(DiscrepancyCone {
        edges: ctx.s.split_edges.clone(),
        coordinates,
        dim: cone.dim(),
        expected_dim: target,
        cone,
    })
}

/// The same cone by Fourier–Motzkin elimination of the weight variables
/// from `{(T, y) : T ∈ 𝒲, y = Diff T}`.
pub fn discrepancy_cone_fm(s: &SplitType, geo: &Glued) -> Result<Cone, SplitError> {
    let ctx = require_valid(s, geo)?;
    let w = relative_of(&ctx)?;
    let diff = diff_of(&ctx);
    let nt = w.cone.ambient();
    let ny = diff.len();
    let lift = |row: &[BigInt]| -> QVec {
        let mut r = to_rationals(row);
        r.resize(nt + ny, Rational::zero());
        r
    };
    let ineqs: Vec<QVec> = w.cone.facets().iter().map(|f| lift(f)).collect();
    let mut eqs: Vec<QVec> = w.cone.equations().iter().map(|f| lift(f)).collect();
    for (j, d) in diff.iter().enumerate() {
        let mut r: QVec = d.iter().map(|x| -x).collect();
        r.resize(nt + ny, Rational::zero());
        r[nt + j] = Rational::one();
        eqs.push(r);
    }
    let keep: Vec<usize> = (nt..nt + ny).collect();
    Ok(fourier_motzkin(nt + ny, &ineqs, &eqs, &keep).to_cone())
}

pub(crate) fn span_rank(vs: &[QVec]) -> usize {
    if vs.is_empty() {
        0
    } else {
        rank(vs)
    }
}
