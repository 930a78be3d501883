//! The cone condition: does `(c_e π_e(η₀))_e` enter the discrepancy cone for
//! every sufficiently increasing tuple `c`?
//!
//! Each defining functional of the discrepancy cone becomes `Σ α_i c_i` after
//! substitution. Ordering the `c_i` by `≺` and putting `c_i = t^{k−i+1}`, the
//! sign for large `t` is the sign of the first nonzero `α_i`.

use super::order::order_split_edges;
use super::weights::{diff_image_of_we, diff_of, discrepancy_of, quotient_rows, relative_of, span_rank};
use super::{require_valid, Ctx, SplitError, SplitType};
use crate::exactalg::linalg::{mat_vec, nullspace, orthogonal_complement};
use crate::exactalg::lp::{LinearProgram, Relation};
use crate::exactalg::rational::{abs, dot, from_big, serde_q, to_rationals, Rational};
use crate::exactalg::subspace::RationalSubspace;
use crate::polyhedral::{Cone, Glued};
use crate::tropical::weights::paired_slope;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

type QVec = Vec<Rational>;

/// Subspaces of `t^∨` that a cone direction must avoid, with a description.
pub fn genericity_subspaces(s: &SplitType, geo: &Glued) -> Result<Vec<(String, RationalSubspace)>, SplitError> {
    let ctx = require_valid(s, geo)?;
    genericity_of(&ctx)
}

fn genericity_of(ctx: &Ctx) -> Result<Vec<(String, RationalSubspace)>, SplitError> {
    let n = ctx.n();
    let mut out = Vec::new();
    let rows = quotient_rows(ctx);
    for (i, (&e, id)) in ctx.split.iter().zip(&ctx.s.split_edges).enumerate() {
        let d = paired_slope(ctx.geo, &ctx.s.refined.edges[e].slope);
        out.push((format!("the line of 𝒯({id})"), RationalSubspace::span(n, &[d])));
        let image = diff_image_of_we(ctx, i);
        if span_rank(&image) < n - 1 {
            let normals = orthogonal_complement(&crate::exactalg::linalg::independent_subset(&image), n - 1);
            let pulled: Vec<QVec> = normals
                .iter()
                .map(|nrm| (0..n).map(|k| rows[i].iter().zip(nrm).map(|(r, c)| &r[k] * c).sum()).collect())
                .collect();
            out.push((
                format!("the preimage of the proper subspace Diff_{id}(𝒲^±_{id})"),
                RationalSubspace::span(n, &nullspace(&pulled, n)),
            ));
        }
    }
    let cone = discrepancy_of(ctx)?.cone;
    let per = n - 1;
    for f in cone.facets() {
        let fq = to_rationals(f);
        for (i, id) in ctx.s.split_edges.iter().enumerate() {
            let block = &fq[i * per..(i + 1) * per];
            let pulled: QVec = (0..n).map(|k| rows[i].iter().zip(block).map(|(r, c)| &r[k] * c).sum()).collect();
            if pulled.iter().any(|x| !x.is_zero()) {
                out.push((format!("a wall of the discrepancy cone along {id}"), RationalSubspace::span(n, &nullspace(&[pulled], n))));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionalKind {
    Equation,
    Inequality,
}

/// A defining functional of the discrepancy cone after substitution.
#[derive(Clone, Debug, Serialize)]
pub struct Functional {
    pub kind: FunctionalKind,
    /// `α_i`, indexed by `≺` position.
    #[serde(with = "serde_q::vec")]
    pub coefficients: QVec,
    pub leading: Option<usize>,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeCondition {
    pub holds: bool,
    pub order: Vec<String>,
    /// `π_e(η₀)` per split edge, in `≺` order.
    pub projected_direction: Vec<Vec<String>>,
    pub cone_dim: usize,
    pub expected_dim: usize,
    pub functionals: Vec<Functional>,
    /// An increasing tuple `c` (in `≺` order) with `(c_e π_e(η₀))` in the cone.
    #[serde(with = "serde_q::opt_vec")]
    pub witness: Option<QVec>,
    pub obstruction: Option<String>,
}

pub fn cone_condition(s: &SplitType, geo: &Glued) -> Result<ConeCondition, SplitError> {
    let ctx = require_valid(s, geo)?;
    if let Some((reason, subspace)) =
        genericity_of(&ctx)?.into_iter().find(|(_, sub)| sub.contains(&s.cone_direction))
    {
        return Err(SplitError::NonGeneric { reason, subspace });
    }
    let order = order_split_edges(s, geo)?.order;
    let disc = discrepancy_of(&ctx)?;
    let n = ctx.n();
    let per = n - 1;
    let rows = quotient_rows(&ctx);
    let k = ctx.split.len();
    // Coordinate index of the edge at each order position.
    let slot: Vec<usize> = order.iter().map(|id| s.split_edges.iter().position(|e| e == id).unwrap()).collect();
    let p: Vec<QVec> = rows.iter().map(|m| mat_vec(m, &s.cone_direction)).collect();
    let alphas = |f: &[BigInt]| -> QVec {
        let fq = to_rationals(f);
        slot.iter().map(|&i| dot(&fq[i * per..(i + 1) * per], &p[i])).collect()
    };
    let mut functionals = Vec::new();
    let mut obstruction = None;
    for e in disc.cone.equations() {
        let a = alphas(e);
        let leading = a.iter().position(|x| !x.is_zero());
        if leading.is_some() && obstruction.is_none() {
            obstruction = Some(format!(
                "the equation {} of the discrepancy cone does not vanish on the cone direction",
                crate::exactalg::rational::display_vec(&to_rationals(e))
            ));
        }
        functionals.push(Functional { kind: FunctionalKind::Equation, satisfied: leading.is_none(), coefficients: a, leading });
    }
    let mut base = BigInt::from(2);
    for f in disc.cone.facets() {
        let a = alphas(f);
        let leading = a.iter().position(|x| !x.is_zero());
        let satisfied = match leading {
            Some(i) => a[i].is_positive(),
            None => true,
        };
        if let Some(i) = leading {
            if satisfied {
                let tail: Rational = a[i + 1..].iter().map(abs).sum();
                let need = (tail / &a[i]).floor().to_integer() + BigInt::one();
                base = base.max(need);
            } else if obstruction.is_none() {
                obstruction = Some(format!(
                    "the inequality {} of the discrepancy cone has negative leading coefficient at {}",
                    crate::exactalg::rational::display_vec(&to_rationals(f)),
                    order[i]
                ));
            }
        }
        functionals.push(Functional { kind: FunctionalKind::Inequality, satisfied, coefficients: a, leading });
    }
    let holds = obstruction.is_none();
    let witness = if holds {
        let b = from_big(&base);
        let c: QVec = (0..k).map(|i| num_traits::pow(b.clone(), k - i)).collect();
        let y = tuple_point(&slot, &c, &p, per);
        assert!(disc.cone.contains(&y), "witness tuple must lie in the discrepancy cone");
        Some(c)
    } else {
        None
    };
    Ok(ConeCondition {
        holds,
        projected_direction: slot
            .iter()
            .map(|&i| p[i].iter().map(crate::exactalg::rational::format_rational).collect())
            .collect(),
        order,
        cone_dim: disc.dim,
        expected_dim: disc.expected_dim,
        functionals,
        witness,
        obstruction,
    })
}

/// `(c_e π_e(η₀))_e` in coordinate order, from `c` in `≺` order.
fn tuple_point(slot: &[usize], c: &[Rational], p: &[QVec], per: usize) -> QVec {
    let mut y = vec![Rational::zero(); slot.len() * per];
    for (pos, &i) in slot.iter().enumerate() {
        for j in 0..per {
            y[i * per + j] = &c[pos] * &p[i][j];
        }
    }
    y
}

/// Exact LP: is `y = Diff(T)` for some relative weight `T`?
pub fn in_discrepancy_cone(s: &SplitType, geo: &Glued, y: &[Rational]) -> Result<bool, SplitError> {
    let ctx = require_valid(s, geo)?;
    let w = relative_of(&ctx)?;
    Ok(lp_member(&w.cone, &diff_of(&ctx), y))
}

fn lp_member(w: &Cone, diff: &[QVec], y: &[Rational]) -> bool {
    let nt = w.ambient();
    let mut lp = LinearProgram::new(nt);
    for f in w.facets() {
        lp.constrain(to_rationals(f), Relation::Ge, Rational::zero());
    }
    for e in w.equations() {
        lp.constrain(to_rationals(e), Relation::Eq, Rational::zero());
    }
    for (row, target) in diff.iter().zip(y) {
        lp.constrain(row.clone(), Relation::Eq, target.clone());
    }
    lp.feasible_point().is_some()
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongConeReport {
    pub samples: usize,
    pub members: usize,
    /// First few tuples (in `≺` order) that fell outside.
    pub failures: Vec<Vec<String>>,
}

impl StrongConeReport {
    pub fn all_inside(&self) -> bool {
        self.members == self.samples
    }
}

/// Samples increasing tuples with consecutive ratios `10³` or `10⁶` and tests
/// membership of `(c_e π_e(η₀))_e` by exact LP on the weight system.
pub fn strong_cone_check(s: &SplitType, geo: &Glued, samples: usize, seed: u64) -> Result<StrongConeReport, SplitError> {
    let ctx = require_valid(s, geo)?;
    let order = order_split_edges(s, geo)?.order;
    let slot: Vec<usize> = order.iter().map(|id| s.split_edges.iter().position(|e| e == id).unwrap()).collect();
    let per = ctx.n() - 1;
    let p: Vec<QVec> = quotient_rows(&ctx).iter().map(|m| mat_vec(m, &s.cone_direction)).collect();
    let w = relative_of(&ctx)?;
    let diff = diff_of(&ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = slot.len();
    let mut members = 0;
    let mut failures = Vec::new();
    for _ in 0..samples {
        let mut c = vec![Rational::zero(); k];
        if k > 0 {
            c[k - 1] = Rational::from_integer(BigInt::from(rng.gen_range(1..=1000u32)));
            for i in (0..k - 1).rev() {
                let ratio: i64 = if rng.gen_bool(0.5) { 1_000 } else { 1_000_000 };
                c[i] = &c[i + 1] * Rational::from_integer(BigInt::from(ratio));
            }
        }
        let y = tuple_point(&slot, &c, &p, per);
        if lp_member(&w.cone, &diff, &y) {
            members += 1;
        } else if failures.len() < 5 {
            failures.push(c.iter().map(|x| x.to_integer().to_string()).collect());
        }
    }
    Ok(StrongConeReport { samples, members, failures })
}
