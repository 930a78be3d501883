//! A∞ morphisms `ℱ = (ℱ^d)` between two algebras and their relations.

use super::algebra::*;
use super::novikov::Novikov;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub source: AlgebraSpec,
    pub target: AlgebraSpec,
    /// `ℱ^d(inputs)`, inputs named in the source and outputs in the target.
    pub maps: Vec<MapEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_arity: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub higher_vanish: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("source and target use different cutoffs or gradings")]
    Incompatible,
}

#[derive(Clone, Debug)]
pub struct MorphismData {
    pub source: AInftyData,
    pub target: AInftyData,
    f: Multilinear,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub relations: RelationReport,
    /// Present when both algebras designate a unit.
    pub unital: Option<UnitReport>,
}

/// Ordered ways of writing `d` as a sum of positive parts.
fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for mut rest in compositions(d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl MorphismData {
    pub fn new(spec: &MorphismSpec) -> Result<MorphismData, MorphismError> {
        let source = AInftyData::new(&spec.source)?;
        let target = AInftyData::new(&spec.target)?;
        if source.cutoff != target.cutoff || source.g != target.g {
            return Err(MorphismError::Incompatible);
        }
        let si = generator_index(&source.generators)?;
        let ti = generator_index(&target.generators)?;
        let sd: Vec<i64> = source.generators.iter().map(|g| g.degree).collect();
        let td: Vec<i64> = target.generators.iter().map(|g| g.degree).collect();
        let maps = parse_maps(&spec.maps, &si, &sd, &ti, &td, source.g, |d| 1 - d as i64, &source.cutoff)?;
        if maps.first().is_some_and(|m0| m0.values().any(|v| !v.is_empty())) {
            return Err(AlgebraError::CurvedMorphism.into());
        }
        let listed = maps.iter().rposition(|m| !m.is_empty()).unwrap_or(0);
        let limit = resolve_limit(spec.max_arity, spec.higher_vanish, listed)?;
        let f = Multilinear { maps, limit, cutoff: source.cutoff.clone() };
        Ok(MorphismData { source, target, f })
    }

    pub fn apply(&self, d: usize, args: &[Vector]) -> Result<Vector, AlgebraError> {
        if d == 0 {
            return Ok(Vector::new());
        }
        self.f.apply(d, args)
    }

    fn sign(&self, prefix: &[usize]) -> bool {
        (prefix.len() as i64 + prefix.iter().map(|&g| self.source.degree(g)).sum::<i64>()) % 2 != 0
    }

    /// Left minus right side of the arity-`d` morphism relation.
    pub fn residual(&self, a: &[usize]) -> Result<Vector, AlgebraError> {
        let d = a.len();
        let cutoff = &self.source.cutoff;
        let one = Novikov::one(cutoff.clone());
        let minus = one.neg();
        let mut total = Vector::new();
        for j in 0..=d {
            for i in 0..=(d - j) {
                let inner = self.source.m_on(&a[i..i + j])?;
                if inner.is_empty() {
                    continue;
                }
                let mut args: Vec<Vector> = a[..i].iter().map(|&g| self.source.basis(g)).collect();
                args.push(inner);
                args.extend(a[i + j..].iter().map(|&g| self.source.basis(g)));
                let v = self.apply(d - j + 1, &args)?;
                add_into(&mut total, &v, if self.sign(&a[..i]) { &minus } else { &one });
            }
        }
        for parts in compositions(d) {
            let mut args = Vec::with_capacity(parts.len());
            let mut start = 0;
            for &p in &parts {
                let inputs: Vec<Vector> = a[start..start + p].iter().map(|&g| self.source.basis(g)).collect();
                args.push(self.apply(p, &inputs)?);
                start += p;
            }
            if args.iter().any(|v| v.is_empty()) {
                continue;
            }
            let v = self.target.m(parts.len(), &args)?;
            add_into(&mut total, &v, &minus);
        }
        Ok(total)
    }

    pub fn check(&self, up_to_d: usize) -> Result<MorphismReport, AlgebraError> {
        let mut relations = RelationReport::default();
        for d in 0..=up_to_d {
            for tuple in tuples(self.source.generators.len(), d) {
                let r = self.residual(&tuple)?;
                let names = tuple.iter().map(|&g| self.source.name(g).to_string()).collect();
                relations.record(d, names, self.target.named(&r));
            }
        }
        relations.pass = relations.failures.is_empty();
        let unital = match (self.source.unit, self.target.unit) {
            (Some(e0), Some(e1)) => Some(self.check_unital(e0, e1)?),
            _ => None,
        };
        Ok(MorphismReport { relations, unital })
    }

    fn check_unital(&self, e0: usize, e1: usize) -> Result<UnitReport, AlgebraError> {
        let name = |g: usize| self.source.name(g).to_string();
        if self.apply(1, &[self.source.basis(e0)])? != self.target.basis(e1) {
            return Ok(UnitReport {
                pass: false,
                counterexample: Some(UnitFailure { inputs: vec![name(e0)], message: "F^1(e_0) differs from e_1".into() }),
            });
        }
        for d in 2..self.f.maps.len() {
            for (key, value) in self.f.entries(d) {
                if key.contains(&e0) && !value.is_empty() {
                    return Ok(UnitReport {
                        pass: false,
                        counterexample: Some(UnitFailure {
                            inputs: key.iter().map(|&g| name(g)).collect(),
                            message: format!("F^{d} does not vanish with e_0 inserted"),
                        }),
                    });
                }
            }
        }
        Ok(UnitReport { pass: true, counterexample: None })
    }
}
