//! `ℤ_g`-graded curved A∞ algebras given by sparse structure maps on
//! generators, and checks of their defining relations.

use super::novikov::{Novikov, Term};
use crate::exactalg::rational::{serde_q, Rational};
use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("grading modulus {0} must be a positive even integer")]
    Modulus(i64),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("map entry of arity {d} lists {got} inputs")]
    Arity { d: usize, got: usize },
    #[error("map entry {0} is given twice")]
    DuplicateEntry(String),
    #[error("entry {inputs} ↦ {output} breaks degree homogeneity")]
    Inhomogeneous { inputs: String, output: String },
    #[error("entry of arity {d} exceeds the declared maximal arity {max}")]
    BeyondMaxArity { d: usize, max: usize },
    #[error("arity {needed} is needed but maps are only known up to arity {max}")]
    MissingArity { needed: usize, max: usize },
    #[error("no {0} generator is designated")]
    Undesignated(&'static str),
    #[error("element component {0:?} has even degree")]
    EvenComponent(String),
    #[error("element component {0:?} does not have positive valuation")]
    NonPositiveValuation(String),
    #[error("structure maps have negative exponents, so the series does not truncate")]
    NegativeExponent,
    #[error("curved morphisms (a nonzero zeroth component) are not supported")]
    CurvedMorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputTerm {
    pub gen: String,
    #[serde(with = "serde_q")]
    pub coeff: Rational,
    #[serde(with = "serde_q", default = "Rational::zero")]
    pub exp: Rational,
}

/// `m_d(inputs) = Σ coeff q^exp gen`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub d: usize,
    pub inputs: Vec<String>,
    pub output: Vec<OutputTerm>,
}

fn default_modulus() -> i64 {
    2
}

/// The JSON form of an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    #[serde(default = "default_modulus")]
    pub g: i64,
    #[serde(with = "serde_q")]
    pub cutoff: Rational,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub maps: Vec<MapEntry>,
    /// Arities above this are unknown; defaults to the largest listed arity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_arity: Option<usize>,
    /// Every unlisted map, at any arity, is zero.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub higher_vanish: bool,
    /// Strict unit candidate `x^◻`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    /// `x^▨`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weighted: Option<String>,
    /// `x^■`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximum: Option<String>,
}

/// A vector of the algebra: generator index to coefficient.
pub type Vector = BTreeMap<usize, Novikov>;

pub(crate) fn add_into(acc: &mut Vector, v: &Vector, scale: &Novikov) {
    for (g, c) in v {
        let term = c.mul_unchecked(scale);
        if term.is_zero() {
            continue;
        }
        let slot = acc.entry(*g).or_insert_with(|| Novikov::zero(c.cutoff().clone()));
        *slot = slot.add_unchecked(&term);
        if slot.is_zero() {
            acc.remove(g);
        }
    }
}

pub(crate) fn basis(g: usize, cutoff: &Rational) -> Vector {
    BTreeMap::from([(g, Novikov::one(cutoff.clone()))])
}

/// Sparse multilinear maps indexed by arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Multilinear {
    pub maps: Vec<BTreeMap<Vec<usize>, Vector>>,
    /// `None` when all unlisted arities vanish.
    pub limit: Option<usize>,
    pub cutoff: Rational,
}

impl Multilinear {
    pub fn known(&self, d: usize) -> Result<(), AlgebraError> {
        match self.limit {
            Some(max) if d > max => Err(AlgebraError::MissingArity { needed: d, max }),
            _ => Ok(()),
        }
    }

    pub fn entries(&self, d: usize) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.maps.get(d).into_iter().flat_map(|m| m.iter())
    }

    pub fn apply(&self, d: usize, args: &[Vector]) -> Result<Vector, AlgebraError> {
        debug_assert_eq!(args.len(), d);
        let mut out = Vector::new();
        if args.iter().any(|a| a.is_empty()) {
            return Ok(out);
        }
        self.known(d)?;
        for (key, value) in self.entries(d) {
            let mut coeff = Novikov::one(self.cutoff.clone());
            for (a, g) in args.iter().zip(key) {
                match a.get(g) {
                    Some(c) => coeff = coeff.mul_unchecked(c),
                    None => {
                        coeff = Novikov::zero(self.cutoff.clone());
                        break;
                    }
                }
            }
            if !coeff.is_zero() {
                add_into(&mut out, value, &coeff);
            }
        }
        Ok(out)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.maps.iter().flat_map(|m| m.values()).flat_map(|v| v.values()).any(|c| c.valuation().is_some_and(|v| v.is_negative()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInftyData {
    pub g: i64,
    pub cutoff: Rational,
    pub generators: Vec<Generator>,
    index: BTreeMap<String, usize>,
    pub(crate) maps: Multilinear,
    pub unit: Option<usize>,
    pub weighted: Option<usize>,
    pub maximum: Option<usize>,
}

pub(crate) fn index_of(index: &BTreeMap<String, usize>, name: &str) -> Result<usize, AlgebraError> {
    index.get(name).copied().ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
}

pub(crate) fn parse_output(
    index: &BTreeMap<String, usize>,
    output: &[OutputTerm],
    cutoff: &Rational,
) -> Result<Vector, AlgebraError> {
    let mut v = Vector::new();
    for t in output {
        let g = index_of(index, &t.gen)?;
        add_into(&mut v, &basis(g, cutoff), &Novikov::monomial(t.coeff.clone(), t.exp.clone(), cutoff.clone()));
    }
    Ok(v)
}

/// Parses entries into sparse maps, checking that each output has degree
/// `Σ|inputs| + shift(d)` mod `g`.
pub(crate) fn parse_maps(
    entries: &[MapEntry],
    source: &BTreeMap<String, usize>,
    source_degrees: &[i64],
    target: &BTreeMap<String, usize>,
    target_degrees: &[i64],
    g: i64,
    shift: impl Fn(usize) -> i64,
    cutoff: &Rational,
) -> Result<Vec<BTreeMap<Vec<usize>, Vector>>, AlgebraError> {
    let mut maps: Vec<BTreeMap<Vec<usize>, Vector>> = Vec::new();
    for e in entries {
        if e.inputs.len() != e.d {
            return Err(AlgebraError::Arity { d: e.d, got: e.inputs.len() });
        }
        let key: Vec<usize> = e.inputs.iter().map(|n| index_of(source, n)).collect::<Result<_, _>>()?;
        let value = parse_output(target, &e.output, cutoff)?;
        let want = (key.iter().map(|&i| source_degrees[i]).sum::<i64>() + shift(e.d)).rem_euclid(g);
        for &out in value.keys() {
            if target_degrees[out].rem_euclid(g) != want {
                let name = target.iter().find(|(_, &i)| i == out).map(|(n, _)| n.clone()).unwrap_or_default();
                return Err(AlgebraError::Inhomogeneous { inputs: format!("m_{}({})", e.d, e.inputs.join(",")), output: name });
            }
        }
        if maps.len() <= e.d {
            maps.resize(e.d + 1, BTreeMap::new());
        }
        if maps[e.d].insert(key, value).is_some() {
            return Err(AlgebraError::DuplicateEntry(format!("m_{}({})", e.d, e.inputs.join(","))));
        }
    }
    Ok(maps)
}

pub(crate) fn generator_index(gens: &[Generator]) -> Result<BTreeMap<String, usize>, AlgebraError> {
    let mut index = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        if index.insert(g.name.clone(), i).is_some() {
            return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
        }
    }
    Ok(index)
}

pub(crate) fn resolve_limit(max_arity: Option<usize>, higher_vanish: bool, listed: usize) -> Result<Option<usize>, AlgebraError> {
    if higher_vanish {
        return Ok(None);
    }
    match max_arity {
        Some(max) if listed > max => Err(AlgebraError::BeyondMaxArity { d: listed, max }),
        Some(max) => Ok(Some(max)),
        None => Ok(Some(listed)),
    }
}

impl AInftyData {
    pub fn new(spec: &AlgebraSpec) -> Result<AInftyData, AlgebraError> {
        if spec.g <= 0 || spec.g % 2 != 0 {
            return Err(AlgebraError::Modulus(spec.g));
        }
        let index = generator_index(&spec.generators)?;
        let degrees: Vec<i64> = spec.generators.iter().map(|g| g.degree).collect();
        let maps = parse_maps(&spec.maps, &index, &degrees, &index, &degrees, spec.g, |d| 2 - d as i64, &spec.cutoff)?;
        let listed = maps.iter().rposition(|m| !m.is_empty()).unwrap_or(0);
        let limit = resolve_limit(spec.max_arity, spec.higher_vanish, listed)?;
        let pick = |n: &Option<String>| n.as_ref().map(|n| index_of(&index, n)).transpose();
        Ok(AInftyData {
            g: spec.g,
            cutoff: spec.cutoff.clone(),
            generators: spec.generators.clone(),
            unit: pick(&spec.unit)?,
            weighted: pick(&spec.weighted)?,
            maximum: pick(&spec.maximum)?,
            index,
            maps: Multilinear { maps, limit, cutoff: spec.cutoff.clone() },
        })
    }

    pub fn generator(&self, name: &str) -> Result<usize, AlgebraError> {
        index_of(&self.index, name)
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.generators[g].degree.rem_euclid(self.g)
    }

    pub fn name(&self, g: usize) -> &str {
        &self.generators[g].name
    }

    /// Largest arity with known maps; `None` if every arity is known.
    pub fn max_arity(&self) -> Option<usize> {
        self.maps.limit
    }

    pub fn basis(&self, g: usize) -> Vector {
        basis(g, &self.cutoff)
    }

    pub fn vector(&self, named: &BTreeMap<String, Novikov>) -> Result<Vector, AlgebraError> {
        let mut v = Vector::new();
        for (n, c) in named {
            add_into(&mut v, &self.basis(self.generator(n)?), &c.with_cutoff(&self.cutoff));
        }
        Ok(v)
    }

    pub fn named(&self, v: &Vector) -> BTreeMap<String, Novikov> {
        v.iter().map(|(g, c)| (self.name(*g).to_string(), c.clone())).collect()
    }

    /// `m_d` applied to vectors.
    pub fn m(&self, d: usize, args: &[Vector]) -> Result<Vector, AlgebraError> {
        self.maps.apply(d, args)
    }

    pub fn m_on(&self, inputs: &[usize]) -> Result<Vector, AlgebraError> {
        let args: Vec<Vector> = inputs.iter().map(|&g| self.basis(g)).collect();
        self.m(inputs.len(), &args)
    }

    pub fn curvature(&self) -> Result<Vector, AlgebraError> {
        self.m(0, &[])
    }

    fn sign(&self, prefix: &[usize]) -> bool {
        (prefix.len() as i64 + prefix.iter().map(|&g| self.degree(g)).sum::<i64>()) % 2 != 0
    }

    /// Left side of the arity-`d` associativity relation on generators.
    pub fn associativity_residual(&self, inputs: &[usize]) -> Result<Vector, AlgebraError> {
        let d = inputs.len();
        let mut total = Vector::new();
        let one = Novikov::one(self.cutoff.clone());
        let minus = one.neg();
        for k in 0..=d {
            for j in 0..=(d - k) {
                let inner = self.m_on(&inputs[j..j + k])?;
                if inner.is_empty() {
                    continue;
                }
                let mut args: Vec<Vector> = inputs[..j].iter().map(|&g| self.basis(g)).collect();
                args.push(inner);
                args.extend(inputs[j + k..].iter().map(|&g| self.basis(g)));
                let outer = self.m(d - k + 1, &args)?;
                add_into(&mut total, &outer, if self.sign(&inputs[..j]) { &minus } else { &one });
            }
        }
        Ok(total)
    }

    pub fn check_associativity(&self, up_to_d: usize) -> Result<RelationReport, AlgebraError> {
        let mut report = RelationReport::default();
        for d in 0..=up_to_d {
            for tuple in tuples(self.generators.len(), d) {
                let r = self.associativity_residual(&tuple)?;
                report.record(d, tuple.iter().map(|&g| self.name(g).to_string()).collect(), self.named(&r));
            }
        }
        report.pass = report.failures.is_empty();
        Ok(report)
    }

    fn unit_index(&self) -> Result<usize, AlgebraError> {
        self.unit.ok_or(AlgebraError::Undesignated("unit"))
    }

    pub fn check_strict_unit(&self, e: usize) -> Result<UnitReport, AlgebraError> {
        let fail = |inputs: Vec<usize>, message: String| UnitReport {
            pass: false,
            counterexample: Some(UnitFailure {
                inputs: inputs.iter().map(|&g| self.name(g).to_string()).collect(),
                message,
            }),
        };
        for a in 0..self.generators.len() {
            let left = self.m_on(&[e, a])?;
            if left != self.basis(a) {
                return Ok(fail(vec![e, a], "m_2(e,a) differs from a".into()));
            }
            let mut right = self.m_on(&[a, e])?;
            if self.degree(a) % 2 != 0 {
                right = right.into_iter().map(|(g, c)| (g, c.neg())).collect();
            }
            if right != self.basis(a) {
                return Ok(fail(vec![a, e], "(-1)^|a| m_2(a,e) differs from a".into()));
            }
        }
        // Explicit entries are the only nonzero values, so scanning them
        // covers every tuple containing `e`.
        for d in (1..self.maps.maps.len()).filter(|&d| d != 2) {
            for (key, value) in self.maps.entries(d) {
                if key.contains(&e) && !value.is_empty() {
                    return Ok(fail(key.clone(), format!("m_{d} does not vanish with e inserted")));
                }
            }
        }
        Ok(UnitReport { pass: true, counterexample: None })
    }

    /// `m₁(x^▨) ≡ x^◻ − x^■` modulo `Λ_{>0}`.
    pub fn check_homotopy_unit_leading(&self) -> Result<HomotopyUnitReport, AlgebraError> {
        let unit = self.unit_index()?;
        let w = self.weighted.ok_or(AlgebraError::Undesignated("weighted"))?;
        let max = self.maximum.ok_or(AlgebraError::Undesignated("maximum"))?;
        let mut residual = self.m_on(&[w])?;
        let one = Novikov::one(self.cutoff.clone());
        add_into(&mut residual, &self.basis(unit), &one.neg());
        add_into(&mut residual, &self.basis(max), &one);
        let leading: Vector =
            residual.iter().map(|(g, c)| (*g, c.nonpositive_part())).filter(|(_, c)| !c.is_zero()).collect();
        Ok(HomotopyUnitReport { pass: leading.is_empty(), exact: residual.is_empty(), residual: self.named(&residual) })
    }

    /// `Σ_d m_d(b,…,b)` up to the cutoff, split into its unit component and
    /// the rest.
    pub fn mc_residual(&self, b: &BTreeMap<String, Novikov>) -> Result<McReport, AlgebraError> {
        let unit = self.unit_index()?;
        let b = self.vector(b)?;
        let mut valuation: Option<Rational> = None;
        for (g, c) in &b {
            if self.degree(*g) % 2 == 0 {
                return Err(AlgebraError::EvenComponent(self.name(*g).to_string()));
            }
            match c.valuation() {
                Some(v) if v.is_positive() => {
                    if valuation.as_ref().is_none_or(|w| v < w) {
                        valuation = Some(v.clone());
                    }
                }
                _ => return Err(AlgebraError::NonPositiveValuation(self.name(*g).to_string())),
            }
        }
        if self.maps.has_negative_exponents() {
            return Err(AlgebraError::NegativeExponent);
        }
        let mut total = Vector::new();
        let one = Novikov::one(self.cutoff.clone());
        let mut d = 0usize;
        loop {
            // Terms of m_d(b,…,b) have exponent at least d·val(b).
            if let Some(v) = &valuation {
                if d > 0 && Rational::from_integer(d.into()) * v >= self.cutoff {
                    break;
                }
            } else if d > 0 {
                break;
            }
            let args = vec![b.clone(); d];
            add_into(&mut total, &self.m(d, &args)?, &one);
            d += 1;
        }
        let potential = total.remove(&unit).unwrap_or_else(|| Novikov::zero(self.cutoff.clone()));
        Ok(McReport { solution: total.is_empty(), potential, residual: self.named(&total), arities_used: d })
    }

    pub fn to_spec(&self) -> AlgebraSpec {
        let mut maps = Vec::new();
        for (d, m) in self.maps.maps.iter().enumerate() {
            for (key, value) in m {
                maps.push(MapEntry {
                    d,
                    inputs: key.iter().map(|&g| self.name(g).to_string()).collect(),
                    output: value
                        .iter()
                        .flat_map(|(g, c)| {
                            c.terms().iter().map(move |Term { coeff, exp }| OutputTerm {
                                gen: self.name(*g).to_string(),
                                coeff: coeff.clone(),
                                exp: exp.clone(),
                            })
                        })
                        .collect(),
                });
            }
        }
        let name = |g: Option<usize>| g.map(|g| self.name(g).to_string());
        AlgebraSpec {
            g: self.g,
            cutoff: self.cutoff.clone(),
            generators: self.generators.clone(),
            maps,
            max_arity: self.maps.limit,
            higher_vanish: self.maps.limit.is_none(),
            unit: name(self.unit),
            weighted: name(self.weighted),
            maximum: name(self.maximum),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub d: usize,
    pub inputs: Vec<String>,
    pub residual: BTreeMap<String, Novikov>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub pass: bool,
    /// Number of input tuples checked per arity.
    pub checked: BTreeMap<usize, usize>,
    /// At most [`RelationReport::MAX_FAILURES`] failures, in checking order.
    pub failures: Vec<RelationFailure>,
    pub failure_count: usize,
}

impl RelationReport {
    pub const MAX_FAILURES: usize = 20;

    pub(crate) fn record(&mut self, d: usize, inputs: Vec<String>, residual: BTreeMap<String, Novikov>) {
        *self.checked.entry(d).or_insert(0) += 1;
        if !residual.is_empty() {
            self.failure_count += 1;
            if self.failures.len() < Self::MAX_FAILURES {
                self.failures.push(RelationFailure { d, inputs, residual });
            }
        }
    }

    /// Smallest arity with a failing relation.
    pub fn first_failing_arity(&self) -> Option<usize> {
        self.failures.iter().map(|f| f.d).min()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitFailure {
    pub inputs: Vec<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitReport {
    pub pass: bool,
    pub counterexample: Option<UnitFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyUnitReport {
    pub pass: bool,
    /// No higher-order terms at all.
    pub exact: bool,
    pub residual: BTreeMap<String, Novikov>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McReport {
    pub solution: bool,
    /// Coefficient of the unit.
    pub potential: Novikov,
    pub residual: BTreeMap<String, Novikov>,
    /// Arities `0..arities_used` contributed below the cutoff.
    pub arities_used: usize,
}

/// All `d`-tuples of generator indices, including the empty tuple.
pub(crate) fn tuples(n: usize, d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    std::iter::repeat(0..n).take(d).multi_cartesian_product().collect()
}

/// Human form `(c) x + (c') y`.
pub fn describe(v: &BTreeMap<String, Novikov>) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter().map(|(g, c)| format!("({c}) {g}")).join(" + ")
}
