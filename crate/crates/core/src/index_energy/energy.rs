//! Fiber area, the Hofer bound and divisor counts. Areas carry `2π` as a
//! symbolic unit so everything stays rational.

use crate::exactalg::rational::Rational;
use crate::polyhedral::Polytope;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnergyError {
    #[error("constant c_{index} = {value} is not positive; the reduction point must be interior")]
    NonPositiveConstant { index: usize, value: String },
    #[error("intersection {point} lists {got} multiplicities for {expected} divisors")]
    Shape { point: usize, expected: usize, got: usize },
    #[error("k·area = {0} is not a nonnegative integer")]
    NotIntegral(String),
    #[error("degree must be positive")]
    Degree,
    #[error("the dual polytope is unbounded")]
    Unbounded,
}

/// `a + b·2π`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Area {
    #[serde(with = "crate::exactalg::rational::serde_q")]
    pub rational: Rational,
    #[serde(with = "crate::exactalg::rational::serde_q")]
    pub two_pi: Rational,
}

impl fmt::Display for Area {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::exactalg::rational::display_rational as q;
        match (self.rational.is_zero(), self.two_pi.is_zero()) {
            (_, true) => write!(f, "{}", q(&self.rational)),
            (true, false) => write!(f, "2π·{}", q(&self.two_pi)),
            (false, false) => write!(f, "{} + 2π·{}", q(&self.rational), q(&self.two_pi)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyInput {
    /// `c_j` in `P^∨ = {⟨μ_j, x⟩ ≤ c_j}`.
    #[serde(with = "crate::exactalg::rational::serde_q::vec")]
    pub constants: Vec<Rational>,
    /// `ω_P(π∘u)`.
    #[serde(with = "crate::exactalg::rational::serde_q")]
    pub horizontal: Rational,
    /// `m(z_i, D_j)`, one row per intersection point.
    pub multiplicities: Vec<Vec<u64>>,
    /// Constant of the Hofer bound; defaults to `max c_j`.
    #[serde(default, with = "crate::exactalg::rational::serde_q::opt")]
    pub hofer_constant: Option<Rational>,
}

impl EnergyInput {
    /// Constants `c_j` read off the facets of a dual polytope written as
    /// `normal·x ≥ constant`, i.e. `c_j = -constant`.
    pub fn constants_of(dual: &Polytope) -> Result<Vec<Rational>, EnergyError> {
        if !dual.is_bounded() {
            return Err(EnergyError::Unbounded);
        }
        let hs = dual.halfspaces();
        Ok(dual.facet_halfspaces().into_iter().map(|i| -hs[i].constant.clone()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberArea {
    pub area: Area,
    /// Horizontal area plus `c Σ|𝒯(z_i)|`.
    pub hofer_bound: Area,
    pub intersections: u64,
}

pub fn fiber_area(inp: &EnergyInput) -> Result<FiberArea, EnergyError> {
    for (index, c) in inp.constants.iter().enumerate() {
        if !c.is_positive() {
            return Err(EnergyError::NonPositiveConstant { index, value: c.to_string() });
        }
    }
    let mut vertical = Rational::zero();
    let mut total = 0u64;
    for (point, row) in inp.multiplicities.iter().enumerate() {
        if row.len() != inp.constants.len() {
            return Err(EnergyError::Shape { point, expected: inp.constants.len(), got: row.len() });
        }
        for (c, &m) in inp.constants.iter().zip(row) {
            vertical += c * Rational::from_integer(m.into());
            total += m;
        }
    }
    let c = match &inp.hofer_constant {
        Some(c) => c.clone(),
        None => inp.constants.iter().max().cloned().unwrap_or_else(Rational::zero),
    };
    Ok(FiberArea {
        area: Area { rational: inp.horizontal.clone(), two_pi: vertical },
        hofer_bound: Area { rational: inp.horizontal.clone() + c * Rational::from_integer(total.into()), two_pi: Rational::zero() },
        intersections: total,
    })
}

/// `#u⁻¹(D) = k ∫u*ω` when `[D]^∨ = k[ω]`.
pub fn divisor_count(degree_k: u64, area: &Rational) -> Result<u64, EnergyError> {
    use num_traits::ToPrimitive;
    if degree_k == 0 {
        return Err(EnergyError::Degree);
    }
    let v = area * Rational::from_integer(degree_k.into());
    if !v.is_integer() || v.is_negative() {
        return Err(EnergyError::NotIntegral(v.to_string()));
    }
    v.to_integer().to_u64().ok_or_else(|| EnergyError::NotIntegral(v.to_string()))
}
