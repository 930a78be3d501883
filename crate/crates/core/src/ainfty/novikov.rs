//! Truncated Novikov series `Σ cᵢ q^{αᵢ}` with rational coefficients and
//! exponents, kept modulo `q^E` for a cutoff `E`.

use crate::exactalg::rational::{display_rational, serde_q, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NovikovError {
    #[error("cutoffs differ: {0} and {1}")]
    CutoffMismatch(String, String),
    #[error("cannot raise the cutoff from {from} to {to} by truncation")]
    RaiseCutoff { from: String, to: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "serde_q")]
    pub coeff: Rational,
    #[serde(with = "serde_q")]
    pub exp: Rational,
}

/// Exponents strictly increase, all lie below the cutoff, and no
/// coefficient is zero. Truncation is exact on `Λ_{≥0}`; products of
/// elements with negative exponents lose the terms pushed in from above
/// the cutoff.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Novikov {
    terms: Vec<Term>,
    #[serde(with = "serde_q")]
    cutoff: Rational,
}

#[derive(Deserialize)]
struct RawNovikov {
    terms: Vec<Term>,
    #[serde(with = "serde_q")]
    cutoff: Rational,
}

impl<'de> Deserialize<'de> for Novikov {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawNovikov::deserialize(d)?;
        Ok(Novikov::from_terms(raw.terms.into_iter().map(|t| (t.coeff, t.exp)), raw.cutoff))
    }
}

impl Novikov {
    pub fn zero(cutoff: Rational) -> Novikov {
        Novikov { terms: Vec::new(), cutoff }
    }

    pub fn monomial(coeff: Rational, exp: Rational, cutoff: Rational) -> Novikov {
        Novikov::from_terms([(coeff, exp)], cutoff)
    }

    pub fn constant(coeff: Rational, cutoff: Rational) -> Novikov {
        Novikov::monomial(coeff, Rational::zero(), cutoff)
    }

    pub fn one(cutoff: Rational) -> Novikov {
        Novikov::constant(Rational::one(), cutoff)
    }

    /// Collects `(coefficient, exponent)` pairs into canonical form.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Rational)>, cutoff: Rational) -> Novikov {
        let mut map: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (c, e) in terms {
            if e < cutoff {
                *map.entry(e).or_insert_with(Rational::zero) += c;
            }
        }
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(exp, coeff)| Term { coeff, exp }).collect();
        Novikov { terms, cutoff }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least exponent; `None` stands for `+∞`.
    pub fn valuation(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.exp)
    }

    pub fn coefficient(&self, exp: &Rational) -> Rational {
        self.terms.iter().find(|t| &t.exp == exp).map(|t| t.coeff.clone()).unwrap_or_else(Rational::zero)
    }

    /// The part with exponents `<= 0`, the reduction modulo `Λ_{>0}`.
    pub fn nonpositive_part(&self) -> Novikov {
        Novikov::from_terms(
            self.terms.iter().filter(|t| !t.exp.is_positive()).map(|t| (t.coeff.clone(), t.exp.clone())),
            self.cutoff.clone(),
        )
    }

    fn same_cutoff(&self, other: &Novikov) -> Result<(), NovikovError> {
        if self.cutoff == other.cutoff {
            Ok(())
        } else {
            Err(NovikovError::CutoffMismatch(display_rational(&self.cutoff), display_rational(&other.cutoff)))
        }
    }

    pub fn add(&self, other: &Novikov) -> Result<Novikov, NovikovError> {
        self.same_cutoff(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Novikov) -> Result<Novikov, NovikovError> {
        self.same_cutoff(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &Novikov) -> Result<Novikov, NovikovError> {
        self.same_cutoff(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Novikov) -> Novikov {
        let all = self.terms.iter().chain(&other.terms).map(|t| (t.coeff.clone(), t.exp.clone()));
        Novikov::from_terms(all, self.cutoff.clone())
    }

    pub(crate) fn mul_unchecked(&self, other: &Novikov) -> Novikov {
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let e = &a.exp + &b.exp;
                if e < self.cutoff {
                    out.push((&a.coeff * &b.coeff, e));
                }
            }
        }
        Novikov::from_terms(out, self.cutoff.clone())
    }

    pub fn neg(&self) -> Novikov {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Novikov {
        Novikov::from_terms(self.terms.iter().map(|t| (&t.coeff * c, t.exp.clone())), self.cutoff.clone())
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: &Rational) -> Novikov {
        Novikov::from_terms(self.terms.iter().map(|t| (t.coeff.clone(), &t.exp + e)), self.cutoff.clone())
    }

    /// Drops terms at or above a lower cutoff.
    pub fn truncate(&self, cutoff: &Rational) -> Result<Novikov, NovikovError> {
        if cutoff > &self.cutoff {
            return Err(NovikovError::RaiseCutoff { from: display_rational(&self.cutoff), to: display_rational(cutoff) });
        }
        Ok(Novikov::from_terms(self.terms.iter().map(|t| (t.coeff.clone(), t.exp.clone())), cutoff.clone()))
    }

    /// The same series read with another cutoff; terms at or above it are
    /// dropped, and raising it does not invent data.
    pub fn with_cutoff(&self, cutoff: &Rational) -> Novikov {
        Novikov::from_terms(self.terms.iter().map(|t| (t.coeff.clone(), t.exp.clone())), cutoff.clone())
    }
}

impl fmt::Display for Novikov {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let c = t.coeff.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let q = if t.exp.is_zero() {
                String::new()
            } else if t.exp.is_one() {
                "q".into()
            } else if t.exp.is_integer() && t.exp.is_positive() {
                format!("q^{}", t.exp)
            } else {
                format!("q^({})", display_rational(&t.exp))
            };
            if q.is_empty() {
                write!(f, "{}", display_rational(&c))?;
            } else if c.is_one() {
                f.write_str(&q)?;
            } else {
                write!(f, "{}{}", display_rational(&c), q)?;
            }
        }
        Ok(())
    }
}
