//! Truncated Novikov arithmetic and checks of curved A∞ structures: the
//! associativity relations, strict and homotopy units, Maurer–Cartan
//! residuals, morphism relations, and the assembly of split contributions.

mod algebra;
mod morphism;
mod novikov;

pub use algebra::{
    describe, AInftyData, AlgebraError, AlgebraSpec, Generator, HomotopyUnitReport, MapEntry, McReport, OutputTerm,
    RelationFailure, RelationReport, UnitFailure, UnitReport, Vector,
};
pub use morphism::{MorphismData, MorphismError, MorphismReport, MorphismSpec};
pub use novikov::{Novikov, NovikovError, Term};

use crate::exactalg::rational::Rational;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// One split type's share of a structure coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTerm {
    /// `mult(Γ̃) = |T_trop,fr(Γ̃)|`.
    pub mult: u64,
    /// Number of interior markings `d_●`.
    pub d_black: u32,
    /// Orientation sign, `±1`.
    pub sign: i8,
    pub factors: Vec<Novikov>,
}

/// `Σ sign · mult / d_●! · Π factors`.
pub fn split_assembly(types: &[SplitTerm], cutoff: &Rational) -> Result<Novikov, NovikovError> {
    let mut total = Novikov::zero(cutoff.clone());
    for t in types {
        let factorial: BigInt = (1..=t.d_black as u64).map(BigInt::from).product();
        let scale = Rational::new(BigInt::from(t.mult) * BigInt::from(t.sign.signum()), factorial);
        let mut product = Novikov::one(cutoff.clone());
        for f in &t.factors {
            product = product.mul(f)?;
        }
        total = total.add(&product.scale(&scale))?;
    }
    Ok(total)
}
