//! Rational subspaces and genericity against a finite list of them.

use super::linalg::{in_span, rref};
use super::rational::{int, Rational};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalSubspace {
    pub ambient: usize,
    /// Reduced row echelon basis, so equal subspaces compare equal.
    #[serde(with = "basis_serde")]
    pub basis: Vec<Vec<Rational>>,
}

mod basis_serde {
    use super::Rational;
    use crate::exactalg::rational::{format_rational, parse_rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(b: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = b.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let v: Vec<Vec<String>> = Vec::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|x| parse_rational(x).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

impl RationalSubspace {
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        let (basis, _) = rref(vectors, ambient);
        RationalSubspace { ambient, basis }
    }

    pub fn span_i64(ambient: usize, vectors: &[Vec<i64>]) -> Self {
        let vs: Vec<Vec<Rational>> =
            vectors.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect();
        Self::span(ambient, &vs)
    }

    pub fn zero(ambient: usize) -> Self {
        RationalSubspace { ambient, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_proper(&self) -> bool {
        self.dim() < self.ambient
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        in_span(&self.basis, v)
    }
}

/// True iff `v` avoids every listed subspace. Improper entries are ignored
/// by the caller's contract; a full subspace would contain everything.
pub fn is_generic(v: &[Rational], forbidden: &[RationalSubspace]) -> bool {
    forbidden.iter().all(|s| !s.contains(v))
}

/// First subspace in `forbidden` containing `v`.
pub fn violated_subspace<'a>(
    v: &[Rational],
    forbidden: &'a [RationalSubspace],
) -> Option<&'a RationalSubspace> {
    forbidden.iter().find(|s| s.contains(v))
}

const PRIMES: [i64; 12] = [1009, 1013, 1019, 1021, 1031, 1033, 1039, 1049, 1051, 1061, 1063, 1069];

/// Deterministic search over vectors with pairwise-coprime large coordinates
/// (distinct primes raised to growing powers, with alternating signs).
pub fn sample_generic(ambient: usize, forbidden: &[RationalSubspace]) -> Option<Vec<Rational>> {
    let proper: Vec<RationalSubspace> = forbidden.iter().filter(|s| s.is_proper()).cloned().collect();
    for round in 0..64u32 {
        let v: Vec<Rational> = (0..ambient)
            .map(|i| {
                let p = PRIMES[(i + round as usize) % PRIMES.len()];
                let e = 1 + (i as u32 + round) % 3;
                let sign = if (i + round as usize).is_multiple_of(2) { 1 } else { -1 };
                int(sign * p.pow(e) + i as i64)
            })
            .collect();
        if is_generic(&v, &proper) {
            return Some(v);
        }
    }
    None
}
