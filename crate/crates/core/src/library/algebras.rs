//! Small A∞ algebras: dg algebras written with shifted signs, and the model
//! algebra of a moment fiber with its homotopy unit.

use crate::ainfty::{AlgebraSpec, Generator, MapEntry, Novikov, OutputTerm};
use crate::exactalg::rational::{int, Rational};
use num_traits::Zero;

fn gen(name: &str, degree: i64) -> Generator {
    Generator { name: name.into(), degree }
}

fn out(gen: &str, coeff: i64) -> OutputTerm {
    OutputTerm { gen: gen.into(), coeff: int(coeff), exp: Rational::zero() }
}

fn entry(inputs: &[&str], output: Vec<OutputTerm>) -> MapEntry {
    MapEntry { d: inputs.len(), inputs: inputs.iter().map(|s| s.to_string()).collect(), output }
}

/// `m₂(a,b) = (−1)^{|a|} ab` for a product table `(a, b, ab)`.
fn product(table: &[(&str, &str, &str, i64)], degree: impl Fn(&str) -> i64) -> Vec<MapEntry> {
    table
        .iter()
        .map(|(a, b, c, k)| {
            let sign = if degree(a) % 2 == 0 { 1 } else { -1 };
            entry(&[a, b], vec![out(c, sign * k)])
        })
        .collect()
}

/// `Λ[ξ]/ξ²` with zero differential, basis `one`, `xi` (degree 1).
pub fn exterior_dga() -> AlgebraSpec {
    let degree = |n: &str| if n == "xi" { 1 } else { 0 };
    let maps = product(&[("one", "one", "one", 1), ("one", "xi", "xi", 1), ("xi", "one", "xi", 1)], degree);
    AlgebraSpec {
        g: 2,
        cutoff: int(4),
        generators: vec![gen("one", 0), gen("xi", 1)],
        maps,
        max_arity: None,
        higher_vanish: true,
        unit: Some("one".into()),
        weighted: None,
        maximum: None,
    }
}

/// Simplicial cochains of an interval: vertices `v0`, `v1`, the edge `e`,
/// `d v0 = −e`, `d v1 = e`, cup product.
pub fn interval_cochains() -> AlgebraSpec {
    let degree = |n: &str| if n == "e" { 1 } else { 0 };
    let mut maps = vec![entry(&["v0"], vec![out("e", -1)]), entry(&["v1"], vec![out("e", 1)])];
    maps.extend(product(&[("v0", "v0", "v0", 1), ("v1", "v1", "v1", 1), ("v0", "e", "e", 1), ("e", "v1", "e", 1)], degree));
    AlgebraSpec {
        g: 2,
        cutoff: int(4),
        generators: vec![gen("v0", 0), gen("v1", 0), gen("e", 1)],
        maps,
        max_arity: None,
        higher_vanish: true,
        unit: None,
        weighted: None,
        maximum: None,
    }
}

/// The three-generator model `Λx^◻ ⊕ Λx^■ ⊕ Λx^▨[1]` of a torus fiber:
/// curvature `W x^■`, `m₁(x^▨) = x^◻ − x^■`, `x^◻` a strict unit, `x^■`
/// idempotent and every other product zero. The curvature has degree 2 and
/// `x^■` degree 0, so the model is ℤ₂-graded.
pub fn fiber_model(potential: &Novikov) -> AlgebraSpec {
    let g = 2;
    let names = ["x_unit", "x_max", "x_wt"];
    let degree = |n: &str| if n == "x_wt" { g - 1 } else { 0 };
    let mut maps = Vec::new();
    let curvature: Vec<OutputTerm> = potential
        .terms()
        .iter()
        .map(|t| OutputTerm { gen: "x_max".into(), coeff: t.coeff.clone(), exp: t.exp.clone() })
        .collect();
    if !curvature.is_empty() {
        maps.push(entry(&[], curvature));
    }
    maps.push(entry(&["x_wt"], vec![out("x_unit", 1), out("x_max", -1)]));
    for a in names {
        maps.push(entry(&["x_unit", a], vec![out(a, 1)]));
        if a != "x_unit" {
            let sign = if degree(a) % 2 == 0 { 1 } else { -1 };
            maps.push(entry(&[a, "x_unit"], vec![out(a, sign)]));
        }
    }
    maps.push(entry(&["x_max", "x_max"], vec![out("x_max", 1)]));
    AlgebraSpec {
        g,
        cutoff: potential.cutoff().clone(),
        generators: names.iter().map(|n| gen(n, degree(n))).collect(),
        maps,
        max_arity: None,
        higher_vanish: true,
        unit: Some("x_unit".into()),
        weighted: Some("x_wt".into()),
        maximum: Some("x_max".into()),
    }
}
