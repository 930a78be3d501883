//! Ready-made decompositions, gluing data and graphs used by the examples,
//! the CLI and the tests.

use crate::exactalg::rational::{int, Rational};
use crate::polyhedral::{Decomposition, DualInput, GluingDatum, Glued, Halfspace, Polytope};
use itertools::Itertools;

type QVec = Vec<Rational>;

fn hs(normal: &[i64], c: i64) -> Halfspace {
    Halfspace::from_ints(normal, int(c)).expect("nonzero normal")
}

fn pt(v: &[i64]) -> QVec {
    v.iter().map(|&x| int(x)).collect()
}

/// Cuts along the coordinate hyperplanes of `R^n`: `3^n` cells named by sign
/// strings (`"+-0"`). The dual of a cell is the face of `[-1,1]^n` with
/// coordinate `-1` where the cell is positive, `1` where it is negative and
/// free where it is zero.
pub fn coordinate_cuts(n: usize) -> Glued {
    let signs = ['+', '-', '0'];
    let mut members = Vec::new();
    let mut duals = Vec::new();
    for s in std::iter::repeat_n(signs.iter(), n).multi_cartesian_product() {
        let id: String = s.iter().copied().collect();
        let mut hss = Vec::new();
        let mut ranges: Vec<Vec<i64>> = Vec::new();
        for (i, c) in s.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            let neg: Vec<i64> = e.iter().map(|x| -x).collect();
            match c {
                '+' => {
                    hss.push(hs(&e, 0));
                    ranges.push(vec![-1]);
                }
                '-' => {
                    hss.push(hs(&neg, 0));
                    ranges.push(vec![1]);
                }
                _ => {
                    hss.push(hs(&e, 0));
                    hss.push(hs(&neg, 0));
                    ranges.push(vec![-1, 1]);
                }
            }
        }
        members.push((id.clone(), Polytope::new(n, hss).expect("valid cell")));
        let verts: Vec<QVec> = ranges.iter().multi_cartesian_product().map(|v| v.into_iter().map(|&x| int(x)).collect()).collect();
        duals.push((id, DualInput::Vertices(verts)));
    }
    let decomp = Decomposition::new(n, members, None).expect("coordinate cuts form a decomposition");
    let gluing = GluingDatum::new(&decomp, None, duals).expect("well-formed duals");
    Glued::new(decomp, gluing)
}

/// `{(-∞,0], {0}, [0,∞)}` with `[-1,1]` dual to the cut point.
pub fn single_cut() -> Glued {
    coordinate_cuts(1)
}

/// Two parallel cuts of the line at 0 and 1.
pub fn two_cuts() -> Glued {
    let members = vec![
        ("P0".to_string(), Polytope::new(1, vec![hs(&[-1], 0)]).unwrap()),
        ("P01".to_string(), Polytope::point(&pt(&[0]))),
        ("P1".to_string(), Polytope::new(1, vec![hs(&[1], 0), hs(&[-1], -1)]).unwrap()),
        ("P12".to_string(), Polytope::point(&pt(&[1]))),
        ("P2".to_string(), Polytope::new(1, vec![hs(&[1], 1)]).unwrap()),
    ];
    let decomp = Decomposition::new(1, members, None).expect("two cuts");
    let duals = vec![
        ("P0".to_string(), DualInput::Vertices(vec![pt(&[1])])),
        ("P01".to_string(), DualInput::Vertices(vec![pt(&[1]), pt(&[-1])])),
        ("P1".to_string(), DualInput::Vertices(vec![pt(&[-1])])),
        ("P12".to_string(), DualInput::Vertices(vec![pt(&[-1]), pt(&[-3])])),
        ("P2".to_string(), DualInput::Vertices(vec![pt(&[-3])])),
    ];
    let gluing = GluingDatum::new(&decomp, None, duals).expect("well-formed duals");
    Glued::new(decomp, gluing)
}

/// The fan of the projective plane as a decomposition of `R^2`, with the
/// triangle `conv{(-1,-1), (2,-1), (-1,2)}` dual to the origin.
///
/// Cells: `C1 = {x>=0, y>=0}`, `C2 = {x<=0, y>=x}`, `C3 = {y<=0, x>=y}`, the
/// rays `ra = R>=0 (1,0)`, `rb = R>=0 (0,1)`, `rc = R>=0 (-1,-1)` and `O`.
pub fn projective_plane_fan() -> Glued {
    let members = vec![
        ("O".to_string(), Polytope::point(&pt(&[0, 0]))),
        ("ra".to_string(), Polytope::new(2, vec![hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[0, -1], 0)]).unwrap()),
        ("rb".to_string(), Polytope::new(2, vec![hs(&[0, 1], 0), hs(&[1, 0], 0), hs(&[-1, 0], 0)]).unwrap()),
        ("rc".to_string(), Polytope::new(2, vec![hs(&[-1, 0], 0), hs(&[1, -1], 0), hs(&[-1, 1], 0)]).unwrap()),
        ("C1".to_string(), Polytope::new(2, vec![hs(&[1, 0], 0), hs(&[0, 1], 0)]).unwrap()),
        ("C2".to_string(), Polytope::new(2, vec![hs(&[-1, 0], 0), hs(&[-1, 1], 0)]).unwrap()),
        ("C3".to_string(), Polytope::new(2, vec![hs(&[0, -1], 0), hs(&[1, -1], 0)]).unwrap()),
    ];
    let decomp = Decomposition::new(2, members, None).expect("fan of P2");
    let (a, b, c) = (pt(&[-1, -1]), pt(&[2, -1]), pt(&[-1, 2]));
    let duals = vec![
        ("O".to_string(), DualInput::Vertices(vec![a.clone(), b.clone(), c.clone()])),
        ("ra".to_string(), DualInput::Vertices(vec![a.clone(), c.clone()])),
        ("rb".to_string(), DualInput::Vertices(vec![a.clone(), b.clone()])),
        ("rc".to_string(), DualInput::Vertices(vec![b.clone(), c.clone()])),
        ("C1".to_string(), DualInput::Vertices(vec![a])),
        ("C2".to_string(), DualInput::Vertices(vec![b])),
        ("C3".to_string(), DualInput::Vertices(vec![c])),
    ];
    let gluing = GluingDatum::new(&decomp, None, duals).expect("well-formed duals");
    Glued::new(decomp, gluing)
}

mod algebras;
mod graphs;
mod splits;
pub use algebras::*;
pub use graphs::*;
pub use splits::*;
