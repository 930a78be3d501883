mod common;

use common::ToricChow;
use proptest::prelude::*;
use std::collections::BTreeSet;
use tropikit::diagonal::*;
use tropikit::exactalg::{int, rat, Rational};
use tropikit::polyhedral::{hirzebruch, product, standard_simplex, unit_cube, Halfspace, Polytope};

fn eta(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn chow(p: &Polytope) -> ToricChow {
    let facets = p.facet_halfspaces();
    let rays = facets.iter().map(|&i| p.halfspaces()[i].normal.clone()).collect();
    let maximal = face_cones(p)
        .unwrap()
        .into_iter()
        .filter(|f| f.dim == 0)
        .map(|f| f.facets.iter().map(|i| facets.iter().position(|j| j == i).unwrap()).collect())
        .collect();
    ToricChow { rays, maximal }
}

/// `<[Δ], [X_A] × [X_B]> = #(X_A ∩ X_B)` for every complementary face pair.
fn assert_kunneth(p: &Polytope, eta: &[Rational]) {
    let d = diagonal_decomposition(p, eta).unwrap();
    let faces = face_cones(p).unwrap();
    let facets = p.facet_halfspaces();
    let local = |f: &FaceCone| -> Vec<usize> {
        f.facets.iter().map(|i| facets.iter().position(|j| j == i).unwrap()).collect()
    };
    let by_id = |id: &str| faces.iter().find(|f| f.id == id).unwrap();
    let c = chow(p);
    for a in &faces {
        for b in &faces {
            if a.dim + b.dim != p.dim() {
                continue;
            }
            let expected = c.intersect(&local(a), &local(b));
            let got: i64 = d
                .pairs
                .iter()
                .map(|pair| {
                    let (m, q) = (by_id(&pair.minus), by_id(&pair.plus));
                    pair.multiplicity as i64 * c.intersect(&local(m), &local(a)) * c.intersect(&local(q), &local(b))
                })
                .sum();
            assert_eq!(got, expected, "faces {} and {}", a.id, b.id);
        }
    }
}

#[test]
fn face_cone_counts() {
    let interval = face_cones(&unit_cube(1)).unwrap();
    assert_eq!(interval.len(), 3);
    let rays: BTreeSet<Vec<i64>> = interval
        .iter()
        .flat_map(|f| f.cone.rays().iter().map(|r| r.iter().map(|x| x.try_into().unwrap()).collect()))
        .collect();
    assert_eq!(rays, BTreeSet::from([vec![1], vec![-1]]));
    assert!(interval[0].cone.is_zero() && interval[0].id == "P");
    assert_eq!(face_cones(&standard_simplex(2)).unwrap().len(), 7);
    assert_eq!(face_cones(&unit_cube(2)).unwrap().len(), 9);
    for f in face_cones(&standard_simplex(3)).unwrap() {
        assert_eq!(f.cone.dim(), 3 - f.dim);
    }
}

#[test]
fn non_delzant_polytope_is_refused() {
    let hs = vec![
        Halfspace::from_ints(&[1, 0], int(0)).unwrap(),
        Halfspace::from_ints(&[0, 1], int(0)).unwrap(),
        Halfspace::from_ints(&[-1, -2], int(-2)).unwrap(),
    ];
    let p = Polytope::new(2, hs).unwrap();
    assert!(matches!(face_cones(&p), Err(DiagonalError::NotDelzant(_))));
    assert!(matches!(diagonal_decomposition(&p, &eta(&[1, 3])), Err(DiagonalError::NotDelzant(_))));
}

/// One-dimensional cones as closed intervals with optional ends.
fn interval_meet(minus: (Option<i64>, Option<i64>), plus: (Option<i64>, Option<i64>), eta: i64) -> Option<(Option<i64>, Option<i64>)> {
    let shift = |b: Option<i64>| b.map(|x| x + eta);
    let lo = match (shift(minus.0), plus.0) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    let hi = match (shift(minus.1), plus.1) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    match (lo, hi) {
        (Some(l), Some(h)) if l > h => None,
        _ => Some((lo, hi)),
    }
}

fn interval_cone(f: &FaceCone) -> (Option<i64>, Option<i64>) {
    match f.cone.rays().first().map(|r| r[0].sign()) {
        None => (Some(0), Some(0)),
        Some(num_bigint::Sign::Plus) => (Some(0), None),
        _ => (None, Some(0)),
    }
}

#[test]
fn projective_line_brute_force() {
    let faces = face_cones(&unit_cube(1)).unwrap();
    let mut points = 0;
    for a in &faces {
        for b in &faces {
            let got = displaced_intersection(a, b, &eta(&[1])).unwrap();
            let expected = interval_meet(interval_cone(a), interval_cone(b), 1);
            match expected {
                None => assert_eq!(got, Displacement::Empty),
                Some((Some(l), Some(h))) if l == h => {
                    assert_eq!(got, Displacement::Point { point: eta(&[l]) });
                    points += 1;
                }
                Some(_) => assert_eq!(got, Displacement::Higher { dim: 1 }),
            }
        }
    }
    assert_eq!(points, 2);
    let by_rays = |sign: i64| faces.iter().find(|f| f.cone.rays().first().map(|r| r[0] == sign.into()).unwrap_or(sign == 0)).unwrap();
    let (zero, pos, neg) = (by_rays(0), by_rays(1), by_rays(-1));
    assert_eq!(displaced_intersection(zero, pos, &eta(&[1])).unwrap(), Displacement::Point { point: eta(&[1]) });
    assert_eq!(displaced_intersection(pos, zero, &eta(&[1])).unwrap(), Displacement::Empty);
    assert_eq!(displaced_intersection(neg, zero, &eta(&[1])).unwrap(), Displacement::Point { point: eta(&[0]) });
}

#[test]
fn projective_spaces_give_kunneth() {
    for (n, e) in [(1, vec![1]), (2, vec![2, 5]), (3, vec![1, 2, 3])] {
        let d = diagonal_decomposition(&standard_simplex(n), &eta(&e)).unwrap();
        assert_eq!(d.pairs.len(), n + 1);
        assert!(d.pairs.iter().all(|p| p.multiplicity == 1));
        let dims: BTreeSet<usize> = d.pairs.iter().map(|p| p.minus_dim).collect();
        assert_eq!(dims, (0..=n).collect());
        assert!(d.pairs.iter().all(|p| p.minus_dim + p.plus_dim == n));
    }
}

#[test]
fn square_matches_product_of_lines() {
    let e = [3, -7];
    let d = diagonal_decomposition(&unit_cube(2), &eta(&e)).unwrap();
    assert_eq!(d.pairs.len(), 4);
    assert!(d.pairs.iter().all(|p| p.multiplicity == 1));
    // Per coordinate the line contributes face dimensions (1,0) and (0,1);
    // products of those are the pairs.
    let line = [(1usize, 0usize), (0, 1)];
    let mut expected: Vec<(usize, usize)> =
        line.iter().flat_map(|a| line.iter().map(move |b| (a.0 + b.0, a.1 + b.1))).collect();
    expected.sort();
    let mut got: Vec<(usize, usize)> = d.pairs.iter().map(|p| (p.minus_dim, p.plus_dim)).collect();
    got.sort();
    assert_eq!(got, expected);
    // Brute-force product check of the displaced points.
    for p in &d.pairs {
        for (k, x) in p.point.iter().enumerate() {
            assert!(x.is_integer());
            let x: i64 = x.to_integer().try_into().unwrap();
            assert!(x == 0 || x == e[k]);
        }
    }
}

#[test]
fn kunneth_pairing_oracle() {
    assert_kunneth(&unit_cube(1), &eta(&[2]));
    assert_kunneth(&standard_simplex(2), &eta(&[2, 5]));
    assert_kunneth(&standard_simplex(2), &eta(&[-3, 1]));
    assert_kunneth(&unit_cube(2), &eta(&[3, -7]));
    assert_kunneth(&product(&unit_cube(1), &standard_simplex(2)), &eta(&[5, 2, -3]));
    assert_kunneth(&hirzebruch(1, int(2)).unwrap(), &eta(&[5, 2]));
    assert_kunneth(&hirzebruch(2, int(3)).unwrap(), &eta(&[-5, 3]));
}

#[test]
fn chow_oracle_sanity() {
    // Self-intersection of a line in the plane and of the exceptional curve.
    let c = chow(&standard_simplex(2));
    assert_eq!(c.intersect(&[0], &[0]), 1);
    let f1 = chow(&hirzebruch(1, int(2)).unwrap());
    let degrees: Vec<i64> = (0..4).map(|i| f1.intersect(&[i], &[i])).collect();
    let mut sorted = degrees.clone();
    sorted.sort();
    assert_eq!(sorted, vec![-1, 0, 0, 1]);
}

#[test]
fn walls_are_refused() {
    let err = diagonal_decomposition(&standard_simplex(2), &eta(&[1, 1])).unwrap_err();
    assert!(matches!(err, DiagonalError::NonGeneric { .. }));
    assert!(err.to_string().contains("span Cone"));
    assert!(matches!(diagonal_decomposition(&unit_cube(1), &eta(&[0])), Err(DiagonalError::NonGeneric { .. })));
    assert!(matches!(
        diagonal_decomposition(&unit_cube(2), &eta(&[1])),
        Err(DiagonalError::Dimension { expected: 2, got: 1 })
    ));
}

#[test]
fn fractional_displacement_is_fine() {
    let d = diagonal_decomposition(&standard_simplex(2), &[rat(1, 3), rat(-5, 7)]).unwrap();
    assert_eq!(d.pairs.len(), 3);
}

fn key(d: &DiagonalDecomposition) -> Vec<(String, String, u64)> {
    d.pairs.iter().map(|p| (p.minus.clone(), p.plus.clone(), p.multiplicity)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn locally_constant_in_chambers(which in 0usize..4, a in prop::collection::vec(-9i64..=9, 2), b in prop::collection::vec(-9i64..=9, 2)) {
        let p = match which {
            0 => standard_simplex(2),
            1 => unit_cube(2),
            2 => hirzebruch(1, int(2)).unwrap(),
            _ => hirzebruch(2, int(3)).unwrap(),
        };
        let walls = arrangement(&face_cones(&p).unwrap());
        let (ea, eb) = (eta(&a), eta(&b));
        let generic = |e: &[Rational]| walls.iter().all(|w| !w.contains(e));
        prop_assume!(generic(&ea) && generic(&eb));
        let side = |e: &[Rational], w: &tropikit::exactalg::RationalSubspace| -> bool {
            // Hyperplane normal in the plane: rotate the spanning vector.
            let v = &w.basis[0];
            (&v[1] * &e[0] - &v[0] * &e[1]) > int(0)
        };
        let same_chamber = walls.iter().filter(|w| w.dim() == 1).all(|w| side(&ea, w) == side(&eb, w));
        let (da, db) = (diagonal_decomposition(&p, &ea).unwrap(), diagonal_decomposition(&p, &eb).unwrap());
        if same_chamber {
            prop_assert_eq!(key(&da), key(&db));
        }
        prop_assert!(da.pairs.iter().all(|q| q.minus_dim + q.plus_dim == 2 && q.multiplicity >= 1));
        assert_kunneth(&p, &ea);
    }
}
