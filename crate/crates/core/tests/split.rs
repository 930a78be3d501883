use num_bigint::BigInt;
use tropikit::exactalg::rational::{int, Rational};
use tropikit::library::{self, coordinate_cuts, projective_plane_fan};
use tropikit::polyhedral::Glued;
use tropikit::split::*;
use tropikit::tropical::{EdgeClass, Marking, TropicalGraph};

fn q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn cube_with_direction(geo: &Glued, eta: &[Rational]) -> SplitType {
    let mut s = library::cube_split(geo);
    s.cone_direction = eta.to_vec();
    s
}

/// Counts `x ∈ (N⁻¹Z/Z)^k` with `Σ x_i c_i ∈ Z^m`, where `c_i` are the columns.
fn torsion_points(columns: &[Vec<i64>], n: i64) -> usize {
    let m = columns[0].len();
    let k = columns.len();
    let mut count = 0;
    let mut x = vec![0i64; k];
    loop {
        if (0..m).all(|r| columns.iter().zip(&x).map(|(c, xi)| c[r] * xi).sum::<i64>().rem_euclid(n) == 0) {
            count += 1;
        }
        let mut i = 0;
        while i < k {
            x[i] += 1;
            if x[i] < n {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == k {
            return count;
        }
    }
}

#[test]
fn library_split_types_are_valid() {
    let c2 = coordinate_cuts(2);
    let c3 = coordinate_cuts(3);
    let p2 = projective_plane_fan();
    for (geo, s) in [
        (&c2, library::cross_bend_near_root(&c2)),
        (&c2, library::cross_bend_far_from_root(&c2)),
        (&c2, library::cross_two_splits_single_bend(&c2)),
        (&c2, library::cross_two_splits_double_bend(&c2)),
        (&c3, library::cube_split(&c3)),
        (&c3, library::cube_split_doubled(&c3)),
        (&c3, library::cube_split_with_neck(&c3)),
        (&p2, library::triangle_split_midpoint(&p2)),
    ] {
        let report = validate_split(&s, geo).unwrap();
        assert!(report.valid, "{:?}", report.violations);
    }
}

#[test]
fn base_graph_comes_from_the_collapse() {
    let geo = coordinate_cuts(3);
    let s = library::cube_split(&geo);
    let ids: Vec<&str> = s.base.vertices.iter().map(|v| v.id.as_str()).collect();
    assert_eq!(ids, ["v0", "v1"]);
    assert_eq!(s.kappa["vp"], "v0");
    assert_eq!(s.kappa["vm"], "v1");
    assert_eq!(s.refined_split_edges().unwrap(), ["e"]);
}

#[test]
fn single_bend_unsigned_weights_are_a_line() {
    let geo = coordinate_cuts(2);
    let s = library::cross_two_splits_single_bend(&geo);
    let w = unsigned_relative_weights(&s, &geo).unwrap();
    assert_eq!(w.dim, 1);
    let v = w.vertex_ids.iter().position(|id| id == "v").unwrap();
    let b = &w.basis[0];
    let block: Vec<BigInt> = b[2 * v..2 * v + 2].to_vec();
    assert!(block == [BigInt::from(2), BigInt::from(1)] || block == [BigInt::from(-2), BigInt::from(-1)]);
    // Only `v` moves.
    let nonzero = b.iter().filter(|x| **x != BigInt::from(0)).count();
    assert_eq!(nonzero, 2);

    // The signed weights are the ray `-(2,1)t`.
    let rel = relative_weights(&s, &geo).unwrap();
    assert_eq!(rel.dim, 1);
    let rays = rel.cone.rays();
    assert_eq!(rays.len(), 1);
    assert_eq!(rays[0][2 * v..2 * v + 2].to_vec(), [BigInt::from(-2), BigInt::from(-1)]);
}

#[test]
fn cube_unsigned_weights_span_both_bends() {
    let geo = coordinate_cuts(3);
    let s = library::cube_split(&geo);
    let w = unsigned_relative_weights(&s, &geo).unwrap();
    assert_eq!(w.dim, 2);
    let vp = w.vertex_ids.iter().position(|id| id == "vp").unwrap();
    let vm = w.vertex_ids.iter().position(|id| id == "vm").unwrap();
    let dirs: Vec<(Vec<i64>, Vec<i64>)> = w
        .basis
        .iter()
        .map(|b| {
            let f = |i: usize| b[3 * i..3 * i + 3].iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>();
            (f(vp), f(vm))
        })
        .collect();
    for (p, m) in &dirs {
        // Each block is a multiple of its bend slope.
        assert_eq!(p[0], 2 * p[1]);
        assert_eq!(p[2], 0);
        assert_eq!(2 * m[0], m[1]);
        assert_eq!(m[2], 0);
    }
}

#[test]
fn bend_examples_have_one_dimensional_discrepancy() {
    let geo = coordinate_cuts(2);
    for s in [library::cross_bend_near_root(&geo), library::cross_bend_far_from_root(&geo)] {
        let d = discrepancy_cone(&s, &geo).unwrap();
        assert_eq!((d.dim, d.expected_dim), (1, 1));
        assert!(d.cone.is_pointed());
        assert_eq!(d.cone.rays().len(), 1);
        let c = cone_condition(&s, &geo).unwrap();
        assert!(c.holds);
    }
    // The near-root cone is the image of `(2,1)` in `t^∨/⟨(1,1)⟩`.
    let s = library::cross_bend_near_root(&geo);
    let d = discrepancy_cone(&s, &geo).unwrap();
    let row = &d.coordinates[0][0];
    let image = row[0] * 2 + row[1];
    assert_eq!(image.abs(), 1);
    assert_eq!(i64::try_from(&d.cone.rays()[0][0]).unwrap().signum(), image.signum());
}

#[test]
fn single_bend_fails_the_cone_condition() {
    let geo = coordinate_cuts(2);
    let s = library::cross_two_splits_single_bend(&geo);
    let d = discrepancy_cone(&s, &geo).unwrap();
    assert_eq!((d.dim, d.expected_dim), (1, 2));
    let c = cone_condition(&s, &geo).unwrap();
    assert!(!c.holds);
    assert!(c.witness.is_none());
    assert!(c.obstruction.is_some());
    assert!(!split_rigid(&s, &geo).unwrap().rigid);
}

#[test]
fn double_bend_passes_the_cone_condition() {
    let geo = coordinate_cuts(2);
    let s = library::cross_two_splits_double_bend(&geo);
    let c = cone_condition(&s, &geo).unwrap();
    assert!(c.holds, "{:?}", c.obstruction);
    assert_eq!((c.cone_dim, c.expected_dim), (2, 2));
    let w = c.witness.unwrap();
    assert!(w[0] > w[1] && w[1] > int(0));
    // Accepted exactly when η pairs negatively with (1,-1) and with (0,1),
    // the normals of the two split slopes.
    for (eta, holds) in [([-3, -1], true), ([-5, -2], true), ([-7, -6], true), ([-1, -2], false), ([-2, 1], false)] {
        let mut t = s.clone();
        t.cone_direction = q(&eta);
        assert_eq!(cone_condition(&t, &geo).unwrap().holds, holds, "{eta:?}");
    }
    let r = strong_cone_check(&s, &geo, 100, 11).unwrap();
    assert!(r.all_inside(), "{:?}", r.failures);
}

#[test]
fn discrepancy_by_projection_matches_elimination() {
    let c2 = coordinate_cuts(2);
    let c3 = coordinate_cuts(3);
    let p2 = projective_plane_fan();
    for (geo, s) in [
        (&c2, library::cross_bend_near_root(&c2)),
        (&c2, library::cross_two_splits_single_bend(&c2)),
        (&c2, library::cross_two_splits_double_bend(&c2)),
        (&c3, library::cube_split(&c3)),
        (&c3, library::cube_split_with_neck(&c3)),
        (&p2, library::triangle_split_midpoint(&p2)),
    ] {
        let a = discrepancy_cone(&s, geo).unwrap().cone;
        let b = discrepancy_cone_fm(&s, geo).unwrap();
        assert!(a.contains_cone(&b) && b.contains_cone(&a));
    }
}

#[test]
fn cube_cone_condition_depends_on_direction() {
    let geo = coordinate_cuts(3);
    // The cone is spanned by (2,1,0) and (1,2,0) modulo (1,1,1).
    for (r, holds) in [((3, 4), true), ((1, 1), true), ((3, 2), true), ((19, 10), true), ((3, 1), false), ((1, 3), false)] {
        let eta = vec![Rational::new(BigInt::from(r.0), BigInt::from(r.1)), int(1), int(0)];
        let c = cone_condition(&cube_with_direction(&geo, &eta), &geo).unwrap();
        assert_eq!(c.holds, holds, "r = {}/{}", r.0, r.1);
    }
}

#[test]
fn direction_on_a_wall_is_rejected() {
    let geo = coordinate_cuts(3);
    // (2,1,0) spans a facet of the cone together with (1,1,1).
    let s = cube_with_direction(&geo, &q(&[3, 2, 1]));
    assert!(matches!(cone_condition(&s, &geo), Err(SplitError::NonGeneric { .. })));
    let s = cube_with_direction(&geo, &q(&[1, 1, 1]));
    assert!(matches!(cone_condition(&s, &geo), Err(SplitError::NonGeneric { .. })));
}

#[test]
fn cube_is_rigid_with_three_framed_symmetries() {
    let geo = coordinate_cuts(3);
    let s = library::cube_split(&geo);
    let r = split_rigid(&s, &geo).unwrap();
    assert!(r.rigid);
    assert_eq!((r.weight_dim, r.expected_dim), (2, 2));
    assert_eq!(framed_multiplicity(&s, &geo).unwrap(), BigInt::from(3));
    let cols = vec![vec![2, 1, 0], vec![1, 2, 0], vec![1, 1, 1]];
    assert_eq!(torsion_points(&cols, 6), 3);
    assert_eq!(torsion_points(&cols, 12), 3);
}

#[test]
fn cube_symmetry_splits_into_two_circles() {
    let geo = coordinate_cuts(3);
    let s = library::cube_split(&geo);
    let (parts, total) = symmetry_splitting(&s, &geo).unwrap();
    let dims: Vec<usize> = parts.iter().map(|p| p.dim).collect();
    assert_eq!(dims, [1, 1]);
    assert_eq!(total, 2);
    assert_eq!(parts[0].vertices, ["v0", "vp"]);
}

#[test]
fn cube_exact_sequence_is_consistent() {
    let geo = coordinate_cuts(3);
    let r = exact_sequence_check(&library::cube_split(&geo), &geo).unwrap();
    assert!(r.consistent && r.ev_onto);
    assert_eq!(r.z_fr_order.finite(), Some(&BigInt::from(1)));

    let s = library::cube_split_doubled(&geo);
    let r = exact_sequence_check(&s, &geo).unwrap();
    assert!(r.consistent);
    assert_eq!(r.z_fr_order.finite(), Some(&BigInt::from(2)));
    let framed = framed_multiplicity(&s, &geo).unwrap();
    assert_eq!(framed, BigInt::from(6));
    let cols = vec![vec![2, 1, 0], vec![1, 2, 0], vec![2, 2, 2]];
    assert_eq!(torsion_points(&cols, 12), 6);
}

#[test]
fn neck_vertex_breaks_rigidity() {
    let geo = coordinate_cuts(3);
    let s = library::cube_split_with_neck(&geo);
    let r = split_rigid(&s, &geo).unwrap();
    assert!(!r.rigid);
    assert_eq!((r.weight_dim, r.expected_dim), (3, 2));
    assert!(matches!(framed_multiplicity(&s, &geo), Err(SplitError::InfiniteGroup)));
}

#[test]
fn bend_examples_split_symmetry() {
    let geo = coordinate_cuts(2);
    let (parts, _) = symmetry_splitting(&library::cross_bend_near_root(&geo), &geo).unwrap();
    let summary: Vec<(usize, &str)> = parts.iter().map(|p| (p.dim, p.components.as_str())).collect();
    assert_eq!(summary, [(1, "1"), (0, "1")]);
    for s in [library::cross_bend_near_root(&geo), library::cross_bend_far_from_root(&geo)] {
        assert_eq!(framed_multiplicity(&s, &geo).unwrap(), BigInt::from(1));
    }
}

#[test]
fn triangle_split_has_one_dimensional_relative_weights() {
    let geo = projective_plane_fan();
    let s = library::triangle_split_midpoint(&geo);
    assert_eq!(relative_weights(&s, &geo).unwrap().dim, 1);
    assert!(split_rigid(&s, &geo).unwrap().rigid);
    assert!(cone_condition(&s, &geo).unwrap().holds);
    // Three choices at the center, two on the ray for each of them.
    let framed = framed_multiplicity(&s, &geo).unwrap();
    assert_eq!(framed, BigInt::from(6));
    // Unknowns: centre (2), ray (1), one framing per edge (4).
    let mut cols = Vec::new();
    let slopes = [[-1, -1], [-1, 2], [2, -1], [1, 1]];
    let mut push = |c: Vec<i64>| cols.push(c);
    push(vec![1, 0, 1, 0, 1, 0, -1, 0]);
    push(vec![0, 1, 0, 1, 0, 1, 0, -1]);
    push(vec![0, 0, 0, 0, 0, 0, 1, -1]);
    for (i, sl) in slopes.iter().enumerate() {
        let mut c = vec![0; 8];
        c[2 * i] = sl[0];
        c[2 * i + 1] = sl[1];
        push(c);
    }
    assert_eq!(torsion_points(&cols, 6), 6);
}

#[test]
fn strong_cone_sampling_on_rigid_examples() {
    let c2 = coordinate_cuts(2);
    let c3 = coordinate_cuts(3);
    let p2 = projective_plane_fan();
    for (geo, s) in [
        (&c2, library::cross_bend_near_root(&c2)),
        (&c2, library::cross_bend_far_from_root(&c2)),
        (&c3, library::cube_split(&c3)),
        (&c3, library::cube_split_doubled(&c3)),
        (&p2, library::triangle_split_midpoint(&p2)),
    ] {
        assert!(split_rigid(&s, geo).unwrap().rigid);
        assert!(cone_condition(&s, geo).unwrap().holds);
        let r = strong_cone_check(&s, geo, 100, 3).unwrap();
        assert!(r.all_inside(), "{:?}", r.failures);
    }
}

#[test]
fn disjoint_subtrees_order_by_least_marking() {
    let geo = coordinate_cuts(2);
    let mut s = library::cross_two_splits_double_bend(&geo);
    assert_eq!(order_split_edges(&s, &geo).unwrap().order, ["e1", "e2"]);
    for m in &mut s.refined.markings {
        if m.label == Some(1) {
            m.label = Some(3);
        }
    }
    let o = order_split_edges(&s, &geo).unwrap();
    assert_eq!(o.order, ["e2", "e1"]);
    assert!(o.ties.is_empty());
}

fn nested_chain(geo: &Glued) -> SplitType {
    let g: TropicalGraph = serde_json::from_value(serde_json::json!({
        "vertices": [
            {"id": "y", "polytope": "--", "sort": "disk"},
            {"id": "a", "polytope": "+-"},
            {"id": "b", "polytope": "++"}
        ],
        "edges": [
            {"id": "e1", "ends": ["y", "a"], "slope": [1, 0]},
            {"id": "e2", "ends": ["a", "b"], "slope": [0, 1]},
            {"id": "root", "ends": ["y"], "class": "boundary-leaf"},
            {"id": "z1", "ends": ["b"], "class": "interior-leaf"}
        ],
        "markings": [{"edge": "z1", "label": 1}],
        "root": "root"
    }))
    .unwrap();
    SplitType::from_collapse(geo, g, &[], vec!["e1".into(), "e2".into()], q(&[1, 2])).unwrap()
}

#[test]
fn nested_split_edges_put_the_deeper_node_first() {
    let geo = coordinate_cuts(2);
    let s = nested_chain(&geo);
    assert!(validate_split(&s, &geo).unwrap().valid);
    let o = order_split_edges(&s, &geo).unwrap();
    assert_eq!(o.order, ["e2", "e1"]);
    let keys: Vec<(Option<u32>, Option<usize>)> = o.keys.iter().map(|k| (k.least_marking, k.distance)).collect();
    assert_eq!(keys, [(Some(1), Some(0)), (Some(1), Some(1))]);
}

#[test]
fn single_split_edge_orders_trivially() {
    let geo = coordinate_cuts(3);
    let o = order_split_edges(&library::cube_split(&geo), &geo).unwrap();
    assert_eq!(o.order, ["e"]);
}

#[test]
fn unmarked_subtrees_are_reported_as_ties() {
    let geo = coordinate_cuts(2);
    let mut s = library::cross_two_splits_double_bend(&geo);
    s.refined.markings.clear();
    let o = order_split_edges(&s, &geo).unwrap();
    assert_eq!(o.ties.len(), 1);
}

#[test]
fn eligibility_requires_every_facet() {
    let geo = coordinate_cuts(2);
    let d = &geo.decomp;
    for id in ["++", "0-", "00"] {
        assert!(split_eligible_member(d, d.index(id).unwrap()), "{id}");
    }
    let p = d.polytope(d.index("++").unwrap()).clone();
    let all: Vec<_> = d.polytopes().to_vec();
    assert!(split_eligible(&p, &all));
    let missing: Vec<_> = ["++", "0+", "00"].iter().map(|id| d.polytope(d.index(id).unwrap()).clone()).collect();
    assert!(!split_eligible(&p, &missing));
}

#[test]
fn zero_slope_base_edges_are_refused() {
    let geo = coordinate_cuts(2);
    let mut s = library::cross_bend_near_root(&geo);
    s.base.edges.iter_mut().find(|e| e.id == "e").unwrap().slope = vec![];
    let report = validate_split(&s, &geo).unwrap();
    assert!(!report.valid);
}

#[test]
fn unknown_split_edge_is_an_error() {
    let geo = coordinate_cuts(3);
    let g = library::cube_split(&geo).refined;
    let r = SplitType::from_collapse(&geo, g, &[], vec!["nope".into()], q(&[1, 1, 0]));
    assert!(r.is_err());
}

#[test]
fn marking_edge_must_be_a_leaf() {
    let geo = coordinate_cuts(2);
    let mut s = library::cross_two_splits_double_bend(&geo);
    s.refined.markings.push(Marking { edge: "c1".into(), tangency: 1, label: Some(9) });
    assert!(!validate_split(&s, &geo).unwrap().valid);
    let _ = EdgeClass::InteriorLeaf;
}
