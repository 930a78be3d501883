use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use tropikit::exactalg::rational::{int, rat, Rational};
use tropikit::index_energy::*;
use tropikit::polyhedral::{Halfspace, Polytope};
use tropikit::tropical::{Edge, EdgeClass, LengthClass, Marking, Sort, TropicalGraph, Vertex};

fn vertex(id: &str, sort: Sort) -> Vertex {
    Vertex { id: id.into(), polytope: "P".into(), sort, chern: None, constant: false }
}

fn edge(id: &str, ends: &[&str], class: EdgeClass, slope: &[i64]) -> Edge {
    Edge { id: id.into(), ends: ends.iter().map(|s| s.to_string()).collect(), class, slope: slope.to_vec(), length: None }
}

fn disk_with_inputs(d: usize) -> TropicalGraph {
    let mut edges = vec![edge("root", &["v"], EdgeClass::BoundaryLeaf, &[])];
    for i in 0..d {
        edges.push(edge(&format!("in{i}"), &["v"], EdgeClass::BoundaryLeaf, &[]));
    }
    TropicalGraph { vertices: vec![vertex("v", Sort::Disk)], edges, markings: vec![], root: Some("root".into()) }
}

fn input(graph: TropicalGraph, morse: &[i64], maslov: &[(&str, i64)]) -> IndexInput {
    IndexInput {
        graph,
        morse_indices: morse.to_vec(),
        maslov: maslov.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        node_multiplicities: BTreeMap::new(),
    }
}

#[test]
fn strip_with_one_input() {
    let inp = input(disk_with_inputs(1), &[1, 1], &[("v", 0)]);
    let r = inp.expected_dimension().unwrap();
    // 1 - 1 + 1 - 2 + 0
    assert_eq!(r.value, -1);
}

#[test]
fn maslov_two_disk_through_the_maximum() {
    let dim_l = 3;
    let mut g = disk_with_inputs(0);
    g.edges.push(edge("z", &["v"], EdgeClass::InteriorLeaf, &[]));
    g.markings.push(Marking { edge: "z".into(), tangency: 1, label: Some(1) });
    let inp = input(g.clone(), &[dim_l], &[("v", 2)]);
    assert_eq!(inp.expected_dimension().unwrap().value, dim_l);
    // Each extra order of tangency costs two.
    g.markings[0].tangency = 3;
    let inp = input(g, &[dim_l], &[("v", 2)]);
    assert_eq!(inp.expected_dimension().unwrap().value, dim_l - 4);
}

#[test]
fn gluing_a_nonzero_node_keeps_the_index() {
    let mut g = disk_with_inputs(1);
    g.vertices.push(vertex("w", Sort::Sphere));
    g.edges.push(edge("e", &["v", "w"], EdgeClass::InteriorNode, &[1, 1]));
    let broken = input(g, &[2, 0], &[("v", 2), ("w", 8)]);
    let r = broken.expected_dimension().unwrap();
    // Glued Maslov: 2 + 8 - 4·(1+1) = 2, so 2 - 0 + 1 - 2 + 2.
    assert_eq!(r.value, 3);
    assert_eq!(r.glued.len(), 1);
    assert_eq!(r.glued[0].maslov, 2);
    let glued = broken.glued_input(&["e".into()]).unwrap();
    assert_eq!(glued.graph.vertices.len(), 1);
    assert_eq!(glued.expected_dimension().unwrap().value, 3);
}

#[test]
fn chern_gluing_agrees_with_index() {
    // A sphere bubble with c₁ = 3 glued to a disk across a node of
    // multiplicity (1, 2).
    let mu = [1, 2];
    let (c_plus, c_minus) = (1, 3);
    let mut g = disk_with_inputs(0);
    g.vertices.push(vertex("w", Sort::Sphere));
    g.edges.push(edge("e", &["v", "w"], EdgeClass::InteriorNode, &[1, 2]));
    let mut broken = input(g, &[2], &[("v", 2 * c_plus), ("w", 2 * c_minus)]);
    broken.node_multiplicities.insert("e".into(), mu.to_vec());
    let unbroken = input(disk_with_inputs(0), &[2], &[("v", 2 * chern_glue(c_plus, c_minus, &mu))]);
    assert_eq!(broken.expected_dimension().unwrap().value, unbroken.expected_dimension().unwrap().value);
    assert_eq!(chern_glue(1, 1, &[1]), 0);
    assert_eq!(chern_glue(3, 2, &[1, 1]), 1);
}

#[test]
fn zero_slope_and_boundary_nodes_are_charged() {
    let mut g = disk_with_inputs(0);
    g.vertices.push(vertex("w", Sort::Sphere));
    g.vertices.push(vertex("u", Sort::Disk));
    g.vertices.push(vertex("s", Sort::Disk));
    g.edges.push(edge("flat", &["v", "w"], EdgeClass::InteriorNode, &[]));
    let mut b0 = edge("b0", &["v", "u"], EdgeClass::BoundaryNode, &[]);
    b0.length = Some(LengthClass::Zero);
    let mut binf = edge("binf", &["v", "s"], EdgeClass::BoundaryNode, &[]);
    binf.length = Some(LengthClass::Infinite);
    g.edges.extend([b0, binf]);
    let inp = input(g, &[0], &[("v", 0), ("w", 0), ("u", 0), ("s", 0)]);
    let r = inp.expected_dimension().unwrap();
    assert_eq!(r.terms.interior_nodes, 1);
    assert_eq!((r.terms.boundary_nodes_zero, r.terms.boundary_nodes_infinite), (1, 1));
    assert_eq!(r.value, -2 - 2 - 1 - 1);
}

#[test]
fn input_errors() {
    let inp = input(disk_with_inputs(1), &[1], &[("v", 0)]);
    assert!(matches!(inp.expected_dimension(), Err(IndexError::MorseCount { expected: 2, got: 1 })));
    let inp = input(disk_with_inputs(0), &[1], &[]);
    assert!(matches!(inp.expected_dimension(), Err(IndexError::MissingMaslov(_))));
    let mut g = disk_with_inputs(0);
    g.vertices[0].sort = Sort::Sphere;
    let inp = input(g, &[1], &[("v", 3)]);
    assert!(matches!(inp.expected_dimension(), Err(IndexError::OddSphereMaslov { .. })));
}

#[test]
fn toric_maslov_and_node_multiplicities() {
    assert_eq!(maslov_toric(&[1]), 2);
    assert_eq!(maslov_toric(&[]), 0);
    assert_eq!(maslov_toric(&[2, 1]), 6);
    assert_eq!(node_multiplicity(&[1, 1], &[1, 0]).unwrap(), 1);
    assert_eq!(node_multiplicity(&[2, 1], &[0, 1]).unwrap(), 1);
    for nu in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
        assert_eq!(node_multiplicity(&[1, 1, 1], &nu).unwrap(), 1);
    }
    assert!(matches!(node_multiplicity(&[-1, 0], &[1, 0]), Err(IndexError::Orientation { pairing: -1 })));
    assert!(matches!(node_multiplicity(&[1, 0], &[2, 0]), Err(IndexError::NotPrimitive)));
}

fn interval() -> Polytope {
    Polytope::new(1, vec![Halfspace::from_ints(&[1], int(-1)).unwrap(), Halfspace::from_ints(&[-1], int(-1)).unwrap()])
        .unwrap()
}

#[test]
fn fiber_area_examples() {
    let base = EnergyInput { constants: vec![int(1)], horizontal: rat(1, 3), multiplicities: vec![], hofer_constant: None };
    let a = fiber_area(&base).unwrap();
    assert_eq!(a.area.rational, rat(1, 3));
    assert_eq!(a.area.two_pi, int(0));

    let one = EnergyInput { multiplicities: vec![vec![1]], ..base.clone() };
    assert_eq!(fiber_area(&one).unwrap().area.two_pi, int(1));
    assert_eq!(fiber_area(&one).unwrap().area.to_string(), "1/3 + 2π·1");

    let constants = EnergyInput::constants_of(&interval()).unwrap();
    assert_eq!(constants, vec![int(1), int(1)]);
    let both = EnergyInput { constants, horizontal: int(0), multiplicities: vec![vec![2, 0], vec![0, 2]], hofer_constant: None };
    let a = fiber_area(&both).unwrap();
    assert_eq!(a.area.two_pi, int(4));
    assert_eq!(a.intersections, 4);
    assert_eq!(a.hofer_bound.rational, int(4));

    let bad = EnergyInput { constants: vec![int(0)], ..base };
    assert!(matches!(fiber_area(&bad), Err(EnergyError::NonPositiveConstant { .. })));
}

#[test]
fn divisor_count_examples() {
    assert_eq!(divisor_count(3, &rat(1, 3)).unwrap(), 1);
    assert_eq!(divisor_count(2, &int(2)).unwrap(), 4);
    assert!(matches!(divisor_count(3, &rat(1, 2)), Err(EnergyError::NotIntegral(_))));
}

#[test]
fn split_index_adds_the_dropped_matching() {
    // Disk, a collapsed bend and a split edge to a sphere.
    let mut g = disk_with_inputs(0);
    g.vertices.push(vertex("b", Sort::Sphere));
    g.vertices.push(vertex("s", Sort::Sphere));
    g.edges.push(edge("bend", &["v", "b"], EdgeClass::InteriorNode, &[2, 1]));
    g.edges.push(edge("split", &["b", "s"], EdgeClass::InteriorNode, &[1, 1]));
    let inp = input(g, &[2], &[("v", 2), ("b", 12), ("s", 4)]);
    let base: BTreeSet<String> = ["split".to_string()].into();
    let s = split_index(&inp, &base, 1, 2).unwrap();
    assert_eq!(s.glued_edges, ["bend"]);
    let nonzero = inp.glued_input(&["bend".into()]).unwrap();
    assert_eq!(s.split_index, nonzero.expected_dimension().unwrap().value);
    assert_eq!(s.unreduced, s.split_index + 2);
}

/// Random rooted trees: vertex 0 is the disk, every other vertex hangs off an
/// earlier one.
fn random_input() -> impl Strategy<Value = IndexInput> {
    (2usize..7)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(0usize..100, n - 1),
                proptest::collection::vec(proptest::collection::vec(-2i64..3, 2), n - 1),
                proptest::collection::vec(-3i64..6, n),
                0usize..3,
                proptest::collection::vec(1u32..4, 0..3),
                proptest::collection::vec(-3i64..4, 4),
            )
        })
        .prop_map(|(n, parents, slopes, maslov, d, tangencies, morse)| {
            let mut g = disk_with_inputs(d);
            g.vertices = (0..n).map(|i| vertex(&format!("v{i}"), if i == 0 { Sort::Disk } else { Sort::Sphere })).collect();
            for e in g.edges.iter_mut() {
                e.ends = vec!["v0".into()];
            }
            for i in 1..n {
                let p = parents[i - 1] % i;
                g.edges.push(edge(&format!("e{i}"), &[&format!("v{p}"), &format!("v{i}")], EdgeClass::InteriorNode, &slopes[i - 1]));
            }
            for (k, t) in tangencies.iter().enumerate() {
                let id = format!("z{k}");
                g.edges.push(edge(&id, &[&format!("v{}", k % n)], EdgeClass::InteriorLeaf, &[]));
                g.markings.push(Marking { edge: id, tangency: *t, label: Some(k as u32 + 1) });
            }
            let maslov = (0..n).map(|i| (format!("v{i}"), 2 * maslov[i])).collect();
            IndexInput { graph: g, morse_indices: morse[..d + 1].to_vec(), maslov, node_multiplicities: BTreeMap::new() }
        })
}

proptest! {
    #[test]
    fn index_is_invariant_under_gluing_a_node(inp in random_input(), pick in 0usize..10) {
        let nonzero: Vec<String> = inp.graph.edges.iter()
            .filter(|e| e.class == EdgeClass::InteriorNode && !e.has_zero_slope())
            .map(|e| e.id.clone())
            .collect();
        prop_assume!(!nonzero.is_empty());
        let e = nonzero[pick % nonzero.len()].clone();
        let before = inp.expected_dimension().unwrap().value;
        let after = inp.glued_input(&[e]).unwrap().expected_dimension().unwrap().value;
        prop_assert_eq!(before, after);
    }

    #[test]
    fn split_index_matches_the_partially_glued_type(inp in random_input(), keep in proptest::collection::vec(any::<bool>(), 6)) {
        let base: BTreeSet<String> = inp.graph.edges.iter().enumerate()
            .filter(|(i, e)| e.class == EdgeClass::InteriorNode && keep[i % keep.len()])
            .map(|(_, e)| e.id.clone())
            .collect();
        let s = split_index(&inp, &base, 1, 3).unwrap();
        let partial = inp.glued_input(&s.glued_edges).unwrap();
        prop_assert_eq!(s.split_index, partial.expected_dimension().unwrap().value);
        prop_assert_eq!(s.unreduced - s.split_index, 4);
    }

    #[test]
    fn toric_maslov_is_even_and_additive(a in proptest::collection::vec(1u64..20, 0..6), b in proptest::collection::vec(1u64..20, 0..6)) {
        let joined: Vec<u64> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(maslov_toric(&a) % 2, 0);
        prop_assert_eq!(maslov_toric(&joined), maslov_toric(&a) + maslov_toric(&b));
    }

    #[test]
    fn fiber_area_is_monotone(
        cs in proptest::collection::vec(1i64..9, 1..4),
        rows in proptest::collection::vec(proptest::collection::vec(0u64..4, 4), 0..4),
        bump in 0usize..16,
    ) {
        let k = cs.len();
        let multiplicities: Vec<Vec<u64>> = rows.iter().map(|r| r[..k].to_vec()).collect();
        prop_assume!(!multiplicities.is_empty());
        let inp = EnergyInput {
            constants: cs.iter().map(|&c| int(c)).collect(),
            horizontal: Rational::from_integer(1.into()),
            multiplicities,
            hofer_constant: None,
        };
        let mut more = inp.clone();
        let (i, j) = (bump % more.multiplicities.len(), bump % k);
        more.multiplicities[i][j] += 1;
        let a = fiber_area(&inp).unwrap();
        let b = fiber_area(&more).unwrap();
        prop_assert!(b.area.two_pi > a.area.two_pi);
        prop_assert!(b.hofer_bound.rational > a.hofer_bound.rational);
    }
}
