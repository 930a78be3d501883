//! Tropical graphs on the library scenes.

use crate::tropical::{Edge, EdgeClass, Marking, Sort, TropicalGraph, Vertex};

pub(crate) fn vertex(id: &str, polytope: &str, sort: Sort) -> Vertex {
    Vertex { id: id.into(), polytope: polytope.into(), sort, chern: None, constant: true }
}

pub(crate) fn node(id: &str, plus: &str, minus: &str, slope: &[i64]) -> Edge {
    Edge {
        id: id.into(),
        ends: vec![plus.into(), minus.into()],
        class: EdgeClass::InteriorNode,
        slope: slope.to_vec(),
        length: None,
    }
}

pub(crate) fn leaf(id: &str, v: &str, class: EdgeClass) -> Edge {
    Edge { id: id.into(), ends: vec![v.into()], class, slope: Vec::new(), length: None }
}

pub(crate) fn marking(edge: &str, label: u32) -> Marking {
    Marking { edge: edge.into(), tangency: 1, label: Some(label) }
}

fn with_root(vertices: Vec<Vertex>, mut edges: Vec<Edge>, root_vertex: &str) -> TropicalGraph {
    edges.push(leaf("root", root_vertex, EdgeClass::BoundaryLeaf));
    TropicalGraph { vertices, edges, markings: Vec::new(), root: Some("root".into()) }
}

/// On [`super::projective_plane_fan`]: a center vertex at the origin joined
/// to the three chambers by slopes `(-1,-1)`, `(-1,2)`, `(2,-1)`.
/// Rigid with three symmetries.
pub fn triangle_star() -> TropicalGraph {
    with_root(
        vec![
            vertex("a", "C1", Sort::Disk),
            vertex("b", "C3", Sort::Sphere),
            vertex("c", "C2", Sort::Sphere),
            vertex("o", "O", Sort::Sphere),
        ],
        vec![node("ea", "a", "o", &[-1, -1]), node("eb", "b", "o", &[-1, 2]), node("ec", "c", "o", &[2, -1])],
        "a",
    )
}

/// On the cross scene ([`super::coordinate_cuts`] with `n = 2`): a center
/// joined to two chambers by slopes `(-1,1)` and `(-1,-1)`. Rigid with two
/// symmetries.
pub fn cross_elbow() -> TropicalGraph {
    with_root(
        vec![vertex("q", "++", Sort::Disk), vertex("p", "+-", Sort::Sphere), vertex("o", "00", Sort::Sphere)],
        vec![node("ep", "p", "o", &[-1, 1]), node("eq", "q", "o", &[-1, -1])],
        "q",
    )
}

/// On the cross scene: a center joined to three chambers. Rigid.
pub fn cross_tripod() -> TropicalGraph {
    with_root(
        vec![
            vertex("a", "++", Sort::Disk),
            vertex("b", "--", Sort::Sphere),
            vertex("c", "-+", Sort::Sphere),
            vertex("v0", "00", Sort::Sphere),
        ],
        vec![node("ea", "a", "v0", &[-1, -1]), node("eb", "b", "v0", &[1, 1]), node("ec", "c", "v0", &[1, -1])],
        "a",
    )
}

/// [`cross_tripod`] with its center split in two along a middle edge `m` of
/// slope `(1,1)`; the vertex `w` slides along the diagonal. Collapsing `m`
/// gives [`cross_tripod`].
pub fn cross_tripod_stretched() -> TropicalGraph {
    with_root(
        vec![
            vertex("a", "++", Sort::Disk),
            vertex("b", "--", Sort::Sphere),
            vertex("c", "-+", Sort::Sphere),
            vertex("v0", "00", Sort::Sphere),
            vertex("w", "00", Sort::Sphere),
        ],
        vec![
            node("ea", "a", "w", &[-1, -1]),
            node("eb", "b", "v0", &[1, 1]),
            node("ec", "c", "v0", &[1, -1]),
            node("m", "v0", "w", &[1, 1]),
        ],
        "a",
    )
}

/// On the cross scene: a neck vertex between opposite chambers, free to move
/// along the diagonal.
pub fn cross_neck() -> TropicalGraph {
    with_root(
        vec![vertex("a", "++", Sort::Disk), vertex("m", "00", Sort::Sphere), vertex("b", "--", Sort::Sphere)],
        vec![node("e1", "m", "a", &[1, 1]), node("e2", "b", "m", &[1, 1])],
        "a",
    )
}

/// One disk vertex in a chamber of the cross scene with a root leaf.
pub fn single_disk() -> TropicalGraph {
    with_root(vec![vertex("v", "++", Sort::Disk)], Vec::new(), "v")
}
