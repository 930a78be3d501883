//! Split types on the library scenes.

use super::graphs::{leaf, marking, node, vertex};
use crate::exactalg::rational::{int, Rational};
use crate::polyhedral::Glued;
use crate::split::SplitType;
use crate::tropical::{EdgeClass, Sort, TropicalGraph, Vertex};

fn build(
    geo: &Glued,
    vertices: Vec<Vertex>,
    mut edges: Vec<crate::tropical::Edge>,
    root: &str,
    marked: &[(&str, u32)],
    collapsed: &[&str],
    split: &[&str],
    eta: &[i64],
) -> SplitType {
    edges.push(leaf("root", root, EdgeClass::BoundaryLeaf));
    let mut markings = Vec::new();
    for (v, label) in marked {
        let id = format!("z{label}");
        edges.push(leaf(&id, v, EdgeClass::InteriorLeaf));
        markings.push(marking(&id, *label));
    }
    let refined = TropicalGraph { vertices, edges, markings, root: Some("root".into()) };
    let base_collapse: Vec<(String, Option<String>)> = collapsed.iter().map(|c| (c.to_string(), None)).collect();
    let eta: Vec<Rational> = eta.iter().map(|&x| int(x)).collect();
    SplitType::from_collapse(geo, refined, &base_collapse, split.iter().map(|s| s.to_string()).collect(), eta)
        .expect("library split types are well formed")
}

/// Cross scene, base edge from the `++` chamber to the `--` chamber. The
/// refined graph bends at the origin cell with a collapsed edge of slope
/// `(2,1)` next to the root. Cone direction `(1,0)`.
pub fn cross_bend_near_root(geo: &Glued) -> SplitType {
    build(
        geo,
        vec![vertex("x", "++", Sort::Disk), vertex("v", "00", Sort::Sphere), vertex("y", "--", Sort::Sphere)],
        vec![node("c", "v", "x", &[2, 1]), node("e", "v", "y", &[-1, -1])],
        "x",
        &[("y", 1)],
        &["c"],
        &["e"],
        &[1, 0],
    )
}

/// As [`cross_bend_near_root`] but the collapsed edge, of slope `(1,0)`,
/// sits at the far chamber inside the cell `0-`.
pub fn cross_bend_far_from_root(geo: &Glued) -> SplitType {
    build(
        geo,
        vec![vertex("x", "++", Sort::Disk), vertex("y", "--", Sort::Sphere), vertex("v", "0-", Sort::Sphere)],
        vec![node("c", "y", "v", &[1, 0]), node("e", "x", "v", &[-1, -1])],
        "x",
        &[("y", 1)],
        &["c"],
        &["e"],
        &[1, 0],
    )
}

/// Cross scene, base graph with two split edges of slopes `(1,1)` and
/// `(1,0)` leaving the root chamber `--`. Both split edges start at one
/// vertex reached by a single collapsed edge of slope `(2,1)`, so the
/// discrepancy cone is a ray and the cone condition fails.
pub fn cross_two_splits_single_bend(geo: &Glued) -> SplitType {
    build(
        geo,
        vec![
            vertex("y", "--", Sort::Disk),
            vertex("v", "00", Sort::Sphere),
            vertex("x", "++", Sort::Sphere),
            vertex("z", "+-", Sort::Sphere),
        ],
        vec![node("c", "y", "v", &[2, 1]), node("e1", "v", "x", &[1, 1]), node("e2", "v", "z", &[1, 0])],
        "y",
        &[("x", 1), ("z", 2)],
        &["c"],
        &["e1", "e2"],
        &[-2, -1],
    )
}

/// Same base as [`cross_two_splits_single_bend`], refined through a vertex
/// in the cell `0-`; the relative weights fill a two-dimensional cone and
/// the cone condition holds.
pub fn cross_two_splits_double_bend(geo: &Glued) -> SplitType {
    build(
        geo,
        vec![
            vertex("y", "--", Sort::Disk),
            vertex("w", "0-", Sort::Sphere),
            vertex("v", "00", Sort::Sphere),
            vertex("x", "++", Sort::Sphere),
            vertex("z", "+-", Sort::Sphere),
        ],
        vec![
            node("c1", "y", "w", &[1, 0]),
            node("c2", "w", "v", &[2, 1]),
            node("e1", "v", "x", &[1, 1]),
            node("e2", "v", "z", &[1, 0]),
        ],
        "y",
        &[("x", 1), ("z", 2)],
        &["c1", "c2"],
        &["e1", "e2"],
        &[-2, -1],
    )
}

fn cube_vertices(neck: bool) -> Vec<Vertex> {
    let mut v = vec![
        vertex("v0", "---", Sort::Disk),
        vertex("vp", "000", Sort::Sphere),
        vertex("v1", "+++", Sort::Sphere),
        vertex("vm", "000", Sort::Sphere),
    ];
    if neck {
        v.push(vertex("n", "000", Sort::Sphere));
    }
    v
}

/// Cube scene (`coordinate_cuts(3)`): the base edge from `+++` to `---` of
/// slope `(-1,-1,-1)` is split; each end bends into the origin cell by
/// slopes `(2,1,0)` and `(1,2,0)`. Cone direction `(1,1,0)`.
pub fn cube_split(geo: &Glued) -> SplitType {
    cube_with(geo, 1, false)
}

/// [`cube_split`] with the split slope doubled.
pub fn cube_split_doubled(geo: &Glued) -> SplitType {
    cube_with(geo, 2, false)
}

/// [`cube_split`] with an extra free vertex on the `(2,1,0)` bend.
pub fn cube_split_with_neck(geo: &Glued) -> SplitType {
    cube_with(geo, 1, true)
}

fn cube_with(geo: &Glued, k: i64, neck: bool) -> SplitType {
    let mut edges = vec![node("e", "vm", "vp", &[-k, -k, -k]), node("em", "vm", "v1", &[1, 2, 0])];
    let mut collapsed = vec!["ep", "em"];
    if neck {
        edges.push(node("ep", "v0", "n", &[2, 1, 0]));
        edges.push(node("en", "n", "vp", &[2, 1, 0]));
        collapsed.push("en");
    } else {
        edges.push(node("ep", "v0", "vp", &[2, 1, 0]));
    }
    build(geo, cube_vertices(neck), edges, "v0", &[], &collapsed, &["e"], &[1, 1, 0])
}

/// Projective-plane fan: the rigid star of the triangle plus a vertex on the
/// ray `rc` joined to the center by a split edge of slope `(1,1)`.
pub fn triangle_split_midpoint(geo: &Glued) -> SplitType {
    build(
        geo,
        vec![
            vertex("d", "C1", Sort::Disk),
            vertex("b", "C3", Sort::Sphere),
            vertex("f", "C2", Sort::Sphere),
            vertex("c", "O", Sort::Sphere),
            vertex("m", "rc", Sort::Sphere),
        ],
        vec![
            node("ed", "d", "c", &[-1, -1]),
            node("eb", "b", "c", &[-1, 2]),
            node("ef", "f", "c", &[2, -1]),
            node("e", "m", "c", &[1, 1]),
        ],
        "d",
        &[],
        &[],
        &["e"],
        &[1, 0],
    )
}
