//! Worked examples regenerated from the library and compared byte for byte
//! with the golden files.

use crate::report::{Item, Report};
use serde_json::{json, Value};
use std::path::Path;
use tropikit::ainfty::{AInftyData, Novikov};
use tropikit::diagonal::diagonal_decomposition;
use tropikit::exactalg::rational::{display_rational, display_vec, int, rat, Rational};
use tropikit::index_energy::{maslov_toric, node_multiplicity};
use tropikit::library;
use tropikit::polyhedral::standard_simplex;
use tropikit::potential::{bg_potential, cut_decomposition, leading_disk_types, verify_unobstructed, MomentFiber};
use tropikit::split::{cone_condition, discrepancy_cone, framed_multiplicity, relative_weights, split_rigid, symmetry_splitting};
use tropikit::tropical::{check_balancing, collapse_edges, is_rigid, symmetry_group, weight_cone, TropicalGraph};

type Example = (&'static str, fn() -> Result<Value, String>);

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn symmetry(g: TropicalGraph, geo: tropikit::polyhedral::Glued) -> Result<Value, String> {
    let s = symmetry_group(&g, &geo).map_err(err)?;
    Ok(json!({
        "dim_identity_component": s.dim_identity_component,
        "component_count": s.component_count.to_string(),
        "framed_order": s.framed_order.to_string(),
        "rigid": is_rigid(&g, &geo).map_err(err)?,
    }))
}

fn triangle_symmetry() -> Result<Value, String> {
    symmetry(library::triangle_star(), library::projective_plane_fan())
}

fn elbow_symmetry() -> Result<Value, String> {
    symmetry(library::cross_elbow(), library::coordinate_cuts(2))
}

fn triangle_balance() -> Result<Value, String> {
    let b = check_balancing(&library::triangle_star(), &library::projective_plane_fan(), "o").map_err(err)?;
    Ok(json!({ "vertex": b.vertex, "balanced": b.balanced, "slope_sum": display_vec(&b.slope_sum) }))
}

fn neck_rigidity() -> Result<Value, String> {
    let geo = library::coordinate_cuts(2);
    let w = weight_cone(&library::cross_neck(), &geo).map_err(err)?;
    Ok(json!({ "rigid": is_rigid(&library::cross_neck(), &geo).map_err(err)?, "weight_dim": w.dim }))
}

fn tripod_collapse() -> Result<Value, String> {
    let geo = library::coordinate_cuts(2);
    let c = collapse_edges(&library::cross_tripod_stretched(), &geo, &["m".to_string()]).map_err(err)?;
    let same = c.graph.vertices.len() == library::cross_tripod().vertices.len()
        && c.graph.edges.len() == library::cross_tripod().edges.len();
    Ok(json!({ "vertex_map": c.vertex_map, "matches_tripod": same }))
}

fn cut_complexes() -> Result<Value, String> {
    let mut out = serde_json::Map::new();
    for (name, geo) in [("single_cut", library::single_cut()), ("two_cuts", library::two_cuts())] {
        let dc = geo.gluing.dual_complex(&geo.decomp).map_err(err)?;
        out.insert(name.into(), serde_json::to_value(&dc).map_err(err)?);
    }
    Ok(Value::Object(out))
}

fn bend_weights() -> Result<Value, String> {
    let geo = library::coordinate_cuts(2);
    let s = library::cross_bend_near_root(&geo);
    let r = relative_weights(&s, &geo).map_err(err)?;
    let d = discrepancy_cone(&s, &geo).map_err(err)?;
    Ok(json!({ "relative_dim": r.dim, "discrepancy_dim": d.dim, "expected_dim": d.expected_dim }))
}

fn two_split_cones() -> Result<Value, String> {
    let geo = library::coordinate_cuts(2);
    let mut out = serde_json::Map::new();
    for (name, s) in [
        ("single_bend", library::cross_two_splits_single_bend(&geo)),
        ("double_bend", library::cross_two_splits_double_bend(&geo)),
    ] {
        let c = cone_condition(&s, &geo).map_err(err)?;
        out.insert(
            name.into(),
            json!({ "eta": display_vec(&s.cone_direction), "holds": c.holds, "cone_dim": c.cone_dim, "expected_dim": c.expected_dim }),
        );
    }
    Ok(Value::Object(out))
}

fn cube_split() -> Result<Value, String> {
    let geo = library::coordinate_cuts(3);
    let mut s = library::cube_split(&geo);
    let m = framed_multiplicity(&s, &geo).map_err(err)?;
    let (parts, _) = symmetry_splitting(&s, &geo).map_err(err)?;
    let rigid = split_rigid(&s, &geo).map_err(err)?.rigid;
    let mut cones = Vec::new();
    for r in [rat(3, 4), int(1), rat(3, 2)] {
        s.cone_direction = vec![r.clone(), int(1), int(0)];
        let c = cone_condition(&s, &geo).map_err(err)?;
        cones.push(json!({ "r": display_rational(&r), "holds": c.holds }));
    }
    Ok(json!({ "framed_multiplicity": m.to_string(), "components": parts, "rigid": rigid, "cone_condition": cones }))
}

fn toric_indices() -> Result<Value, String> {
    let mults: Result<Vec<u64>, _> =
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]].iter().map(|nu| node_multiplicity(&[1, 1, 1], nu)).collect();
    Ok(json!({ "maslov_one_divisor": maslov_toric(&[1]), "diagonal_slope_multiplicities": mults.map_err(err)? }))
}

fn kunneth() -> Result<Value, String> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let eta: Vec<Rational> = (1..=n as i64).map(int).collect();
        let d = diagonal_decomposition(&standard_simplex(n), &eta).map_err(err)?;
        let pairs: Vec<Value> = d
            .pairs
            .iter()
            .map(|p| json!({ "dims": [p.minus_dim, p.plus_dim], "multiplicity": p.multiplicity }))
            .collect();
        out.push(json!({ "n": n, "eta": display_vec(&eta), "pairs": pairs }));
    }
    Ok(Value::Array(out))
}

fn fiber_model() -> Result<Value, String> {
    let cutoff = int(1);
    let w = Novikov::monomial(int(3), rat(1, 3), cutoff.clone());
    let data = AInftyData::new(&library::fiber_model(&w)).map_err(err)?;
    let rel = data.check_associativity(3).map_err(err)?;
    let unit = data.check_strict_unit(data.generator("x_unit").map_err(err)?).map_err(err)?;
    let homotopy = data.check_homotopy_unit_leading().map_err(err)?;
    let b = [("x_wt".to_string(), w.clone())].into_iter().collect();
    let mc = data.mc_residual(&b).map_err(err)?;
    Ok(json!({
        "relations": rel.pass,
        "strict_unit": unit.pass,
        "homotopy_unit": { "pass": homotopy.pass, "exact": homotopy.exact },
        "mc_solution": mc.solution,
        "potential": mc.potential.to_string(),
    }))
}

fn projective_plane_potential() -> Result<Value, String> {
    let f = MomentFiber::from_polytope(&standard_simplex(2), vec![rat(1, 3), rat(1, 3)]).map_err(err)?;
    let pot = bg_potential(&f, false);
    let geo = cut_decomposition(&f).map_err(err)?;
    let rep = leading_disk_types(&f, &geo, None).map_err(err)?;
    let disks: Vec<Value> = rep
        .disks
        .iter()
        .map(|d| {
            json!({
                "mu": d.mu,
                "maslov": d.maslov,
                "area": d.area.to_string(),
                "rigid": d.rigidity.rigid,
                "relative_dim": d.relative_dim,
                "cone_condition": d.cone.as_ref().map(|c| c.holds),
            })
        })
        .collect();
    let mc = verify_unobstructed(&pot, &[int(1), int(1)], int(1)).map_err(err)?;
    Ok(json!({
        "potential": pot.to_string(),
        "cells": rep.cells,
        "disks": disks,
        "unobstructed": mc.unobstructed,
        "value_at_one": mc.potential.to_string(),
    }))
}

const EXAMPLES: [Example; 13] = [
    ("triangle-star-symmetry", triangle_symmetry),
    ("cross-elbow-symmetry", elbow_symmetry),
    ("triangle-star-balance", triangle_balance),
    ("cross-neck-rigidity", neck_rigidity),
    ("tripod-collapse", tripod_collapse),
    ("cut-dual-complexes", cut_complexes),
    ("bend-relative-weights", bend_weights),
    ("two-split-cone-condition", two_split_cones),
    ("cube-split", cube_split),
    ("toric-indices", toric_indices),
    ("kunneth-projective-spaces", kunneth),
    ("fiber-model", fiber_model),
    ("projective-plane-potential", projective_plane_potential),
];

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Regenerates every example; with `bless` the golden files are rewritten
/// instead of compared.
pub fn run(dir: &Path, bless: bool) -> Report {
    let mut items = Vec::new();
    for (name, f) in EXAMPLES {
        let path = dir.join(format!("{name}.json"));
        let (pass, summary, detail) = match f() {
            Err(e) => (false, format!("error: {e}"), Value::Null),
            Ok(v) => {
                let text = render(&v);
                if bless {
                    match std::fs::write(&path, &text) {
                        Ok(()) => (true, format!("wrote {}", path.display()), v),
                        Err(e) => (false, format!("cannot write {}: {e}", path.display()), v),
                    }
                } else {
                    match std::fs::read_to_string(&path) {
                        Ok(golden) if golden == text => (true, "matches golden".into(), v),
                        Ok(_) => (false, format!("differs from {}", path.display()), v),
                        Err(e) => (false, format!("cannot read {}: {e}", path.display()), v),
                    }
                }
            }
        };
        items.push(Item { section: "examples".into(), id: name.into(), pass, summary, detail });
    }
    Report::new("examples", items)
}
