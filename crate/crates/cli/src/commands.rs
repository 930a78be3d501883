//! One function per command. Each returns a report whose items are the
//! scene entries it looked at; an item fails when its check fails or the
//! computation errs.

use crate::report::{Item, Report};
use crate::scene::{InputError, Scene};
use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};
use tropikit::ainfty::{AInftyData, MorphismData};
use tropikit::diagonal::{arrangement, diagonal_decomposition, face_cones};
use tropikit::exactalg::rational::{display_vec, int, serde_q, Rational};
use tropikit::exactalg::subspace::sample_generic;
use tropikit::polyhedral::Glued;
use tropikit::potential::{bg_potential, cut_decomposition, leading_disk_types, verify_unobstructed, DiskReport};
use tropikit::split::{
    cone_condition, discrepancy_cone, exact_sequence_check, framed_multiplicity, order_split_edges, split_rigid,
    strong_cone_check, symmetry_splitting, validate_split,
};
use tropikit::tropical::{check_balancing, is_rigid, symmetry_group, validate_tropical, weight_cone};

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub eta: Option<Vec<Rational>>,
    pub holonomy: Option<Vec<Rational>>,
    pub cutoff: Option<Rational>,
    pub flip_sign: bool,
    pub seed: Option<u64>,
    pub samples: usize,
    pub arity: usize,
    pub only: Option<String>,
}

impl Options {
    fn wants(&self, id: &str) -> bool {
        self.only.as_deref().is_none_or(|o| o == id)
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn item(section: &str, id: &str, r: Result<(bool, String, Value), String>) -> Item {
    match r {
        Ok((pass, summary, detail)) => Item { section: section.into(), id: id.into(), pass, summary, detail },
        Err(e) => Item { section: section.into(), id: id.into(), pass: false, summary: format!("error: {e}"), detail: Value::Null },
    }
}

fn nonempty(n: usize, what: &str) -> Result<(), InputError> {
    if n == 0 {
        return Err(InputError::at(format!("/{what}"), format!("the scene has no {what}")));
    }
    Ok(())
}

fn check_len(flag: &str, v: &[Rational], n: usize) -> Result<(), String> {
    if v.len() != n {
        return Err(format!("--{flag} has {} coordinates, expected {n}", v.len()));
    }
    Ok(())
}

pub fn validate(scene: &Scene, opts: &Options) -> Result<Report, InputError> {
    let mut items = Vec::new();
    let mut geo: Option<Glued> = None;
    if scene.geometry.is_some() {
        let r = scene.geometry().map_err(|e| e.to_string()).map(|g| {
            let report = g.gluing.validate(&g.decomp);
            let complex = g.gluing.dual_complex(&g.decomp).ok();
            let summary = format!(
                "{} members, {} gluing checks, {} violations",
                g.decomp.len(),
                report.checks,
                report.violations.len()
            );
            let out = (report.valid, summary, json!({ "gluing": report, "dual_complex": complex }));
            geo = Some(g);
            out
        });
        items.push(item("geometry", "geometry", r));
    }
    if let Some(geo) = &geo {
        for g in scene.graphs.iter().filter(|g| opts.wants(&g.id)) {
            let r = validate_tropical(&g.graph, geo)
                .map(|v| (v.valid, format!("{} violations", v.violations.len()), to_value(&v)))
                .map_err(|e| e.to_string());
            items.push(item("graphs", &g.id, r));
        }
        for (i, s) in scene.splits.iter().enumerate().filter(|(_, s)| opts.wants(&s.id)) {
            let r = scene.split_type(i, geo).map_err(|e| e.to_string()).and_then(|st| {
                validate_split(&st, geo)
                    .map(|v| (v.valid, format!("{} violations", v.violations.len()), to_value(&v)))
                    .map_err(|e| e.to_string())
            });
            items.push(item("splits", &s.id, r));
        }
    }
    for it in scene.index.iter().filter(|x| opts.wants(&x.id)) {
        let r = it.input.expected_dimension().map(|_| (true, "well formed".into(), Value::Null)).map_err(|e| e.to_string());
        items.push(item("index", &it.id, r));
    }
    for a in scene.algebras.iter().filter(|x| opts.wants(&x.id)) {
        let r = AInftyData::new(&a.algebra)
            .map(|d| (true, format!("{} generators", d.to_spec().generators.len()), Value::Null))
            .map_err(|e| e.to_string());
        items.push(item("algebras", &a.id, r));
    }
    for m in scene.morphisms.iter().filter(|x| opts.wants(&x.id)) {
        let r = MorphismData::new(&m.morphism).map(|_| (true, "well formed".into(), Value::Null)).map_err(|e| e.to_string());
        items.push(item("morphisms", &m.id, r));
    }
    for (i, p) in scene.polytopes.iter().enumerate().filter(|(_, p)| opts.wants(&p.id)) {
        let r = scene.polytope(i).map_err(|e| e.to_string()).map(|poly| {
            let dz = poly.is_delzant().ok();
            let summary = format!(
                "{} vertices, {}",
                poly.vertices().len(),
                match &dz {
                    Some(d) if d.delzant => "Delzant",
                    Some(_) => "not Delzant",
                    None => "Delzant test not applicable",
                }
            );
            (true, summary, json!({ "delzant": dz }))
        });
        items.push(item("polytopes", &p.id, r));
    }
    for (i, f) in scene.fibers.iter().enumerate().filter(|(_, f)| opts.wants(&f.id)) {
        let r = scene.fiber(i).map(|fb| (true, format!("{} facets", fb.facets.len()), to_value(&fb))).map_err(|e| e.to_string());
        items.push(item("fibers", &f.id, r));
    }
    Ok(Report::new("validate", items))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphOp {
    Weights,
    Symmetry,
    Rigidity,
    Balance,
}

pub fn graph(scene: &Scene, op: GraphOp, opts: &Options) -> Result<Report, InputError> {
    nonempty(scene.graphs.len(), "graphs")?;
    let geo = scene.geometry()?;
    let mut items = Vec::new();
    for g in scene.graphs.iter().filter(|g| opts.wants(&g.id)) {
        let r = match op {
            GraphOp::Weights => weight_cone(&g.graph, &geo).map(|w| (true, format!("weight cone of dimension {}", w.dim), to_value(&w))),
            GraphOp::Symmetry => symmetry_group(&g.graph, &geo).map(|s| {
                let summary = format!(
                    "identity component of dimension {}, {} components, framed order {}",
                    s.dim_identity_component, s.component_count, s.framed_order
                );
                (true, summary, to_value(&s))
            }),
            GraphOp::Rigidity => is_rigid(&g.graph, &geo)
                .map(|r| (r, if r { "rigid".into() } else { "not rigid".into() }, json!({ "rigid": r }))),
            GraphOp::Balance => g
                .graph
                .vertices
                .iter()
                .map(|v| check_balancing(&g.graph, &geo, &v.id))
                .collect::<Result<Vec<_>, _>>()
                .map(|bs| {
                    let bad: Vec<&str> = bs.iter().filter(|b| !b.balanced).map(|b| b.vertex.as_str()).collect();
                    let summary =
                        if bad.is_empty() { "every vertex balanced".to_string() } else { format!("unbalanced at {}", bad.join(", ")) };
                    (bad.is_empty(), summary, to_value(&bs))
                }),
        };
        items.push(item("graphs", &g.id, r.map_err(|e| e.to_string())));
    }
    let name = format!("graph {}", format!("{op:?}").to_lowercase());
    Ok(Report::new(&name, items))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SplitOp {
    Check,
    Multiplicity,
    Cone,
}

pub fn split(scene: &Scene, op: SplitOp, opts: &Options) -> Result<Report, InputError> {
    nonempty(scene.splits.len(), "splits")?;
    let geo = scene.geometry()?;
    let mut items = Vec::new();
    for (i, s) in scene.splits.iter().enumerate().filter(|(_, s)| opts.wants(&s.id)) {
        let r = scene.split_type(i, &geo).map_err(|e| e.to_string()).and_then(|mut st| {
            if let Some(eta) = &opts.eta {
                check_len("eta", eta, geo.dim())?;
                st.cone_direction = eta.clone();
            }
            let out = match op {
                SplitOp::Check => validate_split(&st, &geo).and_then(|v| {
                    let order = if v.valid { Some(order_split_edges(&st, &geo)?) } else { None };
                    let rigid = if v.valid { Some(split_rigid(&st, &geo)?) } else { None };
                    let summary = format!("{} violations", v.violations.len());
                    Ok((v.valid, summary, json!({ "validation": v, "order": order, "rigidity": rigid })))
                }),
                SplitOp::Multiplicity => framed_multiplicity(&st, &geo).and_then(|m| {
                    let seq = exact_sequence_check(&st, &geo)?;
                    let (parts, _) = symmetry_splitting(&st, &geo)?;
                    let summary = format!("framed multiplicity {m}, exact sequence {}", if seq.consistent { "consistent" } else { "inconsistent" });
                    Ok((seq.consistent, summary, json!({ "multiplicity": m.to_string(), "exact_sequence": seq, "components": parts })))
                }),
                SplitOp::Cone => cone_condition(&st, &geo).and_then(|c| {
                    let d = discrepancy_cone(&st, &geo)?;
                    let strong = match opts.seed {
                        Some(seed) if c.holds => Some(strong_cone_check(&st, &geo, opts.samples, seed)?),
                        _ => None,
                    };
                    let strong_ok = strong.as_ref().is_none_or(|s| s.all_inside());
                    let mut summary = format!(
                        "cone condition {} at η₀ = {}, discrepancy cone of dimension {} (expected {})",
                        if c.holds { "holds" } else { "fails" },
                        display_vec(&st.cone_direction),
                        d.dim,
                        d.expected_dim
                    );
                    if let Some(s) = &strong {
                        summary.push_str(&format!(", strong check {}/{} inside", s.members, s.samples));
                    }
                    let detail = json!({ "cone_condition": c, "discrepancy_dim": d.dim, "expected_dim": d.expected_dim, "strong": strong });
                    Ok((c.holds && strong_ok, summary, detail))
                }),
            };
            out.map_err(|e| e.to_string())
        });
        items.push(item("splits", &s.id, r));
    }
    let name = format!("split {}", format!("{op:?}").to_lowercase());
    Ok(Report::new(&name, items))
}

pub fn index(scene: &Scene, opts: &Options) -> Result<Report, InputError> {
    nonempty(scene.index.len(), "index")?;
    let mut items = Vec::new();
    for it in scene.index.iter().filter(|x| opts.wants(&x.id)) {
        let r = it
            .input
            .expected_dimension()
            .map(|rep| {
                let pass = it.expected.is_none_or(|e| e == rep.value);
                let summary = match it.expected {
                    Some(e) => format!("expected dimension {} (scene expects {e})", rep.value),
                    None => format!("expected dimension {}", rep.value),
                };
                (pass, summary, to_value(&rep))
            })
            .map_err(|e| e.to_string());
        items.push(item("index", &it.id, r));
    }
    Ok(Report::new("index", items))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum AinftyOp {
    Check,
    Mc,
}

fn with_cutoff(spec: &tropikit::ainfty::AlgebraSpec, cutoff: &Option<Rational>) -> tropikit::ainfty::AlgebraSpec {
    let mut s = spec.clone();
    if let Some(c) = cutoff {
        s.cutoff = c.clone();
    }
    s
}

pub fn ainfty(scene: &Scene, op: AinftyOp, opts: &Options) -> Result<Report, InputError> {
    let mut items = Vec::new();
    match op {
        AinftyOp::Check => {
            nonempty(scene.algebras.len() + scene.morphisms.len(), "algebras")?;
            for a in scene.algebras.iter().filter(|x| opts.wants(&x.id)) {
                let spec = with_cutoff(&a.algebra, &opts.cutoff);
                let r = AInftyData::new(&spec).and_then(|d| {
                    let rel = d.check_associativity(opts.arity)?;
                    let unit = match &spec.unit {
                        Some(u) => Some(d.check_strict_unit(d.generator(u)?)?),
                        None => None,
                    };
                    let homotopy = match (&spec.unit, &spec.weighted, &spec.maximum) {
                        (Some(_), Some(_), Some(_)) => Some(d.check_homotopy_unit_leading()?),
                        _ => None,
                    };
                    let pass = rel.pass && unit.as_ref().is_none_or(|u| u.pass) && homotopy.as_ref().is_none_or(|h| h.pass);
                    let mut summary = match rel.first_failing_arity() {
                        None => format!("relations hold through arity {}", opts.arity),
                        Some(d) => format!("{} relations fail, first at arity {d}", rel.failure_count),
                    };
                    if let Some(u) = &unit {
                        summary.push_str(if u.pass { ", strict unit" } else { ", unit fails" });
                    }
                    if let Some(h) = &homotopy {
                        summary.push_str(if h.pass { ", homotopy unit" } else { ", homotopy unit fails" });
                    }
                    Ok((pass, summary, json!({ "relations": rel, "strict_unit": unit, "homotopy_unit": homotopy })))
                });
                items.push(item("algebras", &a.id, r.map_err(|e| e.to_string())));
            }
            for m in scene.morphisms.iter().filter(|x| opts.wants(&x.id)) {
                let mut spec = m.morphism.clone();
                spec.source = with_cutoff(&spec.source, &opts.cutoff);
                spec.target = with_cutoff(&spec.target, &opts.cutoff);
                let r = MorphismData::new(&spec).map_err(|e| e.to_string()).and_then(|d| {
                    let rep = d.check(opts.arity).map_err(|e| e.to_string())?;
                    let pass = rep.relations.pass && rep.unital.as_ref().is_none_or(|u| u.pass);
                    let summary = match rep.relations.first_failing_arity() {
                        None => format!("morphism relations hold through arity {}", opts.arity),
                        Some(d) => format!("morphism relations fail, first at arity {d}"),
                    };
                    Ok((pass, summary, to_value(&rep)))
                });
                items.push(item("morphisms", &m.id, r));
            }
        }
        AinftyOp::Mc => {
            let with_mc: Vec<_> = scene.algebras.iter().filter(|a| a.mc.is_some()).collect();
            if with_mc.is_empty() {
                return Err(InputError::at("/algebras", "no algebra carries an mc candidate"));
            }
            for a in with_mc.into_iter().filter(|x| opts.wants(&x.id)) {
                let spec = with_cutoff(&a.algebra, &opts.cutoff);
                let b: std::collections::BTreeMap<_, _> =
                    a.mc.as_ref().unwrap().iter().map(|(k, v)| (k.clone(), v.with_cutoff(&spec.cutoff))).collect();
                let r = AInftyData::new(&spec).and_then(|d| d.mc_residual(&b)).map(|mc| {
                    let summary = if mc.solution {
                        format!("solution with potential {}", mc.potential)
                    } else {
                        format!("not a solution: residual {}", tropikit::ainfty::describe(&mc.residual))
                    };
                    (mc.solution, summary, to_value(&mc))
                });
                items.push(item("algebras", &a.id, r.map_err(|e| e.to_string())));
            }
        }
    }
    let name = format!("ainfty {}", format!("{op:?}").to_lowercase());
    Ok(Report::new(&name, items))
}

pub fn diagonal(scene: &Scene, opts: &Options) -> Result<Report, InputError> {
    nonempty(scene.polytopes.len(), "polytopes")?;
    let mut items = Vec::new();
    for (i, p) in scene.polytopes.iter().enumerate().filter(|(_, p)| opts.wants(&p.id)) {
        let poly = scene.polytope(i)?;
        let r = (|| {
            let eta = match &opts.eta {
                Some(e) => {
                    check_len("eta", e, poly.dim())?;
                    e.clone()
                }
                None => {
                    let cones = face_cones(&poly).map_err(|e| e.to_string())?;
                    sample_generic(poly.dim(), &arrangement(&cones)).ok_or("no generic direction found")?
                }
            };
            let d = diagonal_decomposition(&poly, &eta).map_err(|e| e.to_string())?;
            let summary = format!("{} pairs at η = {}", d.pairs.len(), display_vec(&d.eta));
            Ok((true, summary, to_value(&d)))
        })();
        items.push(item("polytopes", &p.id, r));
    }
    Ok(Report::new("diagonal", items))
}

#[derive(Serialize)]
struct PotentialDetail<'a> {
    #[serde(flatten)]
    potential: &'a tropikit::potential::Potential,
    symbolic: String,
    #[serde(with = "serde_q::vec")]
    holonomy: Vec<Rational>,
    leading: &'a DiskReport,
    unobstructed: Value,
}

/// Smallest integer above every exponent.
fn default_cutoff(pot: &tropikit::potential::Potential) -> Rational {
    let top = pot.terms.iter().map(|t| t.exponent.abs()).max().unwrap_or_else(|| int(0));
    (top.floor() + int(1)).round()
}

pub fn potential(scene: &Scene, opts: &Options) -> Result<Report, InputError> {
    nonempty(scene.fibers.len(), "fibers")?;
    let mut items = Vec::new();
    for (i, fi) in scene.fibers.iter().enumerate().filter(|(_, f)| opts.wants(&f.id)) {
        let f = scene.fiber(i)?;
        let r = (|| {
            let n = f.dim();
            let pot = bg_potential(&f, opts.flip_sign);
            let y = opts.holonomy.clone().unwrap_or_else(|| vec![int(1); n]);
            check_len("holonomy", &y, n)?;
            if let Some(e) = &opts.eta {
                check_len("eta", e, n)?;
            }
            let geo = cut_decomposition(&f).map_err(|e| e.to_string())?;
            let leading = leading_disk_types(&f, &geo, opts.eta.as_deref()).map_err(|e| e.to_string())?;
            let cutoff = opts.cutoff.clone().unwrap_or_else(|| default_cutoff(&pot));
            let disks_ok = leading.disks.iter().all(|d| {
                d.broken_rigid && d.rigidity.rigid && d.maslov == 2 && d.cone.as_ref().is_none_or(|c| c.holds)
            });
            let (unobstructed, mc_ok, mc_note) = match verify_unobstructed(&pot, &y, cutoff) {
                Ok(rep) => {
                    let note = if rep.vacuous {
                        "vacuous: the cutoff is below every exponent".to_string()
                    } else if rep.unobstructed {
                        format!("b = W·x_wt solves the Maurer–Cartan equation with W = {}", rep.potential)
                    } else {
                        "b = W·x_wt is not a solution".to_string()
                    };
                    (to_value(&rep), rep.unobstructed, note)
                }
                Err(e) => (json!({ "error": e.to_string() }), false, e.to_string()),
            };
            let summary = format!(
                "{} terms, {} leading disks{}; {mc_note}",
                pot.terms.len(),
                leading.disks.len(),
                if disks_ok { ", all rigid of Maslov index 2" } else { ", some leading disk fails" }
            );
            let detail = PotentialDetail { potential: &pot, symbolic: pot.to_string(), holonomy: y, leading: &leading, unobstructed };
            Ok::<_, String>((disks_ok && mc_ok, summary, to_value(&detail)))
        })();
        items.push(item("fibers", &fi.id, r));
    }
    Ok(Report::new("potential", items))
}
