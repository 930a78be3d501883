//! JSON scenes: any subset of a geometry, tropical graphs, split types,
//! index data, algebras, morphisms, polytopes and moment fibers. Rationals
//! are strings (`"3/2"`).

use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};
use tropikit::ainfty::{AlgebraSpec, MorphismSpec, Novikov};
use tropikit::exactalg::rational::{serde_q, Rational};
use tropikit::index_energy::IndexInput;
use tropikit::library;
use tropikit::polyhedral::{Decomposition, DualInput, GluingDatum, Glued, Halfspace, Polytope};
use tropikit::potential::{Facet, MomentFiber};
use tropikit::split::SplitType;
use tropikit::tropical::TropicalGraph;

pub const VERSION: u32 = 1;

/// An input error, with the JSON pointer of the offending value.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pointer}: {message}")]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl InputError {
    pub fn at(pointer: impl Into<String>, message: impl Into<String>) -> InputError {
        InputError { pointer: pointer.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub version: u32,
    #[serde(default)]
    pub geometry: Option<GeometrySpec>,
    #[serde(default)]
    pub graphs: Vec<GraphItem>,
    #[serde(default)]
    pub splits: Vec<SplitItem>,
    #[serde(default)]
    pub index: Vec<IndexItem>,
    #[serde(default)]
    pub algebras: Vec<AlgebraItem>,
    #[serde(default)]
    pub morphisms: Vec<MorphismItem>,
    #[serde(default)]
    pub polytopes: Vec<PolytopeItem>,
    #[serde(default)]
    pub fibers: Vec<FiberItem>,
}

/// Either a named library geometry or explicit members and duals.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    #[serde(default)]
    pub library: Option<String>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub members: Vec<MemberSpec>,
    /// `(face, coface)` pairs checked against the geometry.
    #[serde(default)]
    pub faces: Option<Vec<(String, String)>>,
    #[serde(default)]
    pub pairing: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub duals: Vec<DualSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberSpec {
    pub id: String,
    #[serde(default)]
    pub halfspaces: Option<Vec<Halfspace>>,
    #[serde(default, with = "serde_q_rows")]
    pub vertices: Option<Vec<Vec<Rational>>>,
    #[serde(default, with = "serde_q_rows")]
    pub rays: Option<Vec<Vec<Rational>>>,
}

/// `halfspaces` (`normal·x ≥ constant`) or `vertices` plus optional `rays`.
#[derive(Debug, Clone, Default)]
pub struct ShapeSpec {
    pub halfspaces: Option<Vec<Halfspace>>,
    pub vertices: Option<Vec<Vec<Rational>>>,
    pub rays: Option<Vec<Vec<Rational>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualSpec {
    pub member: String,
    #[serde(default, with = "serde_q_rows")]
    pub vertices: Option<Vec<Vec<Rational>>>,
    #[serde(default)]
    pub halfspaces: Option<Vec<Halfspace>>,
    #[serde(default, with = "serde_q::opt_vec")]
    pub anchor: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphItem {
    pub id: String,
    pub graph: TropicalGraph,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitItem {
    pub id: String,
    pub refined: TropicalGraph,
    /// Refined edge ids: collapsed (`null`) or renamed in the base.
    #[serde(default)]
    pub collapse: BTreeMap<String, Option<String>>,
    pub split_edges: Vec<String>,
    #[serde(with = "serde_q::vec")]
    pub cone_direction: Vec<Rational>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexItem {
    pub id: String,
    pub input: IndexInput,
    #[serde(default)]
    pub expected: Option<i64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraItem {
    pub id: String,
    pub algebra: AlgebraSpec,
    /// A Maurer–Cartan candidate `b`, by generator.
    #[serde(default)]
    pub mc: Option<BTreeMap<String, Novikov>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismItem {
    pub id: String,
    pub morphism: MorphismSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeItem {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub halfspaces: Option<Vec<Halfspace>>,
    #[serde(default, with = "serde_q_rows")]
    pub vertices: Option<Vec<Vec<Rational>>>,
    #[serde(default, with = "serde_q_rows")]
    pub rays: Option<Vec<Vec<Rational>>>,
}

impl MemberSpec {
    fn shape(&self) -> ShapeSpec {
        ShapeSpec { halfspaces: self.halfspaces.clone(), vertices: self.vertices.clone(), rays: self.rays.clone() }
    }
}

impl PolytopeItem {
    fn shape(&self) -> ShapeSpec {
        ShapeSpec { halfspaces: self.halfspaces.clone(), vertices: self.vertices.clone(), rays: self.rays.clone() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberItem {
    pub id: String,
    pub facets: Vec<Facet>,
    #[serde(with = "serde_q::vec")]
    pub lambda: Vec<Rational>,
    #[serde(default, with = "serde_q::opt_vec")]
    pub eps: Option<Vec<Rational>>,
}

mod serde_q_rows {
    use serde::{Deserialize, Deserializer};
    use tropikit::exactalg::rational::{parse_rational, Rational};

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Vec<Rational>>>, D::Error> {
        let raw: Option<Vec<Vec<String>>> = Option::deserialize(d)?;
        raw.map(|rows| {
            rows.iter()
                .map(|r| r.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect())
                .collect()
        })
        .transpose()
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Largest ambient dimension accepted, from `TROPIKIT_MAX_DIM` (default 6).
pub fn max_dim() -> Result<usize, InputError> {
    match std::env::var("TROPIKIT_MAX_DIM") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| InputError::at("/", format!("TROPIKIT_MAX_DIM must be a nonnegative integer, got {s:?}"))),
        Err(_) => Ok(6),
    }
}

fn check_dim(ptr: String, dim: usize, cap: usize) -> Result<(), InputError> {
    if dim > cap {
        return Err(InputError::at(ptr, format!("dimension {dim} exceeds TROPIKIT_MAX_DIM = {cap}")));
    }
    Ok(())
}

fn unique<'a>(section: &str, ids: impl Iterator<Item = &'a String>) -> Result<(), InputError> {
    let mut seen = BTreeSet::new();
    for (i, id) in ids.enumerate() {
        if !seen.insert(id) {
            return Err(InputError::at(format!("/{section}/{i}/id"), format!("duplicate id {id:?}")));
        }
    }
    Ok(())
}

/// References inside one tropical graph, and from its vertices into the
/// decomposition.
fn graph_refs(ptr: &str, g: &TropicalGraph, members: &BTreeSet<String>) -> Result<(), InputError> {
    let mut vertices = BTreeSet::new();
    for (i, v) in g.vertices.iter().enumerate() {
        if !vertices.insert(v.id.clone()) {
            return Err(InputError::at(format!("{ptr}/vertices/{i}/id"), format!("duplicate vertex {:?}", v.id)));
        }
        if !members.contains(&v.polytope) {
            return Err(InputError::at(format!("{ptr}/vertices/{i}/polytope"), format!("unknown polytope {:?}", v.polytope)));
        }
    }
    let mut edges = BTreeSet::new();
    for (i, e) in g.edges.iter().enumerate() {
        if !edges.insert(e.id.clone()) {
            return Err(InputError::at(format!("{ptr}/edges/{i}/id"), format!("duplicate edge {:?}", e.id)));
        }
        for (k, end) in e.ends.iter().enumerate() {
            if !vertices.contains(end) {
                return Err(InputError::at(format!("{ptr}/edges/{i}/ends/{k}"), format!("unknown vertex {end:?}")));
            }
        }
    }
    for (i, m) in g.markings.iter().enumerate() {
        if !edges.contains(&m.edge) {
            return Err(InputError::at(format!("{ptr}/markings/{i}/edge"), format!("unknown edge {:?}", m.edge)));
        }
    }
    if let Some(r) = &g.root {
        if !edges.contains(r) {
            return Err(InputError::at(format!("{ptr}/root"), format!("unknown edge {r:?}")));
        }
    }
    Ok(())
}

impl Scene {
    pub fn parse(text: &str) -> Result<Scene, InputError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let scene: Scene = serde_path_to_error::deserialize(de).map_err(|e| {
            let ptr = pointer(e.path());
            InputError::at(ptr, e.into_inner().to_string())
        })?;
        scene.check()?;
        Ok(scene)
    }

    pub fn load(path: &std::path::Path) -> Result<Scene, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError::at("/", format!("cannot read {}: {e}", path.display())))?;
        Scene::parse(&text)
    }

    /// Schema version, ids and cross references; dimensions against the cap.
    fn check(&self) -> Result<(), InputError> {
        if self.version != VERSION {
            return Err(InputError::at("/version", format!("unsupported version {}, expected {VERSION}", self.version)));
        }
        let cap = max_dim()?;
        unique("graphs", self.graphs.iter().map(|g| &g.id))?;
        unique("splits", self.splits.iter().map(|g| &g.id))?;
        unique("index", self.index.iter().map(|g| &g.id))?;
        unique("algebras", self.algebras.iter().map(|g| &g.id))?;
        unique("morphisms", self.morphisms.iter().map(|g| &g.id))?;
        unique("polytopes", self.polytopes.iter().map(|g| &g.id))?;
        unique("fibers", self.fibers.iter().map(|g| &g.id))?;
        let members = match &self.geometry {
            Some(g) => g.member_ids()?,
            None => BTreeSet::new(),
        };
        if let Some(g) = &self.geometry {
            if let Some(d) = g.dim {
                check_dim("/geometry/dim".into(), d, cap)?;
            }
        }
        if self.geometry.is_none() && !(self.graphs.is_empty() && self.splits.is_empty()) {
            return Err(InputError::at("/geometry", "graphs and split types need a geometry section"));
        }
        for (i, g) in self.graphs.iter().enumerate() {
            graph_refs(&format!("/graphs/{i}/graph"), &g.graph, &members)?;
        }
        for (i, s) in self.splits.iter().enumerate() {
            graph_refs(&format!("/splits/{i}/refined"), &s.refined, &members)?;
            for e in s.collapse.keys() {
                if !s.refined.edges.iter().any(|x| &x.id == e) {
                    return Err(InputError::at(format!("/splits/{i}/collapse/{e}"), format!("unknown edge {e:?}")));
                }
            }
        }
        for (i, p) in self.polytopes.iter().enumerate() {
            check_dim(format!("/polytopes/{i}/dim"), p.dim, cap)?;
        }
        for (i, f) in self.fibers.iter().enumerate() {
            check_dim(format!("/fibers/{i}/lambda"), f.lambda.len(), cap)?;
        }
        for (i, m) in self.morphisms.iter().enumerate() {
            if m.morphism.source.cutoff != m.morphism.target.cutoff {
                return Err(InputError::at(format!("/morphisms/{i}/morphism"), "source and target cutoffs differ"));
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<Glued, InputError> {
        match &self.geometry {
            Some(g) => g.build(),
            None => Err(InputError::at("/geometry", "this command needs a geometry section")),
        }
    }

    pub fn split_type(&self, i: usize, geo: &Glued) -> Result<SplitType, InputError> {
        let s = &self.splits[i];
        let collapse: Vec<(String, Option<String>)> = s.collapse.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        SplitType::from_collapse(geo, s.refined.clone(), &collapse, s.split_edges.clone(), s.cone_direction.clone())
            .map_err(|e| InputError::at(format!("/splits/{i}"), e.to_string()))
    }

    pub fn polytope(&self, i: usize) -> Result<Polytope, InputError> {
        let p = &self.polytopes[i];
        p.shape().build(p.dim, &format!("/polytopes/{i}"))
    }

    pub fn fiber(&self, i: usize) -> Result<MomentFiber, InputError> {
        let f = &self.fibers[i];
        MomentFiber::new(f.facets.clone(), f.lambda.clone(), f.eps.clone())
            .map_err(|e| InputError::at(format!("/fibers/{i}"), e.to_string()))
    }
}

impl ShapeSpec {
    fn build(&self, dim: usize, ptr: &str) -> Result<Polytope, InputError> {
        let err = |e: tropikit::polyhedral::PolyError| InputError::at(ptr, e.to_string());
        match (&self.halfspaces, &self.vertices) {
            (Some(h), None) if self.rays.is_none() => Polytope::new(dim, h.clone()).map_err(err),
            (None, Some(v)) => Polytope::from_vertices(dim, v, self.rays.as_deref().unwrap_or(&[])).map_err(err),
            _ => Err(InputError::at(ptr, "give either halfspaces or vertices (with optional rays)")),
        }
    }
}

/// Library geometries reachable by name.
pub const LIBRARY: [&str; 5] = ["single-cut", "two-cuts", "cross", "cube", "projective-plane-fan"];

impl GeometrySpec {
    fn member_ids(&self) -> Result<BTreeSet<String>, InputError> {
        if let Some(name) = &self.library {
            if self.dim.is_some() || !self.members.is_empty() || !self.duals.is_empty() {
                return Err(InputError::at("/geometry", "a library geometry takes no members or duals"));
            }
            let geo = library_geometry(name)?;
            return Ok(geo.decomp.ids().iter().cloned().collect());
        }
        let mut ids = BTreeSet::new();
        for (i, m) in self.members.iter().enumerate() {
            if !ids.insert(m.id.clone()) {
                return Err(InputError::at(format!("/geometry/members/{i}/id"), format!("duplicate id {:?}", m.id)));
            }
        }
        let mut seen = BTreeSet::new();
        for (i, d) in self.duals.iter().enumerate() {
            if !ids.contains(&d.member) {
                return Err(InputError::at(format!("/geometry/duals/{i}/member"), format!("unknown member {:?}", d.member)));
            }
            if !seen.insert(d.member.clone()) {
                return Err(InputError::at(format!("/geometry/duals/{i}/member"), format!("second dual for {:?}", d.member)));
            }
        }
        if let Some(faces) = &self.faces {
            for (i, (a, b)) in faces.iter().enumerate() {
                for (k, id) in [a, b].into_iter().enumerate() {
                    if !ids.contains(id) {
                        return Err(InputError::at(format!("/geometry/faces/{i}/{k}"), format!("unknown member {id:?}")));
                    }
                }
            }
        }
        Ok(ids)
    }

    pub fn build(&self) -> Result<Glued, InputError> {
        if let Some(name) = &self.library {
            return library_geometry(name);
        }
        let dim = self.dim.ok_or_else(|| InputError::at("/geometry", "missing dim"))?;
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| Ok((m.id.clone(), m.shape().build(dim, &format!("/geometry/members/{i}"))?)))
            .collect::<Result<Vec<_>, InputError>>()?;
        let decomp = Decomposition::new(dim, members, self.faces.as_deref())
            .map_err(|e| InputError::at("/geometry/members", e.to_string()))?;
        let duals = self
            .duals
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let input = match (&d.vertices, &d.halfspaces) {
                    (Some(v), None) if d.anchor.is_none() => DualInput::Vertices(v.clone()),
                    (None, Some(h)) => DualInput::Halfspaces {
                        halfspaces: h.clone(),
                        anchor: d.anchor.clone().unwrap_or_else(|| vec![Rational::from_integer(0.into()); dim]),
                    },
                    _ => {
                        return Err(InputError::at(
                            format!("/geometry/duals/{i}"),
                            "give either vertices or halfspaces (with optional anchor)",
                        ))
                    }
                };
                Ok((d.member.clone(), input))
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        let pairing = self.pairing.as_ref().map(|rows| tropikit::exactalg::lattice::LatticeMatrix::from_rows(rows));
        let gluing = GluingDatum::new(&decomp, pairing, duals).map_err(|e| InputError::at("/geometry/duals", e.to_string()))?;
        Ok(Glued::new(decomp, gluing))
    }
}

pub fn library_geometry(name: &str) -> Result<Glued, InputError> {
    Ok(match name {
        "single-cut" => library::single_cut(),
        "two-cuts" => library::two_cuts(),
        "cross" => library::coordinate_cuts(2),
        "cube" => library::coordinate_cuts(3),
        "projective-plane-fan" => library::projective_plane_fan(),
        _ => {
            return Err(InputError::at(
                "/geometry/library",
                format!("unknown library geometry {name:?}; known: {}", LIBRARY.join(", ")),
            ))
        }
    })
}
