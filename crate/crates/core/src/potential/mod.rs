//! The disk potential of a torus fiber in a compact toric manifold: the
//! moment polytope, the cut decomposition near it, the leading disk types
//! with their index and area, and the Maurer–Cartan check on the fiber model.

use crate::ainfty::{AInftyData, AlgebraError, McReport, Novikov};
use crate::exactalg::lattice::primitive_part_i64;
use crate::exactalg::linalg::inverse;
use crate::exactalg::rational::{display_rational, dot, int, serde_q, Rational};
use crate::exactalg::subspace::{sample_generic, RationalSubspace};
use crate::index_energy::{fiber_area, maslov_glue, maslov_toric, node_multiplicity, Area, EnergyError, EnergyInput, IndexError};
use crate::library::fiber_model;
use crate::polyhedral::{Decomposition, DualInput, GluingDatum, Glued, Halfspace, PolyError, Polytope};
use crate::split::{
    cone_condition, discrepancy_cone, genericity_subspaces, relative_weights, split_rigid, ConeCondition, SplitError,
    SplitRigidity, SplitType,
};
use crate::tropical::{is_rigid, Edge, EdgeClass, GraphError, Sort, TropicalGraph, Vertex};
use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

type QVec = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PotentialError {
    #[error("facet {facet} has {got} coordinates, expected {expected}")]
    Dimension { facet: usize, expected: usize, got: usize },
    #[error("facet {0} has a zero normal")]
    ZeroNormal(usize),
    #[error("the moment polytope is not a compact full-dimensional polytope")]
    NotCompact,
    #[error("facet {0} is redundant")]
    Redundant(usize),
    #[error("the moment polytope is not Delzant: {0}")]
    NotDelzant(String),
    #[error("the fiber point lies on or outside facet {0}")]
    NotInterior(usize),
    #[error("cut offset {value} for facet {facet} must lie strictly between 0 and the distance {distance}")]
    Offset { facet: usize, value: String, distance: String },
    #[error("holonomy has {got} coordinates, expected {expected}")]
    Holonomy { expected: usize, got: usize },
    #[error("holonomy coordinate {0} is zero")]
    ZeroHolonomy(usize),
    #[error("term for facet {facet} has exponent {exponent}; the fiber model needs positive energies")]
    NonPositiveExponent { facet: usize, exponent: String },
    #[error("no cone direction avoids every genericity subspace")]
    NoGenericDirection,
    #[error("cut decomposition: {0}")]
    Cuts(String),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `⟨μ, x⟩ ≤ c` with `μ` primitive and outward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub mu: Vec<i64>,
    #[serde(with = "serde_q")]
    pub c: Rational,
}

/// A moment polytope `Δ = {⟨μ_i, x⟩ ≤ c_i}`, a fiber point `λ` in its
/// interior and the offsets `ε_i` of the cuts `⟨μ_i, x⟩ = c_i − ε_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentFiber {
    pub facets: Vec<Facet>,
    #[serde(with = "serde_q::vec")]
    pub lambda: QVec,
    /// Defaults to a tenth of each distance `c_i − ⟨μ_i, λ⟩`.
    #[serde(default, with = "serde_q::opt_vec", skip_serializing_if = "Option::is_none")]
    pub eps: Option<QVec>,
}

impl MomentFiber {
    /// Normalizes the normals to primitive vectors and validates.
    pub fn new(facets: Vec<Facet>, lambda: QVec, eps: Option<QVec>) -> Result<MomentFiber, PotentialError> {
        let n = lambda.len();
        let mut out = Vec::new();
        for (i, f) in facets.into_iter().enumerate() {
            if f.mu.len() != n {
                return Err(PotentialError::Dimension { facet: i, expected: n, got: f.mu.len() });
            }
            let (mu, g) = primitive_part_i64(&f.mu).map_err(|_| PotentialError::ZeroNormal(i))?;
            out.push(Facet { mu, c: f.c / int(g) });
        }
        let m = MomentFiber { facets: out, lambda, eps };
        m.validate()?;
        Ok(m)
    }

    /// Reads the facets of a polytope given by inward halfspaces.
    pub fn from_polytope(p: &Polytope, lambda: QVec) -> Result<MomentFiber, PotentialError> {
        let hs = p.halfspaces();
        let facets = p
            .facet_halfspaces()
            .into_iter()
            .map(|i| Facet { mu: hs[i].normal.iter().map(|x| -x).collect(), c: -hs[i].constant.clone() })
            .collect();
        MomentFiber::new(facets, lambda, None)
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn mu_q(&self, i: usize) -> QVec {
        self.facets[i].mu.iter().map(|&x| int(x)).collect()
    }

    pub fn polytope(&self) -> Result<Polytope, PotentialError> {
        let hs = self
            .facets
            .iter()
            .map(|f| {
                let neg: Vec<i64> = f.mu.iter().map(|x| -x).collect();
                Halfspace::from_ints(&neg, -f.c.clone())
            })
            .collect::<Result<Vec<_>, PolyError>>()
            .map_err(|_| PotentialError::NotCompact)?;
        Polytope::new(self.dim(), hs).map_err(|_| PotentialError::NotCompact)
    }

    /// `c_i − ⟨μ_i, λ⟩`, the lattice distance from `λ` to each facet.
    pub fn distances(&self) -> QVec {
        (0..self.facets.len()).map(|i| &self.facets[i].c - dot(&self.mu_q(i), &self.lambda)).collect()
    }

    pub fn offsets(&self) -> QVec {
        match &self.eps {
            Some(e) => e.clone(),
            None => self.distances().into_iter().map(|d| d / int(10)).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        let p = self.polytope()?;
        if p.is_empty() || !p.is_bounded() || !p.is_full_dimensional() {
            return Err(PotentialError::NotCompact);
        }
        let facets = p.facet_halfspaces();
        if let Some(i) = (0..self.facets.len()).find(|i| !facets.contains(i)) {
            return Err(PotentialError::Redundant(i));
        }
        let dz = p.is_delzant().map_err(|e| PotentialError::NotDelzant(e.to_string()))?;
        if !dz.delzant {
            return Err(PotentialError::NotDelzant(dz.detail.unwrap_or_default()));
        }
        let dist = self.distances();
        if let Some(i) = dist.iter().position(|d| !d.is_positive()) {
            return Err(PotentialError::NotInterior(i));
        }
        if let Some(e) = &self.eps {
            if e.len() != self.facets.len() {
                return Err(PotentialError::Dimension { facet: e.len(), expected: self.facets.len(), got: e.len() });
            }
            for (i, (e, d)) in e.iter().zip(&dist).enumerate() {
                if !e.is_positive() || e >= d {
                    return Err(PotentialError::Offset {
                        facet: i,
                        value: display_rational(e),
                        distance: display_rational(d),
                    });
                }
            }
        }
        Ok(())
    }

    /// Vertices of `Δ` with the facets through each, in vertex order.
    pub fn corners(&self) -> Result<Vec<(QVec, Vec<usize>)>, PotentialError> {
        let p = self.polytope()?;
        Ok(p.vertices()
            .iter()
            .map(|v| {
                let tight = (0..self.facets.len()).filter(|&j| dot(&self.mu_q(j), v) == self.facets[j].c).collect();
                (v.clone(), tight)
            })
            .collect())
    }
}

/// One term `y^μ q^α` of the potential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialTerm {
    pub facet: usize,
    pub mu: Vec<i64>,
    #[serde(rename = "exp", with = "serde_q")]
    pub exponent: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Potential {
    pub terms: Vec<PotentialTerm>,
    /// Exponents were taken as `⟨μ_i, λ⟩ − c_i`, the negatives of the areas.
    pub flip_sign: bool,
}

/// `W(λ, y) = Σ_i y^{μ_i} q^{c_i − ⟨μ_i, λ⟩}`, one term per facet. With
/// `flip_sign` the exponents are negated.
pub fn bg_potential(f: &MomentFiber, flip_sign: bool) -> Potential {
    let terms = f
        .distances()
        .into_iter()
        .enumerate()
        .map(|(i, d)| PotentialTerm { facet: i, mu: f.facets[i].mu.clone(), exponent: if flip_sign { -d } else { d } })
        .collect();
    Potential { terms, flip_sign }
}

fn monomial(y: &[Rational], mu: &[i64]) -> Rational {
    let mut r = Rational::one();
    for (yk, &e) in y.iter().zip(mu) {
        let b = if e < 0 { yk.recip() } else { yk.clone() };
        for _ in 0..e.unsigned_abs() {
            r *= &b;
        }
    }
    r
}

impl Potential {
    pub fn dim(&self) -> usize {
        self.terms.first().map_or(0, |t| t.mu.len())
    }

    pub fn min_exponent(&self) -> Option<&Rational> {
        self.terms.iter().map(|t| &t.exponent).min()
    }

    /// Specializes the holonomy `y ∈ (Q^×)^n`.
    pub fn evaluate(&self, y: &[Rational], cutoff: Rational) -> Result<Novikov, PotentialError> {
        if y.len() != self.dim() {
            return Err(PotentialError::Holonomy { expected: self.dim(), got: y.len() });
        }
        if let Some(k) = y.iter().position(Zero::is_zero) {
            return Err(PotentialError::ZeroHolonomy(k));
        }
        Ok(Novikov::from_terms(self.terms.iter().map(|t| (monomial(y, &t.mu), t.exponent.clone())), cutoff))
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("y^({})·q^({})", t.mu.iter().join(","), display_rational(&t.exponent)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Side of a cut hyperplane `⟨μ_j, x⟩ = c_j − ε_j`.
fn side(v: &Rational) -> char {
    if v.is_positive() {
        '+'
    } else if v.is_negative() {
        '-'
    } else {
        '0'
    }
}

/// The arrangement of the cut hyperplanes in `t^∨`. Cells are named by sign
/// strings over the facets (`+` beyond the cut, towards the facet). The dual
/// of a cell is the zonotope `−Σ_{+} μ_j − Σ_{j ∈ T} μ_j`, `T` ranging over
/// the subsets of the `0` positions.
pub fn cut_decomposition(f: &MomentFiber) -> Result<Glued, PotentialError> {
    f.validate()?;
    let n = f.dim();
    let levels: QVec = f.facets.iter().zip(f.offsets()).map(|(fc, e)| &fc.c - e).collect();
    let mut members = Vec::new();
    let mut duals = Vec::new();
    for signs in std::iter::repeat_n(['+', '-', '0'], f.facets.len()).multi_cartesian_product() {
        let mut hss = Vec::new();
        for (j, s) in signs.iter().enumerate() {
            let mu = &f.facets[j].mu;
            let neg: Vec<i64> = mu.iter().map(|x| -x).collect();
            let up = Halfspace::from_ints(mu, levels[j].clone()).expect("nonzero normal");
            let down = Halfspace::from_ints(&neg, -levels[j].clone()).expect("nonzero normal");
            match s {
                '+' => hss.push(up),
                '-' => hss.push(down),
                _ => hss.extend([up, down]),
            }
        }
        let cell = Polytope::new(n, hss).map_err(|e| PotentialError::Cuts(e.to_string()))?;
        let Some(x) = cell.relint_point() else { continue };
        let realized: Vec<char> = (0..f.facets.len()).map(|j| side(&(dot(&f.mu_q(j), &x) - &levels[j]))).collect();
        if realized != signs {
            continue;
        }
        let id: String = signs.iter().collect();
        let mut base = vec![Rational::zero(); n];
        let mut free = Vec::new();
        for (j, s) in signs.iter().enumerate() {
            match s {
                '+' => base = base.iter().zip(f.mu_q(j)).map(|(a, b)| a - b).collect(),
                '0' => free.push(j),
                _ => {}
            }
        }
        let verts: Vec<QVec> = free
            .iter()
            .powerset()
            .map(|t| {
                let mut w = base.clone();
                for &&j in &t {
                    w = w.iter().zip(f.mu_q(j)).map(|(a, b)| a - b).collect();
                }
                w
            })
            .collect();
        members.push((id.clone(), cell));
        duals.push((id, DualInput::Vertices(verts)));
    }
    let decomp = Decomposition::new(n, members, None).map_err(|e| PotentialError::Cuts(e.to_string()))?;
    let gluing = GluingDatum::new(&decomp, None, duals).map_err(|e| PotentialError::Cuts(e.to_string()))?;
    let report = gluing.validate(&decomp);
    if !report.valid {
        return Err(PotentialError::Cuts(report.violations.join("; ")));
    }
    Ok(Glued::new(decomp, gluing))
}

fn cell_id(f: &MomentFiber, plus: &[usize], zero: &[usize]) -> String {
    (0..f.facets.len())
        .map(|j| if plus.contains(&j) { '+' } else if zero.contains(&j) { '0' } else { '-' })
        .collect()
}

fn graph(f: &MomentFiber, i: usize, outer: String) -> TropicalGraph {
    let v = |id: &str, polytope: String, sort| Vertex { id: id.into(), polytope, sort, chern: None, constant: true };
    TropicalGraph {
        vertices: vec![v("disk", cell_id(f, &[], &[]), Sort::Disk), v("sphere", outer, Sort::Sphere)],
        edges: vec![
            Edge {
                id: "node".into(),
                ends: vec!["disk".into(), "sphere".into()],
                class: EdgeClass::InteriorNode,
                slope: f.facets[i].mu.clone(),
                length: None,
            },
            Edge { id: "root".into(), ends: vec!["disk".into()], class: EdgeClass::BoundaryLeaf, slope: Vec::new(), length: None },
        ],
        markings: Vec::new(),
        root: Some("root".into()),
    }
}

/// Disk in the chamber around `λ` joined to a sphere in the chamber beyond
/// the cut of facet `i`.
pub fn broken_disk(f: &MomentFiber, i: usize) -> TropicalGraph {
    graph(f, i, cell_id(f, &[i], &[]))
}

/// The corner of facet `i` maximizing `⟨η, x⟩`, first in vertex order on ties.
pub fn corner_for(f: &MomentFiber, i: usize, eta: &[Rational]) -> Result<(QVec, Vec<usize>), PotentialError> {
    let mut best: Option<(QVec, Vec<usize>)> = None;
    for (p, tight) in f.corners()? {
        if !tight.contains(&i) {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _)| dot(eta, &p) > dot(eta, b)) {
            best = Some((p, tight));
        }
    }
    best.ok_or(PotentialError::NotCompact)
}

/// The broken disk with its sphere moved to the corner `p` of facet `i` and
/// the node edge split.
pub fn split_skeleton(
    f: &MomentFiber,
    geo: &Glued,
    i: usize,
    corner: &[usize],
    eta: &[Rational],
) -> Result<SplitType, PotentialError> {
    let others: Vec<usize> = corner.iter().copied().filter(|&j| j != i).collect();
    let g = graph(f, i, cell_id(f, &[i], &others));
    Ok(SplitType::from_collapse(geo, g, &[], vec!["node".into()], eta.to_vec())?)
}

/// Covector `m` with `⟨μ_j, m⟩ = δ_ij` over the facets through a corner.
fn dual_covector(f: &MomentFiber, i: usize, corner: &[usize]) -> Result<Vec<i64>, PotentialError> {
    let rows: Vec<QVec> = corner.iter().map(|&j| f.mu_q(j)).collect();
    let inv = inverse(&rows).ok_or_else(|| PotentialError::NotDelzant("singular corner".into()))?;
    let k = corner.iter().position(|&j| j == i).expect("facet through the corner");
    inv.iter()
        .map(|row| {
            let x = &row[k];
            if x.is_integer() {
                x.to_integer().to_i64().ok_or_else(|| PotentialError::NotDelzant("overflow".into()))
            } else {
                Err(PotentialError::NotDelzant("corner normals are not a lattice basis".into()))
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingDisk {
    pub facet: usize,
    pub mu: Vec<i64>,
    #[serde(with = "serde_q::vec")]
    pub corner: QVec,
    pub broken: TropicalGraph,
    pub broken_rigid: bool,
    pub skeleton: SplitType,
    pub rigidity: SplitRigidity,
    pub relative_dim: usize,
    pub discrepancy_dim: usize,
    /// Absent when no cone direction is generic, as on the line.
    pub cone: Option<ConeCondition>,
    pub node_multiplicity: u64,
    pub maslov: i64,
    pub area: Area,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiskReport {
    pub cells: usize,
    #[serde(with = "serde_q::opt_vec")]
    pub cone_direction: Option<QVec>,
    pub disks: Vec<LeadingDisk>,
}

fn skeletons(f: &MomentFiber, geo: &Glued, eta: &[Rational]) -> Result<Skeletons, PotentialError> {
    (0..f.facets.len())
        .map(|i| {
            let (p, corner) = corner_for(f, i, eta)?;
            let s = split_skeleton(f, geo, i, &corner, eta)?;
            Ok((p, corner, s))
        })
        .collect()
}

type Skeletons = Vec<(QVec, Vec<usize>, SplitType)>;

/// Samples a cone direction generic for every skeleton. `None` when some
/// forbidden subspace is all of `t^∨`.
fn generic_skeletons(f: &MomentFiber, geo: &Glued) -> Result<(Option<QVec>, Skeletons), PotentialError> {
    let n = f.dim();
    let mut forbidden: Vec<RationalSubspace> = Vec::new();
    for _ in 0..8 {
        let e = sample_generic(n, &forbidden).ok_or(PotentialError::NoGenericDirection)?;
        let sk = skeletons(f, geo, &e)?;
        let mut subs = Vec::new();
        for (_, _, s) in &sk {
            subs.extend(genericity_subspaces(s, geo)?.into_iter().map(|(_, sub)| sub));
        }
        if subs.iter().any(|s| s.dim() == n) {
            return Ok((None, sk));
        }
        if subs.iter().all(|s| !s.contains(&e)) {
            return Ok((Some(e), sk));
        }
        forbidden.extend(subs);
    }
    Err(PotentialError::NoGenericDirection)
}

/// One Maslov-2 disk type per facet. Without `eta` a cone direction generic
/// for every skeleton is sampled.
pub fn leading_disk_types(f: &MomentFiber, geo: &Glued, eta: Option<&[Rational]>) -> Result<DiskReport, PotentialError> {
    let n = f.dim();
    let (eta, sk) = match eta {
        Some(e) => {
            if e.len() != n {
                return Err(SplitError::Dimension { expected: n, got: e.len() }.into());
            }
            (Some(e.to_vec()), skeletons(f, geo, e)?)
        }
        None => generic_skeletons(f, geo)?,
    };
    let dist = f.distances();
    let mut disks = Vec::new();
    for (i, (p, corner, s)) in sk.into_iter().enumerate() {
        let broken = broken_disk(f, i);
        let m = node_multiplicity(&f.facets[i].mu, &dual_covector(f, i, &corner)?)?;
        let maslov = maslov_glue(maslov_toric(&[m]) as i64, maslov_toric(&[m, m]) as i64, &[m as i64]);
        let mut row = vec![0u64; f.facets.len()];
        row[i] = m;
        let area = fiber_area(&EnergyInput {
            constants: dist.clone(),
            horizontal: Rational::zero(),
            multiplicities: vec![row],
            hofer_constant: None,
        })?
        .area;
        disks.push(LeadingDisk {
            facet: i,
            mu: f.facets[i].mu.clone(),
            corner: p,
            broken_rigid: is_rigid(&broken, geo)?,
            broken,
            rigidity: split_rigid(&s, geo)?,
            relative_dim: relative_weights(&s, geo)?.dim,
            discrepancy_dim: discrepancy_cone(&s, geo)?.dim,
            cone: match &eta {
                Some(_) => Some(cone_condition(&s, geo)?),
                None => None,
            },
            skeleton: s,
            node_multiplicity: m,
            maslov,
            area,
        });
    }
    Ok(DiskReport { cells: geo.decomp.len(), cone_direction: eta, disks })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnobstructedReport {
    pub unobstructed: bool,
    /// Every exponent is at or above the cutoff, so the check saw nothing.
    pub vacuous: bool,
    #[serde(with = "serde_q")]
    pub cutoff: Rational,
    pub potential: Novikov,
    /// `A∞` relations of the fiber model through arity 3.
    pub relations: bool,
    pub strict_unit: bool,
    pub mc: McReport,
}

/// Builds the fiber model with curvature `W(y)`, takes `b = W(y) x^▨` and
/// checks `Σ m_k(b,…,b) = W(y)·x^◻` modulo `q^cutoff`.
pub fn verify_unobstructed(pot: &Potential, y: &[Rational], cutoff: Rational) -> Result<UnobstructedReport, PotentialError> {
    if let Some(t) = pot.terms.iter().find(|t| !t.exponent.is_positive()) {
        return Err(PotentialError::NonPositiveExponent { facet: t.facet, exponent: display_rational(&t.exponent) });
    }
    let w = pot.evaluate(y, cutoff.clone())?;
    let data = AInftyData::new(&fiber_model(&w))?;
    let relations = data.check_associativity(3)?.pass;
    let strict_unit = data.check_strict_unit(data.generator("x_unit")?)?.pass;
    let mut b = BTreeMap::new();
    if !w.is_zero() {
        b.insert("x_wt".to_string(), w.clone());
    }
    let mc = data.mc_residual(&b)?;
    let vacuous = pot.min_exponent().is_none_or(|m| *m >= cutoff);
    Ok(UnobstructedReport {
        unobstructed: relations && strict_unit && mc.solution && mc.potential == w,
        vacuous,
        cutoff,
        potential: w,
        relations,
        strict_unit,
        mc,
    })
}
