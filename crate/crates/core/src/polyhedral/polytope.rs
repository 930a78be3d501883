//! Rational polyhedra `{x : <normal, x> >= constant}` with cached V-representation.

use super::cone::{double_description, Cone};
use super::hpoly::HPolyhedron;
use crate::exactalg::lattice::{smith_normal_form, LatticeMatrix};
use crate::exactalg::linalg::{independent_subset, project_onto, rank};
use crate::exactalg::rational::{
    display_vec, dot, dot_int, from_big, primitive_integer_vector, serde_q, to_rationals, Rational,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};

type QVec = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    #[serde(with = "serde_q")]
    pub constant: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("halfspace normal is zero")]
    ZeroNormal,
    #[error("halfspace has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("normal coordinate does not fit in 64 bits")]
    Overflow,
    #[error("polytope has no vertices (it contains a line)")]
    NoVertices,
    #[error("polytope is empty")]
    Empty,
    #[error("{0}")]
    Other(String),
}

impl Halfspace {
    /// Scales `normal·x >= constant` so the normal is a primitive integer vector.
    pub fn new(normal: &[Rational], constant: Rational) -> Result<Halfspace, PolyError> {
        use num_traits::ToPrimitive;
        if normal.iter().all(Zero::is_zero) {
            return Err(PolyError::ZeroNormal);
        }
        let p = primitive_integer_vector(normal);
        let k = normal.iter().zip(&p).find(|(_, b)| !b.is_zero()).map(|(a, b)| from_big(b) / a).unwrap();
        let normal = p.iter().map(|x| x.to_i64().ok_or(PolyError::Overflow)).collect::<Result<_, _>>()?;
        Ok(Halfspace { normal, constant: constant * k })
    }

    pub fn from_ints(normal: &[i64], constant: Rational) -> Result<Halfspace, PolyError> {
        let q: QVec = normal.iter().map(|&x| Rational::from_integer(x.into())).collect();
        Halfspace::new(&q, constant)
    }

    pub fn normal_q(&self) -> QVec {
        self.normal.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    pub fn normal_big(&self) -> Vec<BigInt> {
        self.normal.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.normal_q(), x) - &self.constant
    }
}

/// A face, described by the maximal set of halfspaces tight on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub active: BTreeSet<usize>,
    pub vertices: BTreeSet<usize>,
    pub rays: BTreeSet<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<QVec>,
    rays: Vec<Vec<BigInt>>,
    lineality: Vec<Vec<BigInt>>,
    affine_dim: Option<usize>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.same_set(other)
    }
}

impl Polytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Polytope, PolyError> {
        for h in &halfspaces {
            if h.normal.len() != dim {
                return Err(PolyError::Dimension { expected: dim, got: h.normal.len() });
            }
            if h.normal.iter().all(|&x| x == 0) {
                return Err(PolyError::ZeroNormal);
            }
        }
        // Homogenize: (x, t) with normal·x - constant·t >= 0 and t >= 0.
        let mut ineqs: Vec<QVec> = halfspaces
            .iter()
            .map(|h| {
                let mut r = h.normal_q();
                r.push(-h.constant.clone());
                r
            })
            .collect();
        let mut t = vec![Rational::zero(); dim + 1];
        t[dim] = Rational::one();
        ineqs.push(t);
        let (hrays, hlin) = double_description(dim + 1, &ineqs, &[]);
        let lin_q: Vec<QVec> = hlin.iter().map(|l| l[..dim].to_vec()).collect();
        let lin_basis = independent_subset(&lin_q);
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in &hrays {
            let x = &r[..dim];
            let p = project_onto(&lin_basis, x);
            let x: QVec = x.iter().zip(&p).map(|(a, b)| a - b).collect();
            if r[dim].is_positive() {
                vertices.push(x.iter().map(|c| c / &r[dim]).collect::<QVec>());
            } else if x.iter().any(|c| !c.is_zero()) {
                rays.push(primitive_integer_vector(&x));
            }
        }
        vertices.sort();
        vertices.dedup();
        rays.sort();
        rays.dedup();
        let lineality: Vec<Vec<BigInt>> = lin_basis.iter().map(|l| primitive_integer_vector(l)).collect();
        let affine_dim = if vertices.is_empty() {
            None
        } else {
            let mut dirs: Vec<QVec> = vertices[1..]
                .iter()
                .map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect())
                .collect();
            dirs.extend(rays.iter().map(|r| to_rationals(r)));
            dirs.extend(lin_basis.iter().cloned());
            Some(if dirs.is_empty() { 0 } else { rank(&dirs) })
        };
        Ok(Polytope { dim, halfspaces, vertices, rays, lineality, affine_dim })
    }

    /// Convex hull of points plus the cone on `rays`, as an H-representation.
    pub fn from_vertices(dim: usize, vertices: &[QVec], rays: &[QVec]) -> Result<Polytope, PolyError> {
        if vertices.is_empty() {
            return Err(PolyError::Empty);
        }
        let mut gens: Vec<QVec> = vertices
            .iter()
            .map(|v| {
                let mut r = v.clone();
                r.push(Rational::one());
                r
            })
            .collect();
        gens.extend(rays.iter().map(|r| {
            let mut x = r.clone();
            x.push(Rational::zero());
            x
        }));
        let cone = Cone::from_v(dim + 1, &gens, &[]);
        let mut hs = Vec::new();
        let split = |v: &Vec<BigInt>| -> (QVec, Rational) {
            let q = to_rationals(v);
            (q[..dim].to_vec(), -q[dim].clone())
        };
        for f in cone.facets() {
            let (a, b) = split(f);
            if a.iter().all(Zero::is_zero) {
                continue; // the t >= 0 facet
            }
            hs.push(Halfspace::new(&a, b)?);
        }
        for e in cone.equations() {
            let (a, b) = split(e);
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            hs.push(Halfspace::new(&a, b.clone())?);
            let neg: QVec = a.iter().map(|x| -x).collect();
            hs.push(Halfspace::new(&neg, -b)?);
        }
        hs.sort();
        hs.dedup();
        Polytope::new(dim, hs)
    }

    /// The whole ambient space `Q^dim`.
    pub fn full(dim: usize) -> Polytope {
        Polytope::new(dim, Vec::new()).expect("no halfspaces")
    }

    pub fn point(p: &[Rational]) -> Polytope {
        Polytope::from_vertices(p.len(), &[p.to_vec()], &[]).expect("nonempty")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<BigInt>] {
        &self.lineality
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn affine_dim(&self) -> Option<usize> {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == Some(self.dim)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| !h.value(x).is_negative())
    }

    pub fn hpoly(&self) -> HPolyhedron {
        HPolyhedron::new(
            self.dim,
            self.halfspaces.iter().map(|h| (h.normal_q(), h.constant.clone())).collect(),
            Vec::new(),
        )
    }

    /// Barycenter of the vertices pushed along every ray: lies in the relative interior.
    pub fn relint_point(&self) -> Option<QVec> {
        if self.vertices.is_empty() {
            return None;
        }
        let k = Rational::from_integer(self.vertices.len().into());
        let mut p = vec![Rational::zero(); self.dim];
        for v in &self.vertices {
            for (a, b) in p.iter_mut().zip(v) {
                *a += b;
            }
        }
        for a in p.iter_mut() {
            *a /= &k;
        }
        for r in &self.rays {
            for (a, b) in p.iter_mut().zip(r) {
                *a += from_big(b);
            }
        }
        Some(p)
    }

    /// Basis of the linear space parallel to the affine hull.
    pub fn directions(&self) -> Vec<QVec> {
        let mut dirs: Vec<QVec> = Vec::new();
        if let Some(v0) = self.vertices.first() {
            for v in &self.vertices[1..] {
                dirs.push(v.iter().zip(v0).map(|(a, b)| a - b).collect());
            }
        }
        dirs.extend(self.rays.iter().map(|r| to_rationals(r)));
        dirs.extend(self.lineality.iter().map(|r| to_rationals(r)));
        independent_subset(&dirs)
    }

    pub fn active_at(&self, x: &[Rational]) -> BTreeSet<usize> {
        (0..self.halfspaces.len()).filter(|&i| self.halfspaces[i].value(x).is_zero()).collect()
    }

    fn tight_vertex(&self, i: usize, v: usize) -> bool {
        self.halfspaces[i].value(&self.vertices[v]).is_zero()
    }

    fn tight_ray(&self, i: usize, r: usize) -> bool {
        dot_int(&self.rays[r], &self.halfspaces[i].normal_q()).is_zero()
    }

    fn face_from_active(&self, s: &BTreeSet<usize>) -> Face {
        let vertices: BTreeSet<usize> =
            (0..self.vertices.len()).filter(|&v| s.iter().all(|&i| self.tight_vertex(i, v))).collect();
        let rays: BTreeSet<usize> =
            (0..self.rays.len()).filter(|&r| s.iter().all(|&i| self.tight_ray(i, r))).collect();
        let active: BTreeSet<usize> = (0..self.halfspaces.len())
            .filter(|&i| vertices.iter().all(|&v| self.tight_vertex(i, v)) && rays.iter().all(|&r| self.tight_ray(i, r)))
            .collect();
        let dim = self.face_dim(&vertices, &rays);
        Face { active, vertices, rays, dim }
    }

    fn face_dim(&self, vertices: &BTreeSet<usize>, rays: &BTreeSet<usize>) -> usize {
        let vs: Vec<&QVec> = vertices.iter().map(|&v| &self.vertices[v]).collect();
        let mut dirs: Vec<QVec> = Vec::new();
        if let Some(v0) = vs.first() {
            for v in &vs[1..] {
                dirs.push(v.iter().zip(v0.iter()).map(|(a, b)| a - b).collect());
            }
        }
        dirs.extend(rays.iter().map(|&r| to_rationals(&self.rays[r])));
        dirs.extend(self.lineality.iter().map(|r| to_rationals(r)));
        if dirs.is_empty() {
            0
        } else {
            rank(&dirs)
        }
    }

    /// Every nonempty face, including the polytope itself, sorted by dimension.
    pub fn faces(&self) -> Vec<Face> {
        if self.is_empty() {
            return Vec::new();
        }
        let top = self.face_from_active(&BTreeSet::new());
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        seen.insert(top.active.clone());
        let mut out = vec![top.clone()];
        let mut queue = VecDeque::from([top]);
        while let Some(f) = queue.pop_front() {
            for i in 0..self.halfspaces.len() {
                if f.active.contains(&i) {
                    continue;
                }
                let mut s = f.active.clone();
                s.insert(i);
                let g = self.face_from_active(&s);
                if g.vertices.is_empty() || seen.contains(&g.active) {
                    continue;
                }
                seen.insert(g.active.clone());
                out.push(g.clone());
                queue.push_back(g);
            }
        }
        out.sort_by(|a, b| b.dim.cmp(&a.dim).then(a.active.cmp(&b.active)));
        out
    }

    pub fn facets(&self) -> Vec<Face> {
        let d = self.affine_dim.unwrap_or(0);
        self.faces().into_iter().filter(|f| f.dim + 1 == d).collect()
    }

    /// The face as a polytope in the same ambient space.
    pub fn face_polytope(&self, f: &Face) -> Polytope {
        let mut hs = self.halfspaces.clone();
        for &i in &f.active {
            let h = &self.halfspaces[i];
            let neg: QVec = h.normal_q().iter().map(|x| -x).collect();
            hs.push(Halfspace::new(&neg, -h.constant.clone()).expect("nonzero normal"));
        }
        hs.sort();
        hs.dedup();
        Polytope::new(self.dim, hs).expect("face of a valid polytope")
    }

    /// Locates `other` among the faces of `self` (as point sets).
    pub fn find_face(&self, other: &Polytope) -> Option<Face> {
        let x = other.relint_point()?;
        if !self.contains(&x) {
            return None;
        }
        let f = self.face_from_active(&self.active_at(&x));
        if self.face_polytope(&f).same_set(other) {
            Some(f)
        } else {
            None
        }
    }

    pub fn is_face_of(&self, parent: &Polytope) -> bool {
        parent.find_face(self).is_some()
    }

    /// Tangent cone `R>=0 (P - x)` at the face, x in its relative interior.
    pub fn tangent_cone(&self, f: &Face) -> Cone {
        let ineqs: Vec<QVec> = f.active.iter().map(|&i| self.halfspaces[i].normal_q()).collect();
        Cone::from_h(self.dim, &ineqs, &[])
    }

    /// Dual of the tangent cone: generated by the inward normals tight on the face.
    pub fn normal_cone(&self, f: &Face) -> Cone {
        let rays: Vec<QVec> = f.active.iter().map(|&i| self.halfspaces[i].normal_q()).collect();
        Cone::from_v(self.dim, &rays, &[])
    }

    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
            && other.rays.iter().all(|r| self.recedes(&to_rationals(r)))
            && other.lineality.iter().all(|l| {
                let q = to_rationals(l);
                let n: QVec = q.iter().map(|x| -x).collect();
                self.recedes(&q) && self.recedes(&n)
            })
    }

    fn recedes(&self, d: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| !dot(&h.normal_q(), d).is_negative())
    }

    pub fn same_set(&self, other: &Polytope) -> bool {
        self.dim == other.dim
            && self.is_empty() == other.is_empty()
            && self.contains_polytope(other)
            && other.contains_polytope(self)
    }

    pub fn intersection(&self, other: &Polytope) -> Polytope {
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        hs.sort();
        hs.dedup();
        Polytope::new(self.dim, hs).expect("same ambient dimension")
    }

    /// Halfspace indices defining facets (the irredundant part).
    pub fn facet_halfspaces(&self) -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for f in self.facets() {
            // Any active constraint not implied on the whole polytope.
            let top = self.face_from_active(&BTreeSet::new());
            if let Some(&i) = f.active.iter().find(|i| !top.active.contains(i)) {
                out.insert(i);
            }
        }
        out.into_iter().collect()
    }

    /// Delzant test on a full-dimensional polytope with vertices.
    pub fn is_delzant(&self) -> Result<DelzantReport, PolyError> {
        if self.is_empty() {
            return Err(PolyError::Empty);
        }
        if !self.lineality.is_empty() {
            return Err(PolyError::NoVertices);
        }
        if !self.is_full_dimensional() {
            return Err(PolyError::Other("Delzant test needs a full-dimensional polytope".into()));
        }
        let facets = self.facet_halfspaces();
        for (vi, v) in self.vertices.iter().enumerate() {
            let normals: Vec<Vec<i64>> = facets
                .iter()
                .filter(|&&i| self.halfspaces[i].value(v).is_zero())
                .map(|&i| self.halfspaces[i].normal.clone())
                .collect();
            let m = LatticeMatrix::from_rows(&normals);
            let snf = smith_normal_form(&m);
            let factors = snf.invariant_factors();
            let ok = normals.len() == self.dim
                && factors.len() == normals.len()
                && factors.iter().all(|d| d.is_one());
            if !ok {
                let index: BigInt = if factors.len() == normals.len() {
                    factors.iter().product()
                } else {
                    BigInt::zero()
                };
                return Ok(DelzantReport {
                    delzant: false,
                    failing_vertex: Some(vi),
                    detail: Some(format!(
                        "vertex {} has {} facet normals {:?} with lattice index {}",
                        display_vec(v),
                        normals.len(),
                        normals,
                        index
                    )),
                });
            }
        }
        Ok(DelzantReport { delzant: true, failing_vertex: None, detail: None })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelzantReport {
    pub delzant: bool,
    pub failing_vertex: Option<usize>,
    pub detail: Option<String>,
}

/// `{x : x_i >= 0, sum x_i <= 1}`.
pub fn standard_simplex(n: usize) -> Polytope {
    let mut hs = Vec::new();
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        hs.push(Halfspace::from_ints(&v, Rational::zero()).unwrap());
    }
    hs.push(Halfspace::from_ints(&vec![-1; n], -Rational::one()).unwrap());
    Polytope::new(n, hs).unwrap()
}

/// `[0,1]^n`.
pub fn unit_cube(n: usize) -> Polytope {
    let mut hs = Vec::new();
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        hs.push(Halfspace::from_ints(&v, Rational::zero()).unwrap());
        v[i] = -1;
        hs.push(Halfspace::from_ints(&v, -Rational::one()).unwrap());
    }
    Polytope::new(n, hs).unwrap()
}

/// Cartesian product.
pub fn product(a: &Polytope, b: &Polytope) -> Polytope {
    let n = a.dim() + b.dim();
    let mut hs = Vec::new();
    for h in a.halfspaces() {
        let mut v = h.normal.clone();
        v.extend(std::iter::repeat_n(0, b.dim()));
        hs.push(Halfspace::from_ints(&v, h.constant.clone()).unwrap());
    }
    for h in b.halfspaces() {
        let mut v = vec![0; a.dim()];
        v.extend(h.normal.iter().copied());
        hs.push(Halfspace::from_ints(&v, h.constant.clone()).unwrap());
    }
    Polytope::new(n, hs).unwrap()
}

/// Hirzebruch trapezoid `{x >= 0, 0 <= y <= 1, x + a·y <= width}`, needs
/// `width > a`.
pub fn hirzebruch(a: i64, width: Rational) -> Result<Polytope, PolyError> {
    if width <= Rational::from_integer(a.into()) || a < 0 {
        return Err(PolyError::Other(format!("Hirzebruch trapezoid needs 0 <= a < width, got a = {a}")));
    }
    let hs = vec![
        Halfspace::from_ints(&[1, 0], Rational::zero())?,
        Halfspace::from_ints(&[0, 1], Rational::zero())?,
        Halfspace::from_ints(&[0, -1], -Rational::one())?,
        Halfspace::from_ints(&[-1, -a], -width)?,
    ];
    Polytope::new(2, hs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat, rationals};

    #[test]
    fn square_vertices() {
        let sq = unit_cube(2);
        assert_eq!(sq.vertices().len(), 4);
        assert!(sq.is_bounded());
        assert_eq!(sq.faces().len(), 9);
        assert_eq!(sq.facets().len(), 4);
    }

    #[test]
    fn simplex_faces_and_delzant() {
        let s = standard_simplex(2);
        assert_eq!(s.faces().len(), 7);
        assert!(s.is_delzant().unwrap().delzant);
        assert!(unit_cube(2).is_delzant().unwrap().delzant);
        for k in 1..=3 {
            let mut p = standard_simplex(1);
            for _ in 1..k {
                p = product(&p, &standard_simplex(1));
            }
            assert!(p.is_delzant().unwrap().delzant);
        }
    }

    #[test]
    fn non_delzant_triangle() {
        // normals (1,0), (0,1), (-1,-2): x >= 0, y >= 0, x + 2y <= 2
        let p = Polytope::new(
            2,
            vec![
                Halfspace::from_ints(&[1, 0], int(0)).unwrap(),
                Halfspace::from_ints(&[0, 1], int(0)).unwrap(),
                Halfspace::from_ints(&[-1, -2], int(-2)).unwrap(),
            ],
        )
        .unwrap();
        let r = p.is_delzant().unwrap();
        assert!(!r.delzant);
        assert!(r.detail.unwrap().contains("index 2"));
    }

    #[test]
    fn half_line_and_line() {
        let p = Polytope::new(1, vec![Halfspace::from_ints(&[-1], int(0)).unwrap()]).unwrap();
        assert_eq!(p.vertices(), &[vec![int(0)]]);
        assert_eq!(p.rays(), &[vec![BigInt::from(-1)]]);
        let line = Polytope::full(1);
        assert!(line.vertices().len() == 1 && line.lineality().len() == 1);
        assert_eq!(line.is_delzant(), Err(PolyError::NoVertices));
    }

    #[test]
    fn vertices_round_trip() {
        let pts = vec![rationals(&[0, 0]), rationals(&[2, 0]), rationals(&[0, 2]), vec![rat(1, 2), rat(1, 2)]];
        let p = Polytope::from_vertices(2, &pts, &[]).unwrap();
        assert_eq!(p.vertices().len(), 3);
        let seg = Polytope::from_vertices(2, &[rationals(&[0, 0]), rationals(&[1, 1])], &[]).unwrap();
        assert_eq!(seg.affine_dim(), Some(1));
        assert!(seg.is_face_of(&Polytope::from_vertices(2, &[rationals(&[0, 0]), rationals(&[1, 1]), rationals(&[1, 0])], &[]).unwrap()));
    }

    #[test]
    fn tangent_cones() {
        let s = standard_simplex(2);
        let origin = s.find_face(&Polytope::point(&rationals(&[0, 0]))).unwrap();
        let c = s.tangent_cone(&origin);
        assert_eq!(c, Cone::from_h(2, &[rationals(&[1, 0]), rationals(&[0, 1])], &[]));
        let top = s.find_face(&s).unwrap();
        assert!(s.tangent_cone(&top).dim() == 2 && s.normal_cone(&top).is_zero());
    }
}
