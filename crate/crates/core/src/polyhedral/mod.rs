//! Exact cones and polyhedra, polyhedral decompositions of the dual Lie
//! algebra, gluing data and the dual complex.

pub mod cone;
pub mod decomposition;
pub mod gluing;
pub mod hpoly;
pub mod polytope;

pub use cone::{double_description, fourier_motzkin, Cone, HSystem};
pub use decomposition::{DecompError, Decomposition, Fan, FanCone};
pub use gluing::{DualComplex, DualInput, GluingDatum, GluingError, Glued, GluingReport};
pub use hpoly::HPolyhedron;
pub use polytope::{hirzebruch, product, standard_simplex, unit_cube, DelzantReport, Face, Halfspace, PolyError, Polytope};
