//! Exact rational and integer linear algebra: rationals, integer lattices
//! (Smith and Hermite normal forms), rational subspaces and an exact simplex.

pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod subspace;

pub use lattice::{
    hermite_normal_form, integer_kernel, lattice_index, primitive_part, saturation,
    smith_normal_form, LatticeIndex, LatticeMatrix, SmithForm,
};
pub use lp::{LinearProgram, LpOutcome, Relation};
pub use rational::{int, parse_rational, rat, Integer, Rational};
pub use subspace::{is_generic, sample_generic, RationalSubspace};
