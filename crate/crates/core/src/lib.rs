//! Combinatorial and algebraic layer of tropical Fukaya theory for multiply
//! cut symplectic manifolds: polyhedral decompositions and their dual
//! complexes, tropical graphs and symmetry groups, split graphs and the cone
//! condition, index bookkeeping, curved A∞ verification over truncated
//! Novikov coefficients, the toric diagonal decomposition and toric
//! potentials. All arithmetic is exact.

pub mod ainfty;
pub mod diagonal;
pub mod exactalg;
pub mod polyhedral;
pub mod potential;
pub mod index_energy;
pub mod library;
pub mod split;
pub mod tropical;
