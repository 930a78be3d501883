//! Tropical graphs, weights, symmetry groups and edge collapse.

pub mod collapse;
pub mod graph;
pub mod symmetry;
pub mod weights;

pub use collapse::{collapse_edges, relative_weight_cone, Collapse, EdgeRole, RelativeWeights};
pub use graph::{
    Edge, EdgeClass, GraphError, LengthClass, Marking, Resolved, Sort, TropicalGraph, ValidationReport, Vertex,
    Violation,
};
pub use symmetry::{is_rigid, symmetry_group, symmetry_kernel, EdgeMode, Order, SymmetryInfo, TorusKernel};
pub use weights::{check_balancing, validate_tropical, weight_cone, Balance, WeightCone};
