//! Exact rational polyhedral computation.
//!
//! Half-space and vertex descriptions ([`HPolyhedron`], [`VPolytope`]),
//! conversion between them by double description, canonical integer facets
//! reduced modulo the affine hull, and orbit classification under coordinate
//! permutations.

mod dd;
mod int;
pub mod linalg;
mod orbit;
mod polytope;

pub use orbit::{group_order, orbit_classify, CoordinatePermutation, Orbit};
pub use polytope::{
    h_to_v, v_to_facets, validate_facet, AffineHull, CanonicalFacet, FacetCheck, FacetEnumeration,
    HPolyhedron, VPolytope,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron is empty")]
    Infeasible,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generator {0} is not a symmetry of the polytope")]
    InvalidSymmetry(usize),
    #[error("invalid polytope input: {0}")]
    Invalid(String),
}
