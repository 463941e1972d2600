//! Exact and numerical tools for multi-sender prepare-and-measure communication
//! with limited distinguishability or anti-distinguishability.

pub mod distributed;
pub mod geometry;
pub mod lp;
pub mod scenario;
pub mod quantum;
pub mod rational;

pub use geometry::{CanonicalFacet, CoordinatePermutation, GeometryError, HPolyhedron, VPolytope};
pub use rational::Rational;
