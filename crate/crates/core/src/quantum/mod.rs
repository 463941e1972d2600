//! Quantum strategies, conic programs and see-saw optimisation.

pub mod conic;
pub mod discrimination;
pub mod mat;
pub mod seesaw;
pub mod states;
pub mod strategy;

pub use conic::{ConicError, ConicProblem, ConicSolution};
pub use discrimination::{antidistinguishability, distinguishability, helstrom_antidist_two, DiscriminationResult};
pub use states::{DensityMatrix, Povm, QuantumError};
pub use strategy::{audit_resources, verify_strategy, Strategy, Verification};
pub use seesaw::{min_total_resource, seesaw, Initializer, SeeSawConfig, SeeSawResult, TotalResourceResult, TotalVariant};
