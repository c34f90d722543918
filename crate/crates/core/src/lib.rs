//! Eigenvalue and singular value cones: Littlewood–Richardson coefficients,
//! generators for the Horn-type inequality systems, exact polyhedral
//! membership, and a random-matrix oracle to test them against.

pub mod classical_cones;
pub mod combinatorics;
pub mod error;
pub mod fixtures;
pub mod involution_cones;
pub mod lr;
pub mod oracle;
pub mod polyhedra;
pub mod registry;

pub use classical_cones::{ConeId, ConeKind, Variant};
pub use combinatorics::{Chamber, IndexSet, Partition, PolarizedSet, Rational, SpectrumVector};
pub use error::{Error, Result};
pub use lr::{lr_coefficient, lr_subset};
pub use polyhedra::{InequalitySystem, LinearRelation, RelKind};
