//! Exact verification suites for Hecke-fiber combinatorics on symplectic
//! modules over Z/p and Z/p^2.
//!
//! The crate enumerates isotropic submodule families indexing Hecke-type
//! correspondences, classifies them by intersection invariants against
//! fixed flags, measures fiber statistics of the induced projections, and
//! checks the resulting censuses against built-in closed-form tables. A
//! symbolic layer handles the matching coefficient assemblies, Satake-type
//! eigenvalue computations and their residue specializations, and a toy
//! descent layer checks the group-ring derivative and Kummer-map
//! identities on finite Galois-module models.

pub mod error;
pub mod finmod;
pub mod heckealg;
pub mod kolyvagin;
pub mod lagrange;
pub mod partitions;
pub mod report;

pub use error::{Error, Result};
