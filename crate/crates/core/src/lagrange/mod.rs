//! Symplectic ambient modules and exhaustive, structured enumeration of
//! the isotropic submodule families indexing Hecke-type correspondences.

pub mod cache;
pub mod enumerate;
mod symplectic;

pub use cache::{CacheKey, EnumerationCache, CACHE_FORMAT_VERSION};
pub use enumerate::{
    all_submodules, b, enumerate_isotropic, enumerate_tp, enumerate_tpi, gaussian_binomial,
    grassmannian_fp, isotropic_count, lagrangian_count, lift_count, span_vectors_fp, tpi_count,
    DEFAULT_BUDGET,
};
pub use symplectic::SymplecticSpace;
