//! The algebraic side: symmetric-matrix corank counts, decomposition
//! coefficient assemblies, the Satake-type eigenvalue engine, and the
//! residue pipelines specializing everything mod M and M^2.

mod assemble;
mod corank;
mod pipeline;
pub mod poly;
mod satake;

pub use assemble::{
    admissible_pairs, decomposition_coeffs, nonordinary_pair_coeffs, ordinary_pair_coeffs,
    phi_single_expansion, single_flag_sum, BasisSymbol, PhiExpansion,
};
pub use corank::{
    corank_count_brute, corank_count_poly, invertible_symmetric_poly, symmetric_corank_census,
};
pub use pipeline::{descent_values, residue_pipeline, tpi_eigenvalue_residue, DescentValues};
pub use poly::IntPoly;
pub use satake::{
    satake_eigenvalue, specialize_eigenvalue, specialize_poly, t_p_eigenvalue, unit_inverse,
    weil_relation_holds, CongruenceSpec, Eigenvalue, SatakeParams, TorusOp, WeightClass,
};
