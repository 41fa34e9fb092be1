//! Toy-model verification of the descent identities: the group-ring
//! derivative operator, the Kummer-map computation on finite Galois
//! modules, the sigma-square evaluation formula, the residue congruences,
//! and proportionality of quotient-polynomial cycle classes.

mod chow;
mod group_ring;
mod toy_module;

pub use chow::{proportionality_report, ToyChowModel};
pub use group_ring::{derivative_identity, GroupRingElem};
pub use toy_module::{
    congruence_checks, kummer_beta_report, sigma_square_report, ToyGaloisModule,
};
