//! Exact linear algebra over Z/p^e (e = 1 or 2): canonical forms for
//! submodules, abstract module types, and F_{p^2}-structures on
//! symplectic ambient modules.

mod fp2;
mod matrix;
mod ring;
mod submodule;

pub use fp2::{invert, standard_gram, Fp2Structure};
pub use matrix::Matrix;
pub use ring::{is_prime, RingCtx};
pub use submodule::{howell_form, kernel, ModuleType, Submodule};
