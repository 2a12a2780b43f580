//! Exact-arithmetic workbench for finite-dimensional Leibniz algebras.
//!
//! Everything here is computed over the rationals with arbitrary-precision
//! integers: structure-constant tables, characteristic series, parametric
//! automorphism families, derivation spaces, and a symbolic replay engine
//! that rederives automorphism constraints from the homomorphism equations
//! and emits machine-checkable certificates.

// Index loops over basis ranges read better than enumerate() chains in
// linear-algebra code; the indices are the mathematical objects.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod families;
pub mod matrix;
pub mod morphisms;
pub mod necessity;
pub mod poly;
pub mod rng;
pub mod scalar;

pub use algebra::{Algebra, Subspace, Vector};
pub use error::{Error, Result};
pub use families::{AutParams, FamilyId};
pub use matrix::Matrix;
pub use morphisms::{DerivationBasis, HomCheck, LinearMap};
pub use poly::{Monomial, Poly};
pub use scalar::Scalar;
