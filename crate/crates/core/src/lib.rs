//! Quantum stabilizer codes from symplectic self-orthogonal evaluation codes
//! on algebraic function fields.
//!
//! The pipeline: a [`curve`] backend produces paired evaluation places and
//! the divisors G and H; the evaluation codes C(G) ⊇ C(H) = C(G)^⊥s give a
//! stabilizer code through [`symplectic`]; [`descent`] maps it to a smaller
//! alphabet; [`decoder`] solves the syndrome problem; [`bounds`] tabulates
//! the asymptotic rate curves.

pub mod artifact;
pub mod bounds;
pub mod curve;
pub mod decoder;
pub mod descent;
pub mod error;
pub mod field;
pub mod linalg;
pub mod rng;
pub mod symplectic;

pub use error::{Error, Result};
