//! Exact computations on blow-ups of `P^n x P^m` at general points: divisor and
//! curve lattices, base-locus inequalities, a rational cone engine, table
//! decompositions, catalecticant identities and log Fano certificates.
//!
//! Point indices are 0-based in the API. Labels and rendered tables print them
//! 1-based.

pub mod cone;
pub mod decomp;
mod error;
pub mod ineq;
pub mod lattice;
pub mod logfano;
pub mod pipeline;
pub mod secant;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
