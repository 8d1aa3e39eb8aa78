//! Executable kernel for finite simplicial homotopy theory.
//!
//! The crate builds finite simplicial sets from cell/face presentations,
//! decides cofibration, fibration, and weak-equivalence structure up to a
//! truncation bound, computes the two explicit factorizations, solves
//! lifting problems, and descends fibrations over horns to fibrations over
//! simplices.

pub mod error;
pub mod factorization;
pub mod harness;
pub mod lifting;
pub mod simplex;
pub mod constructions;
pub mod descent;
pub mod sset;

pub use error::{Error, Result};
