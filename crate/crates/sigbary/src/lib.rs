//! Exact computation with truncated signatures of piecewise linear paths:
//! tensor-series arithmetic, group barycenters, congruence normal forms of
//! the associated quadratic forms, and reconstruction of paths realizing a
//! barycenter. All arithmetic is over arbitrary-precision rationals, so every
//! result is exact and reproducible.

pub mod barycenter;
pub mod cli;
pub mod congruence_recovery;
mod error;
mod linalg;
pub mod ncpoly;
mod ratio;
pub mod signatures;
pub mod tensor_algebra;
pub mod verify;

pub use error::{Error, Result};
