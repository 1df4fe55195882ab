//! Exact symbolic dynamics on one-sided shift spaces.
//!
//! Cylinder-set algebra, Δ-transitivity checks for products of shift maps,
//! and a Livšic toolkit for locally constant functions.

pub mod cli;
pub mod cylinder;
pub mod delta;
pub mod error;
pub mod livsic;
pub mod rational;
pub mod symbolic;
pub mod systems;
pub mod windows;

pub use error::{Error, Result};
