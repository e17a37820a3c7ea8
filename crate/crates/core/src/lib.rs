//! Exact-arithmetic valuations on convex functions and convex bodies.

pub mod analysis;
pub mod convex;
pub mod error;
pub mod harness;
mod hull;
pub mod lp;
pub mod num;
pub mod polytope;
pub mod random;
pub mod valuation;

pub use error::{Error, Result};
