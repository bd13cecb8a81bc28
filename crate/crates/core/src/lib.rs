//! Geodesics, Clairaut invariants and curvature of rotational surfaces in
//! the pseudo-Euclidean space of signature (2, 2).

// `!(x < y)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod geodesic;
pub mod isometry;
pub mod output;
pub mod pseudometric;
pub mod surface;

pub use error::{Error, Result};
