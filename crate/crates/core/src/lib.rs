//! Electromagnetic four-potentials, gauge transformations, and numerical
//! checks that separate physically acceptable gauges from ones that merely
//! reproduce the right fields.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod diff;
pub mod dynamics;
pub mod error;
pub mod gauge;
pub mod minkowski;
pub mod potential;
pub mod validator;

pub use error::{Error, Result};
