//! Symbolic-numeric toolkit for Jacobian pairs and Keller maps.
#![allow(clippy::needless_range_loop)]

pub mod majorant;
pub mod normalize;
pub mod perturb;
pub mod polyring;
pub mod reversion;
pub mod transform;
pub mod witness;
pub mod yseries;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
