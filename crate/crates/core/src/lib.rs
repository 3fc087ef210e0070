//! Exact intersection theory on towers of point blow-ups of surfaces,
//! b-divisors over such towers, and a 2-dimensional toric testbed for
//! multiplier ideals.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod appendix;
pub mod bdivisor;
pub mod commands;
pub mod error;
pub mod h0;
pub mod linalg;
pub mod rat;
pub mod report;
pub mod scenario;
pub mod toric;
pub mod tower;

pub use error::{Error, Result};
pub use rat::Rat;
pub use tower::{CenterSpec, DivisorClass, ModelId, Tower};
