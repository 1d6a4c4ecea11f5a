//! Latin squares, the triangle removal process, intercalate stability and
//! the rerandomization step built on it.
//!
//! Conventions: every index (row, column, symbol) is 0-based inside the
//! library. JSON and CSV boundaries use 1-based indices.

pub mod configs;
pub mod dist;
pub mod error;
pub mod fixtures;
pub mod f2;
pub mod intercalate;
pub mod io;
pub mod latin;
pub mod leftover;
pub mod rerandomize;
pub mod rng;
pub mod sampler;
pub mod search;

pub use error::{Error, Result};
pub use latin::{Axis, Entry, LatinSquare, OrderedPartialLatinSquare, PartialLatinSquare, Template};
