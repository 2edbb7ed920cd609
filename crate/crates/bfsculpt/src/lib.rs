//! Exact query-complexity analysis and promise sculpting for Boolean
//! functions at desk scale.
//!
//! The crate computes exact values of the classical query-complexity
//! measures of (possibly partial) Boolean functions — deterministic depth,
//! certificate complexity, block sensitivity, fractional block sensitivity
//! (by exact-rational linear programming), balance, and H-indices — and
//! provides executable versions of the query algorithms and promise
//! constructions that realize known relationships between those measures:
//! elimination-style evaluators, certificate probing, promise sculptors
//! with verified bounds, communication gadgets, and brute-force game
//! oracles for ground truth at tiny arity.
//!
//! Start with [`function::BooleanFunction`] and [`measures::MeasureReport`],
//! or run the examples:
//!
//! ```text
//! cargo run --release --example measure_report
//! cargo run --release --example sculpt_r0_vs_r
//! ```

pub mod algorithms;
pub mod bitmap;
mod error;
pub mod exact;
pub mod format;
pub mod function;
pub mod gadgets;
pub mod hindex;
pub mod lp;
pub mod measures;
pub mod oracles;
pub mod sculpt;
pub mod shattering;

pub use error::{Error, Result};
