//! Exact fair division between two participants when some items can be split
//! and others cannot.
//!
//! All gains are exact rationals. The crate computes adjusted-winner
//! divisions for all-divisible problems, decides whether proportional and
//! equitable divisions exist, and finds profitably, uniformly and equitably
//! fair divisions for mixed problems. A brute-force [`oracle`] reproduces the
//! same quantities by exhaustive enumeration for small instances.

pub mod boolean_opt;
pub mod cli;
pub mod engine;
pub mod equitable;
pub mod existence;
pub mod geometry;
pub mod model;
pub mod oracle;
pub mod pareto_indivisible;

pub use engine::{solve, FairnessReport, Mode};
pub use model::{Division, GainPair, Item, Owner, Problem, Rational, Signature};
