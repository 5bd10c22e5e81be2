//! Grid path planning with pheromone-focused ant colony optimization.
//!
//! The crate is organized around an occupancy-grid world model ([`grid`],
//! [`mapgen`]), exact shortest-path oracles ([`oracle`]), classical ant
//! colony machinery with AS / Elite AS / MMAS baselines ([`colony`]), the
//! pheromone-focused variant built from distance-aware initialization,
//! elite-reinforced deposition and turn-penalized smoothing ([`pfaco`]),
//! and a seeded benchmark harness with significance testing
//! ([`bench`](mod@bench)).
//!
//! Everything stochastic is driven by explicit seeds: identical inputs
//! produce identical outputs regardless of scheduling.

pub mod bench;
pub mod colony;
pub mod fmt;
pub mod grid;
pub mod mapgen;
pub mod oracle;
pub mod pfaco;
pub mod stats;

mod error;
pub(crate) mod seed;

pub use error::{Error, Result};
