//! Online screening of arriving items so that the retained set still
//! contains an optimal constrained assignment.
//!
//! * [`model`]: items, capacities, instances and item distributions.
//! * [`matching`]: the exact offline solver and its brute-force oracle.
//! * [`greedy`]: retain an item iff it joins the current optimum.
//! * [`thresholds`]: per-property value thresholds learned from training data.
//! * [`pipeline`]: thresholds filter followed by greedy screening.
//! * [`experiments`]: seeded Monte Carlo trials and their statistics.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod greedy;
pub mod io;
pub mod matching;
pub mod model;
pub mod pipeline;
pub mod rng;
pub mod stats;
pub mod thresholds;

pub use error::{Error, Result};
pub use matching::{brute_force_matching, optimal_matching, Solution};
pub use model::{dummy_items, sample_instance, ConstraintSpec, DistributionSpec, Instance, Item};
