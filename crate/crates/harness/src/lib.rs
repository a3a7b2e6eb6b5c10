//! Experiment harness for the shotgun sequencing channel with erasures.
//!
//! Three sweeps are provided, each producing a CSV [`Table`]:
//!
//! * [`sweep::run_bounds_sweep`] evaluates the analytic bounds over a grid of
//!   coverage depths and erasure probabilities;
//! * [`sweep::run_simulation_sweep`] runs Monte Carlo trials per `(n, c, δ)`
//!   and reports empirical means next to their analytic targets;
//! * [`sweep::run_concentration_check`] measures island length-bin
//!   deviations and the tail of the reads-per-island maximum.
//!
//! Trials draw their randomness from per-trial seeds derived from the master
//! seed, so results do not depend on the number of worker threads.

pub mod config;
pub mod error;
pub mod sweep;
pub mod table;

pub use config::{Alpha, SweepConfig};
pub use error::HarnessError;
pub use table::Table;

/// Version written into the `schema_version` column of every table.
pub const SCHEMA_VERSION: u32 = 1;
