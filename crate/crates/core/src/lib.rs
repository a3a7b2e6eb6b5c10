//! Forward model and analysis of the shotgun sequencing channel with erasures.
//!
//! The channel takes an `n`-bit input string, samples `K` reads of length `L`
//! at uniformly random start positions (cyclically, so reads may wrap past the
//! end of the string) and then erases every read symbol independently with
//! probability `δ`.
//!
//! This crate is `no_std` (it needs `alloc`) and is organised as:
//!
//! * [`channel`] - channel parameters, read extraction and seeded sampling.
//! * [`islands`] - genie-aided merging of reads into true islands, together
//!   with a brute-force oracle used for equivalence testing.
//! * [`stats`] - per-trial coverage and island statistics and their
//!   aggregation across Monte Carlo trials.
//! * [`bounds`] - closed-form coverage laws and the achievability / converse
//!   capacity bounds.
//!
//! Positions are 0-based throughout and all logarithms are base 2.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod channel;
mod error;
pub mod islands;
pub mod stats;

pub use bounds::{BoundPoint, Converse};
pub use channel::{BitString, ChannelParams, Read, ReadSet, Symbol};
pub use error::{DomainError, ParamError};
pub use islands::{Island, IslandSet, MergeMode};
pub use stats::{AggregateReport, PartitionReport, TrialStats};
