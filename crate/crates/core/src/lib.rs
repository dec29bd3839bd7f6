//! Discrete-time and multi-coin quantum walks with pre- and post-selection.
//!
//! - [`hilbert`]: topologies, basis labels, sparse states.
//! - [`dynamics`]: coin tosses, conditional shifts, evolution.
//! - [`pps`]: two-state vectors, ABL probabilities, paradox detection,
//!   counterfactual trajectories.
//! - [`scenarios`]: the concrete pre/post-selected walks and their tables.
//! - [`distributions`]: spatial distributions and spread statistics.

pub mod distributions;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod pps;
pub mod random;
pub mod regression;
pub mod scenario_file;
pub mod scenarios;

pub use error::{Error, Result};
