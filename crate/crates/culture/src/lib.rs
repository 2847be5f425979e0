//! Agents holding one trait per feature sit on a topology and copy traits
//! from similar neighbours. Runs are seeded and reproducible, and report
//! activity, variety entropy and compatibility entropy per period.

pub mod config;
pub mod epochs;
pub mod error;
pub mod field;
pub mod io;
pub mod metrics;
pub mod rules;
pub mod sim;
pub mod topology;

pub use config::{Behavior, CultureConfig, InitSpec};
pub use epochs::{classify_epochs, Epoch, EpochSpan, EpochThresholds};
pub use error::{CultureError, Result};
pub use field::{distance, identity_metric, similarity, Field};
pub use metrics::{compatibility_entropy, variety_entropy, MetricsSample, VarietyRow, VarietyTable};
pub use rules::{interaction_allowed, step_egoistic, step_peer_possible, AccretionEvent, Criterion};
pub use sim::{run, run_batch, run_observed, RunOutcome};
pub use topology::{Neighborhood, Topology, TopologyKind, TopologySpec};
