//! Analysis of aggregated preference hierarchies.
//!
//! Individual preferences are weak orders (ranked partitions) over a shared
//! set of policies. From a profile of such orders this crate derives:
//!
//! * adjacency, reach and transition matrices ([`order`], [`matrix`]);
//! * graph and poset machinery: closures, Hamiltonian paths, circuit-free
//!   sub-bigraphs, Dilworth decompositions, take-grant connectivity ([`graph`]);
//! * unanimities, for/against weights, cycle classification and condensation
//!   ([`aggregate`]);
//! * spectral-radius and Markov-chain entropy measures ([`entropy`]);
//! * maximum-likelihood orderings from paired comparisons ([`mlorder`]).

#![allow(clippy::needless_range_loop)]

pub mod aggregate;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod mlorder;
pub mod order;
pub mod profile;

pub use error::{Error, Result};
pub use matrix::{LabeledMatrix, Rational};
pub use order::{PolicySet, PreferenceOrder};
pub use profile::Profile;

/// Environment variable overriding every enumeration cap.
pub const MAX_VERTICES_ENV: &str = "PREFLATTICE_MAX_VERTICES";

/// Resolve an enumeration cap: the environment override wins over `default`.
pub fn enumeration_cap(default: usize) -> usize {
    std::env::var(MAX_VERTICES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}
