//! A newsgroup that organises itself: validated posting records become
//! two-ply interest preferences, subscribers are partitioned into interest
//! groups with elected managers, groups are ordered and linked, and role
//! grants are distilled into precedent rules.

pub mod encoding;
pub mod error;
pub mod groups;
pub mod precedent;
pub mod protocol;
pub mod ranking;
pub mod scenario;

pub use encoding::{decode_order, encode_order};
pub use error::{Result, SelforgError};
pub use groups::{
    elect_managers, extract_prefs, group_topology, partition_subscribers, referral_allowed, referral_check,
    GroupAssignment, GroupTopologyMode, InterestMap, Referral, APATHY, ENTRY_GROUP,
};
pub use precedent::{derive_precedents, Grant, PrecedentReport, PrecedentRule};
pub use protocol::{parse_events_csv, validate_protocol, EventKind, PostingEvent, ThreadLedger, Violation};
pub use ranking::group_order;
pub use scenario::{run_scenario, ScenarioOptions, ScenarioReport};
