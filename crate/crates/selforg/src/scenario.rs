//! End-to-end newsgroup run: ledger, preferences, groups, managers, ordering,
//! precedents, and a stability run of the groups as culture agents.

use std::collections::BTreeMap;

use preflattice_core::mlorder::CandidateMode;
use preflattice_culture::{run, Behavior, CultureConfig, Field, VarietyRow};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::groups::{
    elect_managers, extract_prefs, group_name, group_topology, partition_subscribers, GroupTopologyMode, InterestMap,
    DEFAULT_MANAGER_FRACTION,
};
use crate::precedent::{derive_precedents, Grant, PrecedentReport};
use crate::protocol::{validate_protocol, PostingEvent, Violation};
use crate::ranking::{group_order, VisitTallies};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioOptions {
    pub topology: GroupTopologyMode,
    pub manager_fraction: f64,
    pub seed: u64,
    pub max_periods: usize,
    pub behavior: Behavior,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        ScenarioOptions {
            topology: GroupTopologyMode::default(),
            manager_fraction: DEFAULT_MANAGER_FRACTION,
            seed: 0,
            max_periods: 2000,
            behavior: Behavior::Egoistic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub stasis: bool,
    pub periods_run: usize,
    pub varieties: Vec<VarietyRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub preferences: BTreeMap<String, String>,
    pub flags: Vec<(u64, Violation)>,
    pub groups: BTreeMap<String, Vec<String>>,
    pub populated_groups: usize,
    pub entry: Vec<String>,
    pub managers: BTreeMap<String, Vec<String>>,
    pub topology: Vec<(String, String)>,
    /// Order over the single-interest groups.
    pub group_order: String,
    pub precedents: PrecedentReport,
    pub stability: StabilityReport,
}

/// Groups become agents on the group topology, one feature per interest
/// with trait 1 where the group holds the interest.
pub fn groups_as_field(interests: usize) -> Field {
    let agents: Vec<Vec<u32>> =
        (1..1u64 << interests).map(|m| (0..interests).map(|i| (m >> i & 1) as u32).collect()).collect();
    Field::new(interests, 2, &agents).expect("bit vectors fit two traits")
}

pub fn run_scenario(
    events: &[PostingEvent],
    interests: &InterestMap,
    grants: &[Grant],
    opts: &ScenarioOptions,
) -> Result<ScenarioReport> {
    let ledger = validate_protocol(events)?;
    let prefs = extract_prefs(&ledger, interests)?;
    let assignment = partition_subscribers(&prefs, &interests.interests);
    let managers = elect_managers(&assignment, &ledger, interests, opts.manager_fraction)?;
    let topo = group_topology(&interests.interests, opts.topology)?;
    let topology = topo
        .edges()
        .filter(|(a, b)| a < b)
        .map(|(a, b)| (topo.vertices().label(a).to_string(), topo.vertices().label(b).to_string()))
        .collect();

    // a counted post on an interest's thread is a visit to that interest's own group
    let singles: Vec<String> = (0..interests.interests.len()).map(|i| group_name(&interests.interests, 1 << i)).collect();
    let mut visits: VisitTallies = BTreeMap::new();
    for c in &ledger.counted {
        let i = interests.interest_of(&ledger, &c.thread)?;
        *visits.entry(c.subscriber.clone()).or_default().entry(singles[i].clone()).or_insert(0) += 1;
    }
    let order = group_order(&visits, &singles, CandidateMode::Subbigraph, singles.len().max(2))?;

    let n = interests.interests.len();
    let mut cfg = CultureConfig::new(n, 2, opts.topology.spec(n));
    cfg.seed = opts.seed;
    cfg.max_periods = opts.max_periods;
    cfg.behavior = opts.behavior;
    let out = run(&cfg, Some(groups_as_field(n)))?;

    Ok(ScenarioReport {
        preferences: prefs.iter().map(|(s, o)| (s.clone(), o.to_string())).collect(),
        flags: ledger.flags.clone(),
        groups: assignment.named_groups(),
        populated_groups: assignment.populated(),
        entry: assignment.entry.clone(),
        managers,
        topology,
        group_order: order.to_string(),
        precedents: derive_precedents(grants),
        stability: StabilityReport { stasis: out.stasis, periods_run: out.periods_run, varieties: out.table.rows },
    })
}
