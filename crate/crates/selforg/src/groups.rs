//! Interest preferences, the partition into sub-groups, managers, the
//! group topology and referral.

use std::collections::{BTreeMap, BTreeSet};

use preflattice_core::graph::Digraph;
use preflattice_core::{PolicySet, PreferenceOrder};
use preflattice_culture::topology::{Topology, TopologySpec};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SelforgError};
use crate::protocol::ThreadLedger;

/// Label of the apathy element placed at the bottom of every order.
pub const APATHY: &str = "∅";
/// Name of the group every subscriber belongs to.
pub const ENTRY_GROUP: &str = "entry";

/// The declared interests and which top-level thread discusses which.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterestMap {
    pub interests: Vec<String>,
    pub threads: BTreeMap<String, String>,
}

impl InterestMap {
    pub fn from_json(text: &str) -> Result<Self> {
        let m: InterestMap = serde_json::from_str(text)?;
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        PolicySet::new(self.interests.iter().cloned())?;
        if self.interests.iter().any(|i| i == APATHY) {
            return Err(SelforgError::Parse(format!("`{APATHY}` is reserved")));
        }
        for i in self.threads.values() {
            if !self.interests.contains(i) {
                return Err(SelforgError::UnknownInterest(i.clone()));
            }
        }
        Ok(())
    }

    /// The interest a (possibly nested) thread belongs to.
    pub fn interest_of(&self, ledger: &ThreadLedger, thread: &str) -> Result<usize> {
        let root = ledger.roots.get(thread).map(String::as_str).unwrap_or(thread);
        let label = self.threads.get(root).ok_or_else(|| SelforgError::UnmappedThread(root.to_string()))?;
        Ok(self.interests.iter().position(|i| i == label).expect("checked at load"))
    }

    /// Interests plus the apathy element.
    pub fn policy_set(&self) -> Result<PolicySet> {
        Ok(PolicySet::new(self.interests.iter().cloned().chain([APATHY.to_string()]))?)
    }

    pub fn group_name(&self, mask: u64) -> String {
        group_name(&self.interests, mask)
    }
}

/// `g_` followed by the member interests; multi-character labels are joined
/// with `+`.
pub fn group_name(interests: &[String], mask: u64) -> String {
    let parts: Vec<&str> = (0..interests.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| interests[i].as_str())
        .collect();
    let sep = if interests.iter().all(|i| i.chars().count() == 1) { "" } else { "+" };
    format!("g_{}", parts.join(sep))
}

/// Two-ply orders: interests with a counted contribution on top, everything
/// else tied with apathy below. Subscribers with nothing counted get one
/// all-tied group.
pub fn extract_prefs(ledger: &ThreadLedger, interests: &InterestMap) -> Result<BTreeMap<String, PreferenceOrder>> {
    let ps = interests.policy_set()?;
    for e in &ledger.events {
        interests.interest_of(ledger, &e.thread)?;
    }
    let mut out = BTreeMap::new();
    for s in ledger.subscribers() {
        let mut top = BTreeSet::new();
        for c in ledger.contributions_of(&s) {
            top.insert(interests.interest_of(ledger, &c.thread)?);
        }
        let top: Vec<usize> = top.into_iter().collect();
        let rest: Vec<usize> = (0..ps.len()).filter(|i| !top.contains(i)).collect();
        let groups = if top.is_empty() { vec![rest] } else { vec![top, rest] };
        out.insert(s, PreferenceOrder::from_indices(&ps, groups)?);
    }
    Ok(out)
}

/// The interest subset a two-ply order puts on top, as a bitmask; zero when
/// apathy is in the top group.
pub fn top_mask(order: &PreferenceOrder) -> u64 {
    let ps = order.policies();
    let top = &order.groups()[0];
    if top.iter().any(|&i| ps.label(i) == APATHY) {
        return 0;
    }
    top.iter().fold(0, |m, &i| m | 1 << i)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupAssignment {
    pub interests: Vec<String>,
    /// Populated groups keyed by interest bitmask.
    pub groups: BTreeMap<u64, Vec<String>>,
    /// Everyone.
    pub entry: Vec<String>,
}

impl GroupAssignment {
    pub fn populated(&self) -> usize {
        self.groups.len()
    }

    pub fn named_groups(&self) -> BTreeMap<String, Vec<String>> {
        self.groups.iter().map(|(&m, v)| (group_name(&self.interests, m), v.clone())).collect()
    }

    /// The primary group of a subscriber; `None` for the purely apathetic,
    /// who sit in the entry group only.
    pub fn group_of(&self, subscriber: &str) -> Option<u64> {
        self.groups.iter().find(|(_, v)| v.iter().any(|s| s == subscriber)).map(|(&m, _)| m)
    }

    pub fn mask_of(&self, name: &str) -> Option<u64> {
        (1..1u64 << self.interests.len()).find(|&m| group_name(&self.interests, m) == name)
    }
}

/// Keys each subscriber by the interests on top of their order.
pub fn partition_subscribers(prefs: &BTreeMap<String, PreferenceOrder>, interests: &[String]) -> GroupAssignment {
    let mut groups: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    for (s, o) in prefs {
        let m = top_mask(o);
        if m != 0 {
            groups.entry(m).or_default().push(s.clone());
        }
    }
    GroupAssignment { interests: interests.to_vec(), groups, entry: prefs.keys().cloned().collect() }
}

pub const DEFAULT_MANAGER_FRACTION: f64 = 0.05;

/// The `⌈fraction · members⌉` most active members, activity being counted
/// contributions on the group's interests. Ties go to the earlier first
/// contribution, then the smaller id.
pub fn elect_group_managers(
    members: &[String],
    group_mask: u64,
    ledger: &ThreadLedger,
    interests: &InterestMap,
    fraction: f64,
) -> Result<Vec<String>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(SelforgError::InvalidFraction(fraction));
    }
    if members.is_empty() {
        return Err(SelforgError::EmptyGroup(interests.group_name(group_mask)));
    }
    let mut scored = Vec::with_capacity(members.len());
    for m in members {
        let mut activity = 0usize;
        let mut first = u64::MAX;
        for c in ledger.contributions_of(m) {
            if group_mask >> interests.interest_of(ledger, &c.thread)? & 1 == 1 {
                activity += 1;
                first = first.min(c.t);
            }
        }
        scored.push((activity, first, m.clone()));
    }
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then_with(|| a.2.cmp(&b.2)));
    let k = ((fraction * members.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(scored.into_iter().take(k).map(|(_, _, m)| m).collect())
}

pub fn elect_managers(
    assignment: &GroupAssignment,
    ledger: &ThreadLedger,
    interests: &InterestMap,
    fraction: f64,
) -> Result<BTreeMap<String, Vec<String>>> {
    assignment
        .groups
        .iter()
        .map(|(&m, members)| {
            Ok((interests.group_name(m), elect_group_managers(members, m, ledger, interests, fraction)?))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupTopologyMode {
    /// Groups differing by one interest are adjacent.
    #[default]
    SubsetLattice,
    /// Each group links to the one with its smallest missing interest added.
    BinaryTree,
}

impl GroupTopologyMode {
    pub fn spec(self, n: usize) -> TopologySpec {
        match self {
            GroupTopologyMode::SubsetLattice => TopologySpec::SubsetLattice { elements: n },
            GroupTopologyMode::BinaryTree => TopologySpec::SubsetTree { elements: n },
        }
    }
}

/// All `2ⁿ − 1` groups, with edges in both directions between neighbours.
pub fn group_topology(interests: &[String], mode: GroupTopologyMode) -> Result<Digraph> {
    let n = interests.len();
    if !(2..=20).contains(&n) {
        return Err(SelforgError::InvalidInterestCount(n));
    }
    let topo = Topology::build(&mode.spec(n))?;
    let labels = PolicySet::new((1..=topo.len() as u64).map(|m| group_name(interests, m)))?;
    let edges: Vec<(usize, usize)> = topo.edges().flat_map(|(a, b)| [(a, b), (b, a)]).collect();
    Ok(Digraph::new(labels, edges)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", rename_all = "lowercase")]
pub enum Referral {
    Allow,
    Deny { reason: String },
}

/// Posting is allowed in one's own groups and their topological neighbours;
/// the entry group is open to all.
pub fn referral_allowed(memberships: &BTreeSet<String>, target: &str, topo: &Digraph) -> Result<Referral> {
    if target == ENTRY_GROUP {
        return Ok(Referral::Allow);
    }
    let t = topo.vertices().index_of(target).ok_or_else(|| SelforgError::UnknownGroup(target.to_string()))?;
    if memberships.contains(target) {
        return Ok(Referral::Allow);
    }
    let adjacent = memberships
        .iter()
        .filter_map(|m| topo.vertices().index_of(m))
        .any(|g| topo.has_edge(g, t) || topo.has_edge(t, g));
    Ok(if adjacent {
        Referral::Allow
    } else {
        Referral::Deny { reason: format!("no membership in or next to {target}") }
    })
}

pub fn referral_check(poster: &str, target: &str, topo: &Digraph, assignment: &GroupAssignment) -> Result<Referral> {
    let memberships: BTreeSet<String> =
        assignment.group_of(poster).map(|m| group_name(&assignment.interests, m)).into_iter().collect();
    referral_allowed(&memberships, target, topo)
}
