//! Ordering groups from subscribers' posting activity.

use std::collections::BTreeMap;

use preflattice_core::mlorder::{max_likelihood_order, tally, CandidateMode, Outcome};
use preflattice_core::{PolicySet, PreferenceOrder};

use crate::error::{Result, SelforgError};

/// Per subscriber, posts per group.
pub type VisitTallies = BTreeMap<String, BTreeMap<String, u64>>;

/// Each subscriber compares every pair of groups they posted to: more posts
/// wins, equal counts tie. The comparisons go through the maximum-likelihood
/// procedure. Without any cross-posting all groups are tied.
pub fn group_order(tallies: &VisitTallies, groups: &[String], mode: CandidateMode, cap: usize) -> Result<PreferenceOrder> {
    let ps = PolicySet::new(groups.iter().cloned())?;
    let mut comparisons: Vec<(String, String, Outcome)> = Vec::new();
    for visits in tallies.values() {
        for g in visits.keys() {
            if ps.index_of(g).is_none() {
                return Err(SelforgError::UnknownGroup(g.clone()));
            }
        }
        let seen: Vec<(&String, u64)> = visits.iter().filter(|(_, &c)| c > 0).map(|(g, &c)| (g, c)).collect();
        for (i, (u, cu)) in seen.iter().enumerate() {
            for (v, cv) in &seen[i + 1..] {
                let outcome = match cu.cmp(cv) {
                    std::cmp::Ordering::Greater => Outcome::FirstWins,
                    std::cmp::Ordering::Less => Outcome::SecondWins,
                    std::cmp::Ordering::Equal => Outcome::Tie,
                };
                comparisons.push(((*u).clone(), (*v).clone(), outcome));
            }
        }
    }
    if comparisons.is_empty() {
        return Ok(PreferenceOrder::from_indices(&ps, vec![(0..ps.len()).collect()])?);
    }
    let t = tally(&ps, &comparisons)?;
    let ranked = max_likelihood_order(&t, None, mode, cap)?;
    Ok(ranked.into_iter().next().expect("at least one candidate").0)
}
