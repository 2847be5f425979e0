//! Policies, weak orders and weak-order counting.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{LabeledMatrix, Rational};

/// Default cap on the number of policies [`enumerate_weak_orders`] accepts.
pub const DEFAULT_ENUMERATION_CAP: usize = 7;

/// An ordered set of distinct policy labels.
///
/// Cloning is cheap; the labels are shared.
#[derive(Clone)]
pub struct PolicySet {
    labels: Arc<Vec<String>>,
    index: Arc<HashMap<String, usize>>,
}

impl PolicySet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyPolicySet);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(PolicySet {
            labels: Arc::new(labels),
            index: Arc::new(index),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }

    /// A new set holding only the labels in `keep`, in this set's order.
    pub fn restrict(&self, keep: &[&str]) -> Result<PolicySet> {
        for k in keep {
            self.require(k)?;
        }
        PolicySet::new(self.iter().filter(|l| keep.contains(l)).map(str::to_string))
    }
}

impl PartialEq for PolicySet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for PolicySet {}

impl fmt::Debug for PolicySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// A weak order: a ranked partition of a [`PolicySet`], best group first.
#[derive(Clone, PartialEq, Eq)]
pub struct PreferenceOrder {
    policies: PolicySet,
    groups: Vec<Vec<usize>>,
    rank: Vec<usize>,
    completed: bool,
}

impl PreferenceOrder {
    /// Build from groups of policy indices. Indices within a group are kept
    /// sorted so that equal orders compare equal.
    pub fn from_indices(policies: &PolicySet, groups: Vec<Vec<usize>>) -> Result<Self> {
        let n = policies.len();
        let mut rank = vec![usize::MAX; n];
        let mut groups = groups;
        for (g, group) in groups.iter_mut().enumerate() {
            if group.is_empty() {
                return Err(Error::EmptyGroup);
            }
            group.sort_unstable();
            for &p in group.iter() {
                if p >= n {
                    return Err(Error::UnknownLabel(format!("#{p}")));
                }
                if rank[p] != usize::MAX {
                    return Err(Error::DuplicateLabel(policies.label(p).to_string()));
                }
                rank[p] = g;
            }
        }
        if let Some(missing) = rank.iter().position(|&r| r == usize::MAX) {
            return Err(Error::MissingLabel(policies.label(missing).to_string()));
        }
        Ok(PreferenceOrder {
            policies: policies.clone(),
            groups,
            rank,
            completed: false,
        })
    }

    /// Like [`make_order`], but unranked policies are appended as one bottom
    /// tie-group instead of being an error. The result records whether that
    /// completion happened.
    pub fn completed_from<S: AsRef<str>>(policies: &PolicySet, groups: &[Vec<S>]) -> Result<Self> {
        let mut idx = label_groups_to_indices(policies, groups)?;
        let mut seen = vec![false; policies.len()];
        for &p in idx.iter().flatten() {
            if seen[p] {
                return Err(Error::DuplicateLabel(policies.label(p).to_string()));
            }
            seen[p] = true;
        }
        let rest: Vec<usize> = (0..policies.len()).filter(|&p| !seen[p]).collect();
        let completed = !rest.is_empty();
        if completed {
            idx.push(rest);
        }
        let mut order = Self::from_indices(policies, idx)?;
        order.completed = completed;
        Ok(order)
    }

    pub fn policies(&self) -> &PolicySet {
        &self.policies
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_labels(&self) -> Vec<Vec<String>> {
        self.groups
            .iter()
            .map(|g| g.iter().map(|&p| self.policies.label(p).to_string()).collect())
            .collect()
    }

    /// Index of the tie-group holding policy `p` (0 = best).
    pub fn group_of(&self, p: usize) -> usize {
        self.rank[p]
    }

    pub fn is_strong(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    /// True when the bottom group was added to complete a partial ballot.
    pub fn was_completed(&self) -> bool {
        self.completed
    }

    pub(crate) fn mark_completed(&mut self, completed: bool) {
        self.completed |= completed;
    }

    /// `Greater` when `a` is strictly preferred to `b`.
    pub fn compare(&self, a: usize, b: usize) -> Ordering {
        self.rank[b].cmp(&self.rank[a])
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }

    pub fn indifferent(&self, a: usize, b: usize) -> bool {
        self.rank[a] == self.rank[b]
    }

    /// Number of policies placed strictly above `p`.
    pub fn policies_above(&self, p: usize) -> usize {
        self.groups[..self.rank[p]].iter().map(Vec::len).sum()
    }
}

impl fmt::Display for PreferenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&p| self.policies.label(p))
                    .collect::<Vec<_>>()
                    .join("=")
            })
            .collect();
        f.write_str(&parts.join(">"))
    }
}

impl fmt::Debug for PreferenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PreferenceOrder({self})")
    }
}

impl Serialize for PreferenceOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.group_labels().serialize(s)
    }
}

fn label_groups_to_indices<S: AsRef<str>>(
    policies: &PolicySet,
    groups: &[Vec<S>],
) -> Result<Vec<Vec<usize>>> {
    groups
        .iter()
        .map(|g| {
            if g.is_empty() {
                return Err(Error::EmptyGroup);
            }
            g.iter().map(|l| policies.require(l.as_ref())).collect()
        })
        .collect()
}

/// Validate `groups` (best first) as a weak order covering `policies` exactly.
pub fn make_order<S: AsRef<str>>(policies: &PolicySet, groups: &[Vec<S>]) -> Result<PreferenceOrder> {
    let idx = label_groups_to_indices(policies, groups)?;
    PreferenceOrder::from_indices(policies, idx)
}

/// Parse shorthand such as `"a=b>c"`. Labels are taken from the string in
/// order of appearance when `policies` is `None`.
pub fn parse_order(text: &str, policies: Option<&PolicySet>) -> Result<PreferenceOrder> {
    let groups: Vec<Vec<&str>> = text
        .split('>')
        .map(|g| g.split('=').map(str::trim).collect())
        .collect();
    let owned;
    let ps = match policies {
        Some(p) => p,
        None => {
            owned = PolicySet::new(groups.iter().flatten().map(|s| s.to_string()))?;
            &owned
        }
    };
    make_order(ps, &groups)
}

/// Reflexive preference matrix: `M[i][j] = 1` iff `i` is ranked at least as
/// high as `j`. Ties therefore contribute entries in both directions.
pub fn preference_matrix(order: &PreferenceOrder) -> LabeledMatrix<Rational> {
    LabeledMatrix::from_fn(order.policies.clone(), |i, j| {
        if order.rank[i] <= order.rank[j] {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// How a voter's transition matrix moves probability between policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransitionRule {
    /// Move uniformly into the tie-group immediately above; the top group
    /// maps uniformly onto itself.
    #[default]
    ClimbOneRung,
    /// Move uniformly into the top group from anywhere.
    JumpToTop,
}

/// Row-stochastic transition matrix of one voter's order.
pub fn transition_matrix(order: &PreferenceOrder, rule: TransitionRule) -> LabeledMatrix<Rational> {
    let target_group = |p: usize| -> usize {
        match rule {
            TransitionRule::ClimbOneRung => order.rank[p].saturating_sub(1),
            TransitionRule::JumpToTop => 0,
        }
    };
    LabeledMatrix::from_fn(order.policies.clone(), |i, j| {
        let g = target_group(i);
        if order.rank[j] == g {
            Rational::new(1.into(), order.groups[g].len().into())
        } else {
            Rational::zero()
        }
    })
}

/// Number of distinct weak orders of `n` policies (ordered Bell number).
///
/// Sums, over the integer partitions of `n`, the number of ways of placing
/// policies into blocks of those sizes times the number of distinct
/// arrangements of the blocks.
pub fn count_weak_orders(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::ZeroPolicies);
    }
    let fact: Vec<BigUint> = std::iter::once(BigUint::one())
        .chain((1..=n).scan(BigUint::one(), |acc, k| {
            *acc *= k;
            Some(acc.clone())
        }))
        .collect();
    let mut total = BigUint::zero();
    for parts in integer_partitions(n) {
        // ways to allocate the policies into labelled blocks of these sizes
        let mut allocations = fact[n].clone();
        for &p in &parts {
            allocations /= &fact[p];
        }
        // distinct orderings of the blocks, parts of equal size being alike
        let mut arrangements = fact[parts.len()].clone();
        let mut i = 0;
        while i < parts.len() {
            let run = parts[i..].iter().take_while(|&&p| p == parts[i]).count();
            arrangements /= &fact[run];
            i += run;
        }
        total += allocations * arrangements;
    }
    Ok(total)
}

/// Integer partitions of `n` as non-increasing part lists.
fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Stream over every weak order of `policies`, each exactly once.
///
/// Orders are produced by running an odometer over rank assignments and
/// keeping the surjective ones, so the sequence is deterministic.
pub fn enumerate_weak_orders(policies: &PolicySet, cap: usize) -> Result<WeakOrders> {
    if policies.len() > cap {
        return Err(Error::CapExceeded {
            requested: policies.len(),
            cap,
        });
    }
    Ok(WeakOrders {
        policies: policies.clone(),
        ranks: Some(vec![0; policies.len()]),
    })
}

pub struct WeakOrders {
    policies: PolicySet,
    ranks: Option<Vec<usize>>,
}

impl WeakOrders {
    fn advance(ranks: &mut [usize]) -> bool {
        let n = ranks.len();
        for r in ranks.iter_mut().rev() {
            *r += 1;
            if *r < n {
                return true;
            }
            *r = 0;
        }
        false
    }
}

impl Iterator for WeakOrders {
    type Item = PreferenceOrder;

    fn next(&mut self) -> Option<PreferenceOrder> {
        let n = self.policies.len();
        loop {
            let ranks = self.ranks.as_mut()?;
            let current = ranks.clone();
            if !Self::advance(ranks) {
                self.ranks = None;
            }
            let levels = current.iter().max().map_or(0, |m| m + 1);
            let mut groups = vec![Vec::new(); levels];
            for (p, &r) in current.iter().enumerate() {
                groups[r].push(p);
            }
            if groups.iter().all(|g| !g.is_empty()) {
                debug_assert!(levels <= n);
                return Some(
                    PreferenceOrder::from_indices(&self.policies, groups)
                        .expect("surjective rank assignment is a weak order"),
                );
            }
        }
    }
}
