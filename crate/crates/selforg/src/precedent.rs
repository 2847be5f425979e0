//! Access rules inferred from the history of role grants.
//!
//! Roles held by exactly the same accessors are merged. When every holder of
//! one role also holds another, the first role implies the second and the
//! wider role ranks above the narrower.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// One resolved grant: `accessor` was given `role` by `custodians`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grant {
    pub accessor: String,
    pub role: String,
    #[serde(default)]
    pub custodians: Vec<String>,
}

impl Grant {
    pub fn new(accessor: &str, role: &str) -> Self {
        Grant { accessor: accessor.into(), role: role.into(), custodians: Vec::new() }
    }
}

/// Roles with one shared member set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoleClass {
    pub roles: Vec<String>,
    pub members: BTreeSet<String>,
}

/// `antecedent(x) ⇒ consequent(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrecedentRule {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    /// Indices into the grant log of the grants behind both roles.
    pub provenance: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PrecedentReport {
    pub classes: Vec<RoleClass>,
    pub rules: Vec<PrecedentRule>,
    /// `(higher, lower)` pairs of classes, by their role lists.
    pub order: Vec<(Vec<String>, Vec<String>)>,
    /// Classes holding more than one role.
    pub merges: Vec<Vec<String>>,
}

impl PrecedentReport {
    pub fn class_of(&self, role: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.roles.iter().any(|r| r == role))
    }

    pub fn ranks_above(&self, high: &str, low: &str) -> bool {
        self.order.iter().any(|(h, l)| h.iter().any(|r| r == high) && l.iter().any(|r| r == low))
    }
}

pub fn derive_precedents(grants: &[Grant]) -> PrecedentReport {
    // roles in order of first grant
    let mut roles: Vec<(String, BTreeSet<String>, Vec<usize>)> = Vec::new();
    for (i, g) in grants.iter().enumerate() {
        match roles.iter_mut().find(|(r, _, _)| *r == g.role) {
            Some((_, m, idx)) => {
                m.insert(g.accessor.clone());
                idx.push(i);
            }
            None => roles.push((g.role.clone(), [g.accessor.clone()].into(), vec![i])),
        }
    }
    let mut classes: Vec<(RoleClass, Vec<usize>)> = Vec::new();
    for (role, members, idx) in roles {
        match classes.iter_mut().find(|(c, _)| c.members == members) {
            Some((c, p)) => {
                c.roles.push(role);
                p.extend(idx);
            }
            None => classes.push((RoleClass { roles: vec![role], members }, idx)),
        }
    }
    let mut rules = Vec::new();
    let mut order = Vec::new();
    for (a, pa) in &classes {
        for (b, pb) in &classes {
            if a.members != b.members && a.members.is_subset(&b.members) {
                let mut provenance: Vec<usize> = pa.iter().chain(pb).copied().collect();
                provenance.sort_unstable();
                rules.push(PrecedentRule { antecedent: a.roles.clone(), consequent: b.roles.clone(), provenance });
                order.push((b.roles.clone(), a.roles.clone()));
            }
        }
    }
    let merges = classes.iter().filter(|(c, _)| c.roles.len() > 1).map(|(c, _)| c.roles.clone()).collect();
    PrecedentReport { classes: classes.into_iter().map(|(c, _)| c).collect(), rules, order, merges }
}

pub fn parse_grants_json(text: &str) -> crate::Result<Vec<Grant>> {
    Ok(serde_json::from_str(text)?)
}
