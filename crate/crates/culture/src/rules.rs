//! One selection attempt under each behaviour.
//!
//! The peer rule's nested possibility is read inside the selected agent's own
//! neighbourhood: the seconder must be another neighbour of `x`.

use rand::Rng;
use serde::Serialize;

use crate::config::{Behavior, CultureConfig};
use crate::field::Field;
use crate::topology::Topology;

/// Coefficients of the interaction test `k·d + ε < draw`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Criterion {
    pub k: f64,
    pub epsilon: f64,
}

impl Criterion {
    pub fn from_config(cfg: &CultureConfig) -> Self {
        Criterion { k: cfg.k(), epsilon: cfg.epsilon }
    }

    /// Whether agents at similarity `s` out of `n` features may interact.
    pub fn passes(&self, s: usize, n: usize, draw: f64) -> bool {
        s >= 1 && s < n && self.k * (n - s) as f64 + self.epsilon < draw
    }

    /// True if some draw in `[0, 1)` lets the pair interact.
    pub fn possible(&self, s: usize, n: usize) -> bool {
        s >= 1 && s < n && self.k * (n - s) as f64 + self.epsilon < 1.0
    }
}

/// The pair must share a trait, differ somewhere, and clear `k·d + ε < draw`.
/// Agents of unequal length never interact.
pub fn interaction_allowed(x: &[u32], y: &[u32], cfg: &CultureConfig, draw: f64) -> bool {
    match crate::field::similarity(x, y) {
        Ok(s) => Criterion::from_config(cfg).passes(s, x.len(), draw),
        Err(_) => false,
    }
}

/// `x` took `new` (previously `old`) on `feature` from `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccretionEvent {
    pub x: usize,
    pub z: usize,
    pub feature: usize,
    pub old: u32,
    pub new: u32,
    /// The neighbour that seconded the change, under peer behaviour.
    pub seconder: Option<usize>,
}

/// Which clause qualified a seconder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondingClause {
    /// Holds the candidate trait but differs from `z` on a feature `x` and `z` share.
    HoldsCandidate,
    /// Lacks the candidate trait but shares some trait with `z`.
    CompatibleWithDonor,
}

/// Tests whether `y` can second `x` copying `feature` from `z`.
pub fn seconding_clause(field: &Field, x: usize, z: usize, y: usize, feature: usize) -> Option<SecondingClause> {
    if y == z || y == x {
        return None;
    }
    let (ax, ay, az) = (field.agent(x), field.agent(y), field.agent(z));
    let candidate = az[feature];
    if ay[feature] == candidate {
        let differs_on_shared = (0..field.n()).any(|g| ax[g] == az[g] && ay[g] != az[g]);
        differs_on_shared.then_some(SecondingClause::HoldsCandidate)
    } else {
        let shares = (0..field.n()).any(|g| ay[g] == az[g]);
        shares.then_some(SecondingClause::CompatibleWithDonor)
    }
}

/// First neighbour of `x`, in neighbour-list order, that seconds the change.
pub fn find_seconder(field: &Field, topo: &Topology, x: usize, z: usize, feature: usize) -> Option<usize> {
    topo.neighbors(x).iter().copied().find(|&y| seconding_clause(field, x, z, y, feature).is_some())
}

/// The draws shared by both behaviours: agent, neighbour, criterion draw and,
/// when the criterion passes, the feature to copy.
fn propose<R: Rng + ?Sized>(field: &Field, topo: &Topology, crit: &Criterion, rng: &mut R) -> Option<(usize, usize, usize)> {
    if field.is_empty() {
        return None;
    }
    let x = rng.random_range(0..field.len());
    let ns = topo.neighbors(x);
    if ns.is_empty() {
        return None;
    }
    let z = ns[rng.random_range(0..ns.len())];
    let draw: f64 = rng.random();
    if !crit.passes(field.sim(x, z), field.n(), draw) {
        return None;
    }
    let (ax, az) = (field.agent(x), field.agent(z));
    let differing: Vec<usize> = (0..field.n()).filter(|&f| ax[f] != az[f]).collect();
    let feature = differing[rng.random_range(0..differing.len())];
    Some((x, z, feature))
}

fn apply(field: &mut Field, x: usize, z: usize, feature: usize, seconder: Option<usize>) -> AccretionEvent {
    let old = field.agent(x)[feature];
    let new = field.agent(z)[feature];
    field.set(x, feature, new);
    AccretionEvent { x, z, feature, old, new, seconder }
}

pub fn step_egoistic<R: Rng + ?Sized>(field: &mut Field, topo: &Topology, crit: &Criterion, rng: &mut R) -> Option<AccretionEvent> {
    let (x, z, feature) = propose(field, topo, crit, rng)?;
    Some(apply(field, x, z, feature, None))
}

pub fn step_peer_possible<R: Rng + ?Sized>(
    field: &mut Field,
    topo: &Topology,
    crit: &Criterion,
    rng: &mut R,
) -> Option<AccretionEvent> {
    let (x, z, feature) = propose(field, topo, crit, rng)?;
    let y = find_seconder(field, topo, x, z, feature)?;
    Some(apply(field, x, z, feature, Some(y)))
}

pub fn step<R: Rng + ?Sized>(
    behavior: Behavior,
    field: &mut Field,
    topo: &Topology,
    crit: &Criterion,
    rng: &mut R,
) -> Option<AccretionEvent> {
    match behavior {
        Behavior::Egoistic => step_egoistic(field, topo, crit, rng),
        Behavior::PeerPossible => step_peer_possible(field, topo, crit, rng),
    }
}

/// Whether `x` could ever accrete from its neighbour `z`.
pub fn pair_can_interact(behavior: Behavior, field: &Field, topo: &Topology, crit: &Criterion, x: usize, z: usize) -> bool {
    if !crit.possible(field.sim(x, z), field.n()) {
        return false;
    }
    match behavior {
        Behavior::Egoistic => true,
        Behavior::PeerPossible => (0..field.n())
            .filter(|&f| field.agent(x)[f] != field.agent(z)[f])
            .any(|f| find_seconder(field, topo, x, z, f).is_some()),
    }
}

/// No selection can change the field any more.
pub fn is_absorbing(behavior: Behavior, field: &Field, topo: &Topology, crit: &Criterion) -> bool {
    (0..field.len()).all(|x| topo.neighbors(x).iter().all(|&z| !pair_can_interact(behavior, field, topo, crit, x, z)))
}
