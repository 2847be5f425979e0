//! Aggregation of individual preference graphs: for/against weights,
//! unanimities, cycles, condensation, Borda scores and position counts.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bigraph, Digraph};
use crate::matrix::{LabeledMatrix, Rational};
use crate::order::PolicySet;
use crate::profile::Profile;

/// Per-voter P-graph (strict preferences, already transitive) and I-graph
/// (indifference pairs) bundled as a bigraph.
pub fn build_pi_graphs(profile: &Profile) -> Vec<(String, Bigraph)> {
    let n = profile.policies().len();
    profile
        .voters()
        .iter()
        .map(|(id, o)| {
            let d = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| o.prefers(u, v));
            let c = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| o.indifferent(u, v));
            let b = Bigraph::new(profile.policies().clone(), d, c).expect("orders yield valid bigraphs");
            (id.clone(), b)
        })
        .collect()
}

/// Unordered pairs `(u, v)`, `u < v`, that every voter ranks as tied.
pub fn common_indifferences(profile: &Profile) -> BTreeSet<(usize, usize)> {
    let n = profile.policies().len();
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| profile.orders().all(|o| o.indifferent(u, v)))
        .collect()
}

/// Equivalence classes of the common indifference relation, singletons
/// included, ordered by smallest member.
pub fn indifference_classes(profile: &Profile) -> Vec<Vec<usize>> {
    let n = profile.policies().len();
    let common = common_indifferences(profile);
    let mut class_of: Vec<usize> = (0..n).collect();
    for &(u, v) in &common {
        let (a, b) = (class_of[u], class_of[v]);
        for c in class_of.iter_mut() {
            if *c == b {
                *c = a;
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (p, &c) in class_of.iter().enumerate() {
        classes.entry(c).or_default().push(p);
    }
    classes.into_values().collect()
}

/// `q[u][v]` counts voters who strictly prefer `u` to `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateReach {
    pub q: LabeledMatrix<u64>,
    pub voters: u64,
}

impl AggregateReach {
    pub fn policies(&self) -> &PolicySet {
        self.q.labels()
    }

    pub fn q(&self, u: usize, v: usize) -> u64 {
        *self.q.get(u, v)
    }

    pub fn is_unanimous(&self, u: usize, v: usize) -> bool {
        self.q(u, v) >= 1 && self.q(v, u) == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum UnanimityClass {
    Simple,
    CompoundSimple,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Unanimity {
    pub from: String,
    pub to: String,
    pub class: UnanimityClass,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Weight {
    pub from: String,
    pub to: String,
    #[serde(rename = "for")]
    pub for_weight: u64,
    pub against: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnanimityReport {
    pub unanimities: Vec<Unanimity>,
    pub sources: Vec<String>,
    pub sinks: Vec<String>,
    pub weights: Vec<Weight>,
    /// Classes of policies every voter ranks as tied.
    pub common_indifferences: Vec<Vec<String>>,
}

impl UnanimityReport {
    pub fn unanimity_pairs(&self) -> BTreeSet<(String, String)> {
        self.unanimities
            .iter()
            .map(|u| (u.from.clone(), u.to.clone()))
            .collect()
    }
}

/// Sum the voters' reach matrices and read off unanimities, sources and
/// sinks. Commonly indifferent policies are reported as merged classes;
/// they never carry weight against each other.
pub fn aggregate_reach(profile: &Profile) -> (AggregateReach, UnanimityReport) {
    let ps = profile.policies();
    let n = ps.len();
    let q = LabeledMatrix::from_fn(ps.clone(), |u, v| {
        profile.orders().filter(|o| o.prefers(u, v)).count() as u64
    });
    let agg = AggregateReach {
        q,
        voters: profile.voter_count() as u64,
    };
    let names = |s: &[usize]| s.iter().map(|&i| ps.label(i).to_string()).collect::<Vec<_>>();

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && agg.is_unanimous(u, v))
        .collect();
    let classes = classify_unanimities(n, &pairs);
    let unanimities = pairs
        .iter()
        .map(|&(u, v)| Unanimity {
            from: ps.label(u).into(),
            to: ps.label(v).into(),
            class: classes[&(u, v)],
        })
        .collect();
    let sources: Vec<usize> = (0..n).filter(|&u| (0..n).all(|v| agg.q(v, u) == 0)).collect();
    let sinks: Vec<usize> = (0..n).filter(|&u| (0..n).all(|v| agg.q(u, v) == 0)).collect();
    let weights = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .map(|(u, v)| Weight {
            from: ps.label(u).into(),
            to: ps.label(v).into(),
            for_weight: agg.q(u, v),
            against: agg.q(v, u),
        })
        .collect();
    let report = UnanimityReport {
        unanimities,
        sources: names(&sources),
        sinks: names(&sinks),
        weights,
        common_indifferences: indifference_classes(profile)
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| names(c))
            .collect(),
    };
    (agg, report)
}

/// Weakly connected components of an edge list over `0..n`, restricted to
/// vertices that touch an edge.
fn weak_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut comp: Vec<usize> = (0..n).collect();
    for &(u, v) in edges {
        let (a, b) = (comp[u], comp[v]);
        if a != b {
            for c in comp.iter_mut() {
                if *c == b {
                    *c = a;
                }
            }
        }
    }
    let touched: BTreeSet<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in touched {
        groups.entry(comp[v]).or_default().push(v);
    }
    groups.into_values().collect()
}

/// A component is simple when it is a single pair, compound-simple when its
/// unanimities totally order three or more policies, complex otherwise.
fn classify_component(members: &[usize], edges: &BTreeSet<(usize, usize)>) -> UnanimityClass {
    if members.len() == 2 {
        return UnanimityClass::Simple;
    }
    let total = members.iter().enumerate().all(|(i, &u)| {
        members[i + 1..]
            .iter()
            .all(|&v| edges.contains(&(u, v)) || edges.contains(&(v, u)))
    });
    if total {
        UnanimityClass::CompoundSimple
    } else {
        UnanimityClass::Complex
    }
}

fn classify_unanimities(n: usize, pairs: &[(usize, usize)]) -> BTreeMap<(usize, usize), UnanimityClass> {
    let set: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    let mut out = BTreeMap::new();
    for comp in weak_components(n, pairs) {
        let class = classify_component(&comp, &set);
        for &(u, v) in pairs {
            if comp.contains(&u) {
                out.insert((u, v), class);
            }
        }
    }
    out
}

/// Which aggregate pairs count as a collective preference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MajorityRule {
    /// More than half of all voters prefer `u` to `v`.
    #[default]
    StrictMajority,
    /// More voters prefer `u` to `v` than the reverse.
    Pairwise,
    /// At least this many voters prefer `u` to `v`.
    AtLeast(u64),
}

impl MajorityRule {
    pub fn holds(self, for_weight: u64, against: u64, voters: u64) -> bool {
        match self {
            MajorityRule::StrictMajority => 2 * for_weight > voters,
            MajorityRule::Pairwise => for_weight > against,
            MajorityRule::AtLeast(k) => for_weight >= k.max(1),
        }
    }
}

pub fn majority_digraph(agg: &AggregateReach, rule: MajorityRule) -> Digraph {
    let n = agg.policies().len();
    let edges = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && rule.holds(agg.q(u, v), agg.q(v, u), agg.voters));
    Digraph::new(agg.policies().clone(), edges).expect("indices in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleKind {
    /// The cycle spans every policy.
    Complete,
    /// One outside policy dominates every member.
    Dominated,
    /// Every member dominates one common outside policy.
    Dominating,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cycle {
    pub members: Vec<String>,
    pub kind: CycleKind,
    /// The common dominator or dominee, when there is one.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Default)]
pub struct CycleReport {
    pub cycles: Vec<Cycle>,
}

/// Tag a set of (super-)vertices given an aggregate dominance test.
fn tag_cycle(
    members: &[usize],
    total: usize,
    dominates: impl Fn(usize, usize) -> bool,
) -> (CycleKind, Option<usize>) {
    if members.len() == total {
        return (CycleKind::Complete, None);
    }
    let outside: Vec<usize> = (0..total).filter(|v| !members.contains(v)).collect();
    if let Some(&w) = outside.iter().find(|&&w| members.iter().all(|&x| dominates(w, x))) {
        return (CycleKind::Dominated, Some(w));
    }
    if let Some(&w) = outside.iter().find(|&&w| members.iter().all(|&x| dominates(x, w))) {
        return (CycleKind::Dominating, Some(w));
    }
    (CycleKind::Plain, None)
}

/// Report the strongly connected components (size ≥ 2) of the majority
/// digraph. Domination means a larger for-weight than against-weight.
pub fn classify_cycles(agg: &AggregateReach, rule: MajorityRule) -> CycleReport {
    let g = majority_digraph(agg, rule);
    let n = agg.policies().len();
    let cycles = g
        .strongly_connected_components()
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|c| {
            let (kind, w) = tag_cycle(&c, n, |a, b| agg.q(a, b) > agg.q(b, a));
            Cycle {
                members: c.iter().map(|&i| agg.policies().label(i).to_string()).collect(),
                kind,
                witness: w.map(|i| agg.policies().label(i).to_string()),
            }
        })
        .collect();
    CycleReport { cycles }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeRule {
    CommonIndifference,
    SimpleUnanimity,
    CompoundSimpleUnanimity,
    DominatedCycle,
    DominatingCycle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperVertex {
    pub members: Vec<String>,
    /// The last rule that grew this super-vertex; `None` for untouched policies.
    pub rule: Option<MergeRule>,
    #[serde(skip)]
    indices: Vec<usize>,
    #[serde(skip)]
    from_cycle: bool,
}

impl SuperVertex {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CondensedGraph {
    pub super_vertices: Vec<SuperVertex>,
    /// Majority edges between super-vertices, by super-vertex index.
    pub edges: Vec<(usize, usize)>,
    /// Super-vertex index of every original policy, in policy order.
    pub mapping: Vec<usize>,
    /// Unanimity components left unmerged because they touch a condensed
    /// cycle or lie inside a complete cycle.
    pub overlaps: Vec<Vec<String>>,
    /// Cycles that could not be condensed.
    pub residual_cycles: Vec<Cycle>,
}

struct Quotient<'a> {
    agg: &'a AggregateReach,
    rule: MajorityRule,
    supers: &'a [SuperVertex],
}

impl Quotient<'_> {
    fn weight(&self, s: usize, t: usize) -> u64 {
        let mut w = 0;
        for &u in &self.supers[s].indices {
            for &v in &self.supers[t].indices {
                w += self.agg.q(u, v);
            }
        }
        w
    }

    fn dominates(&self, s: usize, t: usize) -> bool {
        self.weight(s, t) > self.weight(t, s)
    }

    fn unanimous(&self, s: usize, t: usize) -> bool {
        self.weight(s, t) >= 1 && self.weight(t, s) == 0
    }

    fn majority_edges(&self) -> Vec<(usize, usize)> {
        let k = self.supers.len();
        let mut out = Vec::new();
        for s in 0..k {
            for t in 0..k {
                if s == t {
                    continue;
                }
                let any = self.supers[s].indices.iter().any(|&u| {
                    self.supers[t]
                        .indices
                        .iter()
                        .any(|&v| self.rule.holds(self.agg.q(u, v), self.agg.q(v, u), self.agg.voters))
                });
                if any {
                    out.push((s, t));
                }
            }
        }
        out
    }

    fn majority_sccs(&self) -> Vec<Vec<usize>> {
        let labels = PolicySet::new((0..self.supers.len()).map(|i| i.to_string())).expect("distinct");
        Digraph::new(labels, self.majority_edges())
            .expect("in range")
            .strongly_connected_components()
            .into_iter()
            .filter(|c| c.len() >= 2)
            .collect()
    }
}

fn merge(supers: Vec<SuperVertex>, groups: &[(Vec<usize>, MergeRule, bool)]) -> Vec<SuperVertex> {
    let mut absorbed = vec![false; supers.len()];
    let mut out = Vec::new();
    for (g, rule, cyc) in groups {
        let mut indices: Vec<usize> = g.iter().flat_map(|&s| supers[s].indices.clone()).collect();
        indices.sort_unstable();
        for &s in g {
            absorbed[s] = true;
        }
        let from_cycle = *cyc || g.iter().any(|&s| supers[s].from_cycle);
        out.push(SuperVertex {
            members: Vec::new(),
            rule: Some(*rule),
            indices,
            from_cycle,
        });
    }
    for (s, sv) in supers.into_iter().enumerate() {
        if !absorbed[s] {
            out.push(sv);
        }
    }
    out.sort_by_key(|s| s.indices[0]);
    out
}

/// Repeatedly merge common indifferences, dominated and dominating cycles,
/// and simple or compound-simple unanimities into super-vertices until no
/// rule applies. Cycle rules run first in every round; a unanimity component
/// touching a condensed cycle is reported rather than merged.
pub fn condense(agg: &AggregateReach, profile_indifference: &[Vec<usize>], rule: MajorityRule) -> CondensedGraph {
    let ps = agg.policies().clone();
    let n = ps.len();
    let mut supers: Vec<SuperVertex> = Vec::new();
    let mut covered = vec![false; n];
    for class in profile_indifference.iter().filter(|c| c.len() > 1) {
        for &p in class {
            covered[p] = true;
        }
        supers.push(SuperVertex {
            members: Vec::new(),
            rule: Some(MergeRule::CommonIndifference),
            indices: class.clone(),
            from_cycle: false,
        });
    }
    for p in (0..n).filter(|&p| !covered[p]) {
        supers.push(SuperVertex {
            members: Vec::new(),
            rule: None,
            indices: vec![p],
            from_cycle: false,
        });
    }
    supers.sort_by_key(|s| s.indices[0]);

    let mut overlaps: BTreeSet<Vec<usize>> = BTreeSet::new();
    loop {
        let quotient = Quotient { agg, rule, supers: &supers };
        let k = supers.len();
        let sccs = quotient.majority_sccs();
        let complete = sccs.iter().any(|c| c.len() == k);
        let cycle_groups: Vec<(Vec<usize>, MergeRule, bool)> = sccs
            .iter()
            .filter_map(|c| match tag_cycle(c, k, |a, b| quotient.dominates(a, b)).0 {
                CycleKind::Dominated => Some((c.clone(), MergeRule::DominatedCycle, true)),
                CycleKind::Dominating => Some((c.clone(), MergeRule::DominatingCycle, true)),
                _ => None,
            })
            .collect();
        if !cycle_groups.is_empty() {
            supers = merge(supers, &cycle_groups);
            continue;
        }

        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|s| (0..k).map(move |t| (s, t)))
            .filter(|&(s, t)| s != t && quotient.unanimous(s, t))
            .collect();
        let set: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
        let mut groups = Vec::new();
        for comp in weak_components(k, &pairs) {
            let class = classify_component(&comp, &set);
            let merge_rule = match class {
                UnanimityClass::Simple => MergeRule::SimpleUnanimity,
                UnanimityClass::CompoundSimple => MergeRule::CompoundSimpleUnanimity,
                UnanimityClass::Complex => continue,
            };
            if complete || comp.iter().any(|&s| supers[s].from_cycle) {
                let mut orig: Vec<usize> = comp.iter().flat_map(|&s| supers[s].indices.clone()).collect();
                orig.sort_unstable();
                overlaps.insert(orig);
                continue;
            }
            groups.push((comp, merge_rule, false));
        }
        if groups.is_empty() {
            break;
        }
        supers = merge(supers, &groups);
    }

    let quotient = Quotient { agg, rule, supers: &supers };
    let k = supers.len();
    let residual_cycles = quotient
        .majority_sccs()
        .into_iter()
        .map(|c| {
            let (kind, w) = tag_cycle(&c, k, |a, b| quotient.dominates(a, b));
            let mut members: Vec<String> = c
                .iter()
                .flat_map(|&s| supers[s].indices.iter().map(|&i| ps.label(i).to_string()))
                .collect();
            members.sort_by_key(|m| ps.index_of(m));
            Cycle {
                members,
                kind,
                witness: w.map(|s| {
                    supers[s]
                        .indices
                        .iter()
                        .map(|&i| ps.label(i))
                        .collect::<Vec<_>>()
                        .join("+")
                }),
            }
        })
        .collect();
    let edges = quotient.majority_edges();
    let mut mapping = vec![0; n];
    for (s, sv) in supers.iter_mut().enumerate() {
        for &i in &sv.indices {
            mapping[i] = s;
        }
        sv.members = sv.indices.iter().map(|&i| ps.label(i).to_string()).collect();
    }
    CondensedGraph {
        super_vertices: supers,
        edges,
        mapping,
        overlaps: overlaps
            .into_iter()
            .map(|o| o.iter().map(|&i| ps.label(i).to_string()).collect())
            .collect(),
        residual_cycles,
    }
}

/// Convenience wrapper that takes the common indifferences from `profile`.
pub fn condense_profile(profile: &Profile, rule: MajorityRule) -> CondensedGraph {
    let (agg, _) = aggregate_reach(profile);
    condense(&agg, &indifference_classes(profile), rule)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BordaTies {
    /// Tied policies all receive the points of the group's best position.
    #[default]
    SharedRank,
    /// Tied policies receive the mean of the positions the group spans.
    Averaged,
}

/// Borda totals in policy order.
pub fn borda_scores(profile: &Profile, ties: BordaTies) -> Vec<(String, Rational)> {
    let ps = profile.policies();
    let m = ps.len() as i64;
    let mut totals = vec![Rational::zero(); ps.len()];
    for o in profile.orders() {
        for (p, total) in totals.iter_mut().enumerate() {
            let above = o.policies_above(p) as i64;
            let size = o.groups()[o.group_of(p)].len() as i64;
            *total += match ties {
                BordaTies::SharedRank => Rational::from_integer((m - above).into()),
                // positions m-above down to m-above-size+1
                BordaTies::Averaged => Rational::new((2 * (m - above) - size + 1).into(), 2.into()),
            };
        }
    }
    ps.iter().map(str::to_string).zip(totals).collect()
}

/// Raw first- or second-order position counts of strong orders.
/// Two policy indices, smaller first.
pub type PolicyPair = (usize, usize);
/// Two 0-based positions, smaller first.
pub type PositionPair = (usize, usize);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositionCounts {
    /// `first[p][k]`: voters placing policy `p` at position `k` (0 = top).
    pub first: Vec<Vec<u64>>,
    /// Keyed by an unordered policy pair and the unordered pair of
    /// positions they occupy.
    pub second: BTreeMap<(PolicyPair, PositionPair), u64>,
}

pub fn position_counts(profile: &Profile, depth: u8) -> Result<PositionCounts> {
    if !(1..=2).contains(&depth) {
        return Err(Error::Parse(format!("order depth must be 1 or 2, got {depth}")));
    }
    if let Some((id, _)) = profile.voters().iter().find(|(_, o)| !o.is_strong()) {
        return Err(Error::WeakOrderUnsupported(id.clone()));
    }
    let n = profile.policies().len();
    let mut first = vec![vec![0u64; n]; n];
    let mut second = BTreeMap::new();
    for o in profile.orders() {
        for p in 0..n {
            first[p][o.group_of(p)] += 1;
        }
        if depth == 2 {
            for a in 0..n {
                for b in a + 1..n {
                    let (pa, pb) = (o.group_of(a), o.group_of(b));
                    *second.entry(((a, b), (pa.min(pb), pa.max(pb)))).or_insert(0) += 1;
                }
            }
        }
    }
    Ok(PositionCounts { first, second })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ratio;

    fn borda4() -> Profile {
        Profile::from_shorthand(&["w", "x", "y", "z"], &["w>x>y>z", "w>x>y>z", "y>z>x>w"]).unwrap()
    }

    fn paradox() -> Profile {
        Profile::from_shorthand(&["x", "y", "z"], &["x>y>z", "y>z>x", "z>x>y"]).unwrap()
    }

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn pi_graph_examples() {
        let p = Profile::from_shorthand(&["x", "y", "z"], &["x>y>z"]).unwrap();
        let b = &build_pi_graphs(&p)[0].1;
        assert_eq!(b.directed(), &BTreeSet::from([(0, 1), (0, 2), (1, 2)]));
        assert!(b.undirected().is_empty());
        let w = Profile::from_shorthand(&["a", "b", "c"], &["a=b>c"]).unwrap();
        let b = &build_pi_graphs(&w)[0].1;
        assert_eq!(b.directed(), &BTreeSet::from([(0, 2), (1, 2)]));
        assert_eq!(b.undirected(), &BTreeSet::from([(0, 1)]));
        for (_, b) in build_pi_graphs(&paradox()) {
            assert_eq!(b.directed().len(), 3);
        }
    }

    #[test]
    fn common_indifference_examples() {
        let p = Profile::from_shorthand(&["a", "b", "c"], &["a=b>c", "c>a=b"]).unwrap();
        assert_eq!(common_indifferences(&p), BTreeSet::from([(0, 1)]));
        assert!(common_indifferences(&paradox()).is_empty());
        let p = Profile::from_shorthand(&["a", "b", "c"], &["a=b>c", "a=b=c"]).unwrap();
        assert_eq!(common_indifferences(&p), BTreeSet::from([(0, 1)]));
    }

    #[test]
    fn borda_unanimity_is_only_y_over_z() {
        let (_, r) = aggregate_reach(&borda4());
        assert_eq!(r.unanimity_pairs(), BTreeSet::from([pair("y", "z")]));
        assert_eq!(r.unanimities[0].class, UnanimityClass::Simple);
    }

    #[test]
    fn paradox_has_no_unanimity_source_or_sink() {
        let (_, r) = aggregate_reach(&paradox());
        assert!(r.unanimities.is_empty() && r.sources.is_empty() && r.sinks.is_empty());
    }

    #[test]
    fn identical_orders_are_all_unanimous() {
        let p = Profile::from_shorthand(&["a", "b", "c"], &["a>b>c", "a>b>c"]).unwrap();
        let (_, r) = aggregate_reach(&p);
        assert_eq!(r.unanimities.len(), 3);
        assert!(r.unanimities.iter().all(|u| u.class == UnanimityClass::CompoundSimple));
        assert_eq!(r.sources, vec!["a"]);
        assert_eq!(r.sinks, vec!["c"]);
    }

    #[test]
    fn complex_unanimity() {
        // u over v and w unanimously, v and w split
        let p = Profile::from_shorthand(&["u", "v", "w"], &["u>v>w", "u>w>v"]).unwrap();
        let (_, r) = aggregate_reach(&p);
        assert_eq!(r.unanimities.len(), 2);
        assert!(r.unanimities.iter().all(|u| u.class == UnanimityClass::Complex));
    }

    #[test]
    fn cycle_examples() {
        let (agg, _) = aggregate_reach(&paradox());
        let r = classify_cycles(&agg, MajorityRule::StrictMajority);
        assert_eq!(r.cycles.len(), 1);
        assert_eq!(r.cycles[0].kind, CycleKind::Complete);

        let dom = Profile::from_shorthand(&["w", "x", "y", "z"], &["w>x>y>z", "w>y>z>x", "w>z>x>y"]).unwrap();
        let (agg, _) = aggregate_reach(&dom);
        let r = classify_cycles(&agg, MajorityRule::StrictMajority);
        assert_eq!(r.cycles.len(), 1);
        assert_eq!(r.cycles[0].kind, CycleKind::Dominated);
        assert_eq!(r.cycles[0].witness.as_deref(), Some("w"));

        let up = Profile::from_shorthand(&["w", "x", "y", "z"], &["x>y>z>w", "y>z>x>w", "z>x>y>w"]).unwrap();
        let (agg, _) = aggregate_reach(&up);
        assert_eq!(classify_cycles(&agg, MajorityRule::StrictMajority).cycles[0].kind, CycleKind::Dominating);

        let (agg, _) = aggregate_reach(&borda4());
        assert!(classify_cycles(&agg, MajorityRule::StrictMajority).cycles.is_empty());
    }

    #[test]
    fn condense_examples() {
        let chain = Profile::from_shorthand(&["u", "v"], &["u>v", "u>v"]).unwrap();
        let c = condense_profile(&chain, MajorityRule::StrictMajority);
        assert_eq!(c.super_vertices.len(), 1);
        assert_eq!(c.super_vertices[0].rule, Some(MergeRule::SimpleUnanimity));

        let dom = Profile::from_shorthand(&["w", "x", "y", "z"], &["w>x>y>z", "w>y>z>x", "w>z>x>y"]).unwrap();
        let c = condense_profile(&dom, MajorityRule::StrictMajority);
        let members: Vec<Vec<String>> = c.super_vertices.iter().map(|s| s.members.clone()).collect();
        assert_eq!(members, vec![vec!["w".to_string()], vec!["x".into(), "y".into(), "z".into()]]);
        assert_eq!(c.super_vertices[1].rule, Some(MergeRule::DominatedCycle));
        assert_eq!(c.edges, vec![(0, 1)]);
        assert_eq!(c.overlaps, vec![vec!["w", "x", "y", "z"]]);

        let c = condense_profile(&paradox(), MajorityRule::StrictMajority);
        assert_eq!(c.super_vertices.len(), 3);
        assert_eq!(c.residual_cycles.len(), 1);

        let same = Profile::from_shorthand(&["a", "b", "c", "d"], &["a>b>c>d"; 3]).unwrap();
        assert_eq!(condense_profile(&same, MajorityRule::StrictMajority).super_vertices.len(), 1);
    }

    #[test]
    fn borda_examples() {
        let s = borda_scores(&borda4(), BordaTies::SharedRank);
        let want = [("w", 9), ("x", 8), ("y", 8), ("z", 5)];
        for ((l, v), (wl, wv)) in s.iter().zip(want) {
            assert_eq!((l.as_str(), v), (wl, &ratio(wv, 1)));
        }
        let three = borda4().restrict(&["w", "y", "z"]).unwrap();
        let s = borda_scores(&three, BordaTies::SharedRank);
        assert_eq!(s.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(), vec![ratio(7, 1), ratio(7, 1), ratio(4, 1)]);
        let one = Profile::from_shorthand(&["a", "b"], &["a>b"]).unwrap();
        assert_eq!(borda_scores(&one, BordaTies::SharedRank)[0].1, ratio(2, 1));

        let tie = Profile::from_shorthand(&["a", "b", "c"], &["a=b>c"]).unwrap();
        let shared = borda_scores(&tie, BordaTies::SharedRank);
        assert_eq!(shared[1].1, ratio(3, 1));
        let avg = borda_scores(&tie, BordaTies::Averaged);
        assert_eq!(avg[0].1, ratio(5, 2));
        assert_eq!(avg[2].1, ratio(1, 1));
    }

    #[test]
    fn position_count_examples() {
        let c = position_counts(&paradox(), 1).unwrap();
        assert!(c.first.iter().all(|row| row[0] == 1));
        let one = Profile::from_shorthand(&["a", "b"], &["a>b"]).unwrap();
        let c = position_counts(&one, 2).unwrap();
        assert_eq!(c.first, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(c.second, BTreeMap::from([(((0, 1), (0, 1)), 1)]));
        let two = Profile::from_shorthand(&["a", "b"], &["a>b", "a>b"]).unwrap();
        assert_eq!(position_counts(&two, 1).unwrap().first, vec![vec![2, 0], vec![0, 2]]);
        let weak = Profile::from_shorthand(&["a", "b"], &["a=b"]).unwrap();
        assert!(matches!(position_counts(&weak, 1), Err(Error::WeakOrderUnsupported(_))));
    }
}
