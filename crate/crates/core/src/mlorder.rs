//! Maximum-likelihood orderings from paired comparisons with ties.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{maximal_circuit_free_subbigraphs, Bigraph};
use crate::matrix::{rational_to_f64, Rational};
use crate::order::{enumerate_weak_orders, PolicySet, PreferenceOrder};

/// Default cap on policies when candidates are generated automatically.
pub const DEFAULT_CANDIDATE_CAP: usize = 6;
/// Uncertainties closer than this are reported as tied.
pub const U_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    /// The first policy of the comparison won.
    #[serde(rename = ">")]
    FirstWins,
    #[serde(rename = "<")]
    SecondWins,
    #[serde(rename = "=")]
    Tie,
}

impl std::str::FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            ">" => Ok(Outcome::FirstWins),
            "<" => Ok(Outcome::SecondWins),
            "=" => Ok(Outcome::Tie),
            other => Err(Error::Parse(format!("unknown outcome `{other}`"))),
        }
    }
}

/// Counts for one unordered pair `(i, j)`, `i < j` by policy index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct PairCounts {
    pub n: u64,
    /// Times `i` was preferred to `j`.
    pub s_ij: u64,
    /// Times `j` was preferred to `i`.
    pub s_ji: u64,
    pub t: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonTally {
    policies: PolicySet,
    pairs: BTreeMap<(usize, usize), PairCounts>,
}

impl ComparisonTally {
    pub fn policies(&self) -> &PolicySet {
        &self.policies
    }

    pub fn pairs(&self) -> &BTreeMap<(usize, usize), PairCounts> {
        &self.pairs
    }

    /// Build directly from per-pair counts `(i, j, s_ij, t_ij, s_ji)`.
    pub fn from_counts(policies: PolicySet, rows: &[(&str, &str, u64, u64, u64)]) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for &(a, b, s, t, s2) in rows {
            let (i, j) = (policies.require(a)?, policies.require(b)?);
            if i == j {
                return Err(Error::SelfComparison(a.to_string()));
            }
            let c = if i < j {
                PairCounts { n: s + t + s2, s_ij: s, s_ji: s2, t }
            } else {
                PairCounts { n: s + t + s2, s_ij: s2, s_ji: s, t }
            };
            if c.n > 0 {
                pairs.insert((i.min(j), i.max(j)), c);
            }
        }
        Ok(ComparisonTally { policies, pairs })
    }
}

/// Accumulate comparisons; pairs never compared are left out.
pub fn tally<S: AsRef<str>>(policies: &PolicySet, comparisons: &[(S, S, Outcome)]) -> Result<ComparisonTally> {
    let mut pairs: BTreeMap<(usize, usize), PairCounts> = BTreeMap::new();
    for (a, b, outcome) in comparisons {
        let (i, j) = (policies.require(a.as_ref())?, policies.require(b.as_ref())?);
        if i == j {
            return Err(Error::SelfComparison(a.as_ref().to_string()));
        }
        let c = pairs.entry((i.min(j), i.max(j))).or_default();
        c.n += 1;
        match (outcome, i < j) {
            (Outcome::Tie, _) => c.t += 1,
            (Outcome::FirstWins, true) | (Outcome::SecondWins, false) => c.s_ij += 1,
            _ => c.s_ji += 1,
        }
    }
    Ok(ComparisonTally {
        policies: policies.clone(),
        pairs,
    })
}

/// Per-pair probabilities `(π_ij, π_ji, γ_ij)` for `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatePoint {
    policies: PolicySet,
    pairs: BTreeMap<(usize, usize), [Rational; 3]>,
}

const PI_IJ: usize = 0;
const PI_JI: usize = 1;
const GAMMA: usize = 2;

impl EstimatePoint {
    pub fn policies(&self) -> &PolicySet {
        &self.policies
    }

    pub fn pairs(&self) -> &BTreeMap<(usize, usize), [Rational; 3]> {
        &self.pairs
    }

    /// Probabilities for the ordered pair `(a, b)`: `(π_ab, π_ba, γ_ab)`.
    pub fn get(&self, a: &str, b: &str) -> Option<[Rational; 3]> {
        let (i, j) = (self.policies.index_of(a)?, self.policies.index_of(b)?);
        let p = self.pairs.get(&(i.min(j), i.max(j)))?;
        Some(if i < j {
            p.clone()
        } else {
            [p[PI_JI].clone(), p[PI_IJ].clone(), p[GAMMA].clone()]
        })
    }

    /// Estimates given as `(i, j, π_ij, γ_ij)`; `π_ji` is the remainder.
    pub fn from_table(policies: PolicySet, rows: &[(&str, &str, Rational, Rational)]) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for (a, b, pi, gamma) in rows {
            let (i, j) = (policies.require(a)?, policies.require(b)?);
            if i == j {
                return Err(Error::SelfComparison(a.to_string()));
            }
            let rest = Rational::one() - pi - gamma;
            if rest < Rational::zero() || *pi < Rational::zero() || *gamma < Rational::zero() {
                return Err(Error::NotADistribution(rational_to_f64(&(pi + gamma))));
            }
            let v = if i < j {
                [pi.clone(), rest, gamma.clone()]
            } else {
                [rest, pi.clone(), gamma.clone()]
            };
            pairs.insert((i.min(j), i.max(j)), v);
        }
        Ok(EstimatePoint { policies, pairs })
    }
}

pub fn raw_estimates(t: &ComparisonTally) -> EstimatePoint {
    let pairs = t
        .pairs
        .iter()
        .map(|(&k, c)| {
            let r = |x: u64| Rational::new((x as i64).into(), (c.n as i64).into());
            (k, [r(c.s_ij), r(c.s_ji), r(c.t)])
        })
        .collect();
    EstimatePoint {
        policies: t.policies.clone(),
        pairs,
    }
}

/// Directed edge for a strict winning preference, undirected edge for a
/// strictly dominant tie probability, nothing otherwise.
pub fn induced_bigraph(e: &EstimatePoint) -> Bigraph {
    let mut d = Vec::new();
    let mut c = Vec::new();
    for (&(i, j), p) in &e.pairs {
        if p[PI_IJ] > p[PI_JI] && p[PI_IJ] > p[GAMMA] {
            d.push((i, j));
        } else if p[PI_JI] > p[PI_IJ] && p[PI_JI] > p[GAMMA] {
            d.push((j, i));
        } else if p[GAMMA] > p[PI_IJ] && p[GAMMA] > p[PI_JI] {
            c.push((i, j));
        }
    }
    Bigraph::new(e.policies.clone(), d, c).expect("pairs are distinct and in range")
}

/// Make `required` weakly the largest of the three by repeatedly pooling it
/// with the largest value above the pool's mean and sharing the mass
/// equally.
fn pool(p: &[Rational; 3], required: usize) -> [Rational; 3] {
    let mut group = vec![required];
    let mut out = p.clone();
    loop {
        let mean: Rational = group.iter().map(|&k| out[k].clone()).sum::<Rational>()
            / Rational::from_integer((group.len() as i64).into());
        for &k in &group {
            out[k] = mean.clone();
        }
        let violator = (0..3)
            .filter(|k| !group.contains(k) && out[*k] > mean)
            .max_by(|&a, &b| out[a].cmp(&out[b]).then(b.cmp(&a)));
        match violator {
            Some(k) => group.push(k),
            None => return out,
        }
    }
}

/// Constrained estimates consistent with `target`.
pub fn restrict_estimates(e: &EstimatePoint, target: &PreferenceOrder) -> Result<EstimatePoint> {
    if target.policies() != &e.policies {
        return Err(Error::ForeignPolicySet(target.to_string()));
    }
    let pairs = e
        .pairs
        .iter()
        .map(|(&(i, j), p)| {
            let req = if target.prefers(i, j) {
                PI_IJ
            } else if target.prefers(j, i) {
                PI_JI
            } else {
                GAMMA
            };
            ((i, j), pool(p, req))
        })
        .collect();
    Ok(EstimatePoint {
        policies: e.policies.clone(),
        pairs,
    })
}

fn plogp10(p: &Rational) -> f64 {
    let v = rational_to_f64(p);
    if v <= 0.0 {
        0.0
    } else {
        v * v.log10()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairUncertainty {
    pub i: String,
    pub j: String,
    pub pi_ij: String,
    pub pi_ji: String,
    pub gamma: String,
    pub n: u64,
    pub u: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub pairs: Vec<PairUncertainty>,
    /// `Σ U_ij` over compared pairs.
    pub total: f64,
    /// `Σ n_ij U_ij`.
    pub weighted_total: f64,
    /// `-Σ n_ij U_ij`.
    pub likelihood: f64,
}

/// Base-10 uncertainty of each pair and the totals.
pub fn uncertainty(restricted: &EstimatePoint, t: &ComparisonTally) -> Result<UncertaintyReport> {
    if restricted.policies != t.policies || !restricted.pairs.keys().eq(t.pairs.keys()) {
        return Err(Error::MismatchedPairs);
    }
    let ps = &t.policies;
    let mut pairs = Vec::new();
    let (mut total, mut weighted) = (0.0, 0.0);
    for ((&(i, j), p), c) in restricted.pairs.iter().zip(t.pairs.values()) {
        let u = -(plogp10(&p[PI_IJ]) + plogp10(&p[PI_JI]) + plogp10(&p[GAMMA]));
        let u = u.max(0.0);
        total += u;
        weighted += c.n as f64 * u;
        pairs.push(PairUncertainty {
            i: ps.label(i).into(),
            j: ps.label(j).into(),
            pi_ij: p[PI_IJ].to_string(),
            pi_ji: p[PI_JI].to_string(),
            gamma: p[GAMMA].to_string(),
            n: c.n,
            u,
        });
    }
    Ok(UncertaintyReport {
        pairs,
        total,
        weighted_total: weighted,
        likelihood: -weighted,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateMode {
    /// Orders of the maximal circuit-free sub-bigraphs of the induced bigraph.
    #[default]
    Subbigraph,
    /// Every weak order of the policies.
    AllWeak,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedCandidate {
    pub name: String,
    /// 1-based rank; tied candidates share a rank.
    pub rank: usize,
    pub u: f64,
    pub weighted_u: f64,
    pub report: UncertaintyReport,
}

/// The induced bigraph with every uncompared or undecided pair joined by an
/// undirected edge, so that it is semi-complete.
pub fn completed_bigraph(e: &EstimatePoint) -> Bigraph {
    let b = induced_bigraph(e);
    let n = e.policies.len();
    let mut c: Vec<(usize, usize)> = b.undirected().iter().copied().collect();
    for i in 0..n {
        for j in i + 1..n {
            if !b.has_undirected(i, j) && !b.directed().contains(&(i, j)) && !b.directed().contains(&(j, i)) {
                c.push((i, j));
            }
        }
    }
    Bigraph::new(e.policies.clone(), b.directed().iter().copied(), c).expect("completion stays valid")
}

/// Candidate orders for a tally when none are supplied.
pub fn generate_candidates(t: &ComparisonTally, mode: CandidateMode, cap: usize) -> Result<Vec<PreferenceOrder>> {
    let n = t.policies.len();
    if n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    match mode {
        CandidateMode::AllWeak => Ok(enumerate_weak_orders(&t.policies, cap)?.collect()),
        CandidateMode::Subbigraph => Ok(maximal_circuit_free_subbigraphs(&completed_bigraph(&raw_estimates(t)), cap)?
            .into_iter()
            .map(|(_, o)| o)
            .collect()),
    }
}

/// Rank already-restricted estimates by ascending `Σ U_ij`.
pub fn rank_candidates(candidates: Vec<(String, EstimatePoint)>, t: &ComparisonTally) -> Result<Vec<RankedCandidate>> {
    let mut scored = candidates
        .into_iter()
        .map(|(name, e)| {
            let report = uncertainty(&e, t)?;
            Ok(RankedCandidate {
                name,
                rank: 0,
                u: report.total,
                weighted_u: report.weighted_total,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| a.u.total_cmp(&b.u));
    let mut rank = 0;
    let mut prev = f64::NEG_INFINITY;
    for (k, c) in scored.iter_mut().enumerate() {
        if (c.u - prev).abs() > U_TIE_TOL {
            rank = k + 1;
            prev = c.u;
        }
        c.rank = rank;
    }
    Ok(scored)
}

/// Rank candidate orders by the uncertainty of their restricted estimates;
/// the first entry is the maximum-likelihood order.
pub fn max_likelihood_order(
    t: &ComparisonTally,
    candidates: Option<Vec<PreferenceOrder>>,
    mode: CandidateMode,
    cap: usize,
) -> Result<Vec<(PreferenceOrder, RankedCandidate)>> {
    let candidates = match candidates {
        Some(c) => c,
        None => generate_candidates(t, mode, cap)?,
    };
    let raw = raw_estimates(t);
    let named = candidates
        .iter()
        .map(|o| Ok((o.to_string(), restrict_estimates(&raw, o)?)))
        .collect::<Result<Vec<_>>>()?;
    let by_name: BTreeMap<String, PreferenceOrder> =
        candidates.into_iter().map(|o| (o.to_string(), o)).collect();
    Ok(rank_candidates(named, t)?
        .into_iter()
        .map(|c| (by_name[&c.name].clone(), c))
        .collect())
}
