//! Variety census, entropies and the per-period sample.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::field::{identity_metric, Field};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsSample {
    pub t: usize,
    /// Interactions per selection attempt.
    pub eta: f64,
    pub s_v: f64,
    pub s_c: f64,
    pub varieties: usize,
    /// Raw interaction count for the period.
    #[serde(skip)]
    pub interactions: usize,
}

/// Distinct trait vectors and their member counts, largest first; ties are
/// broken by the trait vector.
pub fn varieties(field: &Field) -> Vec<(Vec<u32>, usize)> {
    let mut counts: HashMap<&[u32], usize> = HashMap::new();
    for a in field.agents() {
        *counts.entry(a).or_insert(0) += 1;
    }
    let mut out: Vec<(Vec<u32>, usize)> = counts.into_iter().map(|(k, v)| (k.to_vec(), v)).collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// Share a trait and differ on another.
pub fn compatible(u: &[u32], v: &[u32]) -> bool {
    let s = u.iter().zip(v).filter(|(a, b)| a == b).count();
    s >= 1 && s < u.len()
}

/// Entropy of the variety distribution over `ln N`.
pub fn variety_entropy(field: &Field) -> f64 {
    variety_entropy_of(&varieties(field), field.len())
}

fn variety_entropy_of(vs: &[(Vec<u32>, usize)], total: usize) -> f64 {
    if total < 2 {
        return 0.0;
    }
    let n = total as f64;
    let h: f64 = vs.iter().map(|(_, c)| plogp(*c as f64 / n)).sum();
    (h / n.ln()).clamp(0.0, 1.0)
}

/// Entropy of the joint-occurrence distribution over compatible variety pairs,
/// renormalised, over `ln C(N, 2)`.
pub fn compatibility_entropy(field: &Field) -> f64 {
    compatibility_entropy_of(&varieties(field), field.len())
}

fn compatibility_entropy_of(vs: &[(Vec<u32>, usize)], total: usize) -> f64 {
    let pairs = total * total.saturating_sub(1) / 2;
    if pairs < 2 {
        return 0.0;
    }
    let n = total as f64;
    let mut weights = Vec::new();
    for (i, (u, nu)) in vs.iter().enumerate() {
        for (v, nv) in &vs[i + 1..] {
            if compatible(u, v) {
                let (pu, pv) = (*nu as f64 / n, *nv as f64 / n);
                let v_given_u = *nv as f64 / (n - *nu as f64);
                let u_given_v = *nu as f64 / (n - *nv as f64);
                weights.push(pu * v_given_u + pv * u_given_v);
            }
        }
    }
    let sum: f64 = weights.iter().sum();
    if weights.len() < 2 || sum <= 0.0 {
        return 0.0;
    }
    let h: f64 = weights.iter().map(|w| plogp(w / sum)).sum();
    (h / (pairs as f64).ln()).clamp(0.0, 1.0)
}

/// One census of the field: `(variety count, S_v, S_c)`.
pub fn census(field: &Field) -> (usize, f64, f64) {
    let vs = varieties(field);
    (vs.len(), variety_entropy_of(&vs, field.len()), compatibility_entropy_of(&vs, field.len()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietyRow {
    /// 1-based position in the table.
    pub order: usize,
    /// Base-q identity number `h`.
    pub identity: String,
    pub traits: Vec<u32>,
    pub number: usize,
    /// 1-based orders of the compatible varieties.
    pub compatible_with: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VarietyTable {
    pub rows: Vec<VarietyRow>,
}

impl VarietyTable {
    pub fn from_field(field: &Field) -> VarietyTable {
        let vs = varieties(field);
        let rows = vs
            .iter()
            .enumerate()
            .map(|(i, (traits, count))| VarietyRow {
                order: i + 1,
                identity: identity_metric(traits, field.q()).0.to_string(),
                traits: traits.clone(),
                number: *count,
                compatible_with: vs
                    .iter()
                    .enumerate()
                    .filter(|(j, (other, _))| *j != i && compatible(traits, other))
                    .map(|(j, _)| j + 1)
                    .collect(),
            })
            .collect();
        VarietyTable { rows }
    }

    pub fn total(&self) -> usize {
        self.rows.iter().map(|r| r.number).sum()
    }

    /// Position (0-based) of the row holding `traits`.
    pub fn index_of(&self, traits: &[u32]) -> Option<usize> {
        self.rows.iter().position(|r| r.traits == traits)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("table serializes")
    }
}
