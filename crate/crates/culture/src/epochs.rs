//! Coarse labelling of a run's history into phases.
//!
//! Advisory only: thresholds are heuristics and live in the config.

use serde::{Deserialize, Serialize};

use crate::error::{CultureError, Result};
use crate::metrics::MetricsSample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Epoch {
    /// High variety entropy, falling fast.
    Anarchy,
    /// Compatibility entropy leads variety entropy.
    Collectivism,
    /// Active, with variety entropy at or above compatibility entropy.
    Oligarchy,
    /// Activity has died away.
    Authoritarianism,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EpochThresholds {
    /// Trailing moving-average length.
    pub smoothing: usize,
    /// Smoothed η at or below this is inactivity.
    pub activity_floor: f64,
    /// Smoothed S_v at or above this counts as high.
    pub anarchy_level: f64,
    /// Per-period fall in smoothed S_v that counts as fast.
    pub anarchy_slope: f64,
}

impl Default for EpochThresholds {
    fn default() -> Self {
        EpochThresholds { smoothing: 5, activity_floor: 0.01, anarchy_level: 0.5, anarchy_slope: 0.002 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpochSpan {
    pub epoch: Epoch,
    /// First and last period, inclusive.
    pub from: usize,
    pub to: usize,
}

fn smooth(xs: &[f64], w: usize) -> Vec<f64> {
    let w = w.max(1);
    (0..xs.len())
        .map(|i| {
            let lo = (i + 1).saturating_sub(w);
            xs[lo..=i].iter().sum::<f64>() / (i + 1 - lo) as f64
        })
        .collect()
}

/// Labels each period, then merges runs of equal labels.
pub fn classify_epochs(series: &[MetricsSample], th: &EpochThresholds) -> Result<Vec<EpochSpan>> {
    if series.len() < 4 {
        return Err(CultureError::SeriesTooShort(series.len()));
    }
    let pick = |f: fn(&MetricsSample) -> f64| smooth(&series.iter().map(f).collect::<Vec<_>>(), th.smoothing);
    let eta = pick(|s| s.eta);
    let sv = pick(|s| s.s_v);
    let sc = pick(|s| s.s_c);
    let mut spans: Vec<EpochSpan> = Vec::new();
    for i in 0..series.len() {
        let slope = if i == 0 { 0.0 } else { sv[i] - sv[i - 1] };
        let epoch = if eta[i] <= th.activity_floor {
            Epoch::Authoritarianism
        } else if sv[i] >= th.anarchy_level && slope <= -th.anarchy_slope {
            Epoch::Anarchy
        } else if sc[i] > sv[i] {
            Epoch::Collectivism
        } else {
            Epoch::Oligarchy
        };
        let t = series[i].t;
        match spans.last_mut() {
            Some(last) if last.epoch == epoch => last.to = t,
            _ => spans.push(EpochSpan { epoch, from: t, to: t }),
        }
    }
    Ok(spans)
}
