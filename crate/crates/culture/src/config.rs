//! Run parameters, loadable from JSON.

use serde::{Deserialize, Serialize};

use crate::epochs::EpochThresholds;
use crate::error::{CultureError, Result};
use crate::topology::{Topology, TopologySpec};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Behavior {
    /// The selected agent copies from its neighbour whenever the draw allows.
    #[default]
    Egoistic,
    /// As egoistic, but another neighbour must second the change.
    PeerPossible,
}

/// How the starting field is drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitSpec {
    /// Every trait uniform on `[0, q)`.
    #[default]
    Uniform,
    /// A `fraction` of agents take triangular (two-dice) traits on the lower
    /// half of the features and uniform traits on the upper half; the rest
    /// take the mirror image.
    Biased { fraction: f64 },
}

fn default_window() -> usize {
    25
}

fn default_max_periods() -> usize {
    10_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CultureConfig {
    pub n_features: usize,
    pub traits_per_feature: u32,
    pub topology: TopologySpec,
    /// Optional cross-check against the topology's size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agents: Option<usize>,
    /// Interaction scale; `1/n` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub behavior: Behavior,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_window")]
    pub stasis_window: usize,
    #[serde(default = "default_max_periods")]
    pub max_periods: usize,
    /// Selection attempts per period; the agent count when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selections_per_period: Option<usize>,
    #[serde(default)]
    pub init: InitSpec,
    #[serde(default)]
    pub epochs: EpochThresholds,
}

impl CultureConfig {
    /// Defaults for everything but the shape of the run.
    pub fn new(n_features: usize, traits_per_feature: u32, topology: TopologySpec) -> Self {
        CultureConfig {
            n_features,
            traits_per_feature,
            topology,
            agents: None,
            k: None,
            epsilon: 0.0,
            behavior: Behavior::default(),
            seed: 0,
            stasis_window: default_window(),
            max_periods: default_max_periods(),
            selections_per_period: None,
            init: InitSpec::default(),
            epochs: EpochThresholds::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: CultureConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn k(&self) -> f64 {
        self.k.unwrap_or(1.0 / self.n_features as f64)
    }

    /// Checks the parameter ranges and builds the topology.
    pub fn validate(&self) -> Result<Topology> {
        let bad = |m: &str| Err(CultureError::InvalidConfig(m.to_string()));
        if self.n_features == 0 {
            return bad("n_features must be at least 1");
        }
        if self.traits_per_feature == 0 {
            return bad("traits_per_feature must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon must lie in [0, 1]");
        }
        if self.k().is_nan() || self.k() <= 0.0 || !self.k().is_finite() {
            return bad("k must be positive");
        }
        if self.stasis_window == 0 {
            return bad("stasis_window must be at least 1");
        }
        if self.selections_per_period == Some(0) {
            return bad("selections_per_period must be at least 1");
        }
        if let InitSpec::Biased { fraction } = self.init {
            if !(0.0..=1.0).contains(&fraction) {
                return bad("biased fraction must lie in [0, 1]");
            }
        }
        let topo = Topology::build(&self.topology)?;
        if let Some(n) = self.agents {
            if n != topo.len() {
                return Err(CultureError::TopologyMismatch { expected: n, found: topo.len() });
            }
        }
        Ok(topo)
    }

    pub fn selections(&self, agents: usize) -> usize {
        self.selections_per_period.unwrap_or(agents)
    }
}
