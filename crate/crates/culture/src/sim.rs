//! Running a field period by period, singly or in seeded batches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CultureConfig, InitSpec};
use crate::error::{CultureError, Result};
use crate::field::Field;
use crate::metrics::{census, MetricsSample, VarietyTable};
use crate::rules::{is_absorbing, step, Criterion};
use crate::topology::Topology;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOutcome {
    pub seed: u64,
    pub series: Vec<MetricsSample>,
    pub table: VarietyTable,
    /// Ended because nothing could change any more.
    pub stasis: bool,
    pub periods_run: usize,
    /// Variety counts over the last window when the run hit `max_periods`
    /// without reaching stasis.
    pub limit_cycle: Option<Vec<usize>>,
    #[serde(skip)]
    pub field: Field,
}

impl RunOutcome {
    /// Sum of per-period η over `horizon` periods, periods after termination
    /// counting as zero, divided by `horizon`.
    pub fn mean_eta(&self, horizon: usize) -> f64 {
        if horizon == 0 {
            return 0.0;
        }
        self.series.iter().take(horizon).map(|s| s.eta).sum::<f64>() / horizon as f64
    }

    pub fn metrics_csv(&self) -> Result<String> {
        crate::io::metrics_csv(&self.series)
    }
}

/// Draws the starting field for `cfg` from `rng`.
pub fn initial_field(cfg: &CultureConfig, agents: usize, rng: &mut ChaCha8Rng) -> Field {
    match cfg.init {
        InitSpec::Uniform => Field::uniform(cfg.n_features, cfg.traits_per_feature, agents, rng),
        InitSpec::Biased { fraction } => {
            Field::biased(cfg.n_features, cfg.traits_per_feature, agents, fraction, rng)
        }
    }
}

pub fn run(cfg: &CultureConfig, initial: Option<Field>) -> Result<RunOutcome> {
    run_observed(cfg, initial, |_, _| {})
}

/// As [`run`], calling `observe(t, field)` after every period, and once with
/// `t = 0` before the first.
pub fn run_observed<F>(cfg: &CultureConfig, initial: Option<Field>, mut observe: F) -> Result<RunOutcome>
where
    F: FnMut(usize, &Field),
{
    let topo = cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut field = match initial {
        Some(f) => {
            check_initial(cfg, &topo, &f)?;
            f
        }
        None => initial_field(cfg, topo.len(), &mut rng),
    };
    let crit = Criterion::from_config(cfg);
    let selections = cfg.selections(topo.len());
    let window = cfg.stasis_window;
    let mut series: Vec<MetricsSample> = Vec::new();
    let mut stasis = false;
    observe(0, &field);
    for t in 1..=cfg.max_periods {
        let mut interactions = 0;
        for _ in 0..selections {
            if step(cfg.behavior, &mut field, &topo, &crit, &mut rng).is_some() {
                interactions += 1;
            }
        }
        let (varieties, s_v, s_c) = census(&field);
        series.push(MetricsSample {
            t,
            eta: interactions as f64 / selections as f64,
            s_v,
            s_c,
            varieties,
            interactions,
        });
        observe(t, &field);
        if t >= window && quiet(&series[t - window..]) && is_absorbing(cfg.behavior, &field, &topo, &crit) {
            stasis = true;
            break;
        }
    }
    let periods_run = series.len();
    let limit_cycle = (!stasis).then(|| {
        series[periods_run.saturating_sub(window)..].iter().map(|s| s.varieties).collect()
    });
    Ok(RunOutcome {
        seed: cfg.seed,
        table: VarietyTable::from_field(&field),
        series,
        stasis,
        periods_run,
        limit_cycle,
        field,
    })
}

/// No interactions and an unchanged variety count across the slice.
fn quiet(window: &[MetricsSample]) -> bool {
    window.iter().all(|s| s.interactions == 0 && s.varieties == window[0].varieties)
}

fn check_initial(cfg: &CultureConfig, topo: &Topology, f: &Field) -> Result<()> {
    if f.len() != topo.len() {
        return Err(CultureError::TopologyMismatch { expected: f.len(), found: topo.len() });
    }
    if f.n() != cfg.n_features {
        return Err(CultureError::LengthMismatch { left: cfg.n_features, right: f.n() });
    }
    if f.q() != cfg.traits_per_feature {
        return Err(CultureError::InvalidConfig("field q differs from traits_per_feature".into()));
    }
    Ok(())
}

/// One run per seed, in parallel; results come back ordered by seed.
pub fn run_batch(cfg: &CultureConfig, seeds: &[u64]) -> Result<Vec<RunOutcome>> {
    cfg.validate()?;
    let mut out = seeds
        .par_iter()
        .map(|&seed| {
            let mut c = cfg.clone();
            c.seed = seed;
            run(&c, None)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|r| r.seed);
    Ok(out)
}
