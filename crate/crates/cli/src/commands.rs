use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use preflattice_core::aggregate::{
    aggregate_reach, borda_scores, classify_cycles, condense_profile, position_counts, BordaTies, MajorityRule,
};
use preflattice_core::entropy::{markov_report, topological_entropy};
use preflattice_core::graph::{tg_connected, Poset, TgGraph};
use preflattice_core::mlorder::{
    max_likelihood_order, tally, CandidateMode, ComparisonTally, Outcome, DEFAULT_CANDIDATE_CAP,
};
use preflattice_core::order::{
    count_weak_orders, enumerate_weak_orders, parse_order, TransitionRule, DEFAULT_ENUMERATION_CAP,
};
use preflattice_core::{enumeration_cap, PolicySet, Profile};
use preflattice_culture::io::{snapshot_csv, variety_table_json};
use preflattice_culture::{run_batch, run_observed, CultureConfig, RunOutcome};
use preflattice_selforg::{
    parse_events_csv, run_scenario, Grant, GroupTopologyMode, InterestMap, ScenarioOptions,
};

use crate::error::CliError;
use crate::{
    AggregateArgs, BordaArgs, CandidateArg, Command, EntropyArgs, EntropyMode, EnumerateArgs, GroupTopologyArg,
    MlorderArgs, RuleArg, ScenarioArgs, SimulateArgs, TgArgs, TiesArg,
};

type Result<T> = std::result::Result<T, CliError>;

pub fn dispatch(cmd: Command, out: &mut impl Write) -> Result<()> {
    match cmd {
        Command::CountOrders { n } => writeln!(out, "{}", count_weak_orders(n)?)?,
        Command::EnumerateOrders(a) => emit(out, &enumerate(a)?)?,
        Command::Entropy(a) => emit(out, &entropy(a)?)?,
        Command::Aggregate(a) => aggregate(a, out)?,
        Command::Borda(a) => emit(out, &borda(a)?)?,
        Command::Mlorder(a) => emit(out, &mlorder(a)?)?,
        Command::Antichain { poset } => emit(out, &antichain(&read(&poset)?)?)?,
        Command::TgCheck(a) => emit(out, &tg_check(a)?)?,
        Command::Simulate(a) => simulate(a, out)?,
        Command::ScenarioNewsgroup(a) => emit(out, &scenario(a)?)?,
    }
    Ok(())
}

fn emit(out: &mut impl Write, v: &impl Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))
}

/// `strict-majority`, `pairwise` or `at-least:K`.
pub fn parse_majority(s: &str) -> std::result::Result<MajorityRule, String> {
    match s {
        "strict-majority" => Ok(MajorityRule::StrictMajority),
        "pairwise" => Ok(MajorityRule::Pairwise),
        _ => s
            .strip_prefix("at-least:")
            .and_then(|k| k.parse().ok())
            .map(MajorityRule::AtLeast)
            .ok_or_else(|| format!("expected strict-majority, pairwise or at-least:K, got `{s}`")),
    }
}

fn enumerate(a: EnumerateArgs) -> Result<Value> {
    let labels = match (a.policies, a.n) {
        (Some(p), _) => p,
        (None, Some(n)) => (1..=n).map(|i| i.to_string()).collect(),
        (None, None) => unreachable!("clap requires one of them"),
    };
    let ps = PolicySet::new(labels)?;
    let cap = a.cap.unwrap_or_else(|| enumeration_cap(DEFAULT_ENUMERATION_CAP));
    let orders: Vec<String> = enumerate_weak_orders(&ps, cap)?.map(|o| o.to_string()).collect();
    Ok(json!({ "policies": ps.labels(), "count": orders.len(), "orders": orders }))
}

fn entropy(a: EntropyArgs) -> Result<Value> {
    let profile = Profile::from_json(&read(&a.profile)?)?;
    let rule = match a.rule {
        RuleArg::ClimbOneRung => TransitionRule::ClimbOneRung,
        RuleArg::JumpToTop => TransitionRule::JumpToTop,
    };
    Ok(match a.mode {
        EntropyMode::Topo => serde_json::to_value(topological_entropy(&profile)?)?,
        EntropyMode::Markov => serde_json::to_value(markov_report(&profile, rule)?)?,
    })
}

fn aggregate(a: AggregateArgs, out: &mut impl Write) -> Result<()> {
    let profile = Profile::from_json(&read(&a.profile)?)?;
    let (agg, unanimity) = aggregate_reach(&profile);
    let cycles = classify_cycles(&agg, a.majority);
    let condensed = condense_profile(&profile, a.majority);
    if !a.summary {
        return emit(out, &json!({ "unanimity": unanimity, "cycles": cycles, "condensed": condensed }));
    }
    let pairs: Vec<String> = unanimity.unanimity_pairs().into_iter().map(|(u, v)| format!("{u}>{v}")).collect();
    writeln!(out, "voters: {}", profile.voter_count())?;
    writeln!(out, "unanimities: {}", list(&pairs))?;
    writeln!(out, "sources: {}", list(&unanimity.sources))?;
    writeln!(out, "sinks: {}", list(&unanimity.sinks))?;
    for c in &cycles.cycles {
        let kind = serde_json::to_value(c.kind)?;
        let witness = c.witness.as_deref().map(|w| format!(" (witness {w})")).unwrap_or_default();
        writeln!(out, "cycle {}: {}{witness}", kind.as_str().unwrap_or("?"), c.members.join(","))?;
    }
    let supers: Vec<String> = condensed.super_vertices.iter().map(|s| format!("{{{}}}", s.members.join(","))).collect();
    writeln!(out, "condensed: {}", supers.join(" "))?;
    let edges: Vec<String> =
        condensed.edges.iter().map(|&(u, v)| format!("{}->{}", supers[u], supers[v])).collect();
    writeln!(out, "condensed edges: {}", list(&edges))?;
    Ok(())
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(" ")
    }
}

fn borda(a: BordaArgs) -> Result<Value> {
    let profile = Profile::from_json(&read(&a.profile)?)?;
    let ties = match a.ties {
        TiesArg::SharedRank => BordaTies::SharedRank,
        TiesArg::Averaged => BordaTies::Averaged,
    };
    let scores: Vec<Value> = borda_scores(&profile, ties)
        .into_iter()
        .map(|(p, s)| json!({ "policy": p, "score": s.to_string() }))
        .collect();
    let mut doc = json!({ "scores": scores });
    if let Some(depth) = a.positions {
        let c = position_counts(&profile, depth)?;
        let ps = profile.policies();
        let first: BTreeMap<&str, &Vec<u64>> = c.first.iter().enumerate().map(|(p, row)| (ps.label(p), row)).collect();
        let second: Vec<Value> = c
            .second
            .iter()
            .map(|(((p, q), (k, l)), n)| json!({ "policies": [ps.label(*p), ps.label(*q)], "positions": [k, l], "count": n }))
            .collect();
        doc["positions"] = json!({ "first": first, "second": second });
    }
    Ok(doc)
}

#[derive(Deserialize)]
struct OutcomeRow {
    first: String,
    second: String,
    outcome: Outcome,
}

#[derive(Deserialize)]
struct CountRow {
    i: String,
    j: String,
    s_ij: u64,
    s_ji: u64,
    t: u64,
}

/// Labels in order of first appearance.
fn labels_of<'a>(pairs: impl Iterator<Item = (&'a str, &'a str)>) -> Result<PolicySet> {
    let mut seen: Vec<&str> = Vec::new();
    for (a, b) in pairs {
        for l in [a, b] {
            if !seen.contains(&l) {
                seen.push(l);
            }
        }
    }
    Ok(PolicySet::new(seen)?)
}

pub fn parse_comparisons(text: &str) -> Result<ComparisonTally> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    if headers.iter().any(|h| h == "outcome") {
        let rows: Vec<OutcomeRow> = r.deserialize().collect::<std::result::Result<_, _>>()?;
        let ps = labels_of(rows.iter().map(|r| (r.first.as_str(), r.second.as_str())))?;
        let cmp: Vec<(&str, &str, Outcome)> =
            rows.iter().map(|r| (r.first.as_str(), r.second.as_str(), r.outcome)).collect();
        Ok(tally(&ps, &cmp)?)
    } else if headers.iter().any(|h| h == "s_ij") {
        let rows: Vec<CountRow> = r.deserialize().collect::<std::result::Result<_, _>>()?;
        let ps = labels_of(rows.iter().map(|r| (r.i.as_str(), r.j.as_str())))?;
        let counts: Vec<(&str, &str, u64, u64, u64)> =
            rows.iter().map(|r| (r.i.as_str(), r.j.as_str(), r.s_ij, r.s_ji, r.t)).collect();
        Ok(ComparisonTally::from_counts(ps, &counts)?)
    } else {
        Err(CliError::input("Parse", "expected header `first,second,outcome` or `i,j,s_ij,s_ji,t`"))
    }
}

fn mlorder(a: MlorderArgs) -> Result<Value> {
    let t = parse_comparisons(&read(&a.comparisons)?)?;
    let candidates = match &a.candidates {
        Some(path) => Some(
            read(path)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| parse_order(l, Some(t.policies())))
                .collect::<std::result::Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let mode = match a.mode {
        CandidateArg::Subbigraph => CandidateMode::Subbigraph,
        CandidateArg::AllWeak => CandidateMode::AllWeak,
    };
    let cap = a.cap.unwrap_or_else(|| enumeration_cap(DEFAULT_CANDIDATE_CAP));
    let ranked: Vec<Value> = max_likelihood_order(&t, candidates, mode, cap)?
        .into_iter()
        .map(|(order, c)| {
            let mut v = serde_json::to_value(&c)?;
            v["order"] = serde_json::to_value(&order)?;
            Ok(v)
        })
        .collect::<Result<_>>()?;
    Ok(json!({ "policies": t.policies().labels(), "candidates": ranked }))
}

#[derive(Deserialize)]
struct PosetDoc {
    elements: Vec<String>,
    #[serde(default)]
    relations: Vec<(String, String)>,
}

pub fn antichain(text: &str) -> Result<Value> {
    let doc: PosetDoc = serde_json::from_str(text)?;
    let ps = PolicySet::new(doc.elements)?;
    let rel = doc
        .relations
        .iter()
        .map(|(u, v)| Ok((ps.require(u)?, ps.require(v)?)))
        .collect::<std::result::Result<Vec<_>, preflattice_core::Error>>()?;
    Ok(serde_json::to_value(Poset::new(ps, rel)?.antichain_report())?)
}

fn tg_check(a: TgArgs) -> Result<Value> {
    let g = TgGraph::from_json(&read(&a.graph)?)?;
    let (connected, path) = tg_connected(&g, &a.from, &a.to)?;
    Ok(json!({ "from": a.from, "to": a.to, "connected": connected, "path": path }))
}

#[derive(Serialize)]
struct RunSummary<'a> {
    seed: u64,
    stasis: bool,
    periods_run: usize,
    varieties: usize,
    limit_cycle: &'a Option<Vec<usize>>,
    final_eta: f64,
}

fn summary(o: &RunOutcome) -> RunSummary<'_> {
    RunSummary {
        seed: o.seed,
        stasis: o.stasis,
        periods_run: o.periods_run,
        varieties: o.table.rows.len(),
        limit_cycle: &o.limit_cycle,
        final_eta: o.series.last().map_or(0.0, |s| s.eta),
    }
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))
}

fn simulate(a: SimulateArgs, out: &mut impl Write) -> Result<()> {
    let mut cfg = CultureConfig::from_json(&read(&a.config)?)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if a.replicates == 0 {
        return Err(CliError::input("InvalidConfig", "--replicates must be at least 1"));
    }
    if a.snapshot_every == Some(0) {
        return Err(CliError::input("InvalidConfig", "--snapshot-every must be at least 1"));
    }
    let topo = cfg.validate()?;
    let seeds: Vec<u64> = (0..a.replicates).map(|r| cfg.seed.wrapping_add(r)).collect();

    let Some(dir) = a.out else {
        if seeds.len() == 1 {
            let o = run_batch(&cfg, &seeds)?.remove(0);
            write!(out, "{}", o.metrics_csv()?)?;
        } else {
            let runs = run_batch(&cfg, &seeds)?;
            emit(out, &runs.iter().map(summary).collect::<Vec<_>>())?;
        }
        return Ok(());
    };
    fs::create_dir_all(&dir)?;
    let runs = match a.snapshot_every {
        None => run_batch(&cfg, &seeds)?,
        Some(k) => {
            let mut runs = Vec::with_capacity(seeds.len());
            for &seed in &seeds {
                let mut c = cfg.clone();
                c.seed = seed;
                let mut failed = None;
                let o = run_observed(&c, None, |t, field| {
                    if t % k == 0 && failed.is_none() {
                        let body = snapshot_csv(field, &topo).map_err(CliError::from);
                        if let Err(e) = body.and_then(|b| write_file(&dir, &format!("snapshot-{seed}-{t}.csv"), &b)) {
                            failed = Some(e);
                        }
                    }
                })?;
                if let Some(e) = failed {
                    return Err(e);
                }
                runs.push(o);
            }
            runs
        }
    };
    for o in &runs {
        write_file(&dir, &format!("metrics-{}.csv", o.seed), &o.metrics_csv()?)?;
        write_file(&dir, &format!("varieties-{}.json", o.seed), &variety_table_json(&o.table))?;
    }
    let summaries: Vec<RunSummary> = runs.iter().map(summary).collect();
    write_file(&dir, "summary.json", &serde_json::to_string_pretty(&summaries)?)?;
    emit(out, &summaries)
}

fn scenario(a: ScenarioArgs) -> Result<Value> {
    let events = parse_events_csv(&read(&a.events)?)?;
    let interests = InterestMap::from_json(&read(&a.interests)?)?;
    let grants: Vec<Grant> = match &a.grants {
        Some(p) => preflattice_selforg::precedent::parse_grants_json(&read(p)?)?,
        None => Vec::new(),
    };
    let opts = ScenarioOptions {
        topology: match a.topology {
            GroupTopologyArg::SubsetLattice => GroupTopologyMode::SubsetLattice,
            GroupTopologyArg::BinaryTree => GroupTopologyMode::BinaryTree,
        },
        manager_fraction: a.manager_fraction,
        seed: a.seed,
        ..ScenarioOptions::default()
    };
    Ok(serde_json::to_value(run_scenario(&events, &interests, &grants, &opts)?)?)
}
