//! Acceptance gate: one PASS/FAIL line per criterion, then a single verdict.
//!
//! Every check is stated as the criterion asks. A failing line is reported,
//! never softened.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use preflattice_core::aggregate::{aggregate_reach, classify_cycles, CycleKind, MajorityRule};
use preflattice_core::entropy::{markov_aggregate, markov_report, stationary_distribution, topological_entropy};
use preflattice_core::graph::{hamiltonian_paths, maximal_circuit_free_subbigraphs, Digraph, Poset};
use preflattice_core::matrix::{ratio, Rational};
use preflattice_core::mlorder::{
    induced_bigraph, raw_estimates, restrict_estimates, uncertainty, ComparisonTally, EstimatePoint,
};
use preflattice_core::order::{count_weak_orders, enumerate_weak_orders, parse_order, TransitionRule};
use preflattice_core::{PolicySet, Profile};
use preflattice_culture::{
    run, run_batch, similarity, Behavior, CultureConfig, InitSpec, Neighborhood, RunOutcome, TopologySpec,
};
use preflattice_selforg::{
    derive_precedents, extract_prefs, partition_subscribers, validate_protocol, EventKind, Grant, InterestMap,
    PostingEvent, SelforgError,
};

struct Gate {
    lines: Vec<(String, bool, String)>,
}

impl Gate {
    fn check(&mut self, id: &str, ok: bool, detail: impl Into<String>) {
        self.lines.push((id.to_string(), ok, detail.into()));
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_preflattice"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cli(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn borda4() -> Profile {
    Profile::from_shorthand(&["w", "x", "y", "z"], &["w>x>y>z", "w>x>y>z", "y>z>x>w"]).unwrap()
}

fn paradox() -> Profile {
    Profile::from_shorthand(&["x", "y", "z"], &["x>y>z", "y>z>x", "z>x>y"]).unwrap()
}

fn exact(rs: &[(i64, i64)]) -> Vec<Rational> {
    rs.iter().map(|&(n, d)| ratio(n, d)).collect()
}

// 1 -----------------------------------------------------------------------

/// Ordered Bell numbers by a(n) = Σ_k C(n,k) a(n-k), a(0) = 1.
fn ordered_bell(n: usize) -> u64 {
    let mut a = vec![1u64];
    for m in 1..=n {
        let mut c = 1u64;
        let mut s = 0u64;
        for k in 1..=m {
            c = c * (m - k + 1) as u64 / k as u64;
            s += c * a[m - k];
        }
        a.push(s);
    }
    a[n]
}

fn criterion_1(g: &mut Gate) {
    let want = [1u64, 3, 13, 75, 541, 4683];
    let mut ok = true;
    let mut got = Vec::new();
    for (i, &w) in want.iter().enumerate() {
        let n = i + 1;
        let out = cli(&["count-orders", &n.to_string()]);
        let printed: u64 = stdout(&out).trim().parse().unwrap_or(0);
        let lib: u64 = count_weak_orders(n).unwrap().try_into().unwrap();
        ok &= out.status.code() == Some(0) && printed == w && lib == w && ordered_bell(n) == w;
        got.push(printed);
    }
    g.check("1a", ok, format!("count-orders 1..6 = {got:?}"));

    let mut ok = true;
    for n in 1..=6 {
        let ps = PolicySet::new((0..n).map(|i| format!("p{i}"))).unwrap();
        let orders: Vec<String> = enumerate_weak_orders(&ps, 7).unwrap().map(|o| o.to_string()).collect();
        let distinct: BTreeSet<&String> = orders.iter().collect();
        ok &= orders.len() as u64 == want[n - 1] && distinct.len() == orders.len();
        let out = cli(&["enumerate-orders", &n.to_string()]);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
        ok &= v["count"] == want[n - 1];
    }
    g.check("1b", ok, "enumeration lengths match counts for n <= 6 (library and CLI)");

    let zero = cli(&["count-orders", "0"]);
    g.check("1c", zero.status.code() == Some(2), format!("count-orders 0 exits {:?}", zero.status.code()));
}

// 2 -----------------------------------------------------------------------

fn criterion_2(g: &mut Gate) {
    let four = borda4();
    let three = four.restrict(&["w", "y", "z"]).unwrap();
    let s4 = stationary_distribution(&markov_aggregate(&four, TransitionRule::ClimbOneRung)).unwrap();
    let s3 = stationary_distribution(&markov_aggregate(&three, TransitionRule::ClimbOneRung)).unwrap();
    g.check(
        "2a",
        s4.exact.as_deref() == Some(&exact(&[(12, 23), (6, 23), (3, 23), (2, 23)])[..]),
        format!("4-option stationary {:?}", s4.exact.as_ref().map(|v| v.iter().map(|r| r.to_string()).collect::<Vec<_>>())),
    );
    let r4 = markov_report(&four, TransitionRule::ClimbOneRung).unwrap();
    g.check("2b", (r4.entropy - 0.843).abs() <= 5e-4, format!("base-4 entropy {:.6}", r4.entropy));
    g.check(
        "2c",
        s3.exact.as_deref() == Some(&exact(&[(6, 11), (3, 11), (2, 11)])[..]),
        "3-option stationary (6/11, 3/11, 2/11)",
    );
    let r3 = markov_report(&three, TransitionRule::ClimbOneRung).unwrap();
    g.check("2d", (r3.entropy - 0.905619).abs() <= 1e-5, format!("base-3 entropy {:.6}", r3.entropy));
    g.check(
        "2e",
        r4.order.to_string() == "w>x>y>z" && r3.order.to_string() == "w>y>z",
        format!("Markov orders {} and {}", r4.order, r3.order),
    );
    let w_over_y = |r: &preflattice_core::entropy::MarkovReport, ps: &PolicySet| {
        r.stationary[ps.index_of("w").unwrap()] > r.stationary[ps.index_of("y").unwrap()]
    };
    g.check(
        "2f",
        w_over_y(&r4, four.policies()) && w_over_y(&r3, three.policies()),
        "w keeps strictly more stationary mass than y in both runs",
    );
    let out = cli(&["entropy", "--mode", "markov", fixture("borda4.json").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    g.check(
        "2g",
        out.status.code() == Some(0)
            && v["stationary_exact"] == serde_json::json!(["12/23", "6/23", "3/23", "2/23"])
            && (v["entropy"].as_f64().unwrap_or(0.0) - 0.843).abs() <= 5e-4,
        "CLI entropy --mode markov on borda4.json",
    );
}

// 3 -----------------------------------------------------------------------

fn criterion_3(g: &mut Gate) {
    let p = paradox();
    let s = stationary_distribution(&markov_aggregate(&p, TransitionRule::ClimbOneRung)).unwrap();
    g.check("3a", s.exact == Some(vec![ratio(1, 3); 3]), "paradox stationary (1/3, 1/3, 1/3) exactly");
    let (agg, report) = aggregate_reach(&p);
    g.check("3b", report.unanimities.is_empty(), format!("{} unanimities", report.unanimities.len()));
    let cycles = classify_cycles(&agg, MajorityRule::StrictMajority);
    let complete = cycles.cycles.iter().filter(|c| c.kind == CycleKind::Complete).count();
    g.check(
        "3c",
        cycles.cycles.len() == 1 && complete == 1,
        format!("{} cycle(s), {complete} complete", cycles.cycles.len()),
    );
}

// 4 -----------------------------------------------------------------------

fn criterion_4(g: &mut Gate) {
    let s = |orders: &[&str]| topological_entropy(&Profile::from_shorthand(&["a", "b", "c"], orders).unwrap()).unwrap();
    let f1 = s(&["a>b>c"]).entropy;
    let f2 = s(&["a=b>c"]).entropy;
    let tie = s(&["a=b=c"]).entropy;
    g.check("4a", f1 == 0.0, format!("S(F1) = {f1}"));
    g.check("4b", (f2 - 0.63093).abs() <= 1e-4, format!("S(F2) = {f2:.6}"));
    g.check("4c", tie == 1.0, format!("total indifference = {tie}"));
    let px = topological_entropy(&paradox()).unwrap().entropy;
    // 2 = spectral radius of the paradox's mean preference matrix; log_3 2.
    let oracle = 2f64.ln() / 3f64.ln();
    g.check(
        "4d",
        (px - oracle).abs() <= 1e-9 && (px - 0.63093).abs() <= 1e-4,
        format!("paradox aggregate {px:.6} (printed 0.690759 is not reproducible)"),
    );
}

// 5 -----------------------------------------------------------------------

fn ps4() -> PolicySet {
    PolicySet::new(["1", "2", "3", "4"]).unwrap()
}

fn worked_tally() -> ComparisonTally {
    ComparisonTally::from_counts(
        ps4(),
        &[
            ("1", "2", 2, 1, 3),
            ("1", "3", 4, 1, 1),
            ("1", "4", 0, 4, 2),
            ("2", "3", 1, 3, 2),
            ("2", "4", 1, 2, 3),
            ("3", "4", 4, 0, 2),
        ],
    )
    .unwrap()
}

const PAIRS: [(&str, &str); 6] = [("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")];

/// Printed restricted `(π_ij, γ_ij)` for the six candidates.
const ROWS: [[(i64, i64, i64, i64); 6]; 6] = [
    [(5, 12, 1, 6), (2, 3, 1, 6), (0, 1, 2, 3), (1, 6, 1, 2), (1, 6, 1, 3), (1, 2, 0, 1)],
    [(5, 12, 1, 6), (2, 3, 1, 6), (0, 1, 1, 2), (1, 6, 5, 12), (1, 6, 1, 3), (2, 3, 0, 1)],
    [(1, 3, 1, 6), (2, 3, 1, 6), (0, 1, 1, 2), (1, 6, 5, 12), (1, 6, 5, 12), (2, 3, 0, 1)],
    [(1, 3, 1, 6), (5, 12, 1, 6), (0, 1, 2, 3), (1, 6, 1, 2), (1, 6, 5, 12), (2, 3, 0, 1)],
    [(1, 3, 1, 6), (5, 12, 1, 6), (0, 1, 1, 2), (1, 6, 5, 12), (1, 6, 1, 3), (2, 3, 0, 1)],
    [(1, 3, 1, 6), (2, 3, 1, 6), (0, 1, 1, 2), (1, 6, 5, 12), (1, 6, 1, 3), (1, 2, 0, 1)],
];

fn printed_row(k: usize) -> EstimatePoint {
    let rows: Vec<(&str, &str, Rational, Rational)> = PAIRS
        .iter()
        .zip(ROWS[k])
        .map(|(&(a, b), (pn, pd, gn, gd))| (a, b, ratio(pn, pd), ratio(gn, gd)))
        .collect();
    EstimatePoint::from_table(ps4(), &rows).unwrap()
}

/// Pre-registered recomputation: Σ over pairs of -Σ p log10 p for
/// (π, γ, 1 - π - γ), straight from the printed table.
fn oracle_u(k: usize) -> f64 {
    let h = |p: f64| if p > 0.0 { -p * p.log10() } else { 0.0 };
    ROWS[k]
        .iter()
        .map(|&(pn, pd, gn, gd)| {
            let (pi, gamma) = (pn as f64 / pd as f64, gn as f64 / gd as f64);
            h(pi) + h(gamma) + h(1.0 - pi - gamma)
        })
        .sum()
}

fn criterion_5(g: &mut Gate) {
    let t = worked_tally();
    let u: Vec<f64> = (0..6).map(|k| uncertainty(&printed_row(k), &t).unwrap().total).collect();
    let printed = [(0, 2.279224), (1, 2.286507), (2, 2.286507), (4, 2.348982), (5, 2.303824)];
    for (k, want) in printed {
        g.check(
            &format!("5-pi{}", k + 1),
            (u[k] - want).abs() <= 1e-4,
            format!("U = {:.6}, printed {want}", u[k]),
        );
    }
    g.check(
        "5-pi4",
        (u[3] - oracle_u(3)).abs() <= 1e-4 && (u[3] - 2.324433).abs() <= 1e-5,
        format!("U = {:.6} vs oracle {:.6}; printed 2.234382 is a known discrepancy", u[3], oracle_u(3)),
    );
    let raw = raw_estimates(&t);
    let pi1 = restrict_estimates(&raw, &parse_order("1>2>3>4", Some(&ps4())).unwrap()).unwrap();
    let p12 = pi1.get("1", "2").unwrap();
    g.check(
        "5-restrict-pi1",
        p12[0] == ratio(5, 12) && p12[2] == ratio(1, 6),
        format!("pi1 pair (12) -> ({}, {})", p12[0], p12[2]),
    );
    let pi2 = restrict_estimates(&raw, &parse_order("4>1>2>3", Some(&ps4())).unwrap()).unwrap();
    let p14 = pi2.get("1", "4").unwrap();
    g.check(
        "5-restrict-pi2",
        p14[0] == ratio(0, 1) && p14[2] == ratio(1, 2),
        format!("pi2 pair (14) -> ({}, {})", p14[0], p14[2]),
    );
    let subs = maximal_circuit_free_subbigraphs(&induced_bigraph(&raw), 10).unwrap();
    g.check("5-subbigraphs", subs.len() == 6, format!("{} sub-bigraph candidates", subs.len()));
}

// 6 -----------------------------------------------------------------------

/// Hamiltonian paths by trying every vertex permutation.
fn brute_paths(adj: &[Vec<bool>]) -> usize {
    let n = adj.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        if perm.windows(2).all(|w| adj[w[0]][w[1]]) {
            count += 1;
        }
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    count
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn criterion_6(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut odd, mut agree) = (0, 0);
    let trials = 120;
    for k in 0..trials {
        let n = 1 + k % 8;
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (u, v) = if rng.random_bool(0.5) { (i, j) } else { (j, i) };
                adj[u][v] = true;
                edges.push((u, v));
            }
        }
        let d = Digraph::new(PolicySet::new(labels(n)).unwrap(), edges).unwrap();
        let lib = hamiltonian_paths(&d, 10).unwrap().len();
        odd += usize::from(lib % 2 == 1);
        agree += usize::from(lib == brute_paths(&adj));
    }
    g.check(
        "6a",
        odd == trials && agree == trials,
        format!("{odd}/{trials} tournaments odd, {agree}/{trials} match brute force"),
    );

    let mut ok = 0;
    let trials = 120;
    for k in 0..trials {
        let n = 1 + k % 8;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut leq = vec![vec![false; n]; n];
        let mut edges = Vec::new();
        for a in 0..n {
            leq[a][a] = true;
            for b in a + 1..n {
                if rng.random_bool(0.3) {
                    edges.push((order[a], order[b]));
                    leq[order[a]][order[b]] = true;
                }
            }
        }
        for m in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if leq[a][m] && leq[m][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
        let d = Digraph::new(PolicySet::new(labels(n)).unwrap(), edges).unwrap();
        let poset = Poset::from_digraph(&d).unwrap();
        let (antichain, chains) = poset.max_antichain();
        let comparable = |a: usize, b: usize| leq[a][b] || leq[b][a];
        let brute = (0u32..1 << n)
            .filter(|&s| {
                let v: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
                v.iter().all(|&a| v.iter().all(|&b| a == b || !comparable(a, b)))
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap();
        let mut covered: Vec<usize> = chains.concat();
        covered.sort_unstable();
        let chains_ok = covered == (0..n).collect::<Vec<_>>()
            && chains.iter().all(|c| c.iter().all(|&a| c.iter().all(|&b| comparable(a, b))));
        let anti_ok = antichain.iter().all(|&a| antichain.iter().all(|&b| a == b || !comparable(a, b)));
        if antichain.len() == brute && chains.len() == brute && chains_ok && anti_ok {
            ok += 1;
        }
    }
    g.check("6b", ok == trials, format!("{ok}/{trials} posets: antichain = chain cover = brute force"));
}

// 7 -----------------------------------------------------------------------

fn criterion_7(g: &mut Gate) {
    let (_, report) = aggregate_reach(&borda4());
    let pairs = report.unanimity_pairs();
    g.check(
        "7",
        pairs == BTreeSet::from([("y".to_string(), "z".to_string())]),
        format!("unanimities {pairs:?}"),
    );
}

// 8 -----------------------------------------------------------------------

fn square(n: usize, q: u32, side: usize, hood: Neighborhood) -> CultureConfig {
    CultureConfig::new(n, q, TopologySpec::Square { width: side, height: side, neighborhood: hood })
}

/// P(X >= wins) for X ~ Binomial(trials, 1/2).
fn sign_test(wins: usize, trials: usize) -> f64 {
    let mut c = 1f64;
    let mut tail = 0f64;
    for k in 0..=trials {
        if k >= wins {
            tail += c;
        }
        c = c * (trials - k) as f64 / (k + 1) as f64;
    }
    tail / 2f64.powi(trials as i32)
}

fn absorbing_adjacency(cfg: &CultureConfig, o: &RunOutcome) -> bool {
    let topo = cfg.validate().unwrap();
    let settled = topo.edges().all(|(i, j)| {
        let s = similarity(o.field.agent(i), o.field.agent(j)).unwrap();
        s == 0 || s == cfg.n_features
    });
    settled
}

fn criterion_8(g: &mut Gate) {
    // (a)
    let mut c = square(5, 10, 10, Neighborhood::VonNeumann);
    c.seed = 11;
    let a1 = run(&c, None).unwrap().metrics_csv().unwrap();
    let a2 = run(&c, None).unwrap().metrics_csv().unwrap();
    let path = fixture("culture.json");
    let cli_a = cli(&["simulate", path.to_str().unwrap(), "--seed", "3"]);
    let cli_b = cli(&["simulate", path.to_str().unwrap(), "--seed", "3"]);
    g.check(
        "8a",
        a1 == a2 && cli_a.status.success() && cli_a.stdout == cli_b.stdout && !cli_a.stdout.is_empty(),
        "identical seed gives identical metrics CSV (library and CLI)",
    );

    // (b)
    let mut c = square(4, 1, 6, Neighborhood::VonNeumann);
    c.seed = 5;
    let o = run(&c, None).unwrap();
    g.check(
        "8b",
        o.series.iter().all(|s| s.eta == 0.0) && o.stasis && o.periods_run == c.stasis_window,
        format!("q=1: stasis after {} periods (window {})", o.periods_run, c.stasis_window),
    );

    // (c)
    let mut ok = true;
    let mut samples = 0;
    for (q, seed) in [(2u32, 1u64), (3, 2), (10, 3), (1, 4)] {
        let mut c = square(3, q, 5, Neighborhood::Moore);
        c.seed = seed;
        for s in run(&c, None).unwrap().series {
            ok &= (s.s_v == 0.0) == (s.varieties == 1);
            samples += 1;
        }
    }
    g.check("8c", ok, format!("S_v = 0 iff one variety over {samples} samples"));

    // (d)
    let c = square(5, 10, 10, Neighborhood::VonNeumann);
    let seeds: Vec<u64> = (0..20).collect();
    let runs = run_batch(&c, &seeds).unwrap();
    let bad: Vec<u64> = runs
        .iter()
        .filter(|o| {
            o.periods_run > 10_000 || !((o.stasis && absorbing_adjacency(&c, o)) || o.limit_cycle.is_some())
        })
        .map(|o| o.seed)
        .collect();
    let longest = runs.iter().map(|o| o.periods_run).max().unwrap_or(0);
    g.check("8d", bad.is_empty(), format!("20 seeds terminate, longest {longest} periods, failing seeds {bad:?}"));

    // (e)
    const HORIZON: usize = 500;
    let seeds: Vec<u64> = (0..30).collect();
    let mean = |mut c: CultureConfig| -> Vec<f64> {
        c.max_periods = HORIZON;
        run_batch(&c, &seeds).unwrap().iter().map(|o| o.mean_eta(HORIZON)).collect()
    };
    let trend = |g: &mut Gate, id: &str, low: CultureConfig, high: CultureConfig, what: &str| {
        let (lo, hi) = (mean(low), mean(high));
        let wins = lo.iter().zip(&hi).filter(|(l, h)| h > l).count();
        let losses = lo.iter().zip(&hi).filter(|(l, h)| h < l).count();
        let p = sign_test(wins, wins + losses);
        g.check(id, p < 0.05, format!("{what}: {wins} wins, {losses} losses, p = {p:.2e}"));
    };
    trend(
        g,
        "8e-n",
        square(3, 10, 10, Neighborhood::VonNeumann),
        square(8, 10, 10, Neighborhood::VonNeumann),
        "mean eta rises from n=3 to n=8",
    );
    trend(
        g,
        "8e-q",
        square(5, 15, 10, Neighborhood::VonNeumann),
        square(5, 5, 10, Neighborhood::VonNeumann),
        "mean eta falls from q=5 to q=15",
    );
    trend(
        g,
        "8e-hood",
        square(5, 10, 10, Neighborhood::VonNeumann),
        square(5, 10, 10, Neighborhood::Moore),
        "mean eta rises from von Neumann to Moore",
    );

    // (f)
    let mut c = CultureConfig::new(12, 12, TopologySpec::MobianCircle { agents: 144, turn: None });
    c.behavior = Behavior::PeerPossible;
    c.init = InitSpec::Biased { fraction: 0.75 };
    let started = Instant::now();
    let runs = run_batch(&c, &(0..20).collect::<Vec<_>>()).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let few = runs.iter().filter(|o| o.table.rows.len() <= 4).count();
    let counts: Vec<usize> = runs.iter().map(|o| o.table.rows.len()).collect();
    g.check(
        "8f",
        few * 10 >= 7 * runs.len() && secs <= 300.0,
        format!("{few}/20 end with <= 4 varieties {counts:?} in {secs:.1}s"),
    );
}

// 9 -----------------------------------------------------------------------

/// Every non-empty interest subset gets its own subscriber, the worst case
/// for the number of populated groups. A helper follows up every initiation
/// and is never acknowledged, so it stays apathetic.
fn subset_population(interests: usize) -> (Vec<PostingEvent>, InterestMap) {
    let names: Vec<String> = (0..interests).map(|i| format!("i{i}")).collect();
    let mut threads = BTreeMap::new();
    let mut events = Vec::new();
    let mut t = 0;
    for mask in 1u64..1 << interests {
        for (i, name) in names.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1) {
            let thread = format!("t{mask}-{i}");
            threads.insert(thread.clone(), name.clone());
            t += 1;
            events.push(PostingEvent::new(t, &format!("s{mask}"), &thread, EventKind::Initiate, None));
            t += 1;
            events.push(PostingEvent::new(t, "helper", &thread, EventKind::Followup, Some(t - 1)));
        }
    }
    (events, InterestMap { interests: names, threads })
}

fn populated(interests: usize) -> usize {
    let (events, map) = subset_population(interests);
    let ledger = validate_protocol(&events).unwrap();
    let prefs = extract_prefs(&ledger, &map).unwrap();
    partition_subscribers(&prefs, &map.interests).populated()
}

fn criterion_9(g: &mut Gate) {
    let three = populated(3);
    let orders: u64 = count_weak_orders(3).unwrap().try_into().unwrap();
    g.check("9a", three <= 7, format!("3 interests: {three} populated groups (of {orders} orders)"));

    let dir = std::env::temp_dir().join(format!("preflattice-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (events, map) = subset_population(3);
    let mut csv = String::from("t,subscriber,thread,kind,parent\n");
    for e in &events {
        let kind = serde_json::to_value(e.kind).unwrap();
        let parent = e.parent.map(|p| p.to_string()).unwrap_or_default();
        csv += &format!("{},{},{},{},{parent}\n", e.t, e.subscriber, e.thread, kind.as_str().unwrap());
    }
    std::fs::write(dir.join("events.csv"), csv).unwrap();
    std::fs::write(dir.join("interests.json"), serde_json::to_string(&map).unwrap()).unwrap();
    let out = cli(&[
        "scenario-newsgroup",
        dir.join("events.csv").to_str().unwrap(),
        "--interests",
        dir.join("interests.json").to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    let via_cli = v["populated_groups"].as_u64().unwrap_or(u64::MAX);
    g.check("9b", out.status.success() && via_cli <= 7, format!("CLI scenario: {via_cli} populated groups"));
    std::fs::remove_dir_all(&dir).ok();

    let six = populated(6);
    g.check("9c", six <= 62, format!("6 interests: {six} populated groups, bound 62"));
    let subsets: u64 = (1..=6u64).map(|i| (1..=i).fold(1, |c, k| c * (6 - k + 1) / k)).sum();
    g.check(
        "9c-subset-sum",
        six as u64 <= subsets && subsets == 63,
        format!("sum of C(6,i) for i = 1..6 is {subsets}; {six} groups fit that bound"),
    );

    let self_reply = [
        PostingEvent::new(1, "p", "a", EventKind::Initiate, None),
        PostingEvent::new(2, "p", "a", EventKind::Followup, Some(1)),
    ];
    let rejected = matches!(validate_protocol(&self_reply), Err(SelforgError::SelfFollowup { .. }));
    let dir = std::env::temp_dir().join(format!("preflattice-selfreply-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("events.csv"), "t,subscriber,thread,kind,parent\n1,p,a,initiate,\n2,p,a,followup,1\n")
        .unwrap();
    std::fs::write(dir.join("interests.json"), r#"{"interests":["x"],"threads":{"a":"x"}}"#).unwrap();
    let out = cli(&[
        "scenario-newsgroup",
        dir.join("events.csv").to_str().unwrap(),
        "--interests",
        dir.join("interests.json").to_str().unwrap(),
    ]);
    let err = String::from_utf8_lossy(&out.stderr);
    std::fs::remove_dir_all(&dir).ok();
    g.check(
        "9d",
        rejected && out.status.code() == Some(2) && err.contains("\"SelfFollowup\""),
        "self-followups rejected (library and CLI)",
    );

    let log = vec![Grant::new("a", "C"), Grant::new("a", "D")];
    let merged = derive_precedents(&log);
    let mut later = log.clone();
    later.push(Grant::new("b", "C"));
    let split = derive_precedents(&later);
    let ok = merged.merges == vec![vec!["C".to_string(), "D".to_string()]]
        && merged.rules.is_empty()
        && split.merges.is_empty()
        && split.class_of("C") != split.class_of("D")
        && split.ranks_above("C", "D")
        && !split.ranks_above("D", "C")
        && split.rules.len() == 1
        && split.rules[0].antecedent == ["D"]
        && split.rules[0].consequent == ["C"];
    g.check("9e", ok, "C(a), D(a) merge; C(b) splits them with D => C");
}

#[test]
fn acceptance() {
    let mut g = Gate { lines: Vec::new() };
    criterion_1(&mut g);
    criterion_2(&mut g);
    criterion_3(&mut g);
    criterion_4(&mut g);
    criterion_5(&mut g);
    criterion_6(&mut g);
    criterion_7(&mut g);
    criterion_8(&mut g);
    criterion_9(&mut g);
    for (id, ok, detail) in &g.lines {
        println!("{} {id:<16} {detail}", if *ok { "PASS" } else { "FAIL" });
    }
    let failed: Vec<&str> = g.lines.iter().filter(|l| !l.1).map(|l| l.0.as_str()).collect();
    println!("{} of {} criteria passed", g.lines.len() - failed.len(), g.lines.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
