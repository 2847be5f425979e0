//! `preflattice`: preference-hierarchy analysis and simulation from the shell.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "preflattice", version, about = "Aggregate preference hierarchies and simulate self-organising groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the number of weak orders of N policies.
    CountOrders {
        /// Number of policies, at least 1.
        n: usize,
    },
    /// List every weak order of a policy set as JSON.
    #[command(after_help = "Output: {\"policies\":[..],\"count\":K,\"orders\":[\"a>b=c\",..]}")]
    EnumerateOrders(EnumerateArgs),
    /// Topological or Markov entropy of a profile.
    #[command(after_help = PROFILE_SCHEMA)]
    Entropy(EntropyArgs),
    /// Unanimities, majority cycles and condensation of a profile.
    #[command(after_help = PROFILE_SCHEMA)]
    Aggregate(AggregateArgs),
    /// Borda totals and position counts of a profile.
    #[command(after_help = PROFILE_SCHEMA)]
    Borda(BordaArgs),
    /// Rank candidate orders by likelihood from paired comparisons.
    #[command(after_help = COMPARISONS_SCHEMA)]
    Mlorder(MlorderArgs),
    /// Maximum antichain and minimum chain partition of a poset.
    #[command(after_help = "POSET is JSON: {\"elements\":[\"a\",..],\"relations\":[[\"a\",\"b\"],..]}\n\
        where each pair [u,v] means u <= v. Reflexive pairs may be omitted.")]
    Antichain {
        poset: PathBuf,
    },
    /// Take-grant connectivity between two vertices.
    #[command(after_help = "GRAPH is JSON: {\"vertices\":[{\"name\":\"s\",\"kind\":\"subject|object\"},..],\n\
        \"edges\":[{\"from\":\"s\",\"to\":\"o\",\"label\":\"take|grant|read|write\"},..]}")]
    TgCheck(TgArgs),
    /// Run the cultural-dissemination simulator.
    #[command(after_help = CONFIG_SCHEMA)]
    Simulate(SimulateArgs),
    /// Analyse a newsgroup posting record end to end.
    #[command(after_help = SCENARIO_SCHEMA)]
    ScenarioNewsgroup(ScenarioArgs),
}

const PROFILE_SCHEMA: &str = "PROFILE is JSON: {\"policies\":[\"w\",\"x\",..],\n\
    \"voters\":[{\"id\":\"v1\",\"ranking\":[[\"w\"],[\"x\",\"y\"],..]},..]}\n\
    Each ranking lists tie-groups from most to least preferred; unlisted policies form a bottom group.";

const COMPARISONS_SCHEMA: &str = "COMPARISONS is CSV, either outcomes with header `first,second,outcome`\n\
    (outcome one of >, <, =) or counts with header `i,j,s_ij,s_ji,t`.\n\
    --candidates is a text file with one order per line, e.g. `1>2=3>4`.";

const CONFIG_SCHEMA: &str = "CONFIG is JSON: {\"n_features\":5,\"traits_per_feature\":10,\n\
    \"topology\":{\"kind\":\"square\",\"width\":10,\"height\":10,\"neighborhood\":\"von-neumann|moore\"}\n\
      | {\"kind\":\"mobian-circle\",\"agents\":144,\"turn\":12} | {\"kind\":\"subset-tree\",\"elements\":3}\n\
      | {\"kind\":\"subset-lattice\",\"elements\":3},\n\
    \"behavior\":\"egoistic|peer-possible\",\"seed\":0,\"k\":null,\"epsilon\":0.0,\"stasis_window\":25,\n\
    \"max_periods\":10000,\"init\":{\"kind\":\"uniform\"}|{\"kind\":\"biased\",\"fraction\":0.75}}\n\
    Without --out the metrics CSV (t,eta,s_v,s_c,varieties) goes to stdout.\n\
    With --out DIR each seed writes metrics-SEED.csv, varieties-SEED.json and\n\
    snapshot-SEED-T.csv (x,y,h,hhat,variety_id); DIR/summary.json lists every run.";

const SCENARIO_SCHEMA: &str = "EVENTS is CSV with header `t,subscriber,thread,kind,parent`;\n\
    kind is initiate|followup|ack and parent is empty for initiations.\n\
    --interests is JSON: {\"interests\":[\"a\",\"b\",..],\"threads\":{\"thread-id\":\"a\",..}}\n\
    --grants is JSON: [{\"accessor\":\"x\",\"role\":\"C\",\"custodians\":[\"m\"]},..]";

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Number of policies, labelled 1..N.
    #[arg(required_unless_present = "policies", conflicts_with = "policies")]
    pub n: Option<usize>,
    /// Comma-separated policy labels.
    #[arg(long, value_delimiter = ',')]
    pub policies: Option<Vec<String>>,
    /// Largest policy count to enumerate (default 7, or PREFLATTICE_MAX_VERTICES).
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EntropyMode {
    Topo,
    Markov,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum RuleArg {
    #[default]
    ClimbOneRung,
    JumpToTop,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long, value_enum)]
    pub mode: EntropyMode,
    pub profile: PathBuf,
    /// Transition rule for the Markov chain.
    #[arg(long, value_enum, default_value_t = RuleArg::ClimbOneRung)]
    pub rule: RuleArg,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    pub profile: PathBuf,
    /// strict-majority, pairwise, or at-least:K.
    #[arg(long, default_value = "strict-majority", value_parser = commands::parse_majority)]
    pub majority: preflattice_core::aggregate::MajorityRule,
    /// Print a readable summary instead of JSON.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum TiesArg {
    #[default]
    SharedRank,
    Averaged,
}

#[derive(Debug, Args)]
pub struct BordaArgs {
    pub profile: PathBuf,
    #[arg(long, value_enum, default_value_t = TiesArg::SharedRank)]
    pub ties: TiesArg,
    /// Also report position counts to this depth (1 or 2; strong orders only).
    #[arg(long)]
    pub positions: Option<u8>,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum CandidateArg {
    #[default]
    Subbigraph,
    AllWeak,
}

#[derive(Debug, Args)]
pub struct MlorderArgs {
    pub comparisons: PathBuf,
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = CandidateArg::Subbigraph)]
    pub mode: CandidateArg,
    /// Largest policy count for candidate generation (default 6, or PREFLATTICE_MAX_VERTICES).
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TgArgs {
    pub graph: PathBuf,
    #[arg(long = "from")]
    pub from: String,
    #[arg(long = "to")]
    pub to: String,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub config: PathBuf,
    /// Write a grid snapshot every K periods (requires --out).
    #[arg(long, requires = "out")]
    pub snapshot_every: Option<usize>,
    /// Number of runs, seeded SEED, SEED+1, ...
    #[arg(long, default_value_t = 1)]
    pub replicates: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the seed in CONFIG.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum GroupTopologyArg {
    #[default]
    SubsetLattice,
    BinaryTree,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    pub events: PathBuf,
    #[arg(long)]
    pub interests: PathBuf,
    #[arg(long)]
    pub grants: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GroupTopologyArg::SubsetLattice)]
    pub topology: GroupTopologyArg,
    /// Seed of the group-stability run.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Share of each group's members elected manager.
    #[arg(long, default_value_t = preflattice_selforg::groups::DEFAULT_MANAGER_FRACTION)]
    pub manager_fraction: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let body = msg.split("\nUsage:").next().unwrap_or("").trim_start_matches("error: ");
            let text = body.split_whitespace().collect::<Vec<_>>().join(" ");
            eprintln!("{}", CliError::input("Usage", text).to_json());
            return ExitCode::from(error::EXIT_INPUT as u8);
        }
    };
    match commands::dispatch(cli.command, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind == error::BROKEN_PIPE => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code as u8)
        }
    }
}
