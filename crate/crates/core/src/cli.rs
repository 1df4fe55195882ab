//! The `symdyn` command line. Every command writes one JSON report and exits
//! with 0 on success, 2 on a negative or inconclusive outcome, 1 on error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cylinder::{CylinderUnion, CylinderUnionJson};
use crate::delta::{certify_delta_transitive, counterexample_shift, verify_counterexample};
use crate::livsic::{
    closing_manifest, equivalence_experiment, product_fn, ExperimentConfig, FunctionJson, LocallyConstantFn,
    ProductHolder, SweepConfig,
};
use crate::symbolic::{ShiftSpace, ShiftSpaceJson, SpaceKind};
use crate::systems::{MapSpec, MapSpecJson, ProductSystem, SystemJson};

#[derive(Parser, Debug)]
#[command(name = "symdyn", version, about = "Exact symbolic dynamics reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Common return times for every tuple of cylinders of a given depth
    CheckDelta(CheckDeltaArgs),
    /// Build the gap-excluded shift and verify it is not Δ-transitive
    Counterexample(CounterexampleArgs),
    /// Orbit obstructions, coboundary solve and the bounded-sum experiment
    Livsic(LivsicArgs),
    /// Exhaustive validation of the closing-property constants
    ValidateClosing(OutputArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also print a short human-readable summary on stderr
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Args, Debug)]
pub struct CheckDeltaArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value_t = 40)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    /// Comma-separated powers, e.g. `1,2`
    #[arg(long, value_delimiter = ',', required_unless_present = "space")]
    pub powers: Vec<usize>,
    /// A space file with `excluded_gap_powers`, instead of `--powers`
    #[arg(long, conflicts_with = "powers")]
    pub space: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LivsicArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long)]
    pub system: PathBuf,
    /// `{"functions": [{depth, entries}], "region": {depth, words}, "alpha": a}`
    #[arg(long)]
    pub functions: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub horizon: usize,
    #[arg(long, default_value_t = 4)]
    pub k_max: usize,
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Symdyn(#[from] crate::Error),
}

/// Contents of `--functions`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionsFile {
    pub functions: Vec<FunctionJson>,
    /// The open set `U` for the diagonal sums; the whole space if absent.
    #[serde(default)]
    pub region: Option<CylinderUnionJson>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    1.0
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    command: &'a str,
    config: C,
    exit_code: u8,
    report: R,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

fn load_space(path: &Path) -> Result<ShiftSpace, CliError> {
    let j: ShiftSpaceJson = read_json(path)?;
    Ok(ShiftSpace::from_json(&j)?)
}

fn load_factors(path: &Path, space: &ShiftSpace) -> Result<Vec<MapSpec>, CliError> {
    let j: SystemJson = read_json(path)?;
    Ok(j.into_factors(space)?)
}

fn emit<C: Serialize, R: Serialize>(
    out: &OutputArgs,
    command: &str,
    config: C,
    code: u8,
    report: R,
    summary: String,
) -> Result<u8, CliError> {
    let env = Envelope {
        command,
        config,
        exit_code: code,
        report,
    };
    let mut json = serde_json::to_string_pretty(&env).expect("reports serialize");
    json.push('\n');
    match &out.out {
        Some(path) => fs::write(path, json).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => std::io::stdout()
            .write_all(json.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    if out.pretty {
        eprintln!("{summary}");
    }
    Ok(code)
}

#[derive(Serialize)]
struct DeltaConfig {
    space: ShiftSpaceJson,
    factors: Vec<MapSpecJson>,
    depth: usize,
    n_max: usize,
}

fn check_delta(a: &CheckDeltaArgs) -> Result<u8, CliError> {
    let space = load_space(&a.space)?;
    let factors = load_factors(&a.system, &space)?;
    let report = certify_delta_transitive(&space, &factors, a.depth, a.n_max)?;
    let code = if report.all_satisfied { 0 } else { 2 };
    let summary = format!(
        "{} of {} tuples have a common time (max n = {}); {}",
        report.tuples_satisfied,
        report.tuples_total,
        report.max_n.map_or("-".into(), |n| n.to_string()),
        report.note
    );
    let config = DeltaConfig {
        space: space.to_json(),
        factors: factors.iter().map(MapSpecJson::from_map).collect(),
        depth: a.depth,
        n_max: a.n_max,
    };
    emit(&a.output, "check-delta", config, code, report, summary)
}

#[derive(Serialize)]
struct CounterexampleConfig {
    powers: Vec<usize>,
    n_max: usize,
}

fn counterexample(a: &CounterexampleArgs) -> Result<u8, CliError> {
    let powers = match &a.space {
        Some(path) => match load_space(path)?.kind() {
            SpaceKind::GapExcluded { powers } => powers.clone(),
            _ => {
                return Err(crate::Error::InvalidArgument("the space file has no excluded_gap_powers".into()).into())
            }
        },
        None => a.powers.clone(),
    };
    let (spec, _) = counterexample_shift(&powers)?;
    let report = verify_counterexample(&spec, a.n_max)?;
    let code = if report.verified() { 0 } else { 2 };
    let summary = format!(
        "powers {:?}: empty triple intersection for all n ≤ {}: {}; 0^∞ admissible: {}; verified: {}",
        powers,
        a.n_max,
        report.all_empty,
        report.zero_point_admissible,
        report.verified()
    );
    emit(
        &a.output,
        "counterexample",
        CounterexampleConfig { powers, n_max: a.n_max },
        code,
        report,
        summary,
    )
}

#[derive(Serialize)]
struct LivsicConfig {
    space: ShiftSpaceJson,
    factors: Vec<MapSpecJson>,
    functions: FunctionsFile,
    horizon: usize,
    k_max: usize,
    samples: usize,
    seed: u64,
}

#[derive(Serialize)]
struct LivsicReport {
    holder: ProductHolder,
    experiment: crate::livsic::ExperimentReport,
}

fn livsic(a: &LivsicArgs) -> Result<u8, CliError> {
    let space = load_space(&a.space)?;
    let factors = load_factors(&a.system, &space)?;
    let file: FunctionsFile = read_json(&a.functions)?;
    let fs = file
        .functions
        .iter()
        .map(|j| LocallyConstantFn::from_json(&space, j))
        .collect::<crate::Result<Vec<_>>>()?;
    let region = match &file.region {
        Some(j) => CylinderUnion::from_json(&space, j)?,
        None => CylinderUnion::full(&space),
    };
    let sys = if factors.len() == 1 {
        ProductSystem::single(space.clone(), factors[0].clone())?
    } else {
        ProductSystem::new(space.clone(), factors.clone())?
    };
    let (_, holder) = product_fn(&fs, file.alpha)?;
    let cfg = ExperimentConfig {
        horizon: a.horizon,
        k_max: a.k_max,
        samples: a.samples,
        seed: a.seed,
    };
    let experiment = equivalence_experiment(&fs, &sys, &region, cfg)?;
    let code = if experiment.consistent && experiment.pattern == "pass" { 0 } else { 2 };
    let summary = format!(
        "(i) {:?} (ii) {:?} (iii) {:?} (iv) {:?}; pattern {}, consistent: {}",
        experiment.i.status,
        experiment.ii.status,
        experiment.iii.status,
        experiment.iv.status,
        experiment.pattern,
        experiment.consistent
    );
    let config = LivsicConfig {
        space: space.to_json(),
        factors: factors.iter().map(MapSpecJson::from_map).collect(),
        functions: file,
        horizon: a.horizon,
        k_max: a.k_max,
        samples: a.samples,
        seed: a.seed,
    };
    emit(&a.output, "livsic", config, code, LivsicReport { holder, experiment }, summary)
}

fn validate_closing(out: &OutputArgs) -> Result<u8, CliError> {
    let cfg = SweepConfig::default();
    let manifest = closing_manifest(cfg)?;
    let violations = manifest.violations();
    let code = if violations == 0 { 0 } else { 2 };
    let summary = format!(
        "{} factor sweeps and the product sweep: {} violations",
        manifest.factors.len(),
        violations
    );
    emit(out, "validate-closing", cfg, code, manifest, summary)
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: &Cli) -> u8 {
    let result = match &cli.command {
        Command::CheckDelta(a) => check_delta(a),
        Command::Counterexample(a) => counterexample(a),
        Command::Livsic(a) => livsic(a),
        Command::ValidateClosing(a) => validate_closing(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        1
    })
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(&cli))
}
