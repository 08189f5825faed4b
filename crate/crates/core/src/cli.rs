//! Command-line front end: `gen`, `vcdim`, `run`, `experiment`, `search`.
//!
//! Exit codes: 0 on success, 2 on flag/validation errors (with usage), 1 on
//! runtime errors. The step size comes from `--epsilon`, then the
//! `BATCHCOVER_EPSILON` environment variable, then `epsilon` in the
//! `--config` TOML file, then the default of 0.001.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::generators::{gen_batched_worst, gen_online_worst};
use crate::harmonic::pow2;
use crate::harness::{adversary_search, emit_csv, emit_svg, run_grid, ExperimentGrid};
use crate::instance::Instance;
use crate::solvers::{run, Algorithm, DPolicy, ElementOrder, SolverConfig};
use crate::vc::{batch_vc_dimensions, check_adversary_restriction};

pub const EPSILON_ENV: &str = "BATCHCOVER_EPSILON";
pub const DEFAULT_EPSILON: f64 = 0.001;

#[derive(Debug, Parser)]
#[command(
    name = "batchcover",
    version,
    about = "Fractional batched set cover experiments"
)]
pub struct Cli {
    /// TOML file with defaults (currently: epsilon)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Increase log verbosity (-v info, -vv debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a canonical adversarial instance as JSON
    Gen(GenArgs),
    /// Print per-batch VC-dimensions and the restriction verdict
    Vcdim(VcdimArgs),
    /// Run one algorithm on an instance and print the result as JSON
    Run(RunArgs),
    /// Sweep (z, m, algorithm) over the I*_z(m) families
    Experiment(ExperimentArgs),
    /// Exhaustive adversary search over short online sequences
    Search(SearchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Online,
    Batched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Trivial,
    Dedicated,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Trivial => Algorithm::Trivial,
            AlgorithmArg::Dedicated => Algorithm::Dedicated,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub z: Option<u32>,
    /// Output path, `-` for standard output
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VcdimArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub z: Option<u32>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub algorithm: AlgorithmArg,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// `m` (default), `auto` (max row sparsity of the instance) or a value
    #[arg(long, default_value = "m")]
    pub d: String,
    /// Shuffle the within-batch order of the trivial algorithm
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0u32, 1, 2, 3, 4])]
    pub z: Vec<u32>,
    #[arg(long, default_value_t = 30)]
    pub m_max: usize,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![AlgorithmArg::Trivial, AlgorithmArg::Dedicated])]
    pub algorithms: Vec<AlgorithmArg>,
    /// Relabel adaptively against the running algorithm (the default)
    #[arg(long, overrides_with = "no_adaptive")]
    pub adaptive: bool,
    /// Use the static canonical labels instead
    #[arg(long, overrides_with = "adaptive")]
    pub no_adaptive: bool,
    /// CSV output path, `-` for standard output (the default when no output is given)
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Exit non-zero if any cell failed
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub max_len: usize,
    #[arg(long, value_enum)]
    pub algorithm: AlgorithmArg,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    epsilon: Option<f64>,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .try_init();

    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn resolve_epsilon(flag: Option<f64>, config: Option<&Path>) -> std::result::Result<f64, Failure> {
    let eps = if let Some(e) = flag {
        e
    } else if let Ok(raw) = std::env::var(EPSILON_ENV) {
        raw.trim()
            .parse()
            .map_err(|_| usage(format!("{EPSILON_ENV}={raw:?} is not a number")))?
    } else if let Some(path) = config {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: ConfigFile =
            toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        cfg.epsilon.unwrap_or(DEFAULT_EPSILON)
    } else {
        DEFAULT_EPSILON
    };
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(usage(format!("epsilon must be positive, got {eps}")));
    }
    Ok(eps)
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Instance::from_json(&text)
}

fn write_text(path: &Path, text: &str, out: &mut dyn Write) -> Result<()> {
    if path == Path::new("-") {
        out.write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e))
    } else {
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

fn check_window(m: usize, z: u32) -> std::result::Result<(), Failure> {
    match pow2(z) {
        Some(w) if m >= w => Ok(()),
        _ => Err(usage(Error::AdversaryImpossible { m, z }.to_string())),
    }
}

fn execute(
    cli: &Cli,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Gen(args) => {
            if args.m == 0 {
                return Err(usage("--m must be at least 1"));
            }
            let inst = match args.family {
                FamilyArg::Online => {
                    if args.z.is_some_and(|z| z != 0) {
                        return Err(usage("--z is only meaningful for --family batched"));
                    }
                    gen_online_worst(args.m)?
                }
                FamilyArg::Batched => {
                    let z = args.z.unwrap_or(0);
                    check_window(args.m, z)?;
                    gen_batched_worst(args.m, z)?
                }
            };
            let mut text = inst.to_json();
            text.push('\n');
            write_text(&args.out, &text, out)?;
        }
        Command::Vcdim(args) => {
            let inst = read_instance(&args.instance)?;
            inst.ensure_valid()?;
            let dims = batch_vc_dimensions(&inst)?;
            for (k, v) in dims.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "batch {}: size {} vc {v}",
                    k + 1,
                    inst.batches[k].len()
                );
            }
            if let Some(z) = args.z {
                let ok = check_adversary_restriction(&inst, z)?;
                let verdict = if ok { "satisfied" } else { "violated" };
                let _ = writeln!(out, "restriction VCD >= {z}: {verdict}");
            }
        }
        Command::Run(args) => {
            let epsilon = resolve_epsilon(args.epsilon, config)?;
            let d_policy: DPolicy = args.d.parse().map_err(|e: Error| usage(e.to_string()))?;
            let inst = read_instance(&args.instance)?;
            let order = match args.seed {
                Some(seed) => ElementOrder::Shuffled { seed },
                None => ElementOrder::Position,
            };
            let result = run(
                &inst,
                &SolverConfig {
                    algorithm: args.algorithm.into(),
                    epsilon,
                    d_policy,
                    order,
                },
            )?;
            let text = serde_json::to_string(&result).expect("run result serializes");
            let _ = writeln!(out, "{text}");
        }
        Command::Experiment(args) => {
            let epsilon = resolve_epsilon(args.epsilon, config)?;
            if args.m_max == 0 {
                return Err(usage("--m-max must be at least 1"));
            }
            let grid = ExperimentGrid {
                z_values: args.z.clone(),
                m_range: 1..=args.m_max,
                epsilon,
                algorithms: args.algorithms.iter().map(|&a| a.into()).collect(),
                adaptive: !args.no_adaptive,
                ..ExperimentGrid::default()
            };
            let result = run_grid(&grid);
            for f in &result.failed {
                let _ = writeln!(
                    err,
                    "cell z={} m={} {} failed: {}",
                    f.z, f.m, f.algorithm, f.error
                );
            }
            let csv_path = match (&args.csv, &args.svg) {
                (None, None) => Some(PathBuf::from("-")),
                (csv, _) => csv.clone(),
            };
            if let Some(path) = csv_path {
                if path == Path::new("-") {
                    let mut buf = Vec::new();
                    crate::harness::write_csv(&result, &mut buf)?;
                    out.write_all(&buf).map_err(|e| Error::io("<stdout>", e))?;
                } else {
                    emit_csv(&result, &path)?;
                }
            }
            if let Some(path) = &args.svg {
                if path == Path::new("-") {
                    let svg = crate::harness::render_svg(&result)?;
                    out.write_all(svg.as_bytes())
                        .map_err(|e| Error::io("<stdout>", e))?;
                } else {
                    emit_svg(&result, path)?;
                }
            }
            if args.strict && !result.failed.is_empty() {
                return Err(Failure::Runtime(Error::InvalidArguments(format!(
                    "{} cell(s) failed",
                    result.failed.len()
                ))));
            }
        }
        Command::Search(args) => {
            let epsilon = resolve_epsilon(args.epsilon, config)?;
            let algorithm: Algorithm = args.algorithm.into();
            let outcome = adversary_search(args.m, algorithm, epsilon, args.max_len)?;
            let sequence: Vec<Vec<usize>> = outcome
                .best_sequence
                .iter()
                .map(|s| s.iter().map(|j| j + 1).collect())
                .collect();
            let text = json!({
                "m": args.m,
                "max_len": args.max_len,
                "algorithm": algorithm,
                "epsilon": epsilon,
                "best_ratio": outcome.best_ratio,
                "best_sequence": sequence,
                "evaluated": outcome.evaluated,
            });
            let _ = writeln!(out, "{text}");
        }
    }
    Ok(())
}
