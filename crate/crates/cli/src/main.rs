use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use log::info;

use fogsim::engine::{streams, MetricsLedger};
use fogsim::experiment::{run_algorithms, Algorithm};
use fogsim::policy::{rng_stream, Field};
use fogsim::range::ValueRange;
use fogsim::report::{result_rows, summary_rows, write_rows, SweepRow};
use fogsim::traceio::{load_scenario, synthetic_trace, write_trace_csv, Scenario};

#[derive(Debug, Parser)]
#[command(name = "fogsim", version, about = "Mobility-aware fog offloading simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Inputs {
    /// Scenario configuration (JSON). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Mobility trace: canonical CSV, or SUMO FCD when the file ends in .xml.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Fog layout CSV. A grid layout is generated when omitted.
    #[arg(long)]
    fog: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one algorithm on one scenario; writes results.csv and summary.csv.
    Run {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        algo: Algorithm,
    },
    /// Re-run a scenario for each value of one parameter; writes sweep.csv.
    Sweep {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Comma-separated parameter values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Comma-separated algorithms.
        #[arg(long, value_delimiter = ',', default_value = "mofco,gcga,ra,onlycloud,onlylocal")]
        algos: Vec<Algorithm>,
    },
    /// Write a random-waypoint trace as canonical CSV.
    GenTrace {
        #[arg(long)]
        ues: usize,
        /// Horizon in seconds; one sample per UE per second.
        #[arg(long)]
        horizon: u32,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2000.0)]
        width: f64,
        #[arg(long, default_value_t = 2000.0)]
        height: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepParam {
    #[value(name = "n_ues", alias = "n-ues")]
    NUes,
    #[value(name = "n_fog", alias = "n-fog")]
    NFog,
    /// Fixed capacity of every fog node, Hz.
    #[value(name = "fog_capacity", alias = "fog-capacity")]
    FogCapacity,
    /// Migration cost coefficient.
    Delta,
}

impl SweepParam {
    fn label(self) -> &'static str {
        match self {
            SweepParam::NUes => "n_ues",
            SweepParam::NFog => "n_fog",
            SweepParam::FogCapacity => "fog_capacity",
            SweepParam::Delta => "delta",
        }
    }

    fn apply(self, scenario: &mut Scenario, value: f64) -> Result<(), Failure> {
        let count = || {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Failure::invalid(format!("{} needs whole numbers, got {value}", self.label())))
            }
        };
        let config = &mut scenario.config;
        match self {
            SweepParam::NUes => config.n_ues = count()?,
            SweepParam::NFog | SweepParam::FogCapacity if scenario.layout.is_some() => {
                return Err(Failure::invalid(format!("cannot sweep {} with a fixed --fog layout", self.label())));
            }
            SweepParam::NFog => config.n_fog = count()?,
            SweepParam::FogCapacity => config.fog_capacity_hz = ValueRange::fixed(value),
            SweepParam::Delta => config.migration_coeff = value,
        }
        scenario.validate().map_err(Failure::from)
    }
}

/// A failed command: message plus exit code (1 bad input, 2 I/O).
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Self {
            code: 2,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<fogsim::Error> for Failure {
    fn from(e: fogsim::Error) -> Self {
        Self {
            code: if e.is_io() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("FOGSIM_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() && !e.render().to_string().contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Run { inputs, algo } => cmd_run(&inputs, algo),
        Command::Sweep {
            inputs,
            param,
            values,
            algos,
        } => cmd_sweep(&inputs, param, &values, &algos),
        Command::GenTrace {
            ues,
            horizon,
            out,
            seed,
            width,
            height,
        } => cmd_gen_trace(ues, horizon, &out, seed, Field { width_m: width, height_m: height }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(inputs: &Inputs) -> Result<Scenario, Failure> {
    Ok(load_scenario(
        inputs.config.as_deref(),
        inputs.trace.as_deref(),
        inputs.fog.as_deref(),
    )?)
}

fn write_csv<T: serde::Serialize>(path: &Path, rows: &[T]) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| Failure::io(path, e))?;
    write_rows(rows, BufWriter::new(file)).map_err(|e| Failure::io(path, e))
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))
}

fn cmd_run(inputs: &Inputs, algo: Algorithm) -> Result<(), Failure> {
    let scenario = load(inputs)?;
    let ledgers = run_algorithms(&scenario, &[algo], inputs.seed)?;
    let ledger = &ledgers[0];
    info!(
        "{}: {} tasks, total cost {:.3}, {} migrations",
        ledger.algo,
        ledger.records.len(),
        ledger.total_cost(),
        ledger.migration_count()
    );
    create_dir(&inputs.out)?;
    write_csv(&inputs.out.join("results.csv"), &result_rows(ledger))?;
    write_csv(&inputs.out.join("summary.csv"), &summary_rows(&[ledger]))
}

fn cmd_sweep(inputs: &Inputs, param: SweepParam, values: &[f64], algos: &[Algorithm]) -> Result<(), Failure> {
    if values.is_empty() {
        return Err(Failure::invalid("--values is empty"));
    }
    if algos.is_empty() {
        return Err(Failure::invalid("--algos is empty"));
    }
    let base = load(inputs)?;
    let mut rows = Vec::new();
    for &value in values {
        let mut scenario = base.clone();
        param.apply(&mut scenario, value)?;
        info!("{} = {value}", param.label());
        let ledgers = run_algorithms(&scenario, algos, inputs.seed)?;
        // Normalized against the costliest task of this sweep point only.
        let refs: Vec<&MetricsLedger> = ledgers.iter().collect();
        rows.extend(summary_rows(&refs).into_iter().map(|s| SweepRow {
            param: param.label().to_string(),
            value,
            algo: s.algo,
            n_ues: s.n_ues,
            n_fog: s.n_fog,
            total_cost: s.total_cost,
            normalized_cost: s.normalized_cost,
            migration_count: s.migration_count,
            wall_time_s: s.wall_time_s,
            seed: s.seed,
        }));
    }
    create_dir(&inputs.out)?;
    write_csv(&inputs.out.join("sweep.csv"), &rows)
}

fn cmd_gen_trace(ues: usize, horizon: u32, out: &Path, seed: u64, field: Field) -> Result<(), Failure> {
    if ues == 0 {
        return Err(Failure::invalid("--ues must be at least 1"));
    }
    if !(field.width_m > 0.0 && field.height_m > 0.0 && field.width_m.is_finite() && field.height_m.is_finite()) {
        return Err(Failure::invalid("field dimensions must be positive"));
    }
    let samples = synthetic_trace(ues, field, horizon, &mut rng_stream(seed, streams::TRACE));
    let file = File::create(out).map_err(|e| Failure::io(out, e))?;
    write_trace_csv(&samples, BufWriter::new(file)).map_err(|e| Failure::io(out, e))
}
