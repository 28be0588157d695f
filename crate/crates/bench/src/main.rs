use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use trtc_bench::output::{self, Format};
use trtc_bench::spec::{Algorithm, ExperimentSpec, SweepAxis};
use trtc_bench::{run_experiment, BenchError, Result};

/// Run max-min beamforming experiments and write one row per trial and
/// algorithm.
#[derive(Debug, Parser)]
#[command(name = "trtc-bench", version)]
struct Cli {
    /// Experiment JSON file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    /// Base seed; trial t uses seed + t.
    #[arg(long)]
    seed: Option<u64>,
    /// Algorithm to run (mm, socp, penalty); repeatable.
    #[arg(long = "algo")]
    algos: Vec<String>,
    /// Sweep axis: power_dbm, users_per_group, radius_m, pathloss_exponent,
    /// elements or none.
    #[arg(long)]
    sweep: Option<String>,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    /// Write runtime_ms as 0 so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

fn load_spec(cli: &Cli) -> Result<ExperimentSpec> {
    let mut spec = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
                path: path.clone(),
                source,
            })?;
            serde_json::from_str(&text)?
        }
        None => ExperimentSpec::default(),
    };
    if let Some(seed) = cli.seed {
        spec.base.system.seed = seed;
    }
    if !cli.algos.is_empty() {
        spec.algorithms = cli
            .algos
            .iter()
            .map(|a| Algorithm::parse(a))
            .collect::<Result<_>>()?;
    }
    if let Some(axis) = &cli.sweep {
        spec.sweep_axis = SweepAxis::parse(axis)?;
    }
    if let Some(values) = &cli.values {
        spec.sweep_values = values.clone();
    }
    if let Some(trials) = cli.trials {
        spec.trials = trials;
    }
    if cli.no_timing {
        spec.record_runtime = false;
    }
    spec.validate()?;
    Ok(spec)
}

fn run(cli: &Cli) -> Result<()> {
    let format = Format::parse(&cli.format)?;
    let spec = load_spec(cli)?;
    let rows = run_experiment(&spec)?;
    match &cli.out {
        Some(path) => output::emit(&rows, path, format),
        None => {
            let text = output::to_string(&rows, format);
            std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|source| BenchError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("trtc-bench: {err}");
            ExitCode::FAILURE
        }
    }
}
