//! `gridbench` — run grid-computation kernels through the instrumented
//! cache simulator, emit sweep CSVs, fit scaling exponents, and verify
//! results against brute-force reference evaluators.
//!
//! Exit statuses: 0 success, 1 I/O failure, 2 usage error (unknown
//! kind/preset, bad config, size over the reference cap, too few sizes to
//! fit), 3 verification mismatch.

use clap::{Parser, Subcommand};
use gridbench::{
    csv_string, execute, fit_csv, verify, write_csv, CliError, ExperimentConfig, Policy,
};
use gridsim::Kind;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "gridbench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        /// Path to the config (see the config module docs for the schema).
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a sweep given entirely by flags.
    Sweep {
        /// Kernel name, e.g. matmul, lws, kleene.
        #[arg(long)]
        kind: String,
        /// Problem sizes, comma separated, strictly ascending.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Cache capacity M in entries.
        #[arg(long = "cache")]
        cache: usize,
        /// Line size B in entries.
        #[arg(long = "line")]
        line: usize,
        /// Write costs, comma separated, each >= 1.
        #[arg(long, value_delimiter = ',', required = true)]
        omega: Vec<f64>,
        /// Split policy: classic or asym.
        #[arg(long, default_value = "classic")]
        policy: String,
        /// Instance seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Weight preset (default: random(<seed>,9)).
        #[arg(long)]
        preset: Option<String>,
        /// Recursion leaf size.
        #[arg(long, default_value_t = 8)]
        threshold: usize,
    },
    /// Solve one instance and compare against the reference evaluator.
    Verify {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Perturb one output entry before checking (forces a mismatch).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Fit log2(metric) vs log2(n) slopes over a sweep CSV.
    Fit {
        /// Input CSV produced by run or sweep.
        #[arg(long = "in")]
        input: PathBuf,
        /// Metric column: sym_Q, asym_Q, work, or span.
        #[arg(long)]
        metric: String,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            run_experiment(&cfg)
        }
        Command::Sweep {
            kind,
            sizes,
            cache,
            line,
            omega,
            policy,
            seed,
            out,
            preset,
            threshold,
        } => {
            let cfg = ExperimentConfig {
                kind,
                sizes,
                cache_entries: cache,
                line_entries: line,
                omegas: omega,
                policy: policy.parse::<Policy>().map_err(CliError::Usage)?,
                base_threshold: threshold,
                seed,
                preset,
                out,
            };
            run_experiment(&cfg)
        }
        Command::Verify { kind, size, seed, inject_fault } => {
            let kind = kind.parse::<Kind>().map_err(CliError::Usage)?;
            verify(kind, size, seed, inject_fault)?;
            println!("verify {kind} n={size} seed={seed}: pass");
            Ok(())
        }
        Command::Fit { input, metric } => {
            for line in fit_csv(&input, &metric)? {
                println!("{line}");
            }
            Ok(())
        }
    }
}

fn run_experiment(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let rows = execute(cfg)?;
    write_csv(&rows, &cfg.out)?;
    print!("{}", csv_string(&rows));
    Ok(())
}
