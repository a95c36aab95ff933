//! Command-line front end: generate footprints, run scenarios, verify
//! traces, and execute batch experiments.
//!
//! Exit codes for `run` encode the outcome: 0 full success, 2 node success,
//! 3 stall, 4 monotonicity violation, 5 model violation, 6 round limit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use decon_core::experiment::{run_experiment, ExperimentConfig};
use decon_core::generate;
use decon_core::metrics::MetricsRow;
use decon_core::scenario::{run_scenario, Scenario};
use decon_core::trace::Trace;
use decon_core::verify::verify_trace;

/// Environment variable naming the default output directory for traces and
/// metrics files.
const OUT_DIR_ENV: &str = "DECON_OUT_DIR";

#[derive(Parser)]
#[command(name = "decon", about = "Monotone decontamination simulator for dynamic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a footprint and print or write its canonical text form.
    Generate(GenerateArgs),
    /// Run one scenario file and write its trace; the exit status encodes
    /// the outcome.
    Run(RunArgs),
    /// Re-validate a trace file independently of the engine.
    VerifyTrace(VerifyArgs),
    /// Run a batch experiment matrix and print the summary table.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// path | cycle | tree | wheel | complete_bipartite | figure4 | random_connected
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    depth: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Override the run seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the agent budget (integer or formula over n, d, k).
    #[arg(long)]
    agents: Option<String>,
    #[arg(long)]
    max_rounds: Option<u64>,
    #[arg(long)]
    stall_window: Option<u64>,
    /// Trace output path; defaults to <OUT_DIR>/<id>.trace.jsonl when the
    /// output directory is set.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    trace: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment matrix file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Directory for per-cell metrics files; defaults to the output
    /// directory environment variable, or none.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn out_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode> {
    let fp = generate::generate(&args.family, args.n, args.d, args.k, args.depth, args.seed)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let text = fp.to_text();
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!(
                "wrote {} ({} nodes, {} edges, d={}, k={})",
                path.display(),
                fp.node_count(),
                fp.edge_count(),
                fp.diameter(),
                fp.cyclomatic_number()
            );
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(args: &RunArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.scenario)
        .with_context(|| format!("reading {}", args.scenario.display()))?;
    let mut sc = Scenario::from_toml(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
    if let Some(seed) = args.seed {
        sc.run.seed = Some(seed);
        if sc.adversary.seed.is_none() {
            sc.adversary.seed = Some(seed);
        }
    }
    if let Some(agents) = &args.agents {
        sc.run.agents = agents.clone();
    }
    if args.max_rounds.is_some() {
        sc.run.max_rounds = args.max_rounds;
    }
    if args.stall_window.is_some() {
        sc.run.stall_window = args.stall_window;
    }
    if sc.id.is_none() {
        sc.id = args
            .scenario
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned());
    }

    let run = run_scenario(&sc).map_err(|e| anyhow::anyhow!("{e}"))?;
    for warning in &run.warnings {
        eprintln!("warning: {warning}");
    }

    let trace_path = args.out.clone().or_else(|| {
        out_dir(None).map(|dir| {
            dir.join(format!(
                "{}.trace.jsonl",
                sc.id.clone().unwrap_or_else(|| "scenario".into())
            ))
        })
    });
    if let Some(path) = trace_path {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(&path, run.trace.to_jsonl())
            .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("trace: {}", path.display());
    }

    println!("{}", MetricsRow::header_line());
    println!("{}", run.metrics.to_line());
    println!(
        "outcome: {:?} at round {}{}",
        run.outcome.kind,
        run.outcome.round,
        if run.outcome.detail.is_empty() {
            String::new()
        } else {
            format!(" ({})", run.outcome.detail)
        }
    );
    Ok(ExitCode::from(run.outcome.kind.exit_code() as u8))
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.trace)
        .with_context(|| format!("reading {}", args.trace.display()))?;
    let trace = Trace::from_jsonl(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
    let report = verify_trace(&trace).map_err(|e| anyhow::anyhow!("{e}"))?;
    match report.divergence {
        None => {
            println!(
                "ok: {} rounds re-validated, outcome {:?} consistent",
                report.rounds_checked, trace.outcome.kind
            );
            Ok(ExitCode::SUCCESS)
        }
        Some(divergence) => {
            println!(
                "divergence after {} verified rounds: {divergence}",
                report.rounds_checked
            );
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let cfg = ExperimentConfig::from_toml(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
    let report = run_experiment(&cfg);
    print!("{}", report.table());
    if let Some(dir) = out_dir(args.out.as_deref()) {
        std::fs::create_dir_all(&dir)?;
        for cell in &report.cells {
            let mut lines = String::new();
            lines.push_str(MetricsRow::header_line());
            lines.push('\n');
            for row in &cell.rows {
                lines.push_str(&row.to_line());
                lines.push('\n');
            }
            for failure in &cell.failures {
                lines.push_str(&format!("# error: {failure}\n"));
            }
            let path = dir.join(format!("{}.metrics.txt", cell.name));
            std::fs::write(&path, lines)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        eprintln!("metrics written to {}", dir.display());
    }
    let had_errors = report.cells.iter().any(|c| !c.failures.is_empty());
    Ok(if had_errors {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Run(args) => cmd_run(args),
        Command::VerifyTrace(args) => cmd_verify(args),
        Command::Experiment(args) => cmd_experiment(args),
    }
}
