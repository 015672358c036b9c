use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gencat_cli::commands::{cmd_generate, cmd_measure, cmd_reproduce, CommandOutput};
use gencat_cli::{CliError, CliResult, EXIT_WARNINGS};

/// Attributed graph generator with controllable class structure.
///
/// Exit codes: 0 success, 1 invalid input, 2 I/O error, 3 infeasible
/// parameters, 4 success with warnings. GENCAT_THREADS caps the number of
/// worker threads.
#[derive(Parser)]
#[command(name = "gencat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a JSON config.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Extract the class structure of a labeled graph and generate a similar
    /// one, optionally at another size.
    Reproduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Node count of the output (default: same as input).
        #[arg(long)]
        nodes: Option<usize>,
        /// Edge count of the output (default: same mean degree).
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print class features and community statistics of a labeled graph.
    Measure {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        attrs: Option<PathBuf>,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("GENCAT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            CliError::Invalid(format!(
                "GENCAT_THREADS must be a positive integer, got '{value}'"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("cannot set up {threads} threads: {e}")))
}

fn run(cli: Cli) -> CliResult<CommandOutput> {
    configure_threads()?;
    match cli.command {
        Command::Generate { config, out, seed } => cmd_generate(&config, &out, seed),
        Command::Reproduce {
            graph,
            labels,
            nodes,
            edges,
            out,
            seed,
        } => cmd_reproduce(&graph, &labels, &out, nodes, edges, seed),
        Command::Measure {
            graph,
            labels,
            attrs,
        } => {
            let out = cmd_measure(&graph, &labels, attrs.as_deref())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&out.report).expect("reports serialize")
            );
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            if out.warnings.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_WARNINGS as u8)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
