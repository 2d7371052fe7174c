//! Command-line front end.
//!
//! Exit codes: 0 success, 1 scenario validation/initialization failure,
//! 2 runtime failure during runs, 64 usage error.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;

use crate::engine::{init_sim, run_many, RunOptions};

#[derive(Parser, Debug)]
#[command(
    name = "urbandtn",
    about = "Deterministic, headless delay-tolerant network simulator over OSM road graphs",
    disable_version_flag = true
)]
struct Cli {
    /// Scenario configuration file (sim.config)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Base random seed; run r uses seed + r
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of runs, overriding No_of_Simulations
    #[arg(long, value_name = "N")]
    runs: Option<u32>,

    /// Report directory, overriding Report_Directory
    #[arg(long, value_name = "PATH")]
    report_dir: Option<PathBuf>,

    /// Parse and normalize the map, print graph stats, and exit without running
    #[arg(long)]
    validate_map: bool,

    /// Suppress per-run progress output
    #[arg(long)]
    quiet: bool,
}

/// Runs the CLI against `argv` (including the program name) and returns the
/// process exit code.
pub fn cli_main<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    0
                }
                _ => {
                    eprint!("{err}");
                    64
                }
            };
        }
    };

    let options = RunOptions {
        runs_override: cli.runs,
        report_dir_override: cli.report_dir.clone(),
        collect_decisions: false,
    };

    if cli.validate_map {
        return match init_sim(&cli.config, cli.seed) {
            Ok(ctx) => {
                println!("scenario: {}", ctx.general.simulation_name);
                println!("map: {}", ctx.general.map_path.display());
                println!("nodes: {}", ctx.map.nodes.len());
                println!("ways (normalized): {}", ctx.map.ways.len());
                println!("graph: {} vertices, {} edges", ctx.graph.vertex_count(), ctx.graph.edge_count());
                println!("total road length: {:.6} km", ctx.map.total_length_km());
                0
            }
            Err(err) => {
                eprintln!("{err}");
                1
            }
        };
    }

    // Probe initialization separately so scenario problems exit 1.
    match init_sim(&cli.config, cli.seed) {
        Ok(ctx) => {
            if ctx.general.gui_enabled && !cli.quiet {
                eprintln!("note: GUI_Enabled = True is ignored; this simulator is headless");
            }
        }
        Err(err) => {
            eprintln!("{err}");
            return 1;
        }
    }

    match run_many(&cli.config, cli.seed, &options) {
        Ok(outcome) => {
            if !cli.quiet {
                for s in &outcome.summaries {
                    println!(
                        "run {}: events {} delivered {} ratio {:.3} transfers {}",
                        s.run_index,
                        s.events_generated,
                        s.events_delivered,
                        s.delivery_ratio,
                        s.total_transfers
                    );
                }
            }
            if outcome.failures.is_empty() {
                0
            } else {
                for (run_index, err) in &outcome.failures {
                    eprintln!("run {run_index} failed: {err}");
                }
                2
            }
        }
        Err(err) => {
            eprintln!("{err}");
            2
        }
    }
}
