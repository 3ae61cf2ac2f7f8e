use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use planar3b::commands::{self, DEFAULT_RESONANCE_N_MAX, DEFAULT_SPECTRUM_N_MAX, DEFAULT_WAVEFUNCTION_N_MAX};
use planar3b::config::RunConfig;
use planar3b::error::CliError;
use planar3b::validate;

/// Effective potentials and three-body spectra for planar heavy-heavy-light systems.
#[derive(Debug, Parser)]
#[command(name = "planar3b", version)]
struct Cli {
    /// INI-style configuration file; every key is optional.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for parameter sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory; overrides `[output] dir`.
    #[arg(long, global = true, env = "PLANAR3B_OUTPUT")]
    output: Option<PathBuf>,
    /// More log output; repeat for debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Effective potential curves over the sweep grid, one CSV per branch.
    Potentials {
        /// Comma-separated branch tags: s+, s-, I+, I-, I0, II+, II-, II0, unified.
        #[arg(long)]
        branch: Option<String>,
    },
    /// WKB spectra for the configured mass ratios with the level-ratio column.
    Spectrum {
        #[arg(long, default_value_t = DEFAULT_SPECTRUM_N_MAX)]
        n_max: u32,
    },
    /// Resonance positions in a1 and the atom-molecule cross-section.
    Resonances {
        #[arg(long, default_value_t = DEFAULT_RESONANCE_N_MAX)]
        n_max: u32,
    },
    /// Numerov bound states and light-particle fields.
    Wavefunction {
        #[arg(long, default_value_t = DEFAULT_WAVEFUNCTION_N_MAX)]
        n_max: u32,
    },
    /// Run the acceptance checks and print a PASS/FAIL table.
    Validate {
        /// Restrict to one module.
        #[arg(long)]
        only: Option<String>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(dir) = cli.output {
        cfg.output_dir = dir;
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs {jobs}: {e}")))?;
    }
    let hash = cfg.hash();
    let dir = cfg.output_dir.clone();
    let written = match cli.command {
        Command::Potentials { branch } => {
            let branches = commands::parse_branches(branch.as_deref())?;
            commands::run_potentials(&cfg, &hash, &dir, &branches)?
        }
        Command::Spectrum { n_max } => commands::run_spectrum(&cfg, &hash, &dir, n_max)?,
        Command::Resonances { n_max } => commands::run_resonances(&cfg, &hash, &dir, n_max)?,
        Command::Wavefunction { n_max } => commands::run_wavefunction(&cfg, &hash, &dir, n_max)?,
        Command::Validate { only } => {
            let report = validate::run(&cfg, only.as_deref())?;
            print!("{}", report.render());
            if !report.all_passed() {
                return Err(CliError::Validation {
                    failed: report.failed(),
                    total: report.checks.len(),
                });
            }
            return Ok(());
        }
    };
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // The core logs every extra root of a bracket scan; keep that behind -v.
    let level = match cli.verbose {
        0 => "planar3b=warn,planar3b_core=error",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("planar3b: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
