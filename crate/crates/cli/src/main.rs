use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cavity_qst_cli::{load_config, load_sweep, render_summary, reproduce, run, sweep, CliError};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cavity-qst", version, about = "Qubit state transfer through three coupled cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration and write its CSV.
    Run {
        config: PathBuf,
        /// Overrides [output] path.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the CSVs of a figure preset.
    Reproduce {
        figure_id: String,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
    /// Run a one-parameter sweep and write the summary table.
    Sweep {
        spec: PathBuf,
        /// Overrides [output] path; stdout if neither is given.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Overrides [sweep] parallelism.
        #[arg(short, long)]
        parallelism: Option<usize>,
    },
    /// Check a configuration without running it.
    Validate { config: PathBuf },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, output } => {
            let cfg = load_config(&read(&config)?)?;
            let (out, path) = run(&cfg, output.as_deref())?;
            eprintln!(
                "wrote {} ({} samples, max norm drift {:e})",
                path.display(),
                out.series.len(),
                out.max_norm_drift
            );
        }
        Command::Reproduce { figure_id, outdir } => {
            for path in reproduce(&figure_id, &outdir)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Sweep { spec, output, parallelism } => {
            let mut spec = load_sweep(&read(&spec)?)?;
            if let Some(p) = parallelism {
                spec.parallelism = p;
            }
            let rows = sweep(&spec)?;
            let text = render_summary(&spec, &rows);
            match output.or_else(|| spec.template.output.clone()) {
                Some(path) => {
                    cavity_qst_cli::run::write_file(&path, &text)?;
                    eprintln!("wrote {}", path.display());
                }
                None => print!("{text}"),
            }
        }
        Command::Validate { config } => {
            let cfg = load_config(&read(&config)?)?;
            println!("ok: {} solver, {} samples over {} ns", cfg.solver.name(), cfg.samples, cfg.t_end_ns);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
