//! Solver dispatch and CSV rendering for a single run.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cavity_qst::analytic::{self, SymmetricParams};
use cavity_qst::dynamics::{self, single_excitation_labels};
use cavity_qst::reduced::{self, IntegrateOptions};
use cavity_qst::rk4::uniform_grid;
use cavity_qst::{ReducedState, TimeSeries};
use num_complex::Complex64 as C64;

use crate::config::{RunConfig, SolverKind};
use crate::error::{CliError, Result};

/// Norm drift beyond which a run counts as a numerical failure.
pub const NORM_LIMIT: f64 = 1e-6;

pub const DEFAULT_OUTPUT: &str = "run.csv";

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: TimeSeries,
    pub max_norm_drift: f64,
    /// Relative drift of the conserved energy; `None` for closed forms.
    pub energy_drift: Option<f64>,
    /// Integrator step, if one was used.
    pub step: Option<f64>,
}

pub fn time_grid(config: &RunConfig) -> Vec<f64> {
    uniform_grid(config.t_end_ns, config.samples)
}

/// Runs the configured solver.
pub fn simulate(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let params = config.params();
    let grid = time_grid(config);
    let out = match config.solver {
        SolverKind::Analytic => {
            let sp = SymmetricParams::from_system(&params)?;
            let states: Vec<ReducedState> = grid.iter().map(|&t| analytic::closed_form(&sp, t)).collect();
            let series = TimeSeries::from_amplitudes(&grid, &states);
            RunOutput { max_norm_drift: series.max_norm_drift(), series, energy_drift: None, step: None }
        }
        SolverKind::Reduced => {
            let label = config.initial_label()?;
            let kerr = params.kerr_enabled();
            let idx = single_excitation_labels(kerr).iter().position(|l| *l == label).ok_or_else(|| {
                CliError::invalid("solver.initial", "reduced equations need a single-excitation state")
            })?;
            let mut amps = vec![C64::new(0.0, 0.0); if kerr { 6 } else { 5 }];
            amps[idx] = C64::new(1.0, 0.0);
            let initial = ReducedState::from_slice(&amps)?;
            let options = IntegrateOptions { max_step: config.dt_ns };
            let rs = reduced::integrate(&initial, &params, &grid, config.kerr_mode, options)?;
            RunOutput {
                max_norm_drift: rs.max_norm_drift(),
                energy_drift: Some(reduced::energy_drift(&rs, &params, config.kerr_mode)),
                step: Some(rs.step),
                series: TimeSeries::from_reduced(&rs),
            }
        }
        SolverKind::Full => {
            let run = dynamics::simulate(&params, &config.initial_label()?, &grid, config.dt_ns)?;
            RunOutput {
                max_norm_drift: run.series.max_norm_drift(),
                series: run.series,
                energy_drift: Some(run.energy_drift),
                step: Some(run.step),
            }
        }
    };
    if !(out.max_norm_drift <= NORM_LIMIT) {
        return Err(CliError::NormBlowup { drift: out.max_norm_drift, limit: NORM_LIMIT });
    }
    Ok(out)
}

fn column_names(kerr: bool) -> Vec<&'static str> {
    let mut cols = vec!["t_ns", "sigma_z_1", "sigma_z_3", "n_1", "n_2", "n_3"];
    if kerr {
        cols.push("n_b");
    }
    cols.extend(["p_q1", "p_f1", "p_f2", "p_q3", "p_f3"]);
    if kerr {
        cols.push("p_k");
    }
    cols.push("norm");
    cols
}

/// CSV text: `#`-prefixed header block, column row, one row per sample.
///
/// Header lines starting with `# #` are notes; stripping `# ` from the
/// others gives a document that [`crate::config::load_config`] accepts.
pub fn render_csv(config: &RunConfig, series: &TimeSeries, notes: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# # cavity-qst {} time series", env!("CARGO_PKG_VERSION"));
    out.push_str("# # sigma_z_3, n_3, p_q3 and p_f3 belong to the qubit and cavity at the far end (cavity 3)\n");
    for note in notes {
        let _ = writeln!(out, "# # {note}");
    }
    for line in config.to_toml().lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {line}");
        }
    }
    out.push_str(&column_names(series.kerr).join(","));
    out.push('\n');
    for (t, s) in series.t.iter().zip(&series.samples) {
        let mut row: Vec<f64> = vec![*t, s.sigma_z_1, s.sigma_z_3, s.n1, s.n2, s.n3];
        if series.kerr {
            row.push(s.nb.unwrap_or(0.0));
        }
        let pops = if series.kerr { 6 } else { 5 };
        row.extend((0..pops).map(|i| s.populations.get(i).copied().unwrap_or(0.0)));
        row.push(s.norm);
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// The configuration echoed in a CSV header block.
pub fn config_from_csv(text: &str) -> Result<RunConfig> {
    let doc: String = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .filter(|l| !l.starts_with("# #"))
        .map(|l| l.strip_prefix("# ").unwrap_or(&l[1..]))
        .collect::<Vec<_>>()
        .join("\n");
    crate::config::load_config(&doc)
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Simulates, renders and writes the CSV to the configured path (or
/// `override_path`, or `run.csv`).
pub fn run(config: &RunConfig, override_path: Option<&Path>) -> Result<(RunOutput, PathBuf)> {
    let out = simulate(config)?;
    let path = override_path
        .map(Path::to_path_buf)
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));
    write_file(&path, &render_csv(config, &out.series, &[]))?;
    Ok((out, path))
}
