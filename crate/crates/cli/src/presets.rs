//! Figure presets: the parameter sets behind each reproduced plot.

use std::path::{Path, PathBuf};

use cavity_qst::KerrDetuningMode;

use crate::config::{RunConfig, ScaledKerr, SolverKind};
use crate::error::{CliError, Result};
use crate::run::{render_csv, simulate, write_file};

pub const FIGURE_IDS: [&str; 11] = ["3a", "3b", "4", "5", "6", "7a", "7b", "7c", "7d", "8a", "8b"];

/// Kerr coupling values shown in the p panels.
pub const FIG7_P_VALUES: [f64; 3] = [0.25, 0.5, 0.557];
/// Kerr frequencies shown in the ω_K panels.
pub const FIG7_OMEGA_K_VALUES: [f64; 2] = [0.5, 1.0];

const QUBIT_LABELS: &str = "sigma_z_1 is the trace labelled \"qubit 1\"; sigma_z_3 is the trace labelled \"qubit 2\"";

/// One CSV of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetRun {
    pub file_name: String,
    pub config: RunConfig,
    pub notes: Vec<String>,
}

/// Resonant array with `λ = 0.1ω` and hopping `j` in units of ω.
pub fn base(j: f64) -> RunConfig {
    let mut c = RunConfig::default();
    c.system.j12 = j;
    c.system.j23 = j;
    c
}

pub fn kerr(omega_k: f64, p: f64) -> RunConfig {
    let mut c = base(0.05);
    c.system.kerr = Some(ScaledKerr { omega_k, q: 0.2, p, nb_max: 2 });
    c.kerr_mode = KerrDetuningMode::PaperFaithful;
    c
}

pub fn detuned() -> RunConfig {
    let mut c = base(0.02);
    c.system.omega_c = 0.99;
    c.solver = SolverKind::Full;
    c
}

fn one(id: &str, config: RunConfig, what: &str) -> Vec<PresetRun> {
    vec![PresetRun {
        file_name: format!("fig{id}.csv"),
        config,
        notes: vec![format!("figure {id}: {what}"), QUBIT_LABELS.to_string()],
    }]
}

/// The runs behind a figure panel, one CSV each.
pub fn figure_runs(id: &str) -> Result<Vec<PresetRun>> {
    let runs = match id {
        "3a" => one(id, base(0.01), "population inversion, J = 0.1 lambda"),
        "3b" => one(id, base(0.02), "population inversion, J = 0.2 lambda"),
        "4" => one(id, base(0.02), "photon numbers n_1, n_2, n_3, J = 0.2 lambda"),
        "5" => one(id, detuned(), "population inversion, J = 0.2 lambda, omega_c = 0.99 omega_a"),
        "6" => one(id, detuned(), "photon numbers n_1, n_2, n_3, J = 0.2 lambda, omega_c = 0.99 omega_a"),
        "7a" | "7b" => FIG7_P_VALUES
            .iter()
            .map(|&p| PresetRun {
                file_name: format!("fig{id}_p{p}.csv"),
                config: kerr(0.5, p),
                notes: vec![
                    format!("figure {id}: Kerr coupling p = {p} omega, omega_k = 0.5, q = 0.2, J = 0.5 lambda"),
                    "panels 7a and 7b share these runs".into(),
                    QUBIT_LABELS.to_string(),
                ],
            })
            .collect(),
        "7c" | "7d" => FIG7_OMEGA_K_VALUES
            .iter()
            .map(|&wk| PresetRun {
                file_name: format!("fig{id}_omega_k{wk}.csv"),
                config: kerr(wk, 0.557),
                notes: vec![
                    format!("figure {id}: Kerr frequency omega_k = {wk} omega, p = 0.557, q = 0.2, J = 0.5 lambda"),
                    "panels 7c and 7d share these runs".into(),
                    QUBIT_LABELS.to_string(),
                ],
            })
            .collect(),
        "8a" => one(id, kerr(1.0, 0.5), "Kerr medium, J = 0.5 lambda, p = 0.5, q = 0.2, omega_k = 1"),
        "8b" => one(id, base(0.01), "no Kerr medium, J = 0.1 lambda"),
        other => {
            return Err(CliError::UnknownFigure { id: other.to_string(), valid: FIGURE_IDS.join(", ") });
        }
    };
    Ok(runs)
}

/// Runs a figure's presets and writes their CSVs into `outdir`.
pub fn reproduce(id: &str, outdir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for run in figure_runs(id)? {
        let out = simulate(&run.config)?;
        let path = outdir.join(&run.file_name);
        write_file(&path, &render_csv(&run.config, &out.series, &run.notes))?;
        written.push(path);
    }
    Ok(written)
}
