//! One-parameter sweeps summarised by transfer metrics.
//!
//! A sweep specification is a run configuration plus a `[sweep]` section:
//!
//! ```toml
//! [kerr]
//! omega_k = 0.5
//!
//! [sweep]
//! parameter = "p"
//! values = [0.25, 0.5, 0.557]
//! metrics = ["peak_sigma_z_3", "peak_time", "crossing_time"]
//! threshold = 0.9
//! parallelism = 4
//! ```
//!
//! Values are in units of ω, like the configuration they modify.

use std::fmt::Write as _;

use cavity_qst::dynamics::{transfer_metrics, DEFAULT_THRESHOLD};
use cavity_qst::TransferMetrics;
use rayon::prelude::*;
use serde::Deserialize;

use crate::config::{from_document, parse_document, RunConfig, ScaledKerr, ScaledSystem};
use crate::error::{CliError, Result};
use crate::run::simulate;

/// Parameters a sweep can vary. `lambda` and `j` set both sides of the array.
pub const PARAMETERS: [&str; 12] =
    ["frequency_ghz", "omega_a", "omega_c", "lambda1", "lambda3", "lambda", "j12", "j23", "j", "omega_k", "q", "p"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    PeakSigmaZ3,
    PeakTime,
    CrossingTime,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::PeakSigmaZ3, Metric::PeakTime, Metric::CrossingTime];

    pub fn name(self) -> &'static str {
        match self {
            Metric::PeakSigmaZ3 => "peak_sigma_z_3",
            Metric::PeakTime => "peak_time",
            Metric::CrossingTime => "crossing_time",
        }
    }

    fn column(self) -> &'static str {
        match self {
            Metric::PeakSigmaZ3 => "peak_sigma_z_3",
            Metric::PeakTime => "peak_time_ns",
            Metric::CrossingTime => "crossing_time_ns",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Metric::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            CliError::invalid(
                "sweep.metrics",
                format!("unknown metric `{s}` (peak_sigma_z_3, peak_time, crossing_time)"),
            )
        })
    }

    /// Empty when the threshold is never reached.
    fn cell(self, m: &TransferMetrics) -> String {
        match self {
            Metric::PeakSigmaZ3 => format!("{}", m.peak_sigma_z_3),
            Metric::PeakTime => format!("{}", m.peak_time),
            Metric::CrossingTime => m.crossing_time.map(|t| format!("{t}")).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawSweep {
    parameter: String,
    values: Vec<f64>,
    metrics: Option<Vec<String>>,
    threshold: Option<f64>,
    parallelism: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub template: RunConfig,
    pub parameter: String,
    pub values: Vec<f64>,
    pub metrics: Vec<Metric>,
    pub threshold: f64,
    /// Worker threads; 0 lets the pool choose.
    pub parallelism: usize,
}

pub fn load_sweep(text: &str) -> Result<SweepSpec> {
    let mut doc = parse_document(text)?;
    let raw = doc.sweep.take().ok_or_else(|| CliError::invalid("sweep", "missing [sweep] section"))?;
    let template = from_document(doc)?;
    let metrics = match raw.metrics {
        Some(ms) => ms.iter().map(|m| Metric::parse(m)).collect::<Result<Vec<_>>>()?,
        None => Metric::ALL.to_vec(),
    };
    let spec = SweepSpec {
        template,
        parameter: raw.parameter,
        values: raw.values,
        metrics,
        threshold: raw.threshold.unwrap_or(DEFAULT_THRESHOLD),
        parallelism: raw.parallelism.unwrap_or(1),
    };
    spec.validate()?;
    Ok(spec)
}

/// `template` with `parameter` set to `value`.
pub fn apply(template: &RunConfig, parameter: &str, value: f64) -> Result<RunConfig> {
    let mut c = template.clone();
    let s = &mut c.system;
    fn kerr<'a>(s: &'a mut ScaledSystem, parameter: &str) -> Result<&'a mut ScaledKerr> {
        s.kerr
            .as_mut()
            .ok_or_else(|| CliError::invalid("sweep.parameter", format!("`{parameter}` needs a [kerr] section")))
    }
    match parameter {
        "frequency_ghz" => s.frequency_ghz = value,
        "omega_a" => s.omega_a = value,
        "omega_c" => s.omega_c = value,
        "lambda1" => s.lambda1 = value,
        "lambda3" => s.lambda3 = value,
        "lambda" => (s.lambda1, s.lambda3) = (value, value),
        "j12" => s.j12 = value,
        "j23" => s.j23 = value,
        "j" => (s.j12, s.j23) = (value, value),
        "omega_k" => kerr(s, parameter)?.omega_k = value,
        "q" => kerr(s, parameter)?.q = value,
        "p" => kerr(s, parameter)?.p = value,
        other => {
            return Err(CliError::invalid(
                "sweep.parameter",
                format!("unknown parameter `{other}` ({})", PARAMETERS.join(", ")),
            ))
        }
    }
    Ok(c)
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(CliError::invalid("sweep.values", "value list is empty"));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::invalid("sweep.values", format!("{v} is not finite")));
        }
        if self.metrics.is_empty() {
            return Err(CliError::invalid("sweep.metrics", "no metrics selected"));
        }
        if !self.threshold.is_finite() {
            return Err(CliError::invalid("sweep.threshold", "must be finite"));
        }
        apply(&self.template, &self.parameter, self.values[0]).map(|_| ())
    }

    /// The `[sweep]` section as a loadable document, without parallelism.
    fn section(&self) -> String {
        let values: Vec<String> = self.values.iter().map(|v| format!("{v:?}")).collect();
        let metrics: Vec<String> = self.metrics.iter().map(|m| format!("\"{}\"", m.name())).collect();
        format!(
            "[sweep]\nparameter = \"{}\"\nvalues = [{}]\nmetrics = [{}]\nthreshold = {:?}\n",
            self.parameter,
            values.join(", "),
            metrics.join(", "),
            self.threshold
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub metrics: TransferMetrics,
}

fn point(spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    let wrap = |e: CliError| CliError::SweepPoint { parameter: spec.parameter.clone(), value, source: Box::new(e) };
    let config = apply(&spec.template, &spec.parameter, value).map_err(wrap)?;
    let out = simulate(&config).map_err(wrap)?;
    let metrics = transfer_metrics(&out.series, spec.threshold).map_err(|e| wrap(e.into()))?;
    Ok(SweepRow { value, metrics })
}

/// Runs every point; rows follow the value list whatever the scheduling.
/// The first failing value, in list order, aborts the sweep.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.parallelism)
        .build()
        .map_err(|e| CliError::invalid("sweep.parallelism", e.to_string()))?;
    let results: Vec<Result<SweepRow>> = pool.install(|| spec.values.par_iter().map(|&v| point(spec, v)).collect());
    results.into_iter().collect()
}

pub fn render_summary(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# # cavity-qst {} sweep summary over {}", env!("CARGO_PKG_VERSION"), spec.parameter);
    for line in spec.template.to_toml().lines().chain(std::iter::once("")).chain(spec.section().lines()) {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {line}");
        }
    }
    let mut cols = vec![spec.parameter.as_str()];
    cols.extend(spec.metrics.iter().map(|m| m.column()));
    out.push_str(&cols.join(","));
    out.push('\n');
    for row in rows {
        let mut cells = vec![format!("{}", row.value)];
        cells.extend(spec.metrics.iter().map(|m| m.cell(&row.metrics)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
