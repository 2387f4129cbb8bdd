//! Run configuration documents.
//!
//! A document has up to four sections, all optional:
//!
//! ```toml
//! [system]
//! frequency_ghz = 1.0   # reference frequency f, ω = 2π f
//! omega_a = 1.0         # qubit frequency in units of ω
//! omega_c = 1.0
//! lambda1 = 0.1
//! lambda3 = 0.1
//! j12 = 0.01
//! j23 = 0.01
//! n_max = 2
//!
//! [kerr]
//! enabled = true
//! omega_k = 1.0
//! q = 0.2
//! p = 0.5
//! nb_max = 2
//!
//! [solver]
//! kind = "reduced"          # reduced | analytic | full
//! kerr_mode = "paper_faithful"
//! t_end_ns = 600.0
//! samples = 5000
//! initial = "q1"            # q1 f1 f2 q3 f3 k, or a ket such as "10000"
//!
//! [output]
//! path = "run.csv"
//! ```
//!
//! Every frequency is given in units of ω or, with a `_ghz` suffix, as an
//! ordinary frequency in GHz. If both are present the scaled value is used.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::PathBuf;

use cavity_qst::dynamics::single_excitation_labels;
use cavity_qst::params::DEFAULT_TRUNCATION;
use cavity_qst::{BasisLabel, KerrDetuningMode, KerrParams, SystemParams};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const DEFAULT_T_END_NS: f64 = 600.0;
pub const DEFAULT_SAMPLES: usize = 5000;

/// Aliases for the single-excitation kets, in amplitude order.
pub const STATE_ALIASES: [&str; 6] = ["q1", "f1", "f2", "q3", "f3", "k"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    #[default]
    Reduced,
    Analytic,
    Full,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Reduced => "reduced",
            SolverKind::Analytic => "analytic",
            SolverKind::Full => "full",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(SolverKind::Reduced),
            "analytic" => Ok(SolverKind::Analytic),
            "full" => Ok(SolverKind::Full),
            other => {
                Err(CliError::invalid("solver.kind", format!("unknown solver `{other}` (reduced, analytic, full)")))
            }
        }
    }
}

pub fn mode_name(mode: KerrDetuningMode) -> &'static str {
    match mode {
        KerrDetuningMode::PaperFaithful => "paper_faithful",
        KerrDetuningMode::FirstPrinciples => "first_principles",
    }
}

fn parse_mode(s: &str) -> Result<KerrDetuningMode> {
    match s {
        "paper_faithful" => Ok(KerrDetuningMode::PaperFaithful),
        "first_principles" => Ok(KerrDetuningMode::FirstPrinciples),
        other => Err(CliError::invalid(
            "solver.kerr_mode",
            format!("unknown mode `{other}` (paper_faithful, first_principles)"),
        )),
    }
}

/// Kerr medium in units of ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledKerr {
    pub omega_k: f64,
    pub q: f64,
    pub p: f64,
    pub nb_max: usize,
}

/// System parameters in units of ω = 2π f.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSystem {
    pub frequency_ghz: f64,
    pub omega_a: f64,
    pub omega_c: f64,
    pub lambda1: f64,
    pub lambda3: f64,
    pub j12: f64,
    pub j23: f64,
    pub n_max: usize,
    pub kerr: Option<ScaledKerr>,
}

impl Default for ScaledSystem {
    fn default() -> Self {
        ScaledSystem {
            frequency_ghz: 1.0,
            omega_a: 1.0,
            omega_c: 1.0,
            lambda1: 0.1,
            lambda3: 0.1,
            j12: 0.01,
            j23: 0.01,
            n_max: DEFAULT_TRUNCATION,
            kerr: None,
        }
    }
}

impl ScaledSystem {
    /// Reference angular frequency ω in rad/ns.
    pub fn omega(&self) -> f64 {
        TAU * self.frequency_ghz
    }

    pub fn to_params(&self) -> SystemParams {
        let w = self.omega();
        SystemParams {
            omega_a: self.omega_a * w,
            omega_c: self.omega_c * w,
            lambda1: self.lambda1 * w,
            lambda3: self.lambda3 * w,
            j12: self.j12 * w,
            j23: self.j23 * w,
            n_max: self.n_max,
            kerr: self.kerr.map(|k| KerrParams { omega_k: k.omega_k * w, q: k.q * w, p: k.p * w, nb_max: k.nb_max }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: ScaledSystem,
    pub solver: SolverKind,
    pub kerr_mode: KerrDetuningMode,
    pub t_end_ns: f64,
    pub samples: usize,
    /// Normalized initial-state text: an alias or a digit string.
    pub initial: String,
    /// Upper bound on the integrator step; `None` uses the default rule.
    pub dt_ns: Option<f64>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: ScaledSystem::default(),
            solver: SolverKind::default(),
            kerr_mode: KerrDetuningMode::default(),
            t_end_ns: DEFAULT_T_END_NS,
            samples: DEFAULT_SAMPLES,
            initial: "q1".into(),
            dt_ns: None,
            output: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawDocument {
    system: Option<RawSystem>,
    kerr: Option<RawKerr>,
    solver: Option<RawSolver>,
    output: Option<RawOutput>,
    pub(crate) sweep: Option<crate::sweep::RawSweep>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    frequency_ghz: Option<f64>,
    omega_a: Option<f64>,
    omega_a_ghz: Option<f64>,
    omega_c: Option<f64>,
    omega_c_ghz: Option<f64>,
    lambda1: Option<f64>,
    lambda1_ghz: Option<f64>,
    lambda3: Option<f64>,
    lambda3_ghz: Option<f64>,
    j12: Option<f64>,
    j12_ghz: Option<f64>,
    j23: Option<f64>,
    j23_ghz: Option<f64>,
    n_max: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKerr {
    enabled: Option<bool>,
    omega_k: Option<f64>,
    omega_k_ghz: Option<f64>,
    q: Option<f64>,
    q_ghz: Option<f64>,
    p: Option<f64>,
    p_ghz: Option<f64>,
    nb_max: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    kind: Option<String>,
    kerr_mode: Option<String>,
    t_end_ns: Option<f64>,
    samples: Option<usize>,
    initial: Option<String>,
    dt_ns: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
}

/// Scaled value, else the GHz value divided by `f`, else the default.
fn pick(scaled: Option<f64>, ghz: Option<f64>, f: f64, default: f64) -> f64 {
    scaled.or(ghz.map(|g| g / f)).unwrap_or(default)
}

pub(crate) fn parse_document(text: &str) -> Result<RawDocument> {
    toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// Parses and validates a run configuration; missing keys take defaults.
pub fn load_config(text: &str) -> Result<RunConfig> {
    let doc = parse_document(text)?;
    if doc.sweep.is_some() {
        return Err(CliError::invalid("sweep", "a [sweep] section belongs in a sweep specification"));
    }
    from_document(doc)
}

pub(crate) fn from_document(doc: RawDocument) -> Result<RunConfig> {
    let d = RunConfig::default();
    let sys = doc.system.unwrap_or_default();
    let f = sys.frequency_ghz.unwrap_or(d.system.frequency_ghz);
    if !(f.is_finite() && f > 0.0) {
        return Err(CliError::invalid("system.frequency_ghz", format!("must be positive, got {f}")));
    }
    let ds = d.system;
    let kerr = match doc.kerr {
        Some(k) if k.enabled.unwrap_or(true) => Some(ScaledKerr {
            omega_k: pick(k.omega_k, k.omega_k_ghz, f, 1.0),
            q: pick(k.q, k.q_ghz, f, 0.2),
            p: pick(k.p, k.p_ghz, f, 0.5),
            nb_max: k.nb_max.unwrap_or(DEFAULT_TRUNCATION),
        }),
        _ => None,
    };
    let system = ScaledSystem {
        frequency_ghz: f,
        omega_a: pick(sys.omega_a, sys.omega_a_ghz, f, ds.omega_a),
        omega_c: pick(sys.omega_c, sys.omega_c_ghz, f, ds.omega_c),
        lambda1: pick(sys.lambda1, sys.lambda1_ghz, f, ds.lambda1),
        lambda3: pick(sys.lambda3, sys.lambda3_ghz, f, ds.lambda3),
        j12: pick(sys.j12, sys.j12_ghz, f, ds.j12),
        j23: pick(sys.j23, sys.j23_ghz, f, ds.j23),
        n_max: sys.n_max.unwrap_or(ds.n_max),
        kerr,
    };
    let solver = doc.solver.unwrap_or_default();
    let config = RunConfig {
        system,
        solver: solver.kind.as_deref().map(SolverKind::parse).transpose()?.unwrap_or_default(),
        kerr_mode: solver.kerr_mode.as_deref().map(parse_mode).transpose()?.unwrap_or_default(),
        t_end_ns: solver.t_end_ns.unwrap_or(d.t_end_ns),
        samples: solver.samples.unwrap_or(d.samples),
        initial: solver.initial.map(|s| normalize_initial(&s)).unwrap_or(d.initial),
        dt_ns: solver.dt_ns,
        output: doc.output.and_then(|o| o.path),
    };
    config.validate()?;
    Ok(config)
}

fn normalize_initial(s: &str) -> String {
    let t = s.trim();
    if STATE_ALIASES.contains(&t) {
        return t.to_string();
    }
    match BasisLabel::parse(t) {
        Some(l) => l.occupations().iter().map(|n| n.to_string()).collect(),
        None => t.to_string(),
    }
}

fn field_of(name: &str) -> String {
    match name {
        "omega_k" | "q" | "p" => format!("kerr.{name}"),
        other => format!("system.{other}"),
    }
}

impl RunConfig {
    pub fn params(&self) -> SystemParams {
        self.system.to_params()
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.system;
        let scaled = [
            ("omega_a", s.omega_a),
            ("omega_c", s.omega_c),
            ("lambda1", s.lambda1),
            ("lambda3", s.lambda3),
            ("j12", s.j12),
            ("j23", s.j23),
        ];
        for (name, v) in scaled {
            if !v.is_finite() {
                return Err(CliError::invalid(field_of(name), format!("must be finite, got {v}")));
            }
        }
        if s.omega_a <= 0.0 || s.omega_c <= 0.0 {
            return Err(CliError::invalid("system.omega_a/omega_c", "frequencies must be positive"));
        }
        if let Some(k) = &s.kerr {
            if k.omega_k <= 0.0 {
                return Err(CliError::invalid("kerr.omega_k", format!("must be positive, got {}", k.omega_k)));
            }
        }
        if let Err(e) = self.params().validate() {
            return Err(match e {
                cavity_qst::Error::Parameter { name, reason } => CliError::invalid(field_of(name), reason),
                cavity_qst::Error::Truncation { what: "Kerr mode", dim } => {
                    CliError::invalid("kerr.nb_max", format!("must be at least 2, got {dim}"))
                }
                cavity_qst::Error::Truncation { dim, .. } => {
                    CliError::invalid("system.n_max", format!("must be at least 2, got {dim}"))
                }
                other => CliError::Core(other),
            });
        }
        if !(self.t_end_ns.is_finite() && self.t_end_ns > 0.0) {
            return Err(CliError::invalid("solver.t_end_ns", format!("must be positive, got {}", self.t_end_ns)));
        }
        if self.samples < 2 {
            return Err(CliError::invalid("solver.samples", format!("need at least 2 samples, got {}", self.samples)));
        }
        if let Some(dt) = self.dt_ns {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(CliError::invalid("solver.dt_ns", format!("must be positive, got {dt}")));
            }
        }
        let label = self.initial_label()?;
        let kerr = s.kerr.is_some();
        let single = single_excitation_labels(kerr).contains(&label);
        match self.solver {
            SolverKind::Analytic => {
                if kerr {
                    return Err(CliError::invalid("solver.kind", "analytic solver has no Kerr medium"));
                }
                if s.lambda1 != s.lambda3 || s.j12 != s.j23 {
                    return Err(CliError::invalid(
                        "solver.kind",
                        "analytic solver needs lambda1 = lambda3 and j12 = j23",
                    ));
                }
                if s.omega_a != s.omega_c {
                    return Err(CliError::invalid("solver.kind", "analytic solver needs omega_a = omega_c"));
                }
                if label != single_excitation_labels(false)[0] {
                    return Err(CliError::invalid("solver.initial", "analytic solver starts from q1"));
                }
                if s.lambda1 <= 0.0 {
                    return Err(CliError::invalid("system.lambda1", "analytic solver needs a nonzero coupling"));
                }
            }
            SolverKind::Reduced => {
                if s.omega_a != s.omega_c {
                    return Err(CliError::invalid(
                        "solver.kind",
                        "reduced equations need omega_a = omega_c; use kind = \"full\" for detuned runs",
                    ));
                }
                if !single {
                    return Err(CliError::invalid(
                        "solver.initial",
                        "reduced equations need a single-excitation state",
                    ));
                }
            }
            SolverKind::Full => {}
        }
        Ok(())
    }

    /// The initial ket in the basis implied by the system.
    pub fn initial_label(&self) -> Result<BasisLabel> {
        let kerr = self.system.kerr;
        if let Some(i) = STATE_ALIASES.iter().position(|a| *a == self.initial) {
            let labels = single_excitation_labels(kerr.is_some());
            return labels
                .get(i)
                .copied()
                .ok_or_else(|| CliError::invalid("solver.initial", "state `k` needs the Kerr medium"));
        }
        let bad = |reason: String| CliError::invalid("solver.initial", reason);
        let mut label = BasisLabel::parse(&self.initial).ok_or_else(|| {
            bad(format!("`{}` is neither an alias ({}) nor a ket", self.initial, STATE_ALIASES.join(", ")))
        })?;
        match (kerr, label.nb) {
            (Some(_), None) => label = label.with_kerr(0),
            (None, Some(_)) => {
                return Err(bad(format!("`{}` has a Kerr occupation but the medium is off", self.initial)))
            }
            _ => {}
        }
        let n = self.system.n_max;
        if label.k1 > 1 || label.k3 > 1 {
            return Err(bad(format!("qubit occupation above 1 in `{}`", self.initial)));
        }
        if label.n1 >= n || label.n2 >= n || label.n3 >= n {
            return Err(bad(format!("photon number above n_max − 1 = {} in `{}`", n - 1, self.initial)));
        }
        if let (Some(k), Some(nb)) = (kerr, label.nb) {
            if nb >= k.nb_max {
                return Err(bad(format!("Kerr occupation above nb_max − 1 = {} in `{}`", k.nb_max - 1, self.initial)));
            }
        }
        Ok(label)
    }

    /// Every effective parameter as a loadable document, with SI values as
    /// trailing comments. The output path is left out.
    pub fn to_toml(&self) -> String {
        let s = &self.system;
        let w = s.omega();
        let mut out = String::new();
        let freq = |out: &mut String, key: &str, v: f64| {
            let _ = writeln!(out, "{key} = {v:?} # {:?} rad/ns, {:?} GHz", v * w, v * s.frequency_ghz);
        };
        out.push_str("[system]\n");
        let _ = writeln!(out, "frequency_ghz = {:?}", s.frequency_ghz);
        freq(&mut out, "omega_a", s.omega_a);
        freq(&mut out, "omega_c", s.omega_c);
        freq(&mut out, "lambda1", s.lambda1);
        freq(&mut out, "lambda3", s.lambda3);
        freq(&mut out, "j12", s.j12);
        freq(&mut out, "j23", s.j23);
        let _ = writeln!(out, "n_max = {}", s.n_max);
        if let Some(k) = &s.kerr {
            out.push_str("\n[kerr]\nenabled = true\n");
            freq(&mut out, "omega_k", k.omega_k);
            freq(&mut out, "q", k.q);
            freq(&mut out, "p", k.p);
            let _ = writeln!(out, "nb_max = {}", k.nb_max);
        }
        out.push_str("\n[solver]\n");
        let _ = writeln!(out, "kind = \"{}\"", self.solver.name());
        let _ = writeln!(out, "kerr_mode = \"{}\"", mode_name(self.kerr_mode));
        let _ = writeln!(out, "t_end_ns = {:?}", self.t_end_ns);
        let _ = writeln!(out, "samples = {}", self.samples);
        let _ = writeln!(out, "initial = \"{}\"", self.initial);
        if let Some(dt) = self.dt_ns {
            let _ = writeln!(out, "dt_ns = {dt:?}");
        }
        out
    }
}
