//! Command-line front end: configuration documents, figure presets,
//! parameter sweeps and CSV output.

// NaN-rejecting comparisons are written as negations on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod presets;
pub mod run;
pub mod sweep;

pub use config::{load_config, RunConfig, SolverKind};
pub use error::{CliError, Result};
pub use presets::{figure_runs, reproduce, FIGURE_IDS};
pub use run::{config_from_csv, render_csv, run, simulate, RunOutput};
pub use sweep::{load_sweep, render_summary, sweep, SweepRow, SweepSpec};
