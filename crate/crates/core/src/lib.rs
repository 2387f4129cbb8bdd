//! Quantum state transfer in a linear array of three coupled cavities with a
//! two-level atom in each end cavity and an optional Kerr medium coupled to the
//! middle cavity.
//!
//! Three independent routes to the same dynamics are provided:
//!
//! * [`reduced`]: RK4 integration of the single-excitation amplitude equations;
//! * [`analytic`]: closed forms for symmetric couplings, checked against an
//!   s-domain solution inverted by partial fractions;
//! * [`dynamics`]: Schrödinger evolution on the full truncated Hilbert space
//!   built by [`hilbert`] and [`hamiltonian`].
//!
//! Frequencies are angular, in rad/ns, with ħ = 1. Times are in ns.

// NaN-rejecting comparisons are written as negations on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod hilbert;
pub mod params;
pub mod reduced;
pub mod rk4;

pub use dynamics::{transfer_metrics, Sample, StateVector, TimeSeries, TransferMetrics};
pub use error::{Error, Result};
pub use hilbert::{BasisLabel, BasisSet, Matrix, Subsystem};
pub use params::{KerrParams, SystemParams};
pub use reduced::{KerrDetuningMode, ReducedState};
