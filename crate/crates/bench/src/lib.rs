//! Fixtures shared by the benchmarks under `benches/`.

use cavity_qst::rk4::uniform_grid;
use cavity_qst::{KerrParams, SystemParams};

/// Samples of the 600 ns figure window.
pub const SAMPLES: usize = 5000;
pub const WINDOW_NS: f64 = 600.0;

pub fn grid() -> Vec<f64> {
    uniform_grid(WINDOW_NS, SAMPLES)
}

/// Resonant array, `λ = 0.1ω` at 1 GHz, `J = 0.1λ`.
pub fn plain() -> SystemParams {
    SystemParams::resonant(1.0, 0.1)
}

/// `J = 0.5λ` with the Kerr medium at `ω_K = ω`, `p = 0.5ω`, `q = 0.2ω`.
pub fn kerr() -> SystemParams {
    let p = SystemParams::resonant(1.0, 0.5);
    let w = p.omega_c;
    p.with_kerr(KerrParams { omega_k: w, q: 0.2 * w, p: 0.5 * w, nb_max: 2 })
}
