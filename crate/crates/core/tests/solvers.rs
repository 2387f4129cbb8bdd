use cavity_qst::analytic::{self, SymmetricParams};
use cavity_qst::dynamics::{self, single_excitation_labels};
use cavity_qst::reduced::{self, IntegrateOptions};
use cavity_qst::rk4::uniform_grid;
use cavity_qst::{KerrDetuningMode, KerrParams, ReducedState, SystemParams, TimeSeries};
use proptest::prelude::*;

fn worst_population_gap(a: &TimeSeries, b: &TimeSeries) -> f64 {
    a.samples
        .iter()
        .zip(&b.samples)
        .flat_map(|(x, y)| x.populations.iter().zip(&y.populations).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

fn reduced_series(params: &SystemParams, grid: &[f64], mode: KerrDetuningMode) -> TimeSeries {
    let initial = ReducedState::excited_q1(params.kerr_enabled());
    let rs = reduced::integrate(&initial, params, grid, mode, IntegrateOptions::default()).unwrap();
    TimeSeries::from_reduced(&rs)
}

#[test]
fn three_solvers_agree_without_kerr() {
    let params = SystemParams::resonant(1.0, 0.2);
    let grid = uniform_grid(200.0, 401);
    let sp = SymmetricParams::from_system(&params).unwrap();
    let states: Vec<ReducedState> = grid.iter().map(|&t| analytic::closed_form(&sp, t)).collect();
    let closed = TimeSeries::from_amplitudes(&grid, &states);
    let red = reduced_series(&params, &grid, KerrDetuningMode::PaperFaithful);
    let full = dynamics::simulate(&params, &single_excitation_labels(false)[0], &grid, None).unwrap();
    assert!(worst_population_gap(&closed, &red) < 1e-8);
    assert!(worst_population_gap(&closed, &full.series) < 1e-8);
}

#[test]
fn first_principles_kerr_matches_full_space() {
    let omega = std::f64::consts::TAU;
    let kerr = KerrParams { omega_k: omega, q: 0.2 * omega, p: 0.5 * omega, nb_max: 2 };
    let params = SystemParams::resonant(1.0, 0.5).with_kerr(kerr);
    let grid = uniform_grid(100.0, 201);
    let red = reduced_series(&params, &grid, KerrDetuningMode::FirstPrinciples);
    let full = dynamics::simulate(&params, &single_excitation_labels(true)[0], &grid, None).unwrap();
    assert!(worst_population_gap(&red, &full.series) < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduced_tracks_closed_form(j_over_lambda in 0.05f64..2.0, f in 0.5f64..2.0) {
        let params = SystemParams::resonant(f, j_over_lambda);
        let grid = uniform_grid(60.0, 61);
        let sp = SymmetricParams::from_system(&params).unwrap();
        let red = reduced_series(&params, &grid, KerrDetuningMode::PaperFaithful);
        for (t, s) in grid.iter().zip(&red.samples) {
            let p = analytic::probabilities(&sp, *t);
            for (a, b) in p.iter().zip(&s.populations) {
                prop_assert!((a - b).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn full_space_keeps_one_quantum(j_over_lambda in 0.05f64..1.0, n_max in 2usize..5) {
        let mut params = SystemParams::resonant(1.0, j_over_lambda);
        params.n_max = n_max;
        let grid = uniform_grid(40.0, 21);
        let run = dynamics::simulate(&params, &single_excitation_labels(false)[0], &grid, None).unwrap();
        for s in &run.series.samples {
            prop_assert!((s.norm - 1.0).abs() < 1e-10);
            prop_assert!((s.populations.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            prop_assert!((s.sigma_z_1 + s.sigma_z_3 + 2.0 * (s.n1 + s.n2 + s.n3)).abs() < 1e-10);
        }
    }
}
