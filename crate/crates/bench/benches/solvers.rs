use std::hint::black_box;

use cavity_qst::analytic::{self, SymmetricParams};
use cavity_qst::dynamics;
use cavity_qst::reduced::{self, IntegrateOptions};
use cavity_qst::{BasisLabel, KerrDetuningMode, ReducedState};
use cavity_qst_bench::{grid, kerr, plain};
use criterion::{criterion_group, criterion_main, Criterion};

fn closed_form(c: &mut Criterion) {
    let sp = SymmetricParams::from_system(&plain()).unwrap();
    let t = grid();
    c.bench_function("closed_form_5000", |b| {
        b.iter(|| t.iter().map(|&t| analytic::closed_form(&sp, t).q3.norm_sqr()).sum::<f64>())
    });
    c.bench_function("laplace_inverse", |b| b.iter(|| analytic::laplace_solution(black_box(&sp)).time_domain()));
}

fn reduced_rk4(c: &mut Criterion) {
    let t = grid();
    let (p, k) = (plain(), kerr());
    let mut g = c.benchmark_group("reduced_600ns");
    g.sample_size(20);
    g.bench_function("no_kerr", |b| {
        b.iter(|| {
            reduced::integrate(
                &ReducedState::excited_q1(false),
                &p,
                &t,
                KerrDetuningMode::default(),
                IntegrateOptions::default(),
            )
        })
    });
    g.bench_function("kerr", |b| {
        b.iter(|| {
            reduced::integrate(
                &ReducedState::excited_q1(true),
                &k,
                &t,
                KerrDetuningMode::default(),
                IntegrateOptions::default(),
            )
        })
    });
    g.finish();
}

fn full_space(c: &mut Criterion) {
    let t = grid();
    let label = BasisLabel::new(1, 0, 0, 0, 0);
    let (p, k) = (plain(), kerr());
    let mut g = c.benchmark_group("full_600ns");
    g.sample_size(10);
    g.bench_function("no_kerr", |b| b.iter(|| dynamics::simulate(&p, &label, &t, None).unwrap()));
    g.bench_function("kerr", |b| b.iter(|| dynamics::simulate(&k, &label.with_kerr(0), &t, None).unwrap()));
    g.finish();
}

criterion_group!(benches, closed_form, reduced_rk4, full_space);
criterion_main!(benches);
