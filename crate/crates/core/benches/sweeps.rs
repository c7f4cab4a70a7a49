//! Parallel-vs-sequential comparison of the data-parallel sweeps.
//!
//! Built with the default `parallel` feature the first variant of each pair
//! runs on rayon; the `*_seq` twin always runs sequentially, so the two
//! series measure the scheduling overhead and speedup directly. With
//! `--no-default-features` both variants are sequential and should
//! coincide.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_sfc_survey(c: &mut Criterion) {
    let mut g = c.benchmark_group("sfc_survey_42");
    g.sample_size(20);
    g.bench_function("parallel", |b| {
        b.iter(|| black_box(quatlab_core::orders::sfc_survey(42, true).unwrap()))
    });
    g.bench_function("sequential", |b| {
        b.iter(|| black_box(quatlab_core::orders::sfc_survey_seq(42).unwrap()))
    });
    g.finish();
}

fn bench_bound_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("bound_log_scan_50_400");
    g.sample_size(20);
    g.bench_function("parallel", |b| {
        b.iter(|| {
            black_box(quatlab_core::mass_formula::lower_bound_log_scan(50, 400, true).unwrap())
        })
    });
    g.bench_function("sequential", |b| {
        b.iter(|| {
            black_box(quatlab_core::mass_formula::lower_bound_log_scan_seq(50, 400).unwrap())
        })
    });
    g.finish();
}

fn bench_disc_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("disc_agreement_sweep_100");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| black_box(quatlab_core::fields::disc_agreement_sweep(100, true).unwrap()))
    });
    g.bench_function("sequential", |b| {
        b.iter(|| black_box(quatlab_core::fields::disc_agreement_sweep_seq(100).unwrap()))
    });
    g.finish();
}

fn bench_verify_suite(c: &mut Criterion) {
    let fixtures = quatlab_core::fixtures::FixtureSet::load(None).unwrap();
    let mut g = c.benchmark_group("verify_suite");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| black_box(quatlab_core::verify::run(&fixtures, None, true)))
    });
    g.bench_function("sequential", |b| {
        b.iter(|| black_box(quatlab_core::verify::run_seq(&fixtures, None)))
    });
    g.finish();
}

criterion_group!(
    sweeps,
    bench_sfc_survey,
    bench_bound_scan,
    bench_disc_sweep,
    bench_verify_suite
);
criterion_main!(sweeps);
