//! Compares the rayon-backed sweep path against the sequential fallback on
//! the two data-parallel hot spots: constant sweeps over an order grid and
//! heat-flow evolutions over a time grid.
//!
//! The comparison is at the sweep level; `evolve` keeps its internal
//! cell-level parallelism in both series when the `parallel` feature is on.
//! With `--no-default-features` every entry point degrades to the
//! sequential code path and the two series coincide.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use renyi_fisher::constants::r_closed_form_1d;
use renyi_fisher::density::Density;
use renyi_fisher::heatflow::evolve;
use renyi_fisher::parallel::{par_map, seq_map};
use std::hint::black_box;

fn alpha_grid(len: usize) -> Vec<f64> {
    (0..len).map(|i| 0.2 + 2.8 * i as f64 / (len - 1) as f64).collect()
}

fn bench_constant_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("constant_sweep");
    for len in [64usize, 512] {
        group.bench_with_input(BenchmarkId::new("parallel", len), &len, |b, &len| {
            b.iter(|| {
                let vals = par_map(alpha_grid(len), |a| r_closed_form_1d(a).unwrap().value);
                black_box(vals)
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", len), &len, |b, &len| {
            b.iter(|| {
                let vals = seq_map(alpha_grid(len), |a| r_closed_form_1d(a).unwrap().value);
                black_box(vals)
            })
        });
    }
    group.finish();
}

fn bench_flow_evolutions(c: &mut Criterion) {
    let base = Density::cos_power(2.0, 1.0, 0.0)
        .unwrap()
        .to_grid(4e-3)
        .unwrap();
    let t_grid: Vec<f64> = (0..16).map(|i| 0.05 + 0.06 * i as f64).collect();
    let mut group = c.benchmark_group("flow_evolutions");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let masses = par_map(t_grid.clone(), |t| evolve(&base, t).unwrap().mass());
            black_box(masses)
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let masses = seq_map(t_grid.clone(), |t| evolve(&base, t).unwrap().mass());
            black_box(masses)
        })
    });
    group.finish();
}

criterion_group!(benches, bench_constant_sweep, bench_flow_evolutions);
criterion_main!(benches);
