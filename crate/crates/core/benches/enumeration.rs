//! Sequential against rayon execution on the three data-parallel hot paths.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use elabsub_core::classify::classify_with;
use elabsub_core::oracle::{enumerate_group_with, GROUP_CAP};
use elabsub_core::par::Exec;
use elabsub_core::projmat::{Form, GroupSpec};
use elabsub_core::toral::enumerate_levels;
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn toral_levels(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_levels");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "p=2 n=8"), &exec, |b, &e| {
            b.iter(|| enumerate_levels(black_box(8), 2, 7, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new(name, "p=3 n=7"), &exec, |b, &e| {
            b.iter(|| enumerate_levels(black_box(7), 3, 6, e).unwrap())
        });
    }
    g.finish();
}

fn classification(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "PGL_8(5) p=2"), &exec, |b, &e| {
            b.iter(|| classify_with(black_box(8), 5, 2, Form::Linear, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new(name, "PGU_6(5) p=3"), &exec, |b, &e| {
            b.iter(|| classify_with(black_box(6), 5, 3, Form::Unitary, e).unwrap())
        });
    }
    g.finish();
}

fn group_closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_group");
    g.sample_size(10);
    let spec = GroupSpec::linear(3, 4).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "PGL_3(4)"), &exec, |b, &e| {
            b.iter(|| enumerate_group_with(black_box(&spec), GROUP_CAP, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, toral_levels, classification, group_closure);
criterion_main!(benches);
