//! Sequential vs rayon execution for the three data-parallel kernels:
//! exhaustive checking (across inputs), dense gate application (across
//! amplitude blocks) and randomized benchmarking (across sequences).

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qarith::arith::{build_ctrl_add, build_multiplier, ArithKind, TaylorConstants};
use qarith::verify::{exhaustive_check, run_rb};
use qarith::{Exec, Gate, NoiseModel, StateVector};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive_check");
    group.sample_size(10);
    let cases = [
        ("ctrladd4", build_ctrl_add(4).unwrap(), ArithKind::CtrlAdd),
        ("mul3", build_multiplier(3).unwrap(), ArithKind::Mul),
    ];
    for (name, inst, kind) in &cases {
        let oracle = kind.oracle(inst.n_bits, TaylorConstants::default());
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), inst, |b, inst| {
                b.iter(|| exhaustive_check(black_box(inst), &oracle, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn dense_gates(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_gates");
    group.sample_size(10);
    let n = 20;
    let layer: Vec<Gate> = (0..n)
        .map(Gate::H)
        .chain((0..n - 1).map(|q| Gate::cnot(q, q + 1)))
        .chain((0..n - 2).map(|q| Gate::toffoli(q, q + 1, q + 2)))
        .collect();
    let start = StateVector::new_basis_state(n, 0).unwrap();
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new(mode, format!("{n}q")), |b| {
            b.iter_batched(
                || start.clone(),
                |mut s| {
                    for g in &layer {
                        s.apply_gate_mut(g, exec).unwrap();
                    }
                    s
                },
                criterion::BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

fn rb(c: &mut Criterion) {
    let mut group = c.benchmark_group("randomized_benchmarking");
    group.sample_size(10);
    let noise = NoiseModel::new(0.02).unwrap();
    let lengths = [1, 2, 4, 8, 16, 32, 64, 100];
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new(mode, "200x100"), |b| {
            b.iter(|| run_rb(noise, &lengths, 200, 100, black_box(7), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exhaustive, dense_gates, rb);
criterion_main!(benches);
