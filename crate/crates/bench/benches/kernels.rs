use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fracac_bench::{random_field, random_line};
use fracac_core::{DiffusionOperators, DirectionOperator, SolverConfig, SpatialOrder, StepWorkspace, Stepper};

fn line_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("line");
    for m in [64usize, 256, 1024] {
        let op = DirectionOperator::assemble(1.5, 0.02, 0.4, 1.0 / m as f64, m, SpatialOrder::Fourth)
            .expect("operator");
        let line = random_line(m);
        group.bench_with_input(BenchmarkId::new("explicit_dense", m), &line, |b, l| {
            b.iter(|| op.apply_explicit(black_box(l)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("explicit_fft", m), &line, |b, l| {
            b.iter(|| op.apply_explicit_fast(black_box(l)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("solve_lu", m), &line, |b, l| {
            b.iter(|| op.solve_line(black_box(l)).unwrap())
        });
    }
    group.finish();
}

fn adi_steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("adi_step");
    group.sample_size(10);
    for (dims, m) in [(2usize, 128usize), (2, 512), (3, 32), (3, 64)] {
        let field = random_field(dims, m);
        let grid = field.grid().clone();
        let ops = DiffusionOperators::assemble(1.5, 0.02, 0.4, &grid, SpatialOrder::Fourth).expect("ops");
        let mut ws = StepWorkspace::new(grid.len());
        group.bench_function(BenchmarkId::new(format!("{dims}d"), m), |b| {
            let mut u = field.clone();
            b.iter(|| fracac_core::diffusion_step_adi(&mut u, &ops, None, &mut ws).unwrap())
        });
    }
    group.finish();
}

fn strang_steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("strang_step");
    group.sample_size(10);
    for (dims, m) in [(2usize, 100usize), (3, 100)] {
        let field = random_field(dims, m);
        let config = SolverConfig::new(1.7, 0.02, 0.4, 0.4, field.grid().clone());
        let mut stepper = Stepper::new(&config, 0.4).expect("stepper");
        group.bench_function(BenchmarkId::new(format!("{dims}d"), m), |b| {
            let mut u = field.clone();
            b.iter(|| stepper.strang_step(&mut u).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, line_kernels, adi_steps, strang_steps);
criterion_main!(benches);
