mod common;

use std::sync::Arc;

use common::{
    classical_source, dense_cn_step_2d, dense_factored_step_2d, interior_2d, rk4_allen_cahn,
    ClassicalCompactAdi,
};
use fracac_core::problems::{random_initial, ManufacturedCase, RandomInitial};
use fracac_core::stepper::nonlinear_map;
use fracac_core::*;
use proptest::prelude::*;

fn adi_step(alpha: f64, eps: f64, dt: f64, m: usize, field: &Field) -> Field {
    let grid = field.grid().clone();
    let ops = DiffusionOperators::assemble(alpha, eps, dt, &grid, SpatialOrder::Fourth).unwrap();
    let mut out = field.clone();
    diffusion_step_adi(&mut out, &ops, None, &mut StepWorkspace::new(grid.len())).unwrap();
    assert_eq!(grid.sizes(), &[m, m]);
    out
}

fn smooth_field(m: usize) -> Field {
    let grid = Grid::unit(&[m, m]).unwrap();
    Field::from_interior_fn(grid, 0.0, |x| {
        (std::f64::consts::PI * x[0]).sin() * (x[1] * (1.0 - x[1])) * (1.0 + x[0])
    })
}

#[test]
fn nonlinear_stage_matches_rk4() {
    for dt in [0.01, 0.4, 4.0] {
        for k in -30..=30 {
            let u0 = k as f64 / 20.0;
            let reference = rk4_allen_cahn(u0, dt / 2.0, 20_000);
            let ours = nonlinear_map(u0, (-dt).exp());
            assert!((ours - reference).abs() <= 1e-10, "u0={u0} dt={dt}");
        }
    }
}

#[test]
fn adi_equals_dense_factored_operator() {
    let m = 8;
    let u = smooth_field(m);
    for alpha in [1.2, 1.7, 2.0] {
        let ours = interior_2d(adi_step(alpha, 1.0, 0.05, m, &u).values(), m);
        let dense = dense_factored_step_2d(alpha, 1.0, 0.05, m, &interior_2d(u.values(), m));
        assert!((ours - dense).amax() < 1e-14);
    }
}

#[test]
fn adi_splitting_error_is_third_order_in_dt() {
    let (m, alpha, eps) = (8, 1.5, 1.0);
    let u = smooth_field(m);
    let u_int = interior_2d(u.values(), m);
    let diffs: Vec<f64> = [0.02, 0.01, 0.005, 0.0025]
        .iter()
        .map(|&dt| {
            let ours = interior_2d(adi_step(alpha, eps, dt, m, &u).values(), m);
            (ours - dense_cn_step_2d(alpha, eps, dt, m, &u_int)).amax()
        })
        .collect();
    for w in diffs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 2.7, "orders from {diffs:?}");
    }
}

fn classical_agreement(initial: &Field, eps: f64, dt: f64, steps: usize) -> f64 {
    let m = initial.grid().sizes()[0];
    let mut reference = ClassicalCompactAdi {
        m,
        eps,
        dt,
        u: initial.values().chunks(m + 1).map(|r| r.to_vec()).collect(),
        t: 0.0,
    };
    let source = Arc::new(move |x: &[f64], t: f64| classical_source(eps, x[0], x[1], t));
    let config = SolverConfig::new(2.0, eps, dt, dt * steps as f64, initial.grid().clone())
        .with_source(source);
    let mut stepper = Stepper::new(&config, dt).unwrap();
    let mut field = initial.clone();
    let mut worst = 0.0f64;
    for _ in 0..steps {
        stepper.strang_step(&mut field).unwrap();
        reference.step(&|x, y, t| classical_source(eps, x, y, t));
        let diff = field
            .values()
            .iter()
            .zip(reference.flat())
            .fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
        worst = worst.max(diff);
    }
    worst
}

#[test]
fn alpha_two_matches_classical_compact_adi() {
    let grid = Grid::unit(&[16, 16]).unwrap();
    let case = ManufacturedCase::smooth_2d(2.0).unwrap();
    let exact = case.exact_field(&grid, 0.0);
    assert!(classical_agreement(&exact, 0.1, 1.0 / 16.0, 16) <= 1e-12);
    // O(1) data so the comparison is not trivially small.
    let rough = random_initial(&RandomInitial { seed: 3, scale: 1.6, offset: -0.8 }, &grid);
    assert!(classical_agreement(&rough, 0.3, 0.05, 20) <= 1e-12);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let run_with = |threads: usize, sizes: &[usize]| {
        let grid = Grid::unit(sizes).unwrap();
        let initial = random_initial(&RandomInitial::small_symmetric(11), &grid);
        let case = ManufacturedCase::new(sizes.len(), 1.5, 0.1).unwrap();
        let config = SolverConfig::new(1.5, 0.1, 0.1, 0.4, grid)
            .with_source(Arc::new(case.source()))
            .with_extrapolation(true);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run(&config, &initial).unwrap().0)
    };
    for sizes in [&[12, 300][..], &[300, 12][..], &[24, 24, 24][..]] {
        let a = run_with(1, sizes);
        let b = run_with(4, sizes);
        assert!(a.values().iter().zip(b.values()).all(|(p, q)| p.to_bits() == q.to_bits()));
    }
}

#[test]
fn extrapolation_of_identical_runs_is_the_identity() {
    let f = smooth_field(6);
    let r = richardson_extrapolate(&f, &f).unwrap();
    assert!(r.values().iter().zip(f.values()).all(|(p, q)| p.to_bits() == q.to_bits()));
}

#[test]
fn zero_steps_return_the_initial_field() {
    let f = smooth_field(6);
    let config = SolverConfig::new(1.5, 0.1, 0.1, 0.0, f.grid().clone());
    let (out, report) = run(&config, &f).unwrap();
    assert_eq!(out, f);
    assert_eq!(report.max_trace.len(), 1);
}

proptest! {
    #[test]
    fn nonlinear_stage_respects_the_unit_bound(u0 in -1.0f64..=1.0, dt in 1e-6f64..1e3) {
        let u = nonlinear_map(u0, (-dt).exp());
        prop_assert!(u.abs() <= 1.0);
        prop_assert!(u.abs() >= u0.abs() - 1e-15);
        prop_assert_eq!(u.signum() * u0.signum() >= 0.0, true);
    }

    #[test]
    fn runs_stay_bounded_for_any_step(dt_exp in -3.0f64..0.0, seed in 0u64..1000) {
        let dt = 10f64.powf(dt_exp);
        let grid = Grid::unit(&[16, 16]).unwrap();
        let initial = random_initial(&RandomInitial { seed, scale: 2.0, offset: -1.0 }, &grid);
        let config = SolverConfig::new(1.5, 0.1, dt, 3.0 * dt, grid);
        let (out, _) = run(&config, &initial).unwrap();
        prop_assert!(out.values().iter().all(|v| v.is_finite()));
        prop_assert!(out.max_norm() < 2.0);
    }
}
