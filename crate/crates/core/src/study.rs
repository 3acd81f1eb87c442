//! Experiment drivers: refinement studies on the manufactured solutions,
//! random-data simulations with snapshots and max-norm traces, and window /
//! amplification queries.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::analysis::{
    amplification_factor, error_norm, max_principle_window, observed_order, track_trace,
    AmplificationQuery, ConvergenceRow, MaxPrincipleWindow, SymbolRange,
};
use crate::config::{ExperimentKind, InitialCondition, RunManifest};
use crate::error::{Error, Result};
use crate::field_io::{load_field, save_field, FieldFile};
use crate::grid::{Field, Grid};
use crate::problems::{random_initial, ManufacturedCase};
use crate::stepper::{integrate, richardson_extrapolate, run_observed, SolverConfig};

pub const CSV_HEADER: &str = "dt,hx,hy,hz,cpu_s,err_plain,order_plain,err_extrap,order_extrap";

fn expect_kind(manifest: &RunManifest, kind: ExperimentKind) -> Result<()> {
    if manifest.kind == kind {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "manifest kind is {}, expected {}",
            manifest.kind.name(),
            kind.name()
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub alpha: f64,
    pub dims: usize,
    pub rows: Vec<ConvergenceRow>,
}

/// `1/n` when `x` is the reciprocal of an integer, else plain formatting.
fn fraction(x: f64) -> String {
    let inv = 1.0 / x;
    if (inv - inv.round()).abs() < 1e-9 * inv && inv >= 1.0 {
        format!("1/{}", inv.round() as u64)
    } else {
        format!("{x}")
    }
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let opt = |v: Option<f64>| v.map(|o| format!("{o:.4}")).unwrap_or_default();
        for r in &self.rows {
            let h = |a: usize| r.h.get(a).map(|v| format!("{v:e}")).unwrap_or_default();
            writeln!(
                out,
                "{:e},{},{},{},{:.4},{:e},{},{:e},{}",
                r.dt,
                h(0),
                h(1),
                h(2),
                r.cpu_seconds,
                r.error_plain,
                opt(r.order_plain),
                r.error_extrapolated,
                opt(r.order_extrapolated)
            )
            .expect("write to String");
        }
        out
    }

    /// Human-readable layout: one row per level, plain then extrapolated.
    pub fn to_pretty(&self) -> String {
        let opt = |v: Option<f64>| v.map(|o| format!("{o:.2}")).unwrap_or_else(|| "-".into());
        let mut out = format!(
            "alpha = {}, {}D\n{:<8} {:<22} {:>11} {:>6} {:>11} {:>6} {:>9}\n",
            self.alpha, self.dims, "dt", "h", "L_inf", "order", "L_inf(RE)", "order", "cpu(s)"
        );
        for r in &self.rows {
            let h = r.h.iter().map(|&v| fraction(v)).collect::<Vec<_>>().join(",");
            writeln!(
                out,
                "{:<8} {:<22} {:>11.3e} {:>6} {:>11.3e} {:>6} {:>9.3}",
                fraction(r.dt),
                h,
                r.error_plain,
                opt(r.order_plain),
                r.error_extrapolated,
                opt(r.order_extrapolated),
                r.cpu_seconds
            )
            .expect("write to String");
        }
        out
    }
}

/// Errors of the plain and extrapolated schemes at one refinement level.
pub fn convergence_level(
    case: &ManufacturedCase,
    base: &SolverConfig,
    sizes: &[usize],
    dt: f64,
) -> Result<ConvergenceRow> {
    let grid = Grid::unit(sizes)?;
    let config = case
        .config(dt, base.t_end, grid.clone())
        .with_order(base.order)
        .with_extrapolation(true);
    let steps = config.step_count()?;
    let initial = case.exact_field(&grid, 0.0);
    let start = Instant::now();
    let (fine, _) = integrate(&config, dt, steps, &initial, &mut |_, _| {})?;
    let (coarse, _) = integrate(&config, 2.0 * dt, steps / 2, &initial, &mut |_, _| {})?;
    let extrapolated = richardson_extrapolate(&fine, &coarse)?;
    let cpu_seconds = start.elapsed().as_secs_f64();
    let exact = case.exact_field(&grid, base.t_end);
    Ok(ConvergenceRow {
        dt,
        h: grid.spacing().to_vec(),
        error_plain: error_norm(&fine, &exact)?,
        order_plain: None,
        error_extrapolated: error_norm(&extrapolated, &exact)?,
        order_extrapolated: None,
        cpu_seconds,
    })
}

/// Fills in the order columns from adjacent rows.
pub fn attach_orders(rows: &mut [ConvergenceRow]) -> Result<()> {
    let plain: Vec<f64> = rows.iter().map(|r| r.error_plain).collect();
    let extrap: Vec<f64> = rows.iter().map(|r| r.error_extrapolated).collect();
    for (k, (p, e)) in observed_order(&plain)?
        .into_iter()
        .zip(observed_order(&extrap)?)
        .enumerate()
    {
        rows[k + 1].order_plain = Some(p);
        rows[k + 1].order_extrapolated = Some(e);
    }
    Ok(())
}

/// Refinement study on the manufactured solution, halving `Δt` and every
/// `h` together at each level.
pub fn run_convergence(manifest: &RunManifest) -> Result<ConvergenceTable> {
    expect_kind(manifest, ExperimentKind::Convergence)?;
    manifest.validate()?;
    let base = &manifest.solver;
    let dims = base.grid.dims();
    let case = ManufacturedCase::new(dims, base.alpha, base.eps)?;
    let mut rows = Vec::with_capacity(manifest.levels);
    for level in 0..manifest.levels {
        let factor = 1usize << level;
        let sizes: Vec<usize> = base.grid.sizes().iter().map(|&m| m * factor).collect();
        rows.push(convergence_level(&case, base, &sizes, base.dt / factor as f64)?);
    }
    attach_orders(&mut rows)?;
    Ok(ConvergenceTable {
        alpha: base.alpha,
        dims,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub steps: usize,
    pub dt: f64,
    pub max_trace: Vec<f64>,
    pub first_violation: Option<usize>,
    pub window: MaxPrincipleWindow,
    pub snapshots: Vec<PathBuf>,
    pub cpu_seconds: f64,
}

impl fmt::Display for SimulationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let peak = self.max_trace.iter().copied().fold(0.0, f64::max);
        let violation = match self.first_violation {
            Some(n) => format!("step {n} (t = {})", n as f64 * self.dt),
            None => "none".into(),
        };
        write!(
            f,
            "steps={} dt={} max_norm_peak={peak:.12} first_violation={violation} \
             window=[{:.4}, {:.4}] dt_in_window={} cpu_s={:.3}",
            self.steps,
            self.dt,
            self.window.dt_min,
            self.window.dt_max,
            self.window.contains(self.dt),
            self.cpu_seconds
        )
    }
}

fn initial_field(manifest: &RunManifest) -> Result<Field> {
    let grid = &manifest.solver.grid;
    match &manifest.initial {
        InitialCondition::Random(spec) => Ok(random_initial(spec, grid)),
        InitialCondition::File(path) => {
            let loaded = load_field(path)?;
            if loaded.field.grid().sizes() != grid.sizes() {
                return Err(Error::SizeMismatch(format!(
                    "{} holds a {:?} field, manifest grid is {:?}",
                    path.display(),
                    loaded.field.grid().sizes(),
                    grid.sizes()
                )));
            }
            Field::from_values(grid.clone(), loaded.field.into_values(), 0.0)
        }
    }
}

/// Runs a random-data (or file-initialised) simulation into `out_dir`.
///
/// Writes `snapshot_<step>.facf` at the steps nearest the requested times
/// (the initial and final states when none are requested), `max_trace.csv`,
/// `summary.txt`, and `extrapolated.facf` when extrapolating.
pub fn run_simulation(manifest: &RunManifest, out_dir: &Path) -> Result<SimulationSummary> {
    expect_kind(manifest, ExperimentKind::Simulate)?;
    manifest.validate()?;
    let config = &manifest.solver;
    let steps = config.step_count()?;
    let mut snapshot_steps: Vec<usize> = if manifest.snapshot_times.is_empty() {
        vec![0, steps]
    } else {
        manifest
            .snapshot_times
            .iter()
            .map(|&t| ((t / config.dt).round() as usize).min(steps))
            .collect()
    };
    snapshot_steps.sort_unstable();
    snapshot_steps.dedup();

    let window = max_principle_window(
        config.alpha,
        config.eps,
        config.grid.spacing(),
        config.order,
        manifest.window_constant,
    )?;
    let initial = initial_field(manifest)?;
    fs::create_dir_all(out_dir)?;

    let mut snapshots = Vec::new();
    let mut write_error = None;
    let (result, report) = run_observed(config, &initial, &mut |n, field| {
        if write_error.is_some() || snapshot_steps.binary_search(&n).is_err() {
            return;
        }
        let path = out_dir.join(format!("snapshot_{n:06}.facf"));
        let file = FieldFile {
            field: field.clone(),
            alpha: config.alpha,
            eps: config.eps,
        };
        match save_field(&path, &file) {
            Ok(()) => snapshots.push(path),
            Err(e) => write_error = Some(e),
        }
    })?;
    if let Some(e) = write_error {
        return Err(e);
    }
    if report.extrapolated {
        let path = out_dir.join("extrapolated.facf");
        save_field(
            &path,
            &FieldFile {
                field: result,
                alpha: config.alpha,
                eps: config.eps,
            },
        )?;
        snapshots.push(path);
    }

    let mut csv = String::from("step,time,max_norm\n");
    for (n, v) in report.max_trace.iter().enumerate() {
        writeln!(csv, "{n},{},{v:e}", n as f64 * config.dt).expect("write to String");
    }
    fs::write(out_dir.join("max_trace.csv"), csv)?;

    let track = track_trace(&report.max_trace);
    let summary = SimulationSummary {
        steps,
        dt: config.dt,
        max_trace: track.max_trace,
        first_violation: track.first_violation,
        window,
        snapshots,
        cpu_seconds: report.cpu_seconds,
    };
    fs::write(out_dir.join("summary.txt"), format!("{summary}\n"))?;
    Ok(summary)
}

/// Window for the manifest's parameters.
pub fn window_report(manifest: &RunManifest) -> Result<MaxPrincipleWindow> {
    let s = &manifest.solver;
    max_principle_window(s.alpha, s.eps, s.grid.spacing(), s.order, manifest.window_constant)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplificationSweep {
    pub betas: Vec<f64>,
    /// Largest per-axis factor over phases and symbol ranges.
    pub axis_max: Vec<f64>,
    /// `Π axis_max`, the largest modulus over the sampled set.
    pub max_factor: f64,
    /// Per-axis factor of the `w = π` mode under symmetric truncation.
    pub axis_nyquist: Vec<f64>,
}

/// Samples `phases` angles in `[−π, π]` per axis under the symmetric range
/// and the node ranges `i ∈ {1, m/2, m−1}`. The factor is a product of
/// non-negative per-axis terms, so the joint maximum is the product of the
/// per-axis maxima.
pub fn amplification_sweep(manifest: &RunManifest) -> Result<AmplificationSweep> {
    expect_kind(manifest, ExperimentKind::Amplification)?;
    manifest.validate()?;
    let s = &manifest.solver;
    let p = manifest.phases;
    let phases: Vec<f64> = (0..p)
        .map(|j| if p == 1 { 0.0 } else { -PI + 2.0 * PI * j as f64 / (p - 1) as f64 })
        .collect();
    let mut betas = Vec::new();
    let mut axis_max = Vec::new();
    let mut axis_nyquist = Vec::new();
    for (&m, &h) in s.grid.sizes().iter().zip(s.grid.spacing()) {
        let beta = s.dt * s.eps * s.eps / (2.0 * h.powf(s.alpha));
        let mut ranges = vec![SymbolRange::Symmetric];
        ranges.extend([1, m / 2, m - 1].map(SymbolRange::Node));
        let mut best = 0.0f64;
        for &range in &ranges {
            for &w in &phases {
                let q = AmplificationQuery {
                    alpha: s.alpha,
                    order: s.order,
                    betas: vec![beta],
                    phases: vec![w],
                    m: vec![m],
                    ranges: vec![range],
                };
                best = best.max(amplification_factor(&q)?);
            }
        }
        let nyquist = AmplificationQuery {
            alpha: s.alpha,
            order: s.order,
            betas: vec![beta],
            phases: vec![PI],
            m: vec![m],
            ranges: vec![SymbolRange::Symmetric],
        };
        axis_nyquist.push(amplification_factor(&nyquist)?);
        betas.push(beta);
        axis_max.push(best);
    }
    Ok(AmplificationSweep {
        max_factor: axis_max.iter().product(),
        betas,
        axis_max,
        axis_nyquist,
    })
}
