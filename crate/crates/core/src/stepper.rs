//! Strang splitting of the fractional Allen-Cahn equation.
//!
//! One step is `N(Δt/2) ∘ D(Δt) ∘ N(Δt/2)`: the nonlinear ODE `u' = u − u³`
//! solved exactly over half a step, around a Crank-Nicolson ADI step of the
//! linear fractional diffusion `u' = ε² L_α u (+ g)`.

use std::sync::Arc;
use std::time::Instant;

use crate::error::{check_alpha, domain, Error, Result};
use crate::grid::{Field, Grid};
use crate::operator::{averaging_weights, DirectionOperator, SpatialOrder};
use crate::source::{SourceSampler, SourceTerm};
use crate::sweep::{apply_along_axis, stencil_along_axis};

#[derive(Clone)]
pub struct SolverConfig {
    pub alpha: f64,
    pub eps: f64,
    pub dt: f64,
    pub t_end: f64,
    pub grid: Grid,
    pub order: SpatialOrder,
    /// Combine the run with a `2Δt` run by Richardson extrapolation.
    pub extrapolate: bool,
    pub source: Option<Arc<dyn SourceTerm>>,
    pub seed: u64,
}

impl std::fmt::Debug for SolverConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverConfig")
            .field("alpha", &self.alpha)
            .field("eps", &self.eps)
            .field("dt", &self.dt)
            .field("t_end", &self.t_end)
            .field("grid", &self.grid)
            .field("order", &self.order)
            .field("extrapolate", &self.extrapolate)
            .field("source", &self.source.is_some())
            .field("seed", &self.seed)
            .finish()
    }
}

impl SolverConfig {
    pub fn new(alpha: f64, eps: f64, dt: f64, t_end: f64, grid: Grid) -> Self {
        Self {
            alpha,
            eps,
            dt,
            t_end,
            grid,
            order: SpatialOrder::Fourth,
            extrapolate: false,
            source: None,
            seed: 0,
        }
    }

    pub fn with_order(mut self, order: SpatialOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_extrapolation(mut self, on: bool) -> Self {
        self.extrapolate = on;
        self
    }

    pub fn with_source(mut self, source: Arc<dyn SourceTerm>) -> Self {
        self.source = Some(source);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(domain("eps", self.eps, "eps > 0"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(domain("dt", self.dt, "dt > 0"));
        }
        self.step_count().map(|_| ())
    }

    /// `N = t_end / Δt`, which must be a non-negative integer (even when
    /// extrapolating).
    pub fn step_count(&self) -> Result<usize> {
        let n = step_count(self.t_end, self.dt)?;
        if self.extrapolate && n % 2 == 1 {
            return Err(Error::StepCount(format!(
                "extrapolation needs an even step count, t_end/dt = {n}"
            )));
        }
        Ok(n)
    }
}

pub(crate) fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::StepCount(format!("t_end = {t_end} must be >= 0")));
    }
    if !(dt > 0.0) {
        return Err(Error::StepCount(format!("dt = {dt} must be > 0")));
    }
    let ratio = t_end / dt;
    let n = ratio.round();
    if (ratio - n).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::StepCount(format!(
            "t_end / dt = {ratio} is not an integer"
        )));
    }
    Ok(n as usize)
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub steps: usize,
    pub dt: f64,
    /// `‖U^n‖_∞` for `n = 0..=steps` of the `Δt` run.
    pub max_trace: Vec<f64>,
    pub extrapolated: bool,
    /// Max-norm trace of the `2Δt` run, when extrapolating.
    pub coarse_max_trace: Option<Vec<f64>>,
    pub cpu_seconds: f64,
}

/// Exact flow of `u' = (u − u³)/2` over `Δt`, i.e. of `u' = u − u³` over `Δt/2`.
#[inline]
pub fn nonlinear_map(u: f64, decay: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let radicand = u * u + (1.0 - u * u) * decay;
    debug_assert!(radicand > 0.0, "radicand {radicand} for u = {u}");
    u / radicand.sqrt()
}

pub fn nonlinear_half_step(field: &mut Field, dt: f64) {
    let decay = (-dt).exp();
    for u in field.values_mut() {
        *u = nonlinear_map(*u, decay);
    }
}

/// Per-axis operators for one `Δt`.
#[derive(Debug)]
pub struct DiffusionOperators {
    dt: f64,
    alpha: f64,
    order: SpatialOrder,
    shape: Vec<usize>,
    axes: Vec<DirectionOperator>,
}

impl DiffusionOperators {
    pub fn assemble(
        alpha: f64,
        eps: f64,
        dt: f64,
        grid: &Grid,
        order: SpatialOrder,
    ) -> Result<Self> {
        let axes = grid
            .sizes()
            .iter()
            .zip(grid.spacing())
            .map(|(&m, &h)| DirectionOperator::assemble(alpha, eps, dt, h, m, order))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dt,
            alpha,
            order,
            shape: grid.shape(),
            axes,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn axes(&self) -> &[DirectionOperator] {
        &self.axes
    }
}

/// Scratch buffers for the ADI intermediates.
#[derive(Debug, Default)]
pub struct StepWorkspace {
    a: Vec<f64>,
    b: Vec<f64>,
    g: Vec<f64>,
    g_tmp: Vec<f64>,
}

impl StepWorkspace {
    pub fn new(len: usize) -> Self {
        Self {
            a: vec![0.0; len],
            b: vec![0.0; len],
            g: vec![0.0; len],
            g_tmp: vec![0.0; len],
        }
    }

    fn ensure(&mut self, len: usize) {
        for buf in [&mut self.a, &mut self.b, &mut self.g, &mut self.g_tmp] {
            buf.resize(len, 0.0);
        }
    }
}

fn zero_frame(shape: &[usize], buf: &mut [f64]) {
    for axis in 0..shape.len() {
        let outer: usize = shape[..axis].iter().product();
        let len = shape[axis];
        let inner: usize = shape[axis + 1..].iter().product();
        for o in 0..outer {
            let slab = o * len * inner;
            buf[slab..slab + inner].iter_mut().for_each(|v| *v = 0.0);
            let last = slab + (len - 1) * inner;
            buf[last..last + inner].iter_mut().for_each(|v| *v = 0.0);
        }
    }
}

/// One Crank-Nicolson ADI step of the fractional diffusion.
///
/// Applies `(A_x+β_xC_x)(A_y+β_yC_y)(A_z+β_zC_z)`, adds `Δt A_xA_yA_z g` when a
/// source sample `g` (all nodes, boundary included) is given, then solves
/// with `A_x−β_xC_x`, `A_y−β_yC_y` and `A_z−β_zC_z` in turn.
pub fn diffusion_step_adi(
    field: &mut Field,
    ops: &DiffusionOperators,
    source: Option<&[f64]>,
    ws: &mut StepWorkspace,
) -> Result<()> {
    let shape = field.grid().shape();
    if shape != ops.shape {
        return Err(Error::SizeMismatch(format!(
            "field shape {shape:?} does not match operators built for {:?}",
            ops.shape
        )));
    }
    let len = field.values().len();
    if let Some(g) = source {
        if g.len() != len {
            return Err(Error::SizeMismatch(format!(
                "source sample has {} values, field has {len}",
                g.len()
            )));
        }
    }
    ws.ensure(len);
    let dims = shape.len();

    let values = field.values_mut();
    ws.a.copy_from_slice(values);
    for axis in (0..dims).rev() {
        apply_along_axis(ops.axes[axis].explicit_matrix(), &shape, axis, &ws.a, &mut ws.b);
        std::mem::swap(&mut ws.a, &mut ws.b);
    }

    if let Some(g) = source {
        ws.g.copy_from_slice(g);
        if ops.order == SpatialOrder::Fourth {
            let (side, diag) = averaging_weights(ops.alpha, ops.order);
            for axis in (0..dims).rev() {
                stencil_along_axis(side, diag, &shape, axis, &ws.g, &mut ws.g_tmp);
                std::mem::swap(&mut ws.g, &mut ws.g_tmp);
            }
        }
        zero_frame(&shape, &mut ws.g);
        let dt = ops.dt;
        for (r, g) in ws.a.iter_mut().zip(&ws.g) {
            *r += dt * g;
        }
    }

    for axis in 0..dims {
        apply_along_axis(ops.axes[axis].implicit_inverse(), &shape, axis, &ws.a, &mut ws.b);
        std::mem::swap(&mut ws.a, &mut ws.b);
    }
    values.copy_from_slice(&ws.a);
    Ok(())
}

/// Advances fields by one Strang step of a fixed size.
pub struct Stepper<'a> {
    dt: f64,
    ops: DiffusionOperators,
    ws: StepWorkspace,
    sampler: Option<Box<dyn SourceSampler + 'a>>,
    sample: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(config: &'a SolverConfig, dt: f64) -> Result<Self> {
        let ops = DiffusionOperators::assemble(config.alpha, config.eps, dt, &config.grid, config.order)?;
        let len = config.grid.len();
        Ok(Self {
            dt,
            ops,
            ws: StepWorkspace::new(len),
            sampler: config.source.as_ref().map(|s| s.sampler(&config.grid)),
            sample: vec![0.0; len],
        })
    }

    pub fn operators(&self) -> &DiffusionOperators {
        &self.ops
    }

    /// `U^{n+1}` from `U^n` at `t_n = field.time()`.
    pub fn strang_step(&mut self, field: &mut Field) -> Result<()> {
        let t = field.time();
        nonlinear_half_step(field, self.dt);
        let source = match self.sampler.as_mut() {
            Some(sampler) => {
                sampler.fill(t + 0.5 * self.dt, &mut self.sample);
                Some(self.sample.as_slice())
            }
            None => None,
        };
        diffusion_step_adi(field, &self.ops, source, &mut self.ws)?;
        nonlinear_half_step(field, self.dt);
        field.set_time(t + self.dt);
        Ok(())
    }
}

/// Runs `steps` Strang steps of size `dt` from `initial`, calling
/// `observer(n, U^n)` for `n = 0..=steps`. Returns the final field and the
/// max-norm trace.
pub fn integrate(
    config: &SolverConfig,
    dt: f64,
    steps: usize,
    initial: &Field,
    observer: &mut dyn FnMut(usize, &Field),
) -> Result<(Field, Vec<f64>)> {
    let mut field = initial.clone();
    let t0 = initial.time();
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(field.max_norm());
    observer(0, &field);
    if steps == 0 {
        return Ok((field, trace));
    }
    let mut stepper = Stepper::new(config, dt)?;
    for n in 1..=steps {
        stepper.strang_step(&mut field)?;
        field.set_time(t0 + n as f64 * dt);
        trace.push(field.max_norm());
        observer(n, &field);
    }
    Ok((field, trace))
}

fn check_initial(config: &SolverConfig, initial: &Field) -> Result<()> {
    if initial.grid().sizes() != config.grid.sizes() {
        return Err(Error::SizeMismatch(format!(
            "initial field on {:?} but config grid is {:?}",
            initial.grid().sizes(),
            config.grid.sizes()
        )));
    }
    if !initial.boundary_is_zero() {
        return Err(Error::Boundary(
            "initial field must vanish on the boundary".into(),
        ));
    }
    Ok(())
}

/// Full run to `t_end`, extrapolated when `config.extrapolate` is set.
pub fn run(config: &SolverConfig, initial: &Field) -> Result<(Field, RunReport)> {
    run_observed(config, initial, &mut |_, _| {})
}

/// [`run`] with an observer on the `Δt` trajectory.
pub fn run_observed(
    config: &SolverConfig,
    initial: &Field,
    observer: &mut dyn FnMut(usize, &Field),
) -> Result<(Field, RunReport)> {
    config.validate()?;
    check_initial(config, initial)?;
    let steps = config.step_count()?;
    let start = Instant::now();
    let (fine, max_trace) = integrate(config, config.dt, steps, initial, observer)?;
    let mut report = RunReport {
        steps,
        dt: config.dt,
        max_trace,
        ..RunReport::default()
    };
    let result = if config.extrapolate && steps > 0 {
        let (coarse, coarse_trace) =
            integrate(config, 2.0 * config.dt, steps / 2, initial, &mut |_, _| {})?;
        report.extrapolated = true;
        report.coarse_max_trace = Some(coarse_trace);
        richardson_extrapolate(&fine, &coarse)?
    } else {
        fine
    };
    report.cpu_seconds = start.elapsed().as_secs_f64();
    Ok((result, report))
}

/// `(4/3) fine − (1/3) coarse`.
pub fn richardson_extrapolate(fine: &Field, coarse: &Field) -> Result<Field> {
    if !fine.same_shape(coarse) {
        return Err(Error::SizeMismatch(format!(
            "fine grid {:?} vs coarse grid {:?}",
            fine.grid().sizes(),
            coarse.grid().sizes()
        )));
    }
    let values = fine
        .values()
        .iter()
        .zip(coarse.values())
        .map(|(f, c)| f + (f - c) / 3.0)
        .collect();
    Field::from_values(fine.grid().clone(), values, fine.time())
}
