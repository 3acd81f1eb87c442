//! Numerical checks of the scheme's guarantees: von Neumann amplification
//! factors, the maximum-principle time-step window, max-norm monitoring, and
//! error/order bookkeeping for refinement studies.

use num_complex::Complex64;

use crate::coeffs::{build_coefficients, central_weight};
use crate::error::{check_alpha, Error, Result};
use crate::grid::Field;
use crate::operator::SpatialOrder;
use crate::stepper::RunReport;

/// Max-norm values above `1 + VIOLATION_TOL` count as violations.
pub const VIOLATION_TOL: f64 = 1e-12;

/// Which offsets enter the truncated symbol `Σ_s c_s e^{−i s w}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolRange {
    /// `s ∈ [−(m−1), m−1]`.
    Symmetric,
    /// `s ∈ [i−m+1, i−1]`, the range seen by interior node `i`.
    Node(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplificationQuery {
    pub alpha: f64,
    pub order: SpatialOrder,
    /// Per-axis `β = Δt ε² / (2 h^α)`.
    pub betas: Vec<f64>,
    /// Per-axis phase angles.
    pub phases: Vec<f64>,
    /// Per-axis interval counts.
    pub m: Vec<usize>,
    pub ranges: Vec<SymbolRange>,
}

impl AmplificationQuery {
    /// Query with symmetric truncation on every axis.
    pub fn symmetric(alpha: f64, betas: Vec<f64>, phases: Vec<f64>, m: Vec<usize>) -> Self {
        let ranges = vec![SymbolRange::Symmetric; betas.len()];
        Self {
            alpha,
            order: SpatialOrder::Fourth,
            betas,
            phases,
            m,
            ranges,
        }
    }
}

/// Truncated symbol of the fractional difference at phase `w`.
pub fn truncated_symbol(coeffs: &[f64], m: usize, w: f64, range: SymbolRange) -> Complex64 {
    match range {
        SymbolRange::Symmetric => {
            let mut re = coeffs[0];
            for (s, &c) in coeffs.iter().enumerate().take(m).skip(1) {
                re += 2.0 * c * (s as f64 * w).cos();
            }
            Complex64::new(re, 0.0)
        }
        SymbolRange::Node(i) => {
            let lo = i as isize - m as isize + 1;
            let hi = i as isize - 1;
            (lo..=hi)
                .map(|s| coeffs[s.unsigned_abs()] * Complex64::from_polar(1.0, -(s as f64) * w))
                .sum()
        }
    }
}

/// `Π_axes |(a − βS)/(a + βS)|` with `a = 1 + α(cos w − 1)/12` (order 4) or
/// `a = 1` (order 2).
pub fn amplification_factor(q: &AmplificationQuery) -> Result<f64> {
    check_alpha(q.alpha)?;
    let d = q.betas.len();
    if q.phases.len() != d || q.m.len() != d || q.ranges.len() != d {
        return Err(Error::SizeMismatch(format!(
            "per-axis lengths differ: betas {d}, phases {}, m {}, ranges {}",
            q.phases.len(),
            q.m.len(),
            q.ranges.len()
        )));
    }
    let m_max = q.m.iter().copied().max().unwrap_or(2);
    if q.m.iter().any(|&m| m < 2) {
        return Err(Error::SizeMismatch("truncation sizes must be >= 2".into()));
    }
    if let Some(&w) = q.phases.iter().find(|w| !w.is_finite()) {
        return Err(crate::error::domain("phase", w, "finite phase angle"));
    }
    let table = build_coefficients(q.alpha, m_max)?;
    let coeffs = table.as_slice();
    let mut factor = 1.0;
    for a in 0..d {
        if let SymbolRange::Node(i) = q.ranges[a] {
            if i == 0 || i >= q.m[a] {
                return Err(Error::SizeMismatch(format!(
                    "node {i} is not interior for m = {}",
                    q.m[a]
                )));
            }
        }
        let w = q.phases[a];
        let avg = match q.order {
            SpatialOrder::Fourth => 1.0 + q.alpha * (w.cos() - 1.0) / 12.0,
            SpatialOrder::Second => 1.0,
        };
        let s = truncated_symbol(coeffs, q.m[a], w, q.ranges[a]) * q.betas[a];
        factor *= ((avg - s) / (avg + s)).norm();
    }
    Ok(factor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowConstant {
    /// Upper constant `(12 − α)/6`.
    Relaxed,
    /// Upper constant `(12 − α)/12`.
    #[default]
    Conservative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxPrincipleWindow {
    pub dt_min: f64,
    pub dt_max: f64,
    pub constant: WindowConstant,
}

impl MaxPrincipleWindow {
    pub fn contains(&self, dt: f64) -> bool {
        dt >= self.dt_min && dt <= self.dt_max
    }

    pub fn is_empty(&self) -> bool {
        self.dt_min > self.dt_max
    }
}

/// Sufficient time-step window for `‖U^n‖_∞ ≤ 1`.
///
/// Order 4: `(α+2)/12 · max h^α/(ε² c_0) ≤ Δt ≤ K · min h^α/(ε² c_0)` with
/// `K` from [`WindowConstant`]. Order 2: `Δt ≤ 2 min h^α/(ε² c_0)`.
pub fn max_principle_window(
    alpha: f64,
    eps: f64,
    meshsizes: &[f64],
    order: SpatialOrder,
    constant: WindowConstant,
) -> Result<MaxPrincipleWindow> {
    check_alpha(alpha)?;
    if !(eps > 0.0) {
        return Err(crate::error::domain("eps", eps, "eps > 0"));
    }
    if meshsizes.is_empty() || meshsizes.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::SizeMismatch("meshsizes must be positive".into()));
    }
    let scale = eps * eps * central_weight(alpha);
    let powered = meshsizes.iter().map(|h| h.powf(alpha));
    let h_max = powered.clone().fold(f64::MIN, f64::max);
    let h_min = powered.fold(f64::MAX, f64::min);
    let (dt_min, dt_max) = match order {
        SpatialOrder::Fourth => {
            let upper = match constant {
                WindowConstant::Relaxed => (12.0 - alpha) / 6.0,
                WindowConstant::Conservative => (12.0 - alpha) / 12.0,
            };
            ((alpha + 2.0) / 12.0 * h_max / scale, upper * h_min / scale)
        }
        SpatialOrder::Second => (0.0, 2.0 * h_min / scale),
    };
    Ok(MaxPrincipleWindow {
        dt_min,
        dt_max,
        constant,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxTrack {
    pub max_trace: Vec<f64>,
    /// Earliest step with `‖U^n‖_∞ > 1 + 1e−12`.
    pub first_violation: Option<usize>,
}

pub fn track_trace(trace: &[f64]) -> MaxTrack {
    MaxTrack {
        max_trace: trace.to_vec(),
        first_violation: trace.iter().position(|&v| v > 1.0 + VIOLATION_TOL),
    }
}

pub fn track_max(report: &RunReport) -> MaxTrack {
    track_trace(&report.max_trace)
}

/// Interior max-norm of `numeric − exact`.
pub fn error_norm(numeric: &Field, exact: &Field) -> Result<f64> {
    if !numeric.same_shape(exact) {
        return Err(Error::SizeMismatch(format!(
            "{:?} vs {:?}",
            numeric.grid().sizes(),
            exact.grid().sizes()
        )));
    }
    let grid = numeric.grid();
    let (a, b) = (numeric.values(), exact.values());
    let mut max = 0.0f64;
    grid.for_each_node(|flat, idx| {
        if !grid.is_boundary(idx) {
            max = max.max((a[flat] - b[flat]).abs());
        }
    });
    Ok(max)
}

/// `log2(e_{k−1}/e_k)` for consecutive entries of a 2× refinement sequence.
pub fn observed_order(errors: &[f64]) -> Result<Vec<f64>> {
    if let Some(&e) = errors.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(crate::error::domain("error", e, "errors must be positive"));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

/// One level of a refinement study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub h: Vec<f64>,
    pub error_plain: f64,
    pub order_plain: Option<f64>,
    pub error_extrapolated: f64,
    pub order_extrapolated: Option<f64>,
    pub cpu_seconds: f64,
}
