//! One-dimensional spatial operators along a single grid axis.
//!
//! Lines carry `m + 1` values including both boundary nodes. The assembled
//! matrices act on the `m − 1` interior unknowns only; the homogeneous
//! Dirichlet frame stays implicit.

use std::sync::OnceLock;

use crate::coeffs::{build_coefficients, CoefficientTable};
use crate::dense::{LuFactors, Matrix};
use crate::error::{check_alpha, domain, Error, Result};
use crate::toeplitz::SymmetricToeplitz;

/// Spatial accuracy of the scheme: plain centered differences (order 2) or
/// the compact averaged variant (order 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpatialOrder {
    Second,
    #[default]
    Fourth,
}

impl SpatialOrder {
    pub fn from_int(order: u32) -> Result<Self> {
        match order {
            2 => Ok(Self::Second),
            4 => Ok(Self::Fourth),
            _ => Err(domain("order", order as f64, "order must be 2 or 4")),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Self::Second => 2,
            Self::Fourth => 4,
        }
    }
}

/// `(side, diagonal)` weights of the averaging operator.
pub fn averaging_weights(alpha: f64, order: SpatialOrder) -> (f64, f64) {
    match order {
        SpatialOrder::Second => (0.0, 1.0),
        SpatialOrder::Fourth => (alpha / 24.0, 1.0 - alpha / 12.0),
    }
}

/// `out[i] = −Σ_{s=1}^{m−1} c_{i−s} line[s]` on interior nodes, zero on the
/// boundary.
pub fn apply_frac_difference(table: &CoefficientTable, line: &[f64]) -> Result<Vec<f64>> {
    if line.len() < 2 {
        return Err(Error::SizeMismatch(format!(
            "a line needs at least 2 nodes, got {}",
            line.len()
        )));
    }
    if line.len() > table.n_max() + 2 {
        return Err(Error::SizeMismatch(format!(
            "line of {} nodes needs coefficients up to {}, table stops at {}",
            line.len(),
            line.len() - 2,
            table.n_max()
        )));
    }
    let m = line.len() - 1;
    let mut out = vec![0.0; m + 1];
    for (i, o) in out.iter_mut().enumerate().take(m).skip(1) {
        let mut acc = 0.0;
        for (s, &v) in line.iter().enumerate().take(m).skip(1) {
            acc += table.get(i as isize - s as isize) * v;
        }
        *o = -acc;
    }
    Ok(out)
}

/// Compact averaging `(α/24, 1 − α/12, α/24)` on interior nodes. Boundary
/// inputs take part in the stencil; boundary outputs are zero.
pub fn apply_averaging(alpha: f64, line: &[f64]) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let (side, diag) = averaging_weights(alpha, SpatialOrder::Fourth);
    let m = line.len().saturating_sub(1);
    let mut out = vec![0.0; line.len()];
    for i in 1..m {
        out[i] = side * line[i - 1] + diag * line[i] + side * line[i + 1];
    }
    Ok(out)
}

/// Per-axis operator pair for one time-step size: the explicit factor
/// `A + βC` and the implicit factor `A − βC`, with `β = Δt ε² / (2 h^α)`.
#[derive(Debug)]
pub struct DirectionOperator {
    m: usize,
    h: f64,
    alpha: f64,
    beta: f64,
    order: SpatialOrder,
    table: CoefficientTable,
    explicit: Matrix,
    implicit: Matrix,
    factors: LuFactors,
    inverse: Matrix,
    fast: OnceLock<SymmetricToeplitz>,
}

impl DirectionOperator {
    pub fn assemble(
        alpha: f64,
        eps: f64,
        dt: f64,
        h: f64,
        m: usize,
        order: SpatialOrder,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        if m < 2 {
            return Err(domain("m", m as f64, "at least 2 intervals per axis"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(domain("dt", dt, "dt > 0"));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(domain("eps", eps, "eps >= 0"));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(domain("h", h, "h > 0"));
        }
        let beta = dt * eps * eps / (2.0 * h.powf(alpha));
        let table = build_coefficients(alpha, m)?;
        let (side, diag) = averaging_weights(alpha, order);
        let n = m - 1;
        let averaging = |i: usize, j: usize| match i.abs_diff(j) {
            0 => diag,
            1 => side,
            _ => 0.0,
        };
        // C[i][j] = −c_{|i−j|}
        let explicit = Matrix::from_fn(n, |i, j| {
            averaging(i, j) - beta * table.get(i as isize - j as isize)
        });
        let implicit = Matrix::from_fn(n, |i, j| {
            averaging(i, j) + beta * table.get(i as isize - j as isize)
        });
        if !implicit.is_strictly_diagonally_dominant() {
            return Err(Error::Internal(format!(
                "implicit matrix lost diagonal dominance (alpha={alpha}, beta={beta}, m={m})"
            )));
        }
        let factors = LuFactors::factor(&implicit)?;
        let inverse = factors.inverse();
        Ok(Self {
            m,
            h,
            alpha,
            beta,
            order,
            table,
            explicit,
            implicit,
            factors,
            inverse,
            fast: OnceLock::new(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn order(&self) -> SpatialOrder {
        self.order
    }

    pub fn coefficients(&self) -> &CoefficientTable {
        &self.table
    }

    /// Interior `(m−1)×(m−1)` matrix of `A + βC`.
    pub fn explicit_matrix(&self) -> &Matrix {
        &self.explicit
    }

    /// Interior `(m−1)×(m−1)` matrix of `A − βC`.
    pub fn implicit_matrix(&self) -> &Matrix {
        &self.implicit
    }

    pub(crate) fn implicit_inverse(&self) -> &Matrix {
        &self.inverse
    }

    fn check_line(&self, line: &[f64]) -> Result<()> {
        if line.len() != self.m + 1 {
            return Err(Error::SizeMismatch(format!(
                "expected a line of {} nodes, got {}",
                self.m + 1,
                line.len()
            )));
        }
        if line[0] != 0.0 || line[self.m] != 0.0 {
            return Err(Error::Boundary(format!(
                "line boundary values must be 0, got {} and {}",
                line[0], line[self.m]
            )));
        }
        Ok(())
    }

    fn embed(&self, interior: Vec<f64>) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.m + 1);
        out.push(0.0);
        out.extend(interior);
        out.push(0.0);
        out
    }

    /// Solves `(A − βC) x = rhs` on the interior.
    pub fn solve_line(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        self.check_line(rhs)?;
        let mut x = rhs[1..self.m].to_vec();
        self.factors.solve_in_place(&mut x);
        Ok(self.embed(x))
    }

    /// Dense `(A + βC) line`.
    pub fn apply_explicit(&self, line: &[f64]) -> Result<Vec<f64>> {
        self.check_line(line)?;
        Ok(self.embed(self.explicit.matvec(&line[1..self.m])))
    }

    /// Dense `(A − βC) line`.
    pub fn apply_implicit(&self, line: &[f64]) -> Result<Vec<f64>> {
        self.check_line(line)?;
        Ok(self.embed(self.implicit.matvec(&line[1..self.m])))
    }

    /// `(A + βC) line` with the Toeplitz part applied by FFT.
    pub fn apply_explicit_fast(&self, line: &[f64]) -> Result<Vec<f64>> {
        self.check_line(line)?;
        let n = self.m - 1;
        let toeplitz = self
            .fast
            .get_or_init(|| SymmetricToeplitz::new(&self.table.as_slice()[..n]));
        let x = &line[1..self.m];
        let tx = toeplitz.apply(x);
        let (side, diag) = averaging_weights(self.alpha, self.order);
        let out = (0..n)
            .map(|i| {
                let left = if i > 0 { x[i - 1] } else { 0.0 };
                let right = if i + 1 < n { x[i + 1] } else { 0.0 };
                side * (left + right) + diag * x[i] - self.beta * tx[i]
            })
            .collect();
        Ok(self.embed(out))
    }
}
