//! Independent reference implementations shared by the oracle tests and the
//! acceptance suite. Nothing here calls into the solver's numerics.
#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use statrs::function::gamma::{gamma, ln_gamma};

/// `c_s` from Gamma functions, using the reflection formula
/// `c_s = −Γ(α+1) sin(πα/2)/π · Γ(s−α/2)/Γ(s+α/2+1)` for `s ≥ 1`.
pub fn closed_form_coefficient(alpha: f64, s: usize) -> f64 {
    if s == 0 {
        let g = gamma(alpha / 2.0 + 1.0);
        return gamma(alpha + 1.0) / (g * g);
    }
    if alpha == 2.0 {
        return if s == 1 { -1.0 } else { 0.0 };
    }
    let s = s as f64;
    let ratio = (ln_gamma(s - alpha / 2.0) - ln_gamma(s + alpha / 2.0 + 1.0)).exp();
    -gamma(alpha + 1.0) * (PI * alpha / 2.0).sin() / PI * ratio
}

/// `(A ± βC)` on `n = m − 1` interior nodes with `C_ij = −c_|i−j|`.
pub fn factor_matrix(alpha: f64, beta: f64, m: usize, fourth: bool, sign: f64) -> DMatrix<f64> {
    let n = m - 1;
    let (side, diag) = if fourth {
        (alpha / 24.0, 1.0 - alpha / 12.0)
    } else {
        (0.0, 1.0)
    };
    DMatrix::from_fn(n, n, |i, j| {
        let a = match i.abs_diff(j) {
            0 => diag,
            1 => side,
            _ => 0.0,
        };
        a - sign * beta * closed_form_coefficient(alpha, i.abs_diff(j))
    })
}

pub fn averaging_matrix(alpha: f64, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 1.0 - alpha / 12.0,
        1 => alpha / 24.0,
        _ => 0.0,
    })
}

/// `C_ij = −c_|i−j|`.
pub fn difference_matrix(alpha: f64, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| -closed_form_coefficient(alpha, i.abs_diff(j)))
}

/// Interior values of a row-major `(m+1)^2` field.
pub fn interior_2d(values: &[f64], m: usize) -> DVector<f64> {
    let n = m - 1;
    DVector::from_fn(n * n, |k, _| values[(k / n + 1) * (m + 1) + k % n + 1])
}

/// One unfactored Crank-Nicolson step of the compact fractional scheme in
/// 2D on an `m × m` unit grid:
/// `(A⊗A − β C⊗A − β A⊗C) U⁺ = (A⊗A + β C⊗A + β A⊗C) U`.
pub fn dense_cn_step_2d(alpha: f64, eps: f64, dt: f64, m: usize, u: &DVector<f64>) -> DVector<f64> {
    let n = m - 1;
    let h = 1.0 / m as f64;
    let beta = dt * eps * eps / (2.0 * h.powf(alpha));
    let a = averaging_matrix(alpha, n);
    let c = difference_matrix(alpha, n);
    let aa = a.kronecker(&a);
    let mixed = c.kronecker(&a) + a.kronecker(&c);
    let lhs = &aa - &mixed * beta;
    let rhs = (&aa + &mixed * beta) * u;
    lhs.lu().solve(&rhs).expect("nonsingular CN matrix")
}

/// Same step with the factored operator `(A−βC)⊗(A−βC)`.
pub fn dense_factored_step_2d(alpha: f64, eps: f64, dt: f64, m: usize, u: &DVector<f64>) -> DVector<f64> {
    let h = 1.0 / m as f64;
    let beta = dt * eps * eps / (2.0 * h.powf(alpha));
    let imp = factor_matrix(alpha, beta, m, true, -1.0);
    let exp = factor_matrix(alpha, beta, m, true, 1.0);
    let rhs = exp.kronecker(&exp) * u;
    imp.kronecker(&imp).lu().solve(&rhs).expect("nonsingular")
}

/// Classical RK4 for `u' = u − u³`.
pub fn rk4_allen_cahn(u0: f64, t: f64, steps: usize) -> f64 {
    let f = |u: f64| u - u * u * u;
    let h = t / steps as f64;
    let mut u = u0;
    for _ in 0..steps {
        let k1 = f(u);
        let k2 = f(u + 0.5 * h * k1);
        let k3 = f(u + 0.5 * h * k2);
        let k4 = f(u + h * k3);
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    u
}

/// `p(x) = x⁴(1−x)⁴` and its second derivative.
pub fn profile(x: f64) -> f64 {
    (x * (1.0 - x)).powi(4)
}

pub fn profile_dd(x: f64) -> f64 {
    let y = 1.0 - x;
    12.0 * x * x * y.powi(4) - 32.0 * x.powi(3) * y.powi(3) + 12.0 * x.powi(4) * y * y
}

/// Example 1 source at `α = 2`: `u³ − 2u − ε² Δu` for `u = e^{−t} p(x) p(y)`.
pub fn classical_source(eps: f64, x: f64, y: f64, t: f64) -> f64 {
    let u = (-t).exp() * profile(x) * profile(y);
    let lap = (-t).exp() * (profile_dd(x) * profile(y) + profile(x) * profile_dd(y));
    u * u * u - 2.0 * u - eps * eps * lap
}

/// Solves a constant-coefficient tridiagonal system `(lo, di, lo)` in place.
fn thomas(lo: f64, di: f64, rhs: &mut [f64]) {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    c[0] = lo / di;
    rhs[0] /= di;
    for i in 1..n {
        let denom = di - lo * c[i - 1];
        c[i] = lo / denom;
        rhs[i] = (rhs[i] - lo * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

/// Classical fourth-order compact Crank-Nicolson ADI for the Allen-Cahn
/// equation with `Δ` on an `m × m` unit grid, Strang-split with the exact
/// logistic flow, and source `g` sampled at the step midpoint.
pub struct ClassicalCompactAdi {
    pub m: usize,
    pub eps: f64,
    pub dt: f64,
    pub u: Vec<Vec<f64>>,
    pub t: f64,
}

impl ClassicalCompactAdi {
    fn logistic_half(&mut self) {
        let e = (-self.dt).exp();
        for row in &mut self.u {
            for v in row.iter_mut() {
                let u0 = *v;
                if u0 != 0.0 {
                    *v = u0 / (u0 * u0 + (1.0 - u0 * u0) * e).sqrt();
                }
            }
        }
    }

    pub fn step(&mut self, g: &dyn Fn(f64, f64, f64) -> f64) {
        let m = self.m;
        let h = 1.0 / m as f64;
        let beta = self.dt * self.eps * self.eps / (2.0 * h * h);
        let (side, diag) = (1.0 / 12.0, 10.0 / 12.0);
        self.logistic_half();

        let stencil = |l: f64, c: f64, r: f64, w_side: f64, w_diag: f64| w_side * (l + r) + w_diag * c;
        let expl = (side + beta, diag - 2.0 * beta);
        let mut tmp = vec![vec![0.0; m + 1]; m + 1];
        for i in 1..m {
            for j in 1..m {
                let u = &self.u;
                tmp[i][j] = stencil(u[i][j - 1], u[i][j], u[i][j + 1], expl.0, expl.1);
            }
        }
        let mut rhs = vec![vec![0.0; m + 1]; m + 1];
        for i in 1..m {
            for j in 1..m {
                rhs[i][j] = stencil(tmp[i - 1][j], tmp[i][j], tmp[i + 1][j], expl.0, expl.1);
            }
        }
        let tm = self.t + 0.5 * self.dt;
        let gv: Vec<Vec<f64>> = (0..=m)
            .map(|i| (0..=m).map(|j| g(i as f64 * h, j as f64 * h, tm)).collect())
            .collect();
        for i in 1..m {
            for j in 1..m {
                let ay = |r: usize| stencil(gv[r][j - 1], gv[r][j], gv[r][j + 1], side, diag);
                rhs[i][j] += self.dt * stencil(ay(i - 1), ay(i), ay(i + 1), side, diag);
            }
        }

        let (lo, di) = (side - beta, diag + 2.0 * beta);
        for j in 1..m {
            let mut col: Vec<f64> = (1..m).map(|i| rhs[i][j]).collect();
            thomas(lo, di, &mut col);
            for i in 1..m {
                rhs[i][j] = col[i - 1];
            }
        }
        for row in rhs.iter_mut().take(m).skip(1) {
            let mut line = row[1..m].to_vec();
            thomas(lo, di, &mut line);
            row[1..m].copy_from_slice(&line);
        }
        self.u = rhs;
        self.logistic_half();
        self.t += self.dt;
    }

    pub fn flat(&self) -> Vec<f64> {
        self.u.iter().flatten().copied().collect()
    }
}

/// Gauss-Legendre nodes and weights on `[−1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Left Riemann-Liouville derivative of order `α ∈ (1,2)` at `x` for `f`
/// with `f(0) = f'(0) = 0`:
/// `1/Γ(2−α) ∫₀ˣ (x−ξ)^{1−α} f''(ξ) dξ`. The substitution `τ = (x−ξ)^{2−α}`
/// removes the endpoint singularity; panels are graded towards `τ = 0`.
pub fn rl_left_quadrature(alpha: f64, fdd: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let q = 2.0 - alpha;
    let upper = x.powf(q);
    let (nodes, weights) = gauss_legendre(24);
    let mut edges = vec![upper];
    let mut e = upper;
    for _ in 0..40 {
        e *= 0.5;
        edges.push(e);
    }
    edges.push(0.0);
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (b, a) = (w[0], w[1]);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (t, wt) in nodes.iter().zip(&weights) {
            let tau = mid + half * t;
            total += half * wt * fdd(x - tau.powf(1.0 / q));
        }
    }
    total / (q * gamma(q))
}

/// `(D_left + D_right) p` for the symmetric profile `p`.
pub fn rl_sum_quadrature(alpha: f64, x: f64) -> f64 {
    rl_left_quadrature(alpha, &profile_dd, x) + rl_left_quadrature(alpha, &profile_dd, 1.0 - x)
}
