//! Test problems: manufactured smooth solutions with matching source terms,
//! and seeded random initial data for phase-separation runs.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_alpha, domain, Result};
use crate::grid::{Field, Grid};
use crate::source::{SeparableSource, SeparableTerm};
use crate::stepper::SolverConfig;

/// `x⁴(1−x)⁴`, the one-dimensional profile of the manufactured solutions.
#[inline]
pub fn bump(x: f64) -> f64 {
    let p = x * (1.0 - x);
    let p2 = p * p;
    p2 * p2
}

const BINOMIAL_4: [f64; 5] = [1.0, -4.0, 6.0, -4.0, 1.0];

/// Sum of the left and right Riemann-Liouville derivatives of [`bump`] on
/// `[0,1]`, from the monomial expansion `x⁴(1−x)⁴ = Σ_k (−1)^k C(4,k) x^{4+k}`.
pub fn bump_rl_sum(alpha: f64, x: f64) -> f64 {
    BINOMIAL_4
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let p = 4.0 + k as f64;
            let g = libm::tgamma(p + 1.0) / libm::tgamma(p + 1.0 - alpha);
            b * g * ((x).powf(p - alpha) + (1.0 - x).powf(p - alpha))
        })
        .sum()
}

/// `ε² / (2 cos(απ/2))`, so that `−ε² L_α u = κ (D_left + D_right) u`.
pub fn riesz_prefactor(alpha: f64, eps: f64) -> f64 {
    eps * eps / (2.0 * (0.5 * alpha * PI).cos())
}

/// Source of the 2-D manufactured problem `u = e^{−t} x⁴(1−x)⁴ y⁴(1−y)⁴`.
pub fn source_term_2d(alpha: f64, eps: f64, x: f64, y: f64, t: f64) -> f64 {
    let kappa = riesz_prefactor(alpha, eps);
    let (px, py) = (bump(x), bump(y));
    let e = (-t).exp();
    kappa * e * (bump_rl_sum(alpha, x) * py + bump_rl_sum(alpha, y) * px)
        + (-3.0 * t).exp() * (px * py).powi(3)
        - 2.0 * e * px * py
}

/// Source of the 3-D manufactured problem
/// `u = e^{−t} x⁴(1−x)⁴ y⁴(1−y)⁴ z⁴(1−z)⁴`: `g = u³ − 2u − ε² L_α u`.
pub fn source_term_3d(alpha: f64, eps: f64, x: f64, y: f64, z: f64, t: f64) -> f64 {
    let kappa = riesz_prefactor(alpha, eps);
    let (px, py, pz) = (bump(x), bump(y), bump(z));
    let e = (-t).exp();
    kappa
        * e
        * (bump_rl_sum(alpha, x) * py * pz
            + px * bump_rl_sum(alpha, y) * pz
            + px * py * bump_rl_sum(alpha, z))
        + (-3.0 * t).exp() * (px * py * pz).powi(3)
        - 2.0 * e * px * py * pz
}

/// Smooth manufactured solution `e^{−t} Π_a x_a⁴(1−x_a)⁴` in 2 or 3
/// dimensions with its exact source term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedCase {
    pub dims: usize,
    pub alpha: f64,
    pub eps: f64,
}

impl ManufacturedCase {
    pub fn new(dims: usize, alpha: f64, eps: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(2..=3).contains(&dims) {
            return Err(domain("dims", dims as f64, "dims must be 2 or 3"));
        }
        Ok(Self { dims, alpha, eps })
    }

    /// The 2-D smooth case with `ε = 0.1`.
    pub fn smooth_2d(alpha: f64) -> Result<Self> {
        Self::new(2, alpha, 0.1)
    }

    /// The 3-D smooth case with `ε = 0.1`.
    pub fn smooth_3d(alpha: f64) -> Result<Self> {
        Self::new(3, alpha, 0.1)
    }

    pub fn exact(&self, x: &[f64], t: f64) -> f64 {
        (-t).exp() * x.iter().map(|&xa| bump(xa)).product::<f64>()
    }

    pub fn exact_field(&self, grid: &Grid, t: f64) -> Field {
        Field::from_interior_fn(grid.clone(), t, |x| self.exact(x, t))
    }

    pub fn source_at(&self, x: &[f64], t: f64) -> f64 {
        match self.dims {
            2 => source_term_2d(self.alpha, self.eps, x[0], x[1], t),
            _ => source_term_3d(self.alpha, self.eps, x[0], x[1], x[2], t),
        }
    }

    /// The source as a sum of separable terms.
    pub fn source(&self) -> SeparableSource {
        let alpha = self.alpha;
        let kappa = riesz_prefactor(alpha, self.eps);
        let bump_p: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(bump);
        let frac_p: Arc<dyn Fn(f64) -> f64 + Send + Sync> =
            Arc::new(move |x| bump_rl_sum(alpha, x));
        let cubic_p: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(|x| bump(x).powi(3));
        let mut terms = Vec::with_capacity(self.dims + 2);
        for a in 0..self.dims {
            let profiles = (0..self.dims)
                .map(|b| if a == b { frac_p.clone() } else { bump_p.clone() })
                .collect();
            terms.push(SeparableTerm {
                coefficient: kappa,
                rate: -1.0,
                profiles,
            });
        }
        terms.push(SeparableTerm {
            coefficient: 1.0,
            rate: -3.0,
            profiles: vec![cubic_p; self.dims],
        });
        terms.push(SeparableTerm {
            coefficient: -2.0,
            rate: -1.0,
            profiles: vec![bump_p; self.dims],
        });
        SeparableSource::new(terms)
    }

    /// Solver configuration with this case's source attached.
    pub fn config(&self, dt: f64, t_end: f64, grid: Grid) -> SolverConfig {
        SolverConfig::new(self.alpha, self.eps, dt, t_end, grid).with_source(Arc::new(self.source()))
    }
}

/// Uniform random interior data `scale · U[0,1) + offset` with a zero frame.
///
/// Values are drawn in row-major order over interior nodes from ChaCha8
/// seeded by `seed`, so fields are reproducible across platforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomInitial {
    pub seed: u64,
    pub scale: f64,
    pub offset: f64,
}

impl RandomInitial {
    /// `0.95 · rand + 0.05`.
    pub fn positive(seed: u64) -> Self {
        Self {
            seed,
            scale: 0.95,
            offset: 0.05,
        }
    }

    /// `0.1 · rand − 0.05`.
    pub fn small_symmetric(seed: u64) -> Self {
        Self {
            seed,
            scale: 0.1,
            offset: -0.05,
        }
    }
}

pub fn random_initial(spec: &RandomInitial, grid: &Grid) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Field::from_interior_fn(grid.clone(), 0.0, |_| {
        spec.scale * rng.gen::<f64>() + spec.offset
    })
}
