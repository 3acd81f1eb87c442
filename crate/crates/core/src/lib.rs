//! Fourth-order operator-splitting solver for the space-fractional
//! Allen-Cahn equation `u_t = ε² L_α u − (u³ − u)` on the unit square or cube
//! with homogeneous Dirichlet data.
//!
//! * [`coeffs`] and [`operator`]: fractional centered differences, compact
//!   averaging, and the per-axis Crank-Nicolson factors.
//! * [`stepper`]: Strang splitting with exact nonlinear half-steps and an ADI
//!   diffusion step, plus final-time Richardson extrapolation.
//! * [`analysis`]: amplification factors, the maximum-principle time-step
//!   window, and error/order bookkeeping.
//! * [`problems`]: manufactured solutions and random initial data.
//! * [`config`], [`field_io`], [`study`]: run manifests, the `FACF1` field
//!   format, and the convergence/simulation drivers behind the CLI.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod coeffs;
pub mod config;
pub mod dense;
pub mod error;
pub mod field_io;
pub mod grid;
pub mod operator;
pub mod problems;
pub mod source;
pub mod stepper;
pub mod study;
mod sweep;
pub mod toeplitz;

pub use coeffs::{build_coefficients, CoefficientTable};
pub use error::{Error, Result};
pub use grid::{Field, Grid};
pub use operator::{apply_averaging, apply_frac_difference, DirectionOperator, SpatialOrder};
pub use source::{SeparableSource, SeparableTerm, SourceTerm};
pub use stepper::{
    diffusion_step_adi, integrate, nonlinear_half_step, richardson_extrapolate, run, run_observed,
    DiffusionOperators, RunReport, SolverConfig, StepWorkspace, Stepper,
};
