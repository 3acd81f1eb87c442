//! Weights of the fractional centered difference.
//!
//! `c_0 = Γ(α+1) / Γ(α/2+1)²` and `c_s = (1 − (α+1)/(α/2+s)) c_{s−1}` for
//! `s ≥ 1`, with `c_{−s} = c_s`. For `1 < α ≤ 2` the weights satisfy
//! `c_0 > 0`, `c_s ≤ 0` and `Σ_{s≠0} |c_s| < c_0`.

use crate::error::{check_alpha, domain, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    alpha: f64,
    coeffs: Vec<f64>,
}

impl CoefficientTable {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Largest stored offset.
    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_0 .. c_{n_max}`.
    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn c0(&self) -> f64 {
        self.coeffs[0]
    }

    /// `c_s` for any signed offset within `±n_max`.
    #[inline]
    pub fn get(&self, s: isize) -> f64 {
        self.coeffs[s.unsigned_abs()]
    }
}

/// Builds `c_0 ..= c_{n_max}` by the product recurrence.
pub fn build_coefficients(alpha: f64, n_max: usize) -> Result<CoefficientTable> {
    check_alpha(alpha)?;
    if n_max < 1 {
        return Err(domain("n_max", n_max as f64, "n_max >= 1"));
    }
    let half = 0.5 * alpha;
    let mut coeffs = Vec::with_capacity(n_max + 1);
    coeffs.push(central_weight(alpha));
    for s in 1..=n_max {
        let prev = coeffs[s - 1];
        let c = (1.0 - (alpha + 1.0) / (half + s as f64)) * prev;
        // The recurrence hits an exact zero at α = 2; keep it +0.
        coeffs.push(if c == 0.0 { 0.0 } else { c });
    }
    Ok(CoefficientTable { alpha, coeffs })
}

/// `c_0 = Γ(α+1) / Γ(α/2+1)²`.
pub fn central_weight(alpha: f64) -> f64 {
    let g = libm::tgamma(0.5 * alpha + 1.0);
    libm::tgamma(alpha + 1.0) / (g * g)
}
