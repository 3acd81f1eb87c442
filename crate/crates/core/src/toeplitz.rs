//! Symmetric Toeplitz matrix-vector products through circulant embedding.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// `T` with `T[i][j] = t[|i − j|]`, applied in `O(n log n)`.
pub struct SymmetricToeplitz {
    n: usize,
    spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SymmetricToeplitz {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymmetricToeplitz")
            .field("n", &self.n)
            .field("embedding", &self.spectrum.len())
            .finish()
    }
}

impl SymmetricToeplitz {
    /// `first_column` holds `t[0..n]`.
    pub fn new(first_column: &[f64]) -> Self {
        let n = first_column.len();
        let len = (2 * n).next_power_of_two().max(2);
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);

        // Circulant column: t_0 .. t_{n-1}, zeros, t_{n-1} .. t_1.
        let mut col = vec![Complex64::new(0.0, 0.0); len];
        for (k, &t) in first_column.iter().enumerate() {
            col[k].re = t;
            if k > 0 {
                col[len - k].re = t;
            }
        }
        forward.process(&mut col);
        let scale = 1.0 / len as f64;
        col.iter_mut().for_each(|c| *c *= scale);
        Self {
            n,
            spectrum: col,
            forward,
            inverse,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.spectrum.len()];
        for (b, &v) in buf.iter_mut().zip(x) {
            b.re = v;
        }
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process(&mut buf);
        buf[..self.n].iter().map(|c| c.re).collect()
    }
}
