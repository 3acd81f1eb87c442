//! Uniform grids on the unit square/cube and the fields living on them.

use crate::error::{domain, Error, Result};

/// Uniform grid on `[0,1]^d` with `M_a` intervals along axis `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    sizes: Vec<usize>,
    spacing: Vec<f64>,
}

impl Grid {
    /// Unit-domain grid with `h_a = 1 / M_a`.
    pub fn unit(sizes: &[usize]) -> Result<Self> {
        let spacing = sizes.iter().map(|&m| 1.0 / m as f64).collect();
        Self::with_spacing(sizes, spacing)
    }

    pub fn with_spacing(sizes: &[usize], spacing: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&sizes.len()) {
            return Err(domain("dims", sizes.len() as f64, "dims must be 2 or 3"));
        }
        if spacing.len() != sizes.len() {
            return Err(Error::SizeMismatch(format!(
                "{} sizes but {} meshsizes",
                sizes.len(),
                spacing.len()
            )));
        }
        if let Some(&m) = sizes.iter().find(|&&m| m < 2) {
            return Err(domain("M", m as f64, "at least 2 intervals per axis"));
        }
        if let Some(&h) = spacing.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
            return Err(domain("h", h, "meshsize must be positive"));
        }
        Ok(Self {
            sizes: sizes.to_vec(),
            spacing,
        })
    }

    pub fn dims(&self) -> usize {
        self.sizes.len()
    }

    /// Interval counts `M_a`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    /// Node counts `M_a + 1`, the row-major array shape.
    pub fn shape(&self) -> Vec<usize> {
        self.sizes.iter().map(|m| m + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().map(|m| m + 1).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node coordinates along one axis, `x_i = i h`.
    pub fn axis_coords(&self, axis: usize) -> Vec<f64> {
        let h = self.spacing[axis];
        (0..=self.sizes[axis]).map(|i| i as f64 * h).collect()
    }

    pub fn strides(&self) -> Vec<usize> {
        let shape = self.shape();
        let mut strides = vec![1; shape.len()];
        for a in (0..shape.len() - 1).rev() {
            strides[a] = strides[a + 1] * shape[a + 1];
        }
        strides
    }

    /// Calls `f(flat_index, multi_index)` for every node.
    pub fn for_each_node(&self, mut f: impl FnMut(usize, &[usize])) {
        let shape = self.shape();
        let mut idx = vec![0usize; shape.len()];
        for flat in 0..self.len() {
            f(flat, &idx);
            for a in (0..shape.len()).rev() {
                idx[a] += 1;
                if idx[a] < shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
    }

    pub fn is_boundary(&self, idx: &[usize]) -> bool {
        idx.iter()
            .zip(&self.sizes)
            .any(|(&i, &m)| i == 0 || i == m)
    }
}

/// Nodal values on a [`Grid`], row-major with the last axis fastest,
/// boundary frame included.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
    time: f64,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        let values = vec![0.0; grid.len()];
        Self {
            grid,
            values,
            time: 0.0,
        }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch(format!(
                "grid has {} nodes, got {} values",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values, time })
    }

    /// Samples `f(coords)` at interior nodes; the boundary frame is zero.
    pub fn from_interior_fn(grid: Grid, time: f64, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        let mut values = vec![0.0; grid.len()];
        let h = grid.spacing().to_vec();
        let mut x = vec![0.0; grid.dims()];
        grid.for_each_node(|flat, idx| {
            if !grid.is_boundary(idx) {
                for a in 0..idx.len() {
                    x[a] = idx[a] as f64 * h[a];
                }
                values[flat] = f(&x);
            }
        });
        Self { grid, values, time }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, time: f64) {
        self.time = time;
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        let flat: usize = idx
            .iter()
            .zip(self.grid.strides())
            .map(|(i, s)| i * s)
            .sum();
        self.values[flat]
    }

    /// Interior max-norm `‖U‖_∞`.
    pub fn max_norm(&self) -> f64 {
        let mut max = 0.0f64;
        self.grid.for_each_node(|flat, idx| {
            if !self.grid.is_boundary(idx) {
                max = max.max(self.values[flat].abs());
            }
        });
        max
    }

    pub fn boundary_is_zero(&self) -> bool {
        let mut ok = true;
        self.grid.for_each_node(|flat, idx| {
            if self.grid.is_boundary(idx) && self.values[flat] != 0.0 {
                ok = false;
            }
        });
        ok
    }

    pub fn same_shape(&self, other: &Field) -> bool {
        self.grid.sizes() == other.grid.sizes()
    }
}
