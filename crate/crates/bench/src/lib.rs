//! Benchmark fixtures shared by the criterion targets.

use fracac_core::problems::{random_initial, RandomInitial};
use fracac_core::{Field, Grid};

/// Random interior data in `[-0.05, 0.05)` on an `m^dims` grid.
pub fn random_field(dims: usize, m: usize) -> Field {
    let grid = Grid::unit(&vec![m; dims]).expect("valid grid");
    random_initial(&RandomInitial::small_symmetric(1), &grid)
}

/// A zero-framed line of `m + 1` nodes.
pub fn random_line(m: usize) -> Vec<f64> {
    let mut line: Vec<f64> = (0..=m).map(|i| ((i * 7919) % 101) as f64 / 101.0 - 0.5).collect();
    line[0] = 0.0;
    line[m] = 0.0;
    line
}
