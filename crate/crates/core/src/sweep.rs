//! Batched application of an interior matrix to every pencil along an axis.
//!
//! A row-major array of shape `(.., n_a, ..)` is viewed as `outer` slabs of an
//! `n_a × inner` matrix. Along a non-final axis the interior rows of each slab
//! form a strided `(n_a−2) × inner` block and the sweep is a matrix product
//! `M · B`. Along the final axis (`inner = 1`) the pencils are contiguous
//! rows and the sweep is `B · Mᵀ`.
//!
//! Work is split into fixed-size blocks that do not depend on the number of
//! worker threads, so every output value is produced by the same arithmetic
//! in any pool.

use rayon::prelude::*;

use crate::dense::Matrix;

const COLUMN_BLOCK: usize = 512;
const ROW_BLOCK: usize = 256;

#[derive(Clone, Copy)]
struct SendPtr(*mut f64);
// Each work item writes a disjoint set of output entries.
unsafe impl Send for SendPtr {}
unsafe impl Sync for SendPtr {}

/// Row-major shape bookkeeping for one axis.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AxisView {
    pub outer: usize,
    pub len: usize,
    pub inner: usize,
}

impl AxisView {
    pub fn new(shape: &[usize], axis: usize) -> Self {
        Self {
            outer: shape[..axis].iter().product(),
            len: shape[axis],
            inner: shape[axis + 1..].iter().product(),
        }
    }
}

/// `output = M ⊗_axis input` on interior rows of `axis`; the two boundary
/// rows of `axis` are written as zero. Boundary pencils of the other axes are
/// swept as well and stay zero when their input is zero.
pub(crate) fn apply_along_axis(
    mat: &Matrix,
    shape: &[usize],
    axis: usize,
    input: &[f64],
    output: &mut [f64],
) {
    let v = AxisView::new(shape, axis);
    let n = v.len - 2;
    assert_eq!(mat.dim(), n);
    assert_eq!(input.len(), v.outer * v.len * v.inner);
    assert_eq!(output.len(), input.len());
    let a_slice = mat.as_slice();

    if v.inner == 1 {
        output.par_chunks_mut(ROW_BLOCK * v.len).enumerate().for_each(|(blk, chunk)| {
            let rows = chunk.len() / v.len;
            for r in 0..rows {
                chunk[r * v.len] = 0.0;
                chunk[r * v.len + v.len - 1] = 0.0;
            }
            if n == 0 {
                return;
            }
            let a = a_slice.as_ptr();
            let src = input[blk * ROW_BLOCK * v.len + 1..].as_ptr();
            // SAFETY: src/chunk cover `rows` pencils of `v.len` values; the
            // matrix is n×n row-major, read transposed.
            unsafe {
                matrixmultiply::dgemm(
                    rows,
                    n,
                    n,
                    1.0,
                    src,
                    v.len as isize,
                    1,
                    a,
                    1,
                    n as isize,
                    0.0,
                    chunk.as_mut_ptr().add(1),
                    v.len as isize,
                    1,
                );
            }
        });
        return;
    }

    let out = SendPtr(output.as_mut_ptr());
    let blocks_per_slab = v.inner.div_ceil(COLUMN_BLOCK);
    (0..v.outer * blocks_per_slab).into_par_iter().for_each(|item| {
        let o = item / blocks_per_slab;
        let c0 = (item % blocks_per_slab) * COLUMN_BLOCK;
        let cols = COLUMN_BLOCK.min(v.inner - c0);
        let slab = o * v.len * v.inner;
        let out = &out;
        let a = a_slice.as_ptr();
        // SAFETY: item (o, column block) owns columns c0..c0+cols of slab o.
        unsafe {
            let dst = out.0.add(slab + c0);
            for c in 0..cols {
                *dst.add(c) = 0.0;
                *dst.add((v.len - 1) * v.inner + c) = 0.0;
            }
            if n > 0 {
                let src = input[slab + v.inner + c0..].as_ptr();
                matrixmultiply::dgemm(
                    n,
                    n,
                    cols,
                    1.0,
                    a,
                    n as isize,
                    1,
                    src,
                    v.inner as isize,
                    1,
                    0.0,
                    dst.add(v.inner),
                    v.inner as isize,
                    1,
                );
            }
        }
    });
}

/// Three-point stencil `(side, diag, side)` along `axis` for every pencil,
/// boundary pencils included. Boundary rows of `axis` are written as zero.
pub(crate) fn stencil_along_axis(
    side: f64,
    diag: f64,
    shape: &[usize],
    axis: usize,
    input: &[f64],
    output: &mut [f64],
) {
    let v = AxisView::new(shape, axis);
    let slab_len = v.len * v.inner;
    output
        .par_chunks_mut(slab_len)
        .zip(input.par_chunks(slab_len))
        .for_each(|(out, inp)| {
            out[..v.inner].iter_mut().for_each(|x| *x = 0.0);
            out[(v.len - 1) * v.inner..].iter_mut().for_each(|x| *x = 0.0);
            for i in 1..v.len - 1 {
                let (lo, mid, hi) = ((i - 1) * v.inner, i * v.inner, (i + 1) * v.inner);
                for q in 0..v.inner {
                    out[mid + q] = side * inp[lo + q] + diag * inp[mid + q] + side * inp[hi + q];
                }
            }
        });
}
