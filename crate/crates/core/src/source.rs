//! Source terms `g(x, t)` added to the right-hand side of the equation.

use std::sync::Arc;

use crate::grid::Grid;

pub trait SourceTerm: Send + Sync {
    fn eval(&self, x: &[f64], t: f64) -> f64;

    /// Grid sampler; the default evaluates [`SourceTerm::eval`] node by node.
    fn sampler(&self, grid: &Grid) -> Box<dyn SourceSampler + '_> {
        Box::new(PointwiseSampler {
            source: self,
            grid: grid.clone(),
            x: vec![0.0; grid.dims()],
        })
    }
}

pub trait SourceSampler: Send {
    /// Writes `g(·, t)` at every node, boundary frame included.
    fn fill(&mut self, t: f64, out: &mut [f64]);
}

impl<F> SourceTerm for F
where
    F: Fn(&[f64], f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        self(x, t)
    }
}

struct PointwiseSampler<'a, S: ?Sized> {
    source: &'a S,
    grid: Grid,
    x: Vec<f64>,
}

impl<S: SourceTerm + ?Sized> SourceSampler for PointwiseSampler<'_, S> {
    fn fill(&mut self, t: f64, out: &mut [f64]) {
        let h = self.grid.spacing().to_vec();
        let (source, x) = (self.source, &mut self.x);
        self.grid.for_each_node(|flat, idx| {
            for a in 0..idx.len() {
                x[a] = idx[a] as f64 * h[a];
            }
            out[flat] = source.eval(x, t);
        });
    }
}

pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `coefficient · e^{rate·t} · Π_a profile_a(x_a)`.
#[derive(Clone)]
pub struct SeparableTerm {
    pub coefficient: f64,
    pub rate: f64,
    pub profiles: Vec<Profile>,
}

/// Sum of [`SeparableTerm`]s. Sampling tabulates each 1-D profile once per
/// grid, so per-step evaluation is a sum of outer products.
#[derive(Clone, Default)]
pub struct SeparableSource {
    terms: Vec<SeparableTerm>,
}

impl SeparableSource {
    pub fn new(terms: Vec<SeparableTerm>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[SeparableTerm] {
        &self.terms
    }
}

impl SourceTerm for SeparableSource {
    fn eval(&self, x: &[f64], t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                term.coefficient
                    * (term.rate * t).exp()
                    * term.profiles.iter().zip(x).map(|(p, &xa)| p(xa)).product::<f64>()
            })
            .sum()
    }

    fn sampler(&self, grid: &Grid) -> Box<dyn SourceSampler + '_> {
        let tables = self
            .terms
            .iter()
            .map(|term| {
                (0..grid.dims())
                    .map(|a| grid.axis_coords(a).into_iter().map(|x| term.profiles[a](x)).collect())
                    .collect()
            })
            .collect();
        Box::new(SeparableSampler {
            source: self,
            shape: grid.shape(),
            tables,
        })
    }
}

struct SeparableSampler<'a> {
    source: &'a SeparableSource,
    shape: Vec<usize>,
    tables: Vec<Vec<Vec<f64>>>,
}

impl SourceSampler for SeparableSampler<'_> {
    fn fill(&mut self, t: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let last = self.shape.len() - 1;
        let inner = self.shape[last];
        for (term, tables) in self.source.terms.iter().zip(&self.tables) {
            let scale = term.coefficient * (term.rate * t).exp();
            let fast = &tables[last];
            for (row, chunk) in out.chunks_mut(inner).enumerate() {
                // leading factor from the slower axes
                let mut lead = scale;
                let mut rem = row;
                for a in (0..last).rev() {
                    lead *= tables[a][rem % self.shape[a]];
                    rem /= self.shape[a];
                }
                if lead != 0.0 {
                    for (o, &f) in chunk.iter_mut().zip(fast) {
                        *o += lead * f;
                    }
                }
            }
        }
    }
}
