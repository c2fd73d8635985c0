use super::{Kernel, EXACT_TOL};
use crate::error::{bail, Result};
use crate::graph::Graph;

/// A symmetric block kernel: `W(x, y) = values[i][j]` on `I_i × I_j`.
///
/// Blocks follow the labeling convention `I_1 = [0, b_1]`,
/// `I_i = (b_{i-1}, b_i]`. Values may be signed; [`StepGraphon::new_w0`]
/// additionally enforces `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon {
    widths: Vec<f64>,
    bounds: Vec<f64>,
    values: Vec<f64>,
}

impl StepGraphon {
    pub fn new(widths: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let m = widths.len();
        if m == 0 {
            bail!(Input, "a step graphon needs at least one block");
        }
        if let Some(w) = widths.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            bail!(Input, "block width {w} is not strictly positive");
        }
        let total: f64 = widths.iter().sum();
        if (total - 1.0).abs() > EXACT_TOL {
            bail!(Input, "block widths sum to {total}, expected 1");
        }
        if values.len() != m || values.iter().any(|r| r.len() != m) {
            bail!(Input, "value matrix must be {m}x{m}");
        }
        let flat: Vec<f64> = values.into_iter().flatten().collect();
        if flat.iter().any(|v| !v.is_finite()) {
            bail!(Input, "value matrix has non-finite entries");
        }
        for i in 0..m {
            for j in 0..i {
                if flat[i * m + j] != flat[j * m + i] {
                    bail!(Input, "value matrix is not symmetric at ({i}, {j})");
                }
            }
        }
        Ok(Self::from_parts(widths, flat))
    }

    /// Like [`StepGraphon::new`] but rejects values outside `[0, 1]`.
    pub fn new_w0(widths: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let w = Self::new(widths, values)?;
        if !w.is_w0() {
            bail!(Input, "W0 graphon values must lie in [0, 1]");
        }
        Ok(w)
    }

    /// Equal-width blocks.
    pub fn uniform(values: Vec<Vec<f64>>) -> Result<Self> {
        let m = values.len();
        if m == 0 {
            bail!(Input, "a step graphon needs at least one block");
        }
        Self::new(vec![1.0 / m as f64; m], values).map(|mut w| {
            w.bounds = uniform_bounds(m);
            w
        })
    }

    /// One block with constant value `c`.
    pub fn constant(c: f64) -> Self {
        Self::from_parts(vec![1.0], vec![c])
    }

    /// The functional form `W_G` of the adjacency matrix: `n` equal blocks,
    /// value `A_ij` on block `(i, j)`.
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n().max(1);
        let mut values = vec![0.0; n * n];
        for (i, j) in g.edges() {
            values[i * n + j] = 1.0;
            values[j * n + i] = 1.0;
        }
        StepGraphon { widths: vec![1.0 / n as f64; n], bounds: uniform_bounds(n), values }
    }

    pub(crate) fn from_parts(widths: Vec<f64>, values: Vec<f64>) -> Self {
        let m = widths.len();
        debug_assert_eq!(values.len(), m * m);
        let mut bounds = Vec::with_capacity(m + 1);
        let mut acc = 0.0;
        bounds.push(0.0);
        for w in &widths[..m - 1] {
            acc += w;
            bounds.push(acc);
        }
        bounds.push(1.0);
        StepGraphon { widths, bounds, values }
    }

    #[inline]
    pub fn block_count(&self) -> usize {
        self.widths.len()
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// Block boundaries `0 = b_0 < b_1 < ... < b_m = 1`.
    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.widths.len() + j]
    }

    pub fn values(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.widths.len()).map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn values_flat(&self) -> &[f64] {
        &self.values
    }

    pub fn has_equal_widths(&self) -> bool {
        let m = self.block_count() as f64;
        self.widths.iter().all(|w| (w - 1.0 / m).abs() <= EXACT_TOL)
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: f64) -> usize {
        let inner = &self.bounds[1..];
        inner.partition_point(|&b| b < x).min(self.block_count() - 1)
    }

    pub fn integral(&self) -> f64 {
        self.weighted_sum(|v| v)
    }

    /// `∫∫ |W|`.
    pub fn l1_norm(&self) -> f64 {
        self.weighted_sum(f64::abs)
    }

    fn weighted_sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        let m = self.block_count();
        let mut total = 0.0;
        for i in 0..m {
            for j in 0..m {
                total += f(self.value(i, j)) * self.widths[i] * self.widths[j];
            }
        }
        total
    }

    /// `W - c`.
    pub fn sub_constant(&self, c: f64) -> StepGraphon {
        StepGraphon {
            widths: self.widths.clone(),
            bounds: self.bounds.clone(),
            values: self.values.iter().map(|v| v - c).collect(),
        }
    }

    /// Re-expresses `self` on the common refinement of its blocks and the
    /// given interior breakpoints.
    pub fn refine(&self, breakpoints: &[f64]) -> StepGraphon {
        let cuts = merge_bounds(&self.bounds, breakpoints);
        let mids: Vec<usize> = cuts.windows(2).map(|c| self.block_of(0.5 * (c[0] + c[1]))).collect();
        let k = mids.len();
        let mut values = Vec::with_capacity(k * k);
        for &a in &mids {
            for &b in &mids {
                values.push(self.value(a, b));
            }
        }
        StepGraphon { widths: cuts.windows(2).map(|c| c[1] - c[0]).collect(), bounds: cuts, values }
    }

    /// `self - other` on the common refinement of both block structures.
    pub fn sub(&self, other: &StepGraphon) -> StepGraphon {
        let a = self.refine(&other.bounds);
        let b = other.refine(&a.bounds);
        debug_assert_eq!(a.block_count(), b.block_count());
        StepGraphon {
            widths: a.widths,
            bounds: a.bounds,
            values: a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect(),
        }
    }

    /// `W^π(x, y)` for a block permutation of an equal-width graphon:
    /// block `i` of the result carries block `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> StepGraphon {
        let m = self.block_count();
        let mut values = Vec::with_capacity(m * m);
        for &a in perm {
            for &b in perm {
                values.push(self.value(a, b));
            }
        }
        StepGraphon {
            widths: perm.iter().map(|&p| self.widths[p]).collect(),
            bounds: self.bounds.clone(),
            values,
        }
    }

    /// Merges blocks whose rows are identical. The cut norm is unchanged
    /// since the bilinear objective only sees the total measure chosen
    /// inside a group of identical blocks.
    pub fn merge_identical_blocks(&self) -> StepGraphon {
        self.merge_identical_blocks_with_groups().0
    }

    /// As [`merge_identical_blocks`](Self::merge_identical_blocks), also
    /// returning the merged block each original block went to.
    pub fn merge_identical_blocks_with_groups(&self) -> (StepGraphon, Vec<usize>) {
        let m = self.block_count();
        let mut rep: Vec<usize> = Vec::new();
        let mut group_of = vec![0usize; m];
        'outer: for i in 0..m {
            for (g, &r) in rep.iter().enumerate() {
                if (0..m).all(|j| self.value(i, j) == self.value(r, j)) {
                    group_of[i] = g;
                    continue 'outer;
                }
            }
            group_of[i] = rep.len();
            rep.push(i);
        }
        let k = rep.len();
        let mut widths = vec![0.0; k];
        for i in 0..m {
            widths[group_of[i]] += self.widths[i];
        }
        let mut values = Vec::with_capacity(k * k);
        for &a in &rep {
            for &b in &rep {
                values.push(self.value(a, b));
            }
        }
        // merged groups need not be contiguous, so bounds are nominal
        (Self::from_parts(widths, values), group_of)
    }
}

fn uniform_bounds(m: usize) -> Vec<f64> {
    (0..=m).map(|i| i as f64 / m as f64).collect()
}

/// Union of two sorted boundary lists, dropping near-duplicates.
fn merge_bounds(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> =
        a.iter().chain(b).copied().filter(|x| (0.0..=1.0).contains(x)).chain([0.0, 1.0]).collect();
    all.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(all.len());
    for x in all {
        match out.last() {
            Some(&last) if x - last <= EXACT_TOL => {}
            _ => out.push(x),
        }
    }
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}

fn overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

impl Kernel for StepGraphon {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.value(self.block_of(x), self.block_of(y))
    }

    fn rect_integral(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        let m = self.block_count();
        let ox: Vec<f64> = (0..m).map(|i| overlap(x, (self.bounds[i], self.bounds[i + 1]))).collect();
        let oy: Vec<f64> = (0..m).map(|j| overlap(y, (self.bounds[j], self.bounds[j + 1]))).collect();
        let mut total = 0.0;
        for (i, &a) in ox.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in oy.iter().enumerate() {
                if b != 0.0 {
                    total += self.value(i, j) * a * b;
                }
            }
        }
        total
    }

    fn rect_range(&self, x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
        let m = self.block_count();
        let touched = |r: (f64, f64)| -> Vec<usize> {
            (0..m).filter(|&i| overlap(r, (self.bounds[i], self.bounds[i + 1])) > 0.0).collect()
        };
        let (bx, by) = (touched(x), touched(y));
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in &bx {
            for &j in &by {
                lo = lo.min(self.value(i, j));
                hi = hi.max(self.value(i, j));
            }
        }
        (lo, hi)
    }

    fn degree_at(&self, x: f64) -> f64 {
        let i = self.block_of(x);
        (0..self.block_count()).map(|j| self.value(i, j) * self.widths[j]).sum()
    }

    fn breakpoints(&self) -> Option<Vec<f64>> {
        let m = self.block_count();
        Some(self.bounds[1..m].to_vec())
    }

    fn is_w0(&self) -> bool {
        self.values.iter().all(|v| (0.0..=1.0).contains(v))
    }
}
