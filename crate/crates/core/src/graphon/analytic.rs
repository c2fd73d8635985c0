use super::{Kernel, StepGraphon, EXACT_TOL};
use crate::error::{bail, Result};

/// The named closed-form kernels used by the example families.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticKind {
    /// `W ≡ c`.
    Constant(f64),
    /// `W = 1` iff `y + 1/2 ≤ x` or `x + 1/2 ≤ y`.
    HalfGraph,
    /// `W = 1` on `∪ C_k × C_k` for consecutive intervals of widths `λ_k`.
    BlockFamily(Vec<f64>),
    /// `W = 1` on `([0,γ]×[γ,1]) ∪ ([γ,1]×[0,γ])`.
    Bipartite(f64),
    /// `W = 1` on `(S_n×S_nᶜ) ∪ (S_nᶜ×S_n)`, `S_n` the even-indexed blocks of
    /// width `1/(2n)`.
    Checkerboard(usize),
}

/// A kernel given in closed form, with exact rectangle integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticGraphon {
    kind: AnalyticKind,
    /// Cumulative block boundaries for `BlockFamily`, empty otherwise.
    bounds: Vec<f64>,
}

impl AnalyticGraphon {
    pub fn constant(c: f64) -> Result<Self> {
        if !c.is_finite() {
            bail!(Parameter, "constant graphon value must be finite");
        }
        Ok(Self::plain(AnalyticKind::Constant(c)))
    }

    pub fn halfgraph() -> Self {
        Self::plain(AnalyticKind::HalfGraph)
    }

    pub fn block_family(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() || lambda.iter().any(|l| !(*l > 0.0)) {
            bail!(Parameter, "block widths must be strictly positive");
        }
        let total: f64 = lambda.iter().sum();
        if (total - 1.0).abs() > EXACT_TOL {
            bail!(Parameter, "block widths sum to {total}, expected 1");
        }
        let mut bounds = vec![0.0];
        let mut acc = 0.0;
        for l in &lambda[..lambda.len() - 1] {
            acc += l;
            bounds.push(acc);
        }
        bounds.push(1.0);
        Ok(AnalyticGraphon { kind: AnalyticKind::BlockFamily(lambda), bounds })
    }

    pub fn bipartite(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            bail!(Parameter, "bipartite split γ = {gamma} must lie in (0, 1)");
        }
        Ok(Self::plain(AnalyticKind::Bipartite(gamma)))
    }

    pub fn checkerboard(n: usize) -> Result<Self> {
        if n == 0 {
            bail!(Parameter, "checkerboard order must be at least 1");
        }
        Ok(Self::plain(AnalyticKind::Checkerboard(n)))
    }

    fn plain(kind: AnalyticKind) -> Self {
        AnalyticGraphon { kind, bounds: Vec::new() }
    }

    pub fn kind(&self) -> &AnalyticKind {
        &self.kind
    }

    /// The equivalent step graphon, for kernels that are step functions.
    pub fn to_step(&self) -> Option<StepGraphon> {
        let cuts = self.breakpoints()?;
        let mut bounds = vec![0.0];
        bounds.extend(cuts);
        bounds.push(1.0);
        let k = bounds.len() - 1;
        let mut values = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                let x = 0.5 * (bounds[a] + bounds[a + 1]);
                let y = 0.5 * (bounds[b] + bounds[b + 1]);
                values.push(self.eval(x, y));
            }
        }
        let widths = bounds.windows(2).map(|w| w[1] - w[0]).collect();
        Some(StepGraphon::from_parts(widths, values))
    }

    fn block_index(&self, x: f64) -> usize {
        let inner = &self.bounds[1..];
        inner.partition_point(|&b| b < x).min(inner.len() - 1)
    }
}

fn overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

/// Measure of `S_n ∩ [0, x]` for the checkerboard set `S_n`.
fn checker_measure_below(n: usize, x: f64) -> f64 {
    let h = 0.5 / n as f64;
    let pairs = (x / (2.0 * h)).floor();
    let r = x - pairs * 2.0 * h;
    pairs * h + r.clamp(0.0, h)
}

fn checker_measure(n: usize, r: (f64, f64)) -> f64 {
    checker_measure_below(n, r.1) - checker_measure_below(n, r.0)
}

/// Area of `{(x, y) ∈ [x0,x1]×[y0,y1] : y - x ≥ c}`.
///
/// The integrand `x ↦ |[max(y0, x + c), y1]|` is piecewise linear with
/// kinks at `y0 - c` and `y1 - c`, so the trapezoid rule on the pieces is
/// exact.
fn area_above_diagonal(x: (f64, f64), y: (f64, f64), c: f64) -> f64 {
    let len = |t: f64| (y.1 - y.0.max(t + c)).max(0.0);
    let mut knots = vec![x.0, x.1];
    for k in [y.0 - c, y.1 - c] {
        if k > x.0 && k < x.1 {
            knots.push(k);
        }
    }
    knots.sort_by(f64::total_cmp);
    knots.windows(2).map(|w| 0.5 * (w[1] - w[0]) * (len(w[0]) + len(w[1]))).sum()
}

impl Kernel for AnalyticGraphon {
    fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            AnalyticKind::Constant(c) => *c,
            AnalyticKind::HalfGraph => {
                if y + 0.5 <= x || x + 0.5 <= y {
                    1.0
                } else {
                    0.0
                }
            }
            AnalyticKind::BlockFamily(_) => {
                if self.block_index(x) == self.block_index(y) {
                    1.0
                } else {
                    0.0
                }
            }
            AnalyticKind::Bipartite(g) => {
                if (x <= *g) != (y <= *g) {
                    1.0
                } else {
                    0.0
                }
            }
            AnalyticKind::Checkerboard(n) => {
                let block = |t: f64| ((t * 2.0 * *n as f64).ceil() as usize).max(1) - 1;
                if block(x) % 2 != block(y) % 2 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn rect_integral(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        match &self.kind {
            AnalyticKind::Constant(c) => c * (x.1 - x.0) * (y.1 - y.0),
            AnalyticKind::HalfGraph => area_above_diagonal(x, y, 0.5) + area_above_diagonal(y, x, 0.5),
            AnalyticKind::BlockFamily(_) => {
                self.bounds.windows(2).map(|b| overlap(x, (b[0], b[1])) * overlap(y, (b[0], b[1]))).sum()
            }
            AnalyticKind::Bipartite(g) => {
                let (x1, y1) = (overlap(x, (0.0, *g)), overlap(y, (0.0, *g)));
                let (x2, y2) = (overlap(x, (*g, 1.0)), overlap(y, (*g, 1.0)));
                x1 * y2 + x2 * y1
            }
            AnalyticKind::Checkerboard(n) => {
                let (sx, sy) = (checker_measure(*n, x), checker_measure(*n, y));
                sx * ((y.1 - y.0) - sy) + ((x.1 - x.0) - sx) * sy
            }
        }
    }

    fn rect_mean(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        match &self.kind {
            AnalyticKind::Constant(c) => *c,
            _ => self.rect_integral(x, y) / ((x.1 - x.0) * (y.1 - y.0)),
        }
    }

    fn rect_range(&self, x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
        match &self.kind {
            AnalyticKind::Constant(c) => (*c, *c),
            _ => {
                // {0,1}-valued kernels: the mean decides which values occur
                let mean = self.rect_mean(x, y);
                let lo = if mean >= 1.0 - EXACT_TOL { 1.0 } else { 0.0 };
                let hi = if mean > EXACT_TOL { 1.0 } else { 0.0 };
                (lo, hi)
            }
        }
    }

    fn degree_at(&self, x: f64) -> f64 {
        match &self.kind {
            AnalyticKind::Constant(c) => *c,
            AnalyticKind::HalfGraph => {
                if x <= 0.5 {
                    0.5 - x
                } else {
                    x - 0.5
                }
            }
            AnalyticKind::BlockFamily(lambda) => lambda[self.block_index(x)],
            AnalyticKind::Bipartite(g) => {
                if x <= *g {
                    1.0 - g
                } else {
                    *g
                }
            }
            AnalyticKind::Checkerboard(_) => 0.5,
        }
    }

    fn breakpoints(&self) -> Option<Vec<f64>> {
        match &self.kind {
            AnalyticKind::Constant(_) => Some(Vec::new()),
            AnalyticKind::HalfGraph => None,
            AnalyticKind::BlockFamily(_) => {
                let k = self.bounds.len();
                Some(self.bounds[1..k - 1].to_vec())
            }
            AnalyticKind::Bipartite(g) => Some(vec![*g]),
            AnalyticKind::Checkerboard(n) => {
                let k = 2 * n;
                Some((1..k).map(|i| i as f64 / k as f64).collect())
            }
        }
    }

    fn is_w0(&self) -> bool {
        match &self.kind {
            AnalyticKind::Constant(c) => (0.0..=1.0).contains(c),
            _ => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Midpoint-rule quadrature on a fine grid, for cross-checking the
    /// closed-form integrals.
    fn quadrature(w: &AnalyticGraphon, x: (f64, f64), y: (f64, f64), k: usize) -> f64 {
        let (hx, hy) = ((x.1 - x.0) / k as f64, (y.1 - y.0) / k as f64);
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                s += w.eval(x.0 + (i as f64 + 0.5) * hx, y.0 + (j as f64 + 0.5) * hy);
            }
        }
        s * hx * hy
    }

    #[test]
    fn closed_form_integrals_match_quadrature() {
        let kernels = [
            AnalyticGraphon::halfgraph(),
            AnalyticGraphon::block_family(vec![0.45, 0.35, 0.2]).unwrap(),
            AnalyticGraphon::bipartite(0.3).unwrap(),
            AnalyticGraphon::checkerboard(2).unwrap(),
        ];
        let rects = [
            ((0.0, 1.0), (0.0, 1.0)),
            ((0.05, 0.4), (0.55, 0.95)),
            ((0.6, 0.9), (0.0, 0.45)),
            ((0.2, 0.3), (0.68, 0.77)),
        ];
        for w in &kernels {
            for &(x, y) in &rects {
                let exact = w.rect_integral(x, y);
                let approx = quadrature(w, x, y, 1000);
                // midpoint error on a discontinuity is O(h)
                assert!((exact - approx).abs() < 2e-3, "{w:?} {x:?} {y:?}");
            }
        }
    }

    #[test]
    fn halfgraph_total_mass_is_one_quarter() {
        let w = AnalyticGraphon::halfgraph();
        assert!((w.rect_integral((0.0, 1.0), (0.0, 1.0)) - 0.25).abs() < 1e-15);
        // one grid cell straddling the line y = x + 1/2 is half covered
        let cell = w.rect_integral((0.0, 0.25), (0.5, 0.75));
        assert!((cell - 0.5 * 0.0625).abs() < 1e-15);
    }

    #[test]
    fn checkerboard_integral_is_one_half() {
        for n in 1..6 {
            let w = AnalyticGraphon::checkerboard(n).unwrap();
            assert!((w.rect_integral((0.0, 1.0), (0.0, 1.0)) - 0.5).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn degrees_integrate_to_total_mass() {
        let w = AnalyticGraphon::block_family(vec![0.5, 0.3, 0.2]).unwrap();
        let total: f64 = (0..1000).map(|i| w.degree_at((i as f64 + 0.5) / 1000.0) / 1000.0).sum();
        assert!((total - (0.25 + 0.09 + 0.04)).abs() < 1e-12);
        let b = AnalyticGraphon::bipartite(0.3).unwrap();
        assert_eq!(b.degree_at(0.1), 0.7);
        assert_eq!(b.degree_at(0.9), 0.3);
    }

    #[test]
    fn step_conversion_agrees_pointwise() {
        let w = AnalyticGraphon::block_family(vec![0.25, 0.25, 0.5]).unwrap();
        let s = w.to_step().unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let (x, y) = ((i as f64 + 0.5) / 20.0, (j as f64 + 0.5) / 20.0);
                assert_eq!(w.eval(x, y), s.eval(x, y));
            }
        }
        assert!(AnalyticGraphon::halfgraph().to_step().is_none());
    }

    #[test]
    fn parameter_validation() {
        assert!(AnalyticGraphon::bipartite(0.0).is_err());
        assert!(AnalyticGraphon::bipartite(1.0).is_err());
        assert!(AnalyticGraphon::block_family(vec![0.5, 0.4]).is_err());
        assert!(AnalyticGraphon::checkerboard(0).is_err());
    }
}
