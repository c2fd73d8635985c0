//! Graphon representations and the quantities defined on them: degree,
//! cut norm, block cut distance and homomorphism densities.

mod analytic;
mod cutnorm;
mod homdensity;
mod step;

pub use analytic::{AnalyticGraphon, AnalyticKind};
pub use cutnorm::{
    cut_distance_blocks, cut_gap, cut_norm, cut_norm_forms, CutGap, CutNorm, CutNormForms, CutNormMode,
    MAX_CUT_DISTANCE_BLOCKS, MAX_EXACT_CUT_BLOCKS, MAX_FORM_BLOCKS,
};
pub use homdensity::{hom_density_graph, hom_density_graphon, MAX_HOM_GRAPH_NODES};
pub use step::StepGraphon;

use crate::error::{bail, Result};

/// Tolerance for quantities that are exact in floating point.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for quantities obtained from closed-form integrals.
pub const ANALYTIC_TOL: f64 = 1e-9;

/// A symmetric kernel on the unit square with exact rectangle integrals.
pub trait Kernel {
    /// Pointwise value `W(x, y)`.
    fn eval(&self, x: f64, y: f64) -> f64;

    /// `∫∫_{[x0,x1]×[y0,y1]} W`, exact (closed form, no quadrature).
    fn rect_integral(&self, x: (f64, f64), y: (f64, f64)) -> f64;

    /// Mean value of `W` on a rectangle of positive area.
    fn rect_mean(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        self.rect_integral(x, y) / ((x.1 - x.0) * (y.1 - y.0))
    }

    /// Essential range `(min, max)` of `W` on a rectangle.
    fn rect_range(&self, x: (f64, f64), y: (f64, f64)) -> (f64, f64);

    /// `∫_0^1 W(x, y) dy` for `x` in `[0, 1]`.
    fn degree_at(&self, x: f64) -> f64;

    /// Sorted interior breakpoints in `(0, 1)` when `W` is a step function
    /// on the product grid they induce; `None` for non-step kernels.
    fn breakpoints(&self) -> Option<Vec<f64>>;

    /// Whether every value lies in `[0, 1]`.
    fn is_w0(&self) -> bool;
}

/// Degree `∫_0^1 W(x, y) dy` of the point `x`.
pub fn degree<K: Kernel + ?Sized>(w: &K, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        bail!(Parameter, "degree point {x} is outside [0, 1]");
    }
    Ok(w.degree_at(x))
}

/// Either representation, as read from or written to graphon files.
#[derive(Debug, Clone, PartialEq)]
pub enum Graphon {
    Step(StepGraphon),
    Analytic(AnalyticGraphon),
}

impl Graphon {
    pub fn as_step(&self) -> Option<&StepGraphon> {
        match self {
            Graphon::Step(s) => Some(s),
            Graphon::Analytic(_) => None,
        }
    }
}

impl From<StepGraphon> for Graphon {
    fn from(s: StepGraphon) -> Self {
        Graphon::Step(s)
    }
}

impl From<AnalyticGraphon> for Graphon {
    fn from(a: AnalyticGraphon) -> Self {
        Graphon::Analytic(a)
    }
}

macro_rules! delegate {
    ($self:ident, $w:ident => $e:expr) => {
        match $self {
            Graphon::Step($w) => $e,
            Graphon::Analytic($w) => $e,
        }
    };
}

impl Kernel for Graphon {
    fn eval(&self, x: f64, y: f64) -> f64 {
        delegate!(self, w => w.eval(x, y))
    }
    fn rect_integral(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        delegate!(self, w => w.rect_integral(x, y))
    }
    fn rect_mean(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        delegate!(self, w => w.rect_mean(x, y))
    }
    fn rect_range(&self, x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
        delegate!(self, w => w.rect_range(x, y))
    }
    fn degree_at(&self, x: f64) -> f64 {
        delegate!(self, w => w.degree_at(x))
    }
    fn breakpoints(&self) -> Option<Vec<f64>> {
        delegate!(self, w => w.breakpoints())
    }
    fn is_w0(&self) -> bool {
        delegate!(self, w => w.is_w0())
    }
}

/// Cell `i` of the uniform `m`-grid as `((i)/m, (i+1)/m)`.
#[inline]
pub(crate) fn grid_cell(i: usize, m: usize) -> (f64, f64) {
    (i as f64 / m as f64, (i + 1) as f64 / m as f64)
}
