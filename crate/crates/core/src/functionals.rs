//! The discrete cut functional `F_n`, its continuum limit `J`, and the
//! derived quantities used by the solvers.

use rayon::prelude::*;

use crate::error::{bail, Result};
use crate::fields::{LabelModel, ThetaField};
use crate::graph::Graph;
use crate::graphon::{grid_cell, Graphon, Kernel, StepGraphon, ANALYTIC_TOL};

/// Interiority tolerance for the stationarity check.
pub const KKT_INTERIOR_TOL: f64 = 1e-9;

/// Exact cell averages `W̄_ab = m² ∫_{I_a×I_b} W` on the uniform `m`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureKernel {
    m: usize,
    values: Vec<f64>,
}

impl QuadratureKernel {
    /// Step kernels must have every block boundary on the grid; analytic
    /// kernels are integrated in closed form on any grid.
    pub fn new(w: &Graphon, m: usize) -> Result<Self> {
        match w {
            Graphon::Step(s) => Self::from_step(s, m),
            Graphon::Analytic(a) => Ok(Self::from_kernel(a, m)),
        }
    }

    pub fn from_step(w: &StepGraphon, m: usize) -> Result<Self> {
        if m == 0 {
            bail!(Parameter, "grid must have at least one cell");
        }
        for &b in w.bounds() {
            let k = b * m as f64;
            if (k - k.round()).abs() > ANALYTIC_TOL {
                bail!(Parameter, "block boundary {b} is not on the grid of {m} cells");
            }
        }
        let blocks: Vec<usize> = (0..m)
            .map(|a| {
                let (x0, x1) = grid_cell(a, m);
                w.block_of(0.5 * (x0 + x1))
            })
            .collect();
        let mut values = Vec::with_capacity(m * m);
        for &p in &blocks {
            for &q in &blocks {
                values.push(w.value(p, q));
            }
        }
        Ok(QuadratureKernel { m, values })
    }

    /// Cell averages through the kernel's exact rectangle integrals.
    pub fn from_kernel<K: Kernel + Sync + ?Sized>(w: &K, m: usize) -> Self {
        let values = (0..m)
            .into_par_iter()
            .flat_map_iter(|a| {
                let x = grid_cell(a, m);
                (0..m).map(move |b| w.rect_mean(x, grid_cell(b, m)))
            })
            .collect::<Vec<_>>();
        // rect_mean is symmetric in exact arithmetic; enforce it bitwise
        let mut values = values;
        for a in 0..m {
            for b in 0..a {
                values[b * m + a] = values[a * m + b];
            }
        }
        QuadratureKernel { m, values }
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.m + b]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `(W̄ v)_a = Σ_b W̄_ab v_b`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.values.chunks(self.m).map(|row| row.iter().zip(v).map(|(w, x)| w * x).sum()).collect()
    }
}

fn check_model(theta: &ThetaField, model: &LabelModel) -> Result<()> {
    if theta.labels() != model.len() {
        bail!(Input, "field has {} labels but the model has {}", theta.labels(), model.len());
    }
    Ok(())
}

fn check_grid(kernel: &QuadratureKernel, theta: &ThetaField) -> Result<()> {
    if kernel.cells() != theta.cells() {
        bail!(Parameter, "kernel grid has {} cells but the field has {}", kernel.cells(), theta.cells());
    }
    Ok(())
}

/// `F_n(u) = (1/n²) Σ_{i,j} A_ij f(u(i), u(j))` over ordered pairs, with
/// `u` given as label indices.
pub fn discrete_f(g: &Graph, labels: &[usize], model: &LabelModel) -> Result<f64> {
    let n = g.n();
    if labels.len() != n {
        bail!(Input, "assignment covers {} of {n} nodes", labels.len());
    }
    if labels.iter().any(|&k| k >= model.len()) {
        bail!(Input, "assignment uses a label outside the model");
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if g.has_edge(i, j) {
                total += model.f(labels[i], labels[j]);
            }
        }
    }
    Ok(total / (n * n) as f64)
}

/// The quadratic form `Σ_{h,k} f_hk (1/m²) Σ_{a,b} W̄_ab θ_h(a) θ_k(b)` on a
/// row-major `m × N` weight array. No simplex check.
pub(crate) fn quadratic_form(kernel: &QuadratureKernel, weights: &[f64], model: &LabelModel) -> f64 {
    let m = kernel.cells();
    let n = model.len();
    let columns: Vec<Vec<f64>> = (0..n).map(|k| (0..m).map(|a| weights[a * n + k]).collect()).collect();
    let applied: Vec<Vec<f64>> = columns.iter().map(|c| kernel.apply(c)).collect();
    let mut total = 0.0;
    for h in 0..n {
        for k in 0..n {
            let f = model.f(h, k);
            if f == 0.0 {
                continue;
            }
            let inner: f64 = columns[h].iter().zip(&applied[k]).map(|(a, b)| a * b).sum();
            total += f * inner;
        }
    }
    total / (m * m) as f64
}

/// `J(θ) = Σ_{h,k} f(ℓ_h, ℓ_k) ∫∫ W(x, y) θ_h(x) θ_k(y)`, exact for the
/// cell-constant field.
pub fn limit_j(w: &Graphon, theta: &ThetaField, model: &LabelModel) -> Result<f64> {
    let kernel = QuadratureKernel::new(w, theta.cells())?;
    limit_j_with(&kernel, theta, model)
}

pub fn limit_j_with(kernel: &QuadratureKernel, theta: &ThetaField, model: &LabelModel) -> Result<f64> {
    check_model(theta, model)?;
    check_grid(kernel, theta)?;
    Ok(quadratic_form(kernel, theta.weights(), model))
}

/// Partial derivatives `∂J/∂θ_k(a)` of the discretized functional, as a
/// row-major `m × N` array: `(2/m²) Σ_h f_kh (W̄ θ_h)(a)`.
pub fn j_gradient(w: &Graphon, theta: &ThetaField, model: &LabelModel) -> Result<Vec<f64>> {
    let kernel = QuadratureKernel::new(w, theta.cells())?;
    j_gradient_with(&kernel, theta.weights(), model)
}

pub fn j_gradient_with(kernel: &QuadratureKernel, weights: &[f64], model: &LabelModel) -> Result<Vec<f64>> {
    let m = kernel.cells();
    let n = model.len();
    if weights.len() != m * n {
        bail!(Input, "expected {} weights, got {}", m * n, weights.len());
    }
    let applied: Vec<Vec<f64>> =
        (0..n).map(|h| kernel.apply(&(0..m).map(|a| weights[a * n + h]).collect::<Vec<_>>())).collect();
    let scale = 2.0 / (m * m) as f64;
    let mut grad = vec![0.0; m * n];
    for a in 0..m {
        for k in 0..n {
            grad[a * n + k] = scale * (0..n).map(|h| model.f(k, h) * applied[h][a]).sum::<f64>();
        }
    }
    Ok(grad)
}

/// Spin model, scalar parametrization `θ = θ_{+1}`, `θ_{-1} = 1 - θ`:
/// `J = (8/m²) Σ W̄_ab θ_a (1 - θ_b)` and
/// `∂J/∂θ(a) = (8/m²) Σ_b W̄_ab (1 - 2θ(b))`.
pub fn spin_gradient(w: &Graphon, theta: &[f64]) -> Result<Vec<f64>> {
    let kernel = QuadratureKernel::new(w, theta.len())?;
    Ok(spin_gradient_with(&kernel, theta))
}

pub fn spin_gradient_with(kernel: &QuadratureKernel, theta: &[f64]) -> Vec<f64> {
    let m = kernel.cells();
    let centered: Vec<f64> = theta.iter().map(|t| 1.0 - 2.0 * t).collect();
    let scale = 8.0 / (m * m) as f64;
    kernel.apply(&centered).into_iter().map(|v| scale * v).collect()
}

/// `(8/m²) Σ W̄_ab θ_a (1 - θ_b)`: the spin functional on the scalar field.
pub fn spin_j_with(kernel: &QuadratureKernel, theta: &[f64]) -> f64 {
    let m = kernel.cells();
    let complement: Vec<f64> = theta.iter().map(|t| 1.0 - t).collect();
    let applied = kernel.apply(&complement);
    let inner: f64 = theta.iter().zip(&applied).map(|(a, b)| a * b).sum();
    8.0 * inner / (m * m) as f64
}

/// Stationarity diagnostic for the spin functional under the mass
/// constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct KktReport {
    /// `φ(a) = ∫ W(x, y)(1 - 2θ(y)) dy`, averaged over cell `a`.
    pub phi: Vec<f64>,
    /// Cells with `θ(a) ∈ (τ, 1 - τ)`.
    pub interior: Vec<usize>,
    /// Mean of `φ` over the interior cells; `None` when there are none.
    pub multiplier: Option<f64>,
    /// `max |φ - multiplier|` over the interior cells (0 when vacuous).
    pub residual: f64,
}

impl KktReport {
    /// No interior cells: the condition holds vacuously.
    pub fn is_vacuous(&self) -> bool {
        self.interior.is_empty()
    }
}

pub fn kkt_residual(w: &Graphon, theta: &ThetaField) -> Result<KktReport> {
    if theta.labels() != 2 {
        bail!(Input, "the stationarity check needs a two-label field");
    }
    let kernel = QuadratureKernel::new(w, theta.cells())?;
    Ok(kkt_residual_with(&kernel, &theta.spin_scalar()))
}

pub fn kkt_residual_with(kernel: &QuadratureKernel, theta: &[f64]) -> KktReport {
    let m = kernel.cells() as f64;
    let centered: Vec<f64> = theta.iter().map(|t| 1.0 - 2.0 * t).collect();
    let phi: Vec<f64> = kernel.apply(&centered).into_iter().map(|v| v / m).collect();
    let interior: Vec<usize> = (0..theta.len())
        .filter(|&a| theta[a] > KKT_INTERIOR_TOL && theta[a] < 1.0 - KKT_INTERIOR_TOL)
        .collect();
    if interior.is_empty() {
        return KktReport { phi, interior, multiplier: None, residual: 0.0 };
    }
    let mean = interior.iter().map(|&a| phi[a]).sum::<f64>() / interior.len() as f64;
    let residual = interior.iter().map(|&a| (phi[a] - mean).abs()).fold(0.0, f64::max);
    KktReport { phi, interior, multiplier: Some(mean), residual }
}

/// `Σ_k A_k (λ_k - A_k)`: the block-kernel functional divided by 8.
pub fn block_g(lambda: &[f64], masses: &[f64]) -> f64 {
    lambda.iter().zip(masses).map(|(l, a)| a * (l - a)).sum()
}

/// Per-block masses of a spin field on the block-family kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockReduction {
    /// `A_k = ∫_{C_k} θ`.
    pub masses: Vec<f64>,
    /// `Σ_k A_k (λ_k - A_k)`.
    pub g: f64,
    /// `8 g`, equal to `J(θ)` for the block-family kernel.
    pub j: f64,
}

pub fn block_reduce(lambda: &[f64], theta: &ThetaField) -> Result<BlockReduction> {
    if theta.labels() != 2 {
        bail!(Input, "block reduction needs a two-label field");
    }
    if lambda.is_empty() || lambda.iter().any(|l| !(*l > 0.0)) {
        bail!(Parameter, "block widths must be strictly positive");
    }
    let m = theta.cells();
    let mut edges = vec![0usize];
    let mut acc = 0.0;
    for l in lambda {
        acc += l;
        let k = acc * m as f64;
        if (k - k.round()).abs() > ANALYTIC_TOL {
            bail!(Parameter, "block boundary {acc} is not on the grid of {m} cells");
        }
        edges.push(k.round() as usize);
    }
    if *edges.last().unwrap() != m {
        bail!(Parameter, "block widths must sum to 1");
    }
    let theta = theta.spin_scalar();
    let masses: Vec<f64> =
        edges.windows(2).map(|e| theta[e[0]..e[1]].iter().sum::<f64>() / m as f64).collect();
    let g = block_g(lambda, &masses);
    Ok(BlockReduction { masses, g, j: 8.0 * g })
}

/// Cumulative-mass paths `w_1(x) = ∫_0^x θ`, `w_2(x) = ∫_0^x θ(· + 1/2)`
/// of a two-label field with an even number of cells, sampled at the
/// nodes `i/m`, `i = 0..m/2`.
pub fn w_paths_from_theta(theta: &ThetaField) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = theta.cells();
    if !m.is_multiple_of(2) || theta.labels() != 2 {
        bail!(Parameter, "w-paths need a two-label field on an even grid");
    }
    let t = theta.spin_scalar();
    let path = |offset: usize| -> Vec<f64> {
        let mut out = Vec::with_capacity(m / 2 + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for a in 0..m / 2 {
            acc += t[offset + a];
            out.push(acc / m as f64);
        }
        out
    };
    Ok((path(0), path(m / 2)))
}

/// Half-graph functional in the `w` variables,
/// `8 ∫_0^{1/2} ((1/2 - x) w_1' + x w_2' - 2 w_2' w_1) dx`, for paths that
/// are linear between uniformly spaced nodes on `[0, 1/2]`.
pub fn j_w_form(w1: &[f64], w2: &[f64]) -> Result<f64> {
    if w1.len() != w2.len() || w1.len() < 2 {
        bail!(Input, "paths need the same number (>= 2) of nodes");
    }
    let cells = w1.len() - 1;
    if w1[0].abs() > ANALYTIC_TOL || w2[0].abs() > ANALYTIC_TOL {
        bail!(Infeasible, "paths must start at 0");
    }
    if (w1[cells] + w2[cells] - 0.5).abs() > ANALYTIC_TOL {
        bail!(Infeasible, "w1(1/2) + w2(1/2) = {}, expected 1/2", w1[cells] + w2[cells]);
    }
    let h = 0.5 / cells as f64;
    let mut total = 0.0;
    for i in 0..cells {
        let d1 = (w1[i + 1] - w1[i]) / h;
        let d2 = (w2[i + 1] - w2[i]) / h;
        for d in [d1, d2] {
            if !(-ANALYTIC_TOL..=1.0 + ANALYTIC_TOL).contains(&d) {
                bail!(Infeasible, "path slope {d} on cell {} is outside [0, 1]", i + 1);
            }
        }
        let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
        let x_moment = 0.5 * (x1 * x1 - x0 * x0);
        let w1_integral = 0.5 * h * (w1[i] + w1[i + 1]);
        total += d1 * (0.5 * h - x_moment) + d2 * x_moment - 2.0 * d2 * w1_integral;
    }
    Ok(8.0 * total)
}
