use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::discrete::descend;
use super::projection::project_feasible;
use super::transport::transport_lmo;
use super::{lex_cmp, Argument, SolveReport};
use crate::error::{bail, Error, Result};
use crate::fields::{validate_masses, LabelModel};
use crate::functionals::{j_gradient_with, kkt_residual_with, quadratic_form, QuadratureKernel};
use crate::graphon::Graphon;

/// Largest grid the continuum solvers accept.
pub const MAX_GRID_CELLS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuumMethod {
    /// Projected gradient with step `1/L`.
    Pgd,
    /// Frank–Wolfe with step `2/(t+2)`.
    FrankWolfe,
}

impl ContinuumMethod {
    pub fn tag(self) -> &'static str {
        match self {
            ContinuumMethod::Pgd => "pgd",
            ContinuumMethod::FrankWolfe => "frank_wolfe",
        }
    }
}

impl fmt::Display for ContinuumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ContinuumMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pgd" => Ok(ContinuumMethod::Pgd),
            "frank_wolfe" | "frank-wolfe" | "fw" => Ok(ContinuumMethod::FrankWolfe),
            _ => Err(Error::Parameter(format!("unknown method '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOptions {
    pub method: ContinuumMethod,
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    /// Round to the nearest label assignment with the exact counts and run
    /// cell-swap descent; kept only if it does not increase `J`. Needs
    /// `m·mass_k` integral.
    pub polish: bool,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { method: ContinuumMethod::Pgd, seed: 0, restarts: 8, max_iter: 5000, polish: true }
    }
}

/// Minimizes the discretized limit functional on an `m`-cell grid over
/// fields with the given label masses; best over restarts seeded
/// `seed + r`.
pub fn minimize_j(
    w: &Graphon,
    model: &LabelModel,
    masses: &[f64],
    m: usize,
    opts: &MinimizeOptions,
) -> Result<SolveReport> {
    if m == 0 || m > MAX_GRID_CELLS {
        bail!(Capacity, "grid must have 1..={MAX_GRID_CELLS} cells, got {m}");
    }
    let kernel = QuadratureKernel::new(w, m)?;
    minimize_j_with(&kernel, model, masses, opts)
}

struct Run {
    value: f64,
    weights: Vec<f64>,
    iterations: usize,
}

pub fn minimize_j_with(
    kernel: &QuadratureKernel,
    model: &LabelModel,
    masses: &[f64],
    opts: &MinimizeOptions,
) -> Result<SolveReport> {
    validate_masses(masses)?;
    let m = kernel.cells();
    let n = model.len();
    if masses.len() != n {
        bail!(Input, "{} masses for a model with {n} labels", masses.len());
    }
    if opts.restarts == 0 {
        bail!(Parameter, "at least one restart is required");
    }
    if m * n > 1 << 20 {
        bail!(Capacity, "{m} cells × {n} labels is too large");
    }
    let counts: Option<Vec<usize>> = masses
        .iter()
        .map(|p| {
            let c = p * m as f64;
            ((c - c.round()).abs() < 1e-9).then(|| c.round() as usize)
        })
        .collect();

    let runs: Vec<Result<Run>> = (0..opts.restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r));
            let start: Vec<f64> = (0..m * n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let start: Vec<f64> = start
                .chunks(n)
                .flat_map(|row| {
                    let s: f64 = row.iter().sum();
                    row.iter().map(move |v| v / s).collect::<Vec<_>>()
                })
                .collect();
            let x0 = project_feasible(&start, m, masses)?;
            let mut run = match opts.method {
                ContinuumMethod::Pgd => pgd(kernel, model, masses, x0, opts.max_iter)?,
                ContinuumMethod::FrankWolfe => frank_wolfe(kernel, model, masses, x0, opts.max_iter)?,
            };
            if opts.polish {
                if let Some(counts) = &counts {
                    polish(kernel, model, counts, &mut run)?;
                }
            }
            Ok(run)
        })
        .collect();

    let mut best: Option<Run> = None;
    for run in runs {
        let run = run?;
        let replace = match &best {
            None => true,
            Some(b) => run.value.total_cmp(&b.value).then_with(|| lex_cmp(&run.weights, &b.weights)).is_lt(),
        };
        if replace {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let residual = if model.is_spin() {
        let theta: Vec<f64> = best.weights.chunks(2).map(|r| r[0]).collect();
        kkt_residual_with(kernel, &theta).residual
    } else {
        let g = j_gradient_with(kernel, &best.weights, model)?;
        let moved: Vec<f64> = best.weights.iter().zip(&g).map(|(x, g)| x - g).collect();
        let p = project_feasible(&moved, m, masses)?;
        p.iter().zip(&best.weights).fold(0.0, |d, (a, b)| f64::max(d, (a - b).abs()))
    };
    Ok(SolveReport {
        value: quadratic_form(kernel, &best.weights, model),
        argument: Argument::Theta(best.weights.chunks(n).map(|r| r.to_vec()).collect()),
        method: opts.method.tag().into(),
        seed: opts.seed,
        restarts: opts.restarts,
        iterations: best.iterations,
        residual: Some(residual),
    })
}

/// Lipschitz bound for the gradient: `4 · max_h Σ_k |f_hk| · max|W̄| / m`,
/// twice the operator-norm estimate.
fn lipschitz(kernel: &QuadratureKernel, model: &LabelModel) -> f64 {
    let n = model.len();
    let row = (0..n).map(|h| (0..n).map(|k| model.f(h, k).abs()).sum::<f64>()).fold(0.0, f64::max);
    let l = 4.0 * row * kernel.max_abs() / kernel.cells() as f64;
    if l > 0.0 {
        l
    } else {
        1.0
    }
}

fn pgd(
    kernel: &QuadratureKernel,
    model: &LabelModel,
    masses: &[f64],
    mut x: Vec<f64>,
    max_iter: usize,
) -> Result<Run> {
    let m = kernel.cells();
    let step = 1.0 / lipschitz(kernel, model);
    let mut value = quadratic_form(kernel, &x, model);
    let mut iterations = 0;
    while iterations < max_iter {
        let g = j_gradient_with(kernel, &x, model)?;
        let moved: Vec<f64> = x.iter().zip(&g).map(|(x, g)| x - step * g).collect();
        let next = project_feasible(&moved, m, masses)?;
        let next_value = quadratic_form(kernel, &next, model);
        if next_value > value {
            break;
        }
        let change = next.iter().zip(&x).fold(0.0, |d, (a, b)| f64::max(d, (a - b).abs()));
        x = next;
        value = next_value;
        iterations += 1;
        if change < 1e-12 {
            break;
        }
    }
    Ok(Run { value, weights: x, iterations })
}

fn frank_wolfe(
    kernel: &QuadratureKernel,
    model: &LabelModel,
    masses: &[f64],
    mut x: Vec<f64>,
    max_iter: usize,
) -> Result<Run> {
    let m = kernel.cells();
    let mut value = quadratic_form(kernel, &x, model);
    let mut best = (value, x.clone());
    let mut iterations = 0;
    for t in 0..max_iter {
        let g = j_gradient_with(kernel, &x, model)?;
        let s = transport_lmo(&g, m, masses)?;
        // the vertex is feasible too; on concave problems it is often better
        let s_value = quadratic_form(kernel, &s, model);
        if s_value < best.0 {
            best = (s_value, s.clone());
        }
        iterations = t + 1;
        let gap: f64 = g.iter().zip(x.iter().zip(&s)).map(|(g, (x, s))| g * (x - s)).sum();
        if gap <= 1e-13 {
            break;
        }
        let gamma = 2.0 / (t as f64 + 2.0);
        for (xi, si) in x.iter_mut().zip(&s) {
            *xi += gamma * (si - *xi);
        }
        value = quadratic_form(kernel, &x, model);
        if value < best.0 {
            best = (value, x.clone());
        }
    }
    let _ = value;
    Ok(Run { value: best.0, weights: best.1, iterations })
}

/// Nearest assignment with the exact label counts (a transportation vertex
/// maximizing overlap with `x`), then cell-swap descent on
/// `Σ_{a,b} W̄_ab f(u_a, u_b)`.
fn polish(kernel: &QuadratureKernel, model: &LabelModel, counts: &[usize], run: &mut Run) -> Result<()> {
    let m = kernel.cells();
    let n = model.len();
    let masses: Vec<f64> = counts.iter().map(|&c| c as f64 / m as f64).collect();
    let neg: Vec<f64> = run.weights.iter().map(|v| -v).collect();
    let vertex = transport_lmo(&neg, m, &masses)?;
    let mut labels: Vec<usize> = vertex
        .chunks(n)
        .map(|row| {
            row.iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc })
                .0
        })
        .collect();
    descend(m, |a, b| kernel.get(a, b), &mut labels, model);
    let mut weights = vec![0.0; m * n];
    for (a, &l) in labels.iter().enumerate() {
        weights[a * n + l] = 1.0;
    }
    let value = quadratic_form(kernel, &weights, model);
    if value <= run.value {
        run.value = value;
        run.weights = weights;
    }
    Ok(())
}
