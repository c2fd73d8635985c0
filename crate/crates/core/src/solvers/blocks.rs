use crate::error::{bail, Result};
use crate::fields::{LabelModel, ThetaField};
use crate::functionals::{block_g, limit_j};
use crate::graphon::{AnalyticGraphon, Graphon};

const MAX_ENUM_BLOCKS: usize = 20;
const VERTEX_TOL: f64 = 1e-12;
const PLATEAU_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct VertexEnumeration {
    /// `min 8 Σ_k A_k (λ_k - A_k)` over the vertices.
    pub min_j: f64,
    /// Every vertex within `1e-12` of the minimum, sorted.
    pub argmins: Vec<Vec<f64>>,
    /// Distinct vertices visited.
    pub vertices: usize,
}

/// Exact minimum of the concave block functional over
/// `{A : 0 ≤ A_k ≤ λ_k, Σ A_k = mass}` by enumerating the vertices: one
/// coordinate free, a subset of the others at `λ_k`, the rest at 0.
pub fn vertex_enumeration_blocks(lambda: &[f64], mass: f64) -> Result<VertexEnumeration> {
    let n = lambda.len();
    if n == 0 || n > MAX_ENUM_BLOCKS {
        bail!(Capacity, "vertex enumeration supports 1..={MAX_ENUM_BLOCKS} blocks, got {n}");
    }
    if lambda.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
        bail!(Parameter, "block widths must be positive");
    }
    let total: f64 = lambda.iter().sum();
    if !(0.0..=total + VERTEX_TOL).contains(&mass) {
        bail!(Parameter, "mass {mass} is outside [0, {total}]");
    }

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for free in 0..n {
        for subset in 0u32..(1 << n) {
            if subset >> free & 1 == 1 {
                continue;
            }
            let full: f64 = (0..n).filter(|&k| subset >> k & 1 == 1).map(|k| lambda[k]).sum();
            let mut af = mass - full;
            if af < -VERTEX_TOL || af > lambda[free] + VERTEX_TOL {
                continue;
            }
            if af.abs() <= VERTEX_TOL {
                af = 0.0;
            } else if (af - lambda[free]).abs() <= VERTEX_TOL {
                af = lambda[free];
            }
            let a: Vec<f64> = (0..n)
                .map(|k| {
                    if k == free {
                        af
                    } else if subset >> k & 1 == 1 {
                        lambda[k]
                    } else {
                        0.0
                    }
                })
                .collect();
            vertices.push(a);
        }
    }
    vertices.sort_by(|a, b| super::lex_cmp(a, b));
    vertices.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= VERTEX_TOL));

    let values: Vec<f64> = vertices.iter().map(|a| 8.0 * block_g(lambda, a)).collect();
    let min_j = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let argmins = vertices
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v <= min_j + VERTEX_TOL)
        .map(|(a, _)| a.clone())
        .collect();
    Ok(VertexEnumeration { min_j, argmins, vertices: vertices.len() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sharpened {
    pub field: ThetaField,
    /// False when the input had no `θ ≡ 1/2` plateau on `R ∪ (R - 1/2)`.
    pub sharpened: bool,
    pub j_before: f64,
    pub j_after: f64,
}

/// First maximal run of cells `a ≥ m/2` with `θ(a) = θ(a - m/2) = 1/2`.
fn find_plateau(theta: &[f64]) -> Option<(usize, usize)> {
    let m = theta.len();
    let half = m / 2;
    let flat =
        |a: usize| (theta[a] - 0.5).abs() <= PLATEAU_TOL && (theta[a - half] - 0.5).abs() <= PLATEAU_TOL;
    let start = (half..m).find(|&a| flat(a))?;
    let end = (start..m).find(|&a| !flat(a)).unwrap_or(m);
    Some((start, end - start))
}

/// Replaces each half-graph plateau `θ ≡ 1/2` on `R = [a, b]` and
/// `R - 1/2 = [â, b̂]` by a spin field with split parameter `λ = 2/3`:
/// `θ̃ = 0` on `[â, â + (1-λ)l] ∪ [a, a + λl]` and 1 on the rest of the
/// plateau, `θ̄` the same with 0 and 1 exchanged, keeping whichever has the
/// smaller cut. Grids whose plateau length is not a multiple of 3 are
/// refined threefold first.
pub fn sharpen_plateau(theta: &ThetaField) -> Result<Sharpened> {
    if theta.labels() != 2 || !theta.cells().is_multiple_of(2) {
        bail!(Parameter, "plateau sharpening needs a two-label field on an even grid");
    }
    let w: Graphon = AnalyticGraphon::halfgraph().into();
    let model = LabelModel::spin();
    let j_before = limit_j(&w, theta, &model)?;
    let mut field = theta.clone();
    let mut sharpened = false;
    for _ in 0..4 * theta.cells() {
        let t = field.spin_scalar();
        let Some((start, len)) = find_plateau(&t) else {
            break;
        };
        if len % 3 != 0 {
            field = field.refine(3);
            continue;
        }
        let half = t.len() / 2;
        let mirror = start - half;
        let build = |low: f64, high: f64| -> Result<ThetaField> {
            let mut out = t.clone();
            for i in 0..len {
                out[mirror + i] = if i < len / 3 { low } else { high };
                out[start + i] = if i < 2 * len / 3 { low } else { high };
            }
            ThetaField::from_spin_scalar(&out)
        };
        let tilde = build(0.0, 1.0)?;
        let bar = build(1.0, 0.0)?;
        let jt = limit_j(&w, &tilde, &model)?;
        let jb = limit_j(&w, &bar, &model)?;
        field = if jb < jt { bar } else { tilde };
        sharpened = true;
    }
    let j_after = limit_j(&w, &field, &model)?;
    Ok(Sharpened { field, sharpened, j_before, j_after })
}
