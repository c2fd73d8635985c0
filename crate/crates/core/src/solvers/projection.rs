//! Euclidean projections onto the feasible fields
//! `{θ : rows in the simplex, Σ_a θ_k(a) = m·mass_k}`.

use nalgebra::{DMatrix, DVector};

use crate::error::{bail, Result};
use crate::fields::validate_masses;

/// Projection of `v` onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut tau = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        acc += u;
        let t = (acc - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            tau = t;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

fn clip_shift(s: &[f64], nu: f64) -> Vec<f64> {
    s.iter().map(|&x| (x - nu).clamp(0.0, 1.0)).collect()
}

/// Projection of `s` onto `{t ∈ [0,1]^m : Σ t = total}`: `t = clip(s - ν)`
/// with `ν` bracketed by bisection and then solved exactly on the free set.
pub fn project_box_mean(s: &[f64], total: f64) -> Result<Vec<f64>> {
    let m = s.len();
    if s.iter().any(|x| !x.is_finite()) {
        bail!(Input, "cannot project a non-finite point");
    }
    if !(0.0..=m as f64).contains(&total) {
        bail!(Infeasible, "mass {total} does not fit in {m} cells");
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let sum = |nu: f64| -> f64 { s.iter().map(|&x| (x - nu).clamp(0.0, 1.0)).sum() };
    let mut lo = s.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum(mid) > total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let nu = 0.5 * (lo + hi);
    let mut best = clip_shift(s, nu);

    // on the free set Σ_F (s_i - ν) = total - #{t_i = 1}
    let free: Vec<usize> = (0..m).filter(|&i| best[i] > 0.0 && best[i] < 1.0).collect();
    if !free.is_empty() {
        let ones = best.iter().filter(|&&t| t >= 1.0).count() as f64;
        let exact = (free.iter().map(|&i| s[i]).sum::<f64>() - (total - ones)) / free.len() as f64;
        let candidate = clip_shift(s, exact);
        let same_pattern = (0..m).all(|i| {
            let was = (best[i] <= 0.0, best[i] >= 1.0);
            let now = (candidate[i] <= 0.0, candidate[i] >= 1.0);
            was == now || (free.contains(&i) && (s[i] - exact).abs() < 1e-12)
        });
        let err = |t: &[f64]| (t.iter().sum::<f64>() - total).abs();
        if same_pattern && err(&candidate) <= err(&best) {
            best = candidate;
        }
    }
    Ok(best)
}

/// Projection of a row-major `m × N` weight array onto the feasible fields
/// with the given label masses.
pub fn project_feasible(weights: &[f64], m: usize, masses: &[f64]) -> Result<Vec<f64>> {
    validate_masses(masses)?;
    let n = masses.len();
    if weights.len() != m * n {
        bail!(Input, "expected {} weights, got {}", m * n, weights.len());
    }
    if weights.iter().any(|x| !x.is_finite()) {
        bail!(Input, "cannot project a non-finite point");
    }
    // a zero-mass label is identically 0; drop it so the dual stays finite
    let active: Vec<usize> = (0..n).filter(|&k| masses[k] > 0.0).collect();
    if active.len() < n {
        let sub_w: Vec<f64> = (0..m).flat_map(|a| active.iter().map(move |&k| weights[a * n + k])).collect();
        let sub_m: Vec<f64> = active.iter().map(|&k| masses[k]).collect();
        let sub = project_feasible(&sub_w, m, &sub_m)?;
        let mut out = vec![0.0; m * n];
        for a in 0..m {
            for (j, &k) in active.iter().enumerate() {
                out[a * n + k] = sub[a * active.len() + j];
            }
        }
        return Ok(out);
    }
    match n {
        1 => Ok(vec![1.0; m]),
        2 => {
            let s: Vec<f64> = (0..m).map(|a| 0.5 * (1.0 + weights[2 * a] - weights[2 * a + 1])).collect();
            let t = project_box_mean(&s, m as f64 * masses[0])?;
            Ok(t.iter().flat_map(|&x| [x, 1.0 - x]).collect())
        }
        _ => Ok(project_transport(weights, m, masses)),
    }
}

/// Semismooth Newton ascent on the dual of the column-sum constraints.
/// For multipliers `μ` (last fixed at 0), each row is the simplex
/// projection of `y_a + μ`.
fn project_transport(y: &[f64], m: usize, masses: &[f64]) -> Vec<f64> {
    let n = masses.len();
    let target: Vec<f64> = masses.iter().map(|p| p * m as f64).collect();
    let primal = |mu: &[f64]| -> Vec<f64> {
        (0..m)
            .flat_map(|a| {
                let shifted: Vec<f64> = (0..n).map(|k| y[a * n + k] + mu[k]).collect();
                project_simplex(&shifted)
            })
            .collect()
    };
    let dual = |mu: &[f64], x: &[f64]| -> f64 {
        let mut d = 0.0;
        for a in 0..m {
            for k in 0..n {
                let diff = x[a * n + k] - y[a * n + k];
                d += 0.5 * diff * diff - mu[k] * x[a * n + k];
            }
        }
        d + mu.iter().zip(&target).map(|(u, c)| u * c).sum::<f64>()
    };
    let residual = |x: &[f64]| -> Vec<f64> {
        let mut r = target.clone();
        for a in 0..m {
            for k in 0..n {
                r[k] -= x[a * n + k];
            }
        }
        r
    };

    let tol = 1e-13 * (m as f64).max(1.0);
    let mut mu = vec![0.0; n];
    let mut x = primal(&mu);
    let mut d_cur = dual(&mu, &x);
    for _ in 0..200 {
        let r = residual(&x);
        if r.iter().all(|v| v.abs() <= tol) {
            break;
        }
        // generalized Jacobian of the column sums in μ_0..μ_{N-2}
        let dim = n - 1;
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for a in 0..m {
            let support: Vec<usize> = (0..n).filter(|&k| x[a * n + k] > 0.0).collect();
            let inv = 1.0 / support.len() as f64;
            for &p in support.iter().filter(|&&p| p < dim) {
                h[(p, p)] += 1.0;
                for &q in support.iter().filter(|&&q| q < dim) {
                    h[(p, q)] -= inv;
                }
            }
        }
        // the Jacobian is singular when rows sit at simplex vertices;
        // damping by the residual keeps the step an ascent direction
        let r_max = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let damping = r_max.min(1.0).max(1e-12 * m as f64 + 1e-15);
        for p in 0..dim {
            h[(p, p)] += damping;
        }
        let rhs = DVector::from_iterator(dim, r[..dim].iter().cloned());
        let Some(dir) = h.lu().solve(&rhs) else { break };
        let slope: f64 = dir.iter().zip(&r).map(|(d, r)| d * r).sum();
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..80 {
            let trial: Vec<f64> = (0..n).map(|k| if k < dim { mu[k] + step * dir[k] } else { 0.0 }).collect();
            let xt = primal(&trial);
            let dt = dual(&trial, &xt);
            // near the solution the dual gain drowns in rounding; a residual
            // that halves is then accepted instead
            let shrinks = || residual(&xt).iter().all(|v| v.abs() <= 0.5 * r_max);
            if dt >= d_cur + 1e-4 * step * slope || shrinks() {
                mu = trial;
                x = xt;
                d_cur = dt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_feasible(x: &[f64], m: usize, masses: &[f64]) {
        let n = masses.len();
        for a in 0..m {
            let row = &x[a * n..(a + 1) * n];
            assert!(row.iter().all(|&v| v >= 0.0));
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        for k in 0..n {
            let col: f64 = (0..m).map(|a| x[a * n + k]).sum::<f64>() / m as f64;
            assert!((col - masses[k]).abs() < 1e-12, "label {k}: {col} vs {}", masses[k]);
        }
    }

    #[test]
    fn simplex_examples() {
        assert_eq!(project_simplex(&[0.2, 0.8]), vec![0.2, 0.8]);
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.0, 0.0, 0.0]);
        assert!(p.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn box_mean_examples() {
        let t = project_box_mean(&[5.0, -3.0, 0.5, 0.5], 2.0).unwrap();
        assert_eq!(t, vec![1.0, 0.0, 0.5, 0.5]);
        assert!(project_box_mean(&[0.0; 3], 4.0).is_err());
    }

    #[test]
    fn projections_are_feasible_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (m, masses) in [
            (12, vec![0.5, 0.5]),
            (10, vec![0.3, 0.7]),
            (9, vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]),
            (16, vec![0.5, 0.25, 0.125, 0.125]),
        ] {
            let n = masses.len();
            for _ in 0..25 {
                let y: Vec<f64> = (0..m * n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let x = project_feasible(&y, m, &masses).unwrap();
                check_feasible(&x, m, &masses);
                let again = project_feasible(&x, m, &masses).unwrap();
                let diff = x.iter().zip(&again).fold(0.0f64, |d, (a, b)| d.max((a - b).abs()));
                assert!(diff < 1e-12, "not idempotent: {diff}");
            }
        }
    }

    /// Oracle: the projection is the closest feasible point, so no random
    /// feasible point may be closer.
    #[test]
    fn projection_beats_random_feasible_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (m, masses) = (6, vec![0.5, 1.0 / 3.0, 1.0 / 6.0]);
        let n = masses.len();
        let dist = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum() };
        for _ in 0..20 {
            let y: Vec<f64> = (0..m * n).map(|_| rng.gen_range(-1.0..2.0)).collect();
            let x = project_feasible(&y, m, &masses).unwrap();
            for _ in 0..200 {
                let z: Vec<f64> = (0..m * n).map(|_| rng.gen_range(-1.0..2.0)).collect();
                let z = project_feasible(&z, m, &masses).unwrap();
                // convex combinations stay feasible
                let w: Vec<f64> = x.iter().zip(&z).map(|(a, b)| 0.9 * a + 0.1 * b).collect();
                assert!(dist(&y, &x) <= dist(&y, &w) + 1e-12);
            }
        }
    }
}
