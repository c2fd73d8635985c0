use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{better, Argument, SolveReport};
use crate::error::{bail, Result};
use crate::fields::{LabelModel, PartitionSpec};
use crate::functionals::discrete_f;
use crate::graph::Graph;

/// Largest graph [`brute_bisection`] enumerates.
pub const MAX_BRUTE_BISECTION_NODES: usize = 24;

/// Exact minimum bisection under the spin model. Enumerates the balanced
/// sets `S ∋ 0` in lexicographic order and keeps the first minimum.
pub fn brute_bisection(g: &Graph) -> Result<SolveReport> {
    let n = g.n();
    if n == 0 || !n.is_multiple_of(2) {
        bail!(Parameter, "bisection needs a positive even node count, got {n}");
    }
    if n > MAX_BRUTE_BISECTION_NODES {
        bail!(Capacity, "exact bisection supports up to {MAX_BRUTE_BISECTION_NODES} nodes, got {n}");
    }
    let adj = g.adjacency_masks();
    let full = (1u64 << n) - 1;
    let k = n / 2;
    // comb[0] = 0 always; comb[1..] walks the k-1 subsets of 1..n
    let mut comb: Vec<usize> = (0..k).collect();
    let mut best_cut = usize::MAX;
    let mut best_mask = 0u64;
    let mut visited = 0usize;
    loop {
        let mask = comb.iter().fold(0u64, |m, &i| m | (1 << i));
        let outside = full & !mask;
        let cut: u32 = comb.iter().map(|&i| (adj[i] & outside).count_ones()).sum();
        visited += 1;
        if (cut as usize) < best_cut {
            best_cut = cut as usize;
            best_mask = mask;
        }
        // next combination of positions 1..k over values 1..n
        let mut pos = k;
        loop {
            if pos <= 1 {
                let labels: Vec<usize> = (0..n).map(|i| usize::from(best_mask >> i & 1 == 0)).collect();
                let value = discrete_f(g, &labels, &LabelModel::spin())?;
                return Ok(SolveReport {
                    value,
                    argument: Argument::Labels(labels),
                    method: "brute".into(),
                    seed: 0,
                    restarts: 1,
                    iterations: visited,
                    residual: None,
                });
            }
            pos -= 1;
            if comb[pos] < n - k + pos {
                comb[pos] += 1;
                for q in pos + 1..k {
                    comb[q] = comb[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Pairwise-swap descent on `Σ_{i,j} a(i, j) f(u_i, u_j)`. Scans pairs
/// `i < j` in order and applies every strictly improving swap until a full
/// pass makes none. Returns the number of swaps.
pub(crate) fn descend<A>(n: usize, a: A, labels: &mut [usize], model: &LabelModel) -> usize
where
    A: Fn(usize, usize) -> f64,
{
    let nl = model.len();
    let f = |h: usize, k: usize| model.f(h, k);
    let mut scale = 0.0f64;
    let mut c = vec![0.0; n * nl];
    for i in 0..n {
        for j in 0..n {
            let aij = a(i, j);
            if aij != 0.0 {
                scale = scale.max(aij.abs());
                for l in 0..nl {
                    c[i * nl + l] += aij * f(l, labels[j]);
                }
            }
        }
    }
    let fmax =
        (0..nl).flat_map(|h| (0..nl).map(move |k| (h, k))).fold(0.0f64, |m, (h, k)| m.max(f(h, k).abs()));
    let tol = 1e-12 * (scale * fmax).max(1.0);

    let mut swaps = 0;
    loop {
        let mut improved = false;
        for i in 0..n {
            for j in i + 1..n {
                let (la, lb) = (labels[i], labels[j]);
                if la == lb {
                    continue;
                }
                let (aii, ajj, aij) = (a(i, i), a(j, j), a(i, j));
                let (faa, fab, fba, fbb) = (f(la, la), f(la, lb), f(lb, la), f(lb, lb));
                let delta = 2.0
                    * ((c[i * nl + lb] - c[i * nl + la]) + (c[j * nl + la] - c[j * nl + lb])
                        - aij * (fbb - fab + faa - fba))
                    - 2.0 * aii * (fba - faa)
                    - 2.0 * ajj * (fab - fbb)
                    + aii * (fbb - faa)
                    + ajj * (faa - fbb);
                if delta < -tol {
                    for k in 0..n {
                        let (aki, akj) = (a(k, i), a(k, j));
                        if aki == 0.0 && akj == 0.0 {
                            continue;
                        }
                        for l in 0..nl {
                            c[k * nl + l] += aki * (f(l, lb) - f(l, la)) + akj * (f(l, la) - f(l, lb));
                        }
                    }
                    labels.swap(i, j);
                    swaps += 1;
                    improved = true;
                }
            }
        }
        if !improved {
            return swaps;
        }
    }
}

/// Size-preserving swap descent from `labels`; returns the local minimum
/// and the number of swaps taken.
pub fn swap_descent(g: &Graph, labels: &[usize], model: &LabelModel) -> Result<(Vec<usize>, usize)> {
    if labels.len() != g.n() || labels.iter().any(|&l| l >= model.len()) {
        bail!(Input, "assignment does not match the graph and model");
    }
    let mut out = labels.to_vec();
    let swaps = descend(g.n(), |i, j| g.a(i, j), &mut out, model);
    Ok((out, swaps))
}

/// Best swap-descent local minimum over `restarts` random starts with the
/// label sizes of `spec`; restart `r` is seeded with `seed + r`.
pub fn local_search_partition(
    g: &Graph,
    spec: &PartitionSpec,
    model: &LabelModel,
    seed: u64,
    restarts: usize,
) -> Result<SolveReport> {
    if spec.n() != g.n() {
        bail!(Parameter, "partition covers {} nodes, graph has {}", spec.n(), g.n());
    }
    if spec.sizes().len() != model.len() {
        bail!(Parameter, "partition has {} labels, model has {}", spec.sizes().len(), model.len());
    }
    if restarts == 0 {
        bail!(Parameter, "at least one restart is required");
    }
    let base: Vec<usize> =
        spec.sizes().iter().enumerate().flat_map(|(l, &s)| std::iter::repeat_n(l, s)).collect();
    let runs: Vec<(f64, Vec<usize>, usize)> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r));
            let mut labels = base.clone();
            labels.shuffle(&mut rng);
            let swaps = descend(g.n(), |i, j| g.a(i, j), &mut labels, model);
            let value = discrete_f(g, &labels, model).expect("labels validated");
            (value, labels, swaps)
        })
        .collect();
    let mut best = &runs[0];
    for run in &runs[1..] {
        if better(run.0, &run.1, best.0, &best.1) {
            best = run;
        }
    }
    Ok(SolveReport {
        value: best.0,
        argument: Argument::Labels(best.1.clone()),
        method: "swap".into(),
        seed,
        restarts,
        iterations: best.2,
        residual: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{bipartite, block_family, complete, halfgraph};

    #[test]
    fn brute_examples() {
        let r = brute_bisection(&complete(4).unwrap().graph).unwrap();
        assert_eq!(r.value, 2.0);
        let r = brute_bisection(&bipartite(0.5, 4).unwrap().graph).unwrap();
        assert_eq!(r.value, 1.0);
        let r = brute_bisection(&block_family(&[0.5, 0.5], 4).unwrap().graph).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.labels().unwrap(), &[0, 0, 1, 1]);
        assert!(matches!(brute_bisection(&Graph::empty(5)), Err(crate::Error::Parameter(_))));
        assert!(matches!(brute_bisection(&Graph::empty(26)), Err(crate::Error::Capacity(_))));
    }

    #[test]
    fn brute_visits_every_balanced_set_once() {
        // C(7, 3) sets of size 4 contain node 0 out of 8 nodes
        let r = brute_bisection(&Graph::empty(8)).unwrap();
        assert_eq!(r.iterations, 35);
        assert_eq!(r.labels().unwrap(), &[0, 0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn brute_halfgraph_small() {
        // edges 13, 14, 24: {1,2} cuts 3, {1,4} cuts 2, {1,3} cuts only 14
        let r = brute_bisection(&halfgraph(4).unwrap().graph).unwrap();
        assert_eq!(r.value, 8.0 * 1.0 / 16.0);
        assert_eq!(r.labels().unwrap(), &[0, 1, 0, 1]);
    }

    #[test]
    fn local_search_on_complete_graph() {
        let g = complete(10).unwrap().graph;
        let spec = PartitionSpec::bisection(10).unwrap();
        let r = local_search_partition(&g, &spec, &LabelModel::spin(), 3, 4).unwrap();
        assert_eq!(r.value, 2.0);
        let again = local_search_partition(&g, &spec, &LabelModel::spin(), 3, 4).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn descent_keeps_an_optimum() {
        let g = halfgraph(8).unwrap().graph;
        let opt = brute_bisection(&g).unwrap();
        let labels = opt.labels().unwrap();
        let (out, swaps) = swap_descent(&g, labels, &LabelModel::spin()).unwrap();
        assert_eq!(swaps, 0);
        assert_eq!(out, labels);
    }

    #[test]
    fn local_search_rejects_mismatched_specs() {
        let g = complete(6).unwrap().graph;
        let spec = PartitionSpec::bisection(8).unwrap();
        assert!(local_search_partition(&g, &spec, &LabelModel::spin(), 0, 1).is_err());
        let spec = PartitionSpec::bisection(6).unwrap();
        assert!(local_search_partition(&g, &spec, &LabelModel::spin(), 0, 0).is_err());
    }
}
