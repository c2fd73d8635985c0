//! Cut norm of step graphons.
//!
//! For a step graphon with block widths `w` and values `D`, the cut norm is
//! `sup |Σ_ij D_ij s_i t_j|` over `s_i, t_j` in `[0, w_i]`, `[0, w_j]`. The
//! objective is bilinear, so the supremum sits at a vertex: for a fixed `s`
//! the best `t` keeps exactly the columns whose coefficient has the wanted
//! sign. The exact routine enumerates all `2^m` choices of `s`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Graphon, Kernel, StepGraphon, EXACT_TOL};
use crate::error::{bail, Result};

/// Largest block count accepted by exact cut-norm enumeration.
pub const MAX_EXACT_CUT_BLOCKS: usize = 22;
/// Largest block count accepted by [`cut_norm_forms`].
pub const MAX_FORM_BLOCKS: usize = 10;
/// Largest block count accepted by [`cut_distance_blocks`].
pub const MAX_CUT_DISTANCE_BLOCKS: usize = 8;

/// Masks per enumeration chunk. Chunk boundaries are fixed, so results do
/// not depend on how many worker threads run.
const CHUNK_BITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutNormMode {
    Exact,
    /// Alternating maximization from random vertex starts; a lower bound.
    Heuristic {
        restarts: usize,
        seed: u64,
    },
}

/// A cut-norm value with the block sets attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct CutNorm {
    pub value: f64,
    /// Fraction of each block included in `S` (0 or 1).
    pub s: Vec<f64>,
    /// Fraction of each block included in `T` (0 or 1).
    pub t: Vec<f64>,
    /// `false` for heuristic lower bounds.
    pub exact: bool,
}

impl CutNorm {
    /// `|∫_{S×T} W|` recomputed from the witness.
    pub fn witness_value(&self, w: &StepGraphon) -> f64 {
        let m = w.block_count();
        let widths = w.widths();
        let mut total = 0.0;
        for i in 0..m {
            for j in 0..m {
                total += w.value(i, j) * self.s[i] * widths[i] * self.t[j] * widths[j];
            }
        }
        total.abs()
    }
}

/// Cut norm of a step graphon.
pub fn cut_norm(w: &StepGraphon, mode: CutNormMode) -> Result<CutNorm> {
    match mode {
        CutNormMode::Exact => {
            let m = w.block_count();
            if m > MAX_EXACT_CUT_BLOCKS {
                bail!(Capacity, "exact cut norm supports at most {MAX_EXACT_CUT_BLOCKS} blocks, got {m}");
            }
            Ok(exact_cut_norm(w))
        }
        CutNormMode::Heuristic { restarts, seed } => {
            if restarts == 0 {
                bail!(Parameter, "heuristic cut norm needs at least one restart");
            }
            Ok(heuristic_cut_norm(w, restarts, seed))
        }
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    value: f64,
    s: u64,
    t: u64,
}

impl Candidate {
    /// Larger value first; ties go to the lexicographically smaller
    /// `(s, t)`, each compared as its ascending list of block indices.
    fn better_than(&self, other: &Candidate) -> bool {
        if self.value != other.value {
            return self.value > other.value;
        }
        lex_less(self.s, other.s) || (self.s == other.s && lex_less(self.t, other.t))
    }
}

/// Index-list order on block sets: `{0} < {0, 1} < {1}`.
fn lex_less(a: u64, b: u64) -> bool {
    let d = a ^ b;
    if d == 0 {
        return false;
    }
    let low = d.trailing_zeros();
    let above = |x: u64| low < 63 && x >> (low + 1) != 0;
    if a >> low & 1 == 1 {
        above(b)
    } else {
        !above(a)
    }
}

fn pick(a: Candidate, b: Candidate) -> Candidate {
    if b.better_than(&a) {
        b
    } else {
        a
    }
}

/// Best `t` for fixed column coefficients: returns `(value, t_mask)`.
#[inline]
fn best_columns(coef: &[f64], widths: &[f64]) -> (f64, u64) {
    let (mut pos, mut neg) = (0.0, 0.0);
    let (mut tp, mut tn) = (0u64, 0u64);
    for (j, (&c, &w)) in coef.iter().zip(widths).enumerate() {
        if c > 0.0 {
            pos += c * w;
            tp |= 1 << j;
        } else if c < 0.0 {
            neg -= c * w;
            tn |= 1 << j;
        }
    }
    if pos > neg || (pos == neg && lex_less(tp, tn)) {
        (pos, tp)
    } else {
        (neg, tn)
    }
}

fn exact_cut_norm(w: &StepGraphon) -> CutNorm {
    let m = w.block_count();
    let widths = w.widths();
    let d = w.values_flat();
    let total: u64 = 1 << m;
    let chunk_bits = CHUNK_BITS.min(m);
    let chunk: u64 = 1 << chunk_bits;
    let chunks = total / chunk;

    let scan = |c: u64| -> Candidate {
        let start = c * chunk;
        let mut mask = start ^ (start >> 1);
        let mut coef = vec![0.0; m];
        let recompute = |mask: u64, coef: &mut [f64]| {
            coef.iter_mut().for_each(|x| *x = 0.0);
            for i in (0..m).filter(|i| mask >> i & 1 == 1) {
                for j in 0..m {
                    coef[j] += d[i * m + j] * widths[i];
                }
            }
        };
        recompute(mask, &mut coef);
        let (v, t) = best_columns(&coef, widths);
        let mut best = Candidate { value: v, s: mask, t };
        for k in start + 1..start + chunk {
            let bit = k.trailing_zeros() as usize;
            mask ^= 1 << bit;
            let sign = if mask >> bit & 1 == 1 { 1.0 } else { -1.0 };
            for j in 0..m {
                coef[j] += sign * d[bit * m + j] * widths[bit];
            }
            let (v, t) = best_columns(&coef, widths);
            let cand = Candidate { value: v, s: mask, t };
            if cand.better_than(&best) {
                best = cand;
            }
        }
        best
    };

    let best = (0..chunks).into_par_iter().map(scan).reduce_with(pick).expect("at least one chunk");

    // report the witness value computed from scratch, not the running sum
    let mut coef = vec![0.0; m];
    for i in (0..m).filter(|i| best.s >> i & 1 == 1) {
        for j in 0..m {
            coef[j] += d[i * m + j] * widths[i];
        }
    }
    let value = coef
        .iter()
        .zip(widths)
        .enumerate()
        .filter(|(j, _)| best.t >> j & 1 == 1)
        .map(|(_, (c, w))| c * w)
        .sum::<f64>()
        .abs();
    CutNorm { value, s: mask_to_fractions(best.s, m), t: mask_to_fractions(best.t, m), exact: true }
}

fn mask_to_fractions(mask: u64, m: usize) -> Vec<f64> {
    (0..m).map(|i| (mask >> i & 1) as f64).collect()
}

fn heuristic_cut_norm(w: &StepGraphon, restarts: usize, seed: u64) -> CutNorm {
    let m = w.block_count();
    let widths = w.widths();
    let d = w.values_flat();

    // coefficient of row i (or column i, by symmetry) given the other side
    let line = |sel: &[bool]| -> Vec<f64> {
        (0..m).map(|i| (0..m).filter(|&j| sel[j]).map(|j| d[i * m + j] * widths[j]).sum()).collect()
    };
    let objective = |s: &[bool], t: &[bool]| -> f64 {
        let mut v = 0.0;
        for i in (0..m).filter(|&i| s[i]) {
            for j in (0..m).filter(|&j| t[j]) {
                v += d[i * m + j] * widths[i] * widths[j];
            }
        }
        v
    };

    let run = |r: usize| -> (f64, Vec<bool>, Vec<bool>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
        let start: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
        let mut best = (0.0, vec![false; m], vec![false; m]);
        for sign in [1.0, -1.0] {
            let mut s = start.clone();
            let mut t: Vec<bool>;
            let mut current = f64::NEG_INFINITY;
            loop {
                t = line(&s).iter().map(|c| sign * c > 0.0).collect();
                s = line(&t).iter().map(|c| sign * c > 0.0).collect();
                let v = sign * objective(&s, &t);
                if v <= current + EXACT_TOL * 1e-3 {
                    break;
                }
                current = v;
            }
            let v = objective(&s, &t).abs();
            if v > best.0 {
                best = (v, s, t);
            }
        }
        best
    };

    let (value, s, t) = (0..restarts)
        .into_par_iter()
        .map(run)
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .expect("restarts > 0");
    let to_frac = |v: Vec<bool>| v.into_iter().map(|b| b as u8 as f64).collect();
    CutNorm { value, s: to_frac(s), t: to_frac(t), exact: false }
}

/// The four equivalent-looking cut-norm suprema, computed independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutNormForms {
    /// `sup_{S,T} |∫_{S×T} W|`.
    pub rectangles: f64,
    /// `sup_S |∫_{S×Sᶜ} W|`.
    pub complement: f64,
    /// `sup_{S∩T=∅} |∫_{S×T} W|`.
    pub disjoint: f64,
    /// `sup_{f,g: [0,1]→[0,1]} |∫ W f ⊗ g|`.
    pub functional: f64,
}

/// Evaluates all four suprema by exact enumeration over block fractions.
///
/// The rectangle and functional forms always agree, as do the complement
/// and disjoint forms on nonnegative kernels; the two pairs differ in
/// general (e.g. `1` versus `1/4` for the constant kernel).
pub fn cut_norm_forms(w: &StepGraphon) -> Result<CutNormForms> {
    let m = w.block_count();
    if m > MAX_FORM_BLOCKS {
        bail!(Capacity, "cut-norm forms support at most {MAX_FORM_BLOCKS} blocks, got {m}");
    }
    let all = vec![true; m];
    let complement = complement_form(w, &all);
    let disjoint = (0u32..1 << m)
        .map(|u| {
            let inside: Vec<bool> = (0..m).map(|i| u >> i & 1 == 1).collect();
            complement_form(w, &inside)
        })
        .fold(0.0, f64::max);
    Ok(CutNormForms {
        rectangles: exact_cut_norm(w).value,
        complement,
        disjoint,
        functional: functional_form(w),
    })
}

/// Brute force over both vertex sets of the `(f, g)` box.
fn functional_form(w: &StepGraphon) -> f64 {
    let m = w.block_count();
    let widths = w.widths();
    let rows: Vec<Vec<f64>> = (0u32..1 << m)
        .map(|f| {
            (0..m)
                .map(|j| {
                    (0..m).filter(|i| f >> i & 1 == 1).map(|i| w.value(i, j) * widths[i] * widths[j]).sum()
                })
                .collect()
        })
        .collect();
    let mut best: f64 = 0.0;
    for row in &rows {
        for g in 0u32..1 << m {
            let v: f64 = (0..m).filter(|j| g >> j & 1 == 1).map(|j| row[j]).sum();
            best = best.max(v.abs());
        }
    }
    best
}

/// `sup |∫_{S×(U∖S)} W|` over `S ⊆ U`, with `U` the union of the blocks
/// flagged in `inside`.
///
/// The objective `q(s) = Σ D_ij s_i (w_j − s_j)` is an indefinite quadratic
/// on a box, so the extrema are found by enumerating every face (each
/// coordinate at `0`, at `w_i`, or free) and solving the stationarity
/// system on the free coordinates. Faces with singular systems are skipped:
/// along a null direction the objective is constant, so the same value is
/// attained on a lower-dimensional face.
fn complement_form(w: &StepGraphon, inside: &[bool]) -> f64 {
    let idx: Vec<usize> = (0..inside.len()).filter(|&i| inside[i]).collect();
    let k = idx.len();
    if k == 0 {
        return 0.0;
    }
    let widths = w.widths();
    let d = |a: usize, b: usize| w.value(idx[a], idx[b]);
    let q = |s: &[f64]| -> f64 {
        let mut v = 0.0;
        for a in 0..k {
            for b in 0..k {
                v += d(a, b) * s[a] * (widths[idx[b]] - s[b]);
            }
        }
        v
    };
    let lin: Vec<f64> = (0..k).map(|a| (0..k).map(|b| d(a, b) * widths[idx[b]]).sum()).collect();

    let mut best: f64 = 0.0;
    let patterns = 3usize.pow(k as u32);
    let mut state = vec![0u8; k];
    let mut s = vec![0.0; k];
    for p in 0..patterns {
        let mut r = p;
        for st in state.iter_mut() {
            *st = (r % 3) as u8;
            r /= 3;
        }
        let free: Vec<usize> = (0..k).filter(|&a| state[a] == 2).collect();
        for a in 0..k {
            s[a] = if state[a] == 1 { widths[idx[a]] } else { 0.0 };
        }
        if !free.is_empty() {
            // ∂q/∂s_a = lin_a − 2 Σ_b D_ab s_b = 0 on the free set
            let f = free.len();
            let mat = DMatrix::from_fn(f, f, |r, c| 2.0 * d(free[r], free[c]));
            let rhs = DVector::from_fn(f, |r, _| {
                let a = free[r];
                lin[a] - 2.0 * (0..k).filter(|&b| state[b] != 2).map(|b| d(a, b) * s[b]).sum::<f64>()
            });
            let Some(sol) = mat.lu().solve(&rhs) else {
                continue;
            };
            let mut feasible = true;
            for (r, &a) in free.iter().enumerate() {
                let hi = widths[idx[a]];
                let v = sol[r];
                if !v.is_finite() || v < -EXACT_TOL || v > hi + EXACT_TOL {
                    feasible = false;
                    break;
                }
                s[a] = v.clamp(0.0, hi);
            }
            if !feasible {
                continue;
            }
        }
        best = best.max(q(&s).abs());
    }
    best
}

/// Block-permutation upper bound on the cut distance of two equal-width
/// step graphons: `min_π ||U^π − W||_□`.
pub fn cut_distance_blocks(u: &StepGraphon, w: &StepGraphon) -> Result<f64> {
    let m = u.block_count();
    if w.block_count() != m || !u.has_equal_widths() || !w.has_equal_widths() {
        bail!(Structural, "cut distance needs equal-width graphons with the same block count");
    }
    if m > MAX_CUT_DISTANCE_BLOCKS {
        bail!(Capacity, "block cut distance supports at most {MAX_CUT_DISTANCE_BLOCKS} blocks, got {m}");
    }
    let best = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<usize> = (0..m).filter(|&i| i != first).collect();
            let mut best = f64::INFINITY;
            loop {
                let mut perm = Vec::with_capacity(m);
                perm.push(first);
                perm.extend_from_slice(&rest);
                let diff = u.permuted(&perm).sub(w);
                best = best.min(exact_cut_norm(&diff).value);
                if best == 0.0 || !next_permutation(&mut rest) {
                    break;
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `||W_G − W||_□` for a graph graphon against a limit kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct CutGap {
    pub value: f64,
    /// `false` when the value is only a lower bound.
    pub exact: bool,
    /// Blocks of `w` in `S` and in `T` (0 or 1 each); the rectangle
    /// `S × T` attains `value`.
    pub s: Vec<f64>,
    pub t: Vec<f64>,
}

/// Cut norm of the difference between a step graphon (typically `W_G`) and
/// a limit kernel.
///
/// Step-function limits are compared exactly on the common refinement.
/// Other kernels are averaged over the cells of `w`; if the difference is
/// of one sign on every cell the cut norm is its total integral, otherwise
/// the averaged difference gives a lower bound. Identical blocks are merged
/// first; when more than [`MAX_EXACT_CUT_BLOCKS`] remain the heuristic runs
/// with the given restarts and seed.
pub fn cut_gap(w: &StepGraphon, limit: &Graphon, restarts: usize, seed: u64) -> Result<CutGap> {
    let (diff, mut exact) = match limit.breakpoints() {
        Some(_) => {
            let step = match limit {
                Graphon::Step(s) => s.clone(),
                Graphon::Analytic(a) => a.to_step().expect("step kernel"),
            };
            (w.sub(&step), true)
        }
        None => {
            let m = w.block_count();
            let b = w.bounds();
            let mut values = Vec::with_capacity(m * m);
            let (mut nonneg, mut nonpos) = (true, true);
            for i in 0..m {
                for j in 0..m {
                    let (x, y) = ((b[i], b[i + 1]), (b[j], b[j + 1]));
                    let (lo, hi) = limit.rect_range(x, y);
                    let v = w.value(i, j);
                    nonneg &= v - hi >= 0.0;
                    nonpos &= v - lo <= 0.0;
                    values.push(v - limit.rect_mean(x, y));
                }
            }
            let diff = StepGraphon::from_parts(w.widths().to_vec(), values);
            (diff, nonneg || nonpos)
        }
    };
    let (merged, group_of) = diff.merge_identical_blocks_with_groups();
    let flat = merged.values_flat();
    if flat.iter().all(|&v| v >= 0.0) || flat.iter().all(|&v| v <= 0.0) {
        let all = vec![1.0; diff.block_count()];
        return Ok(CutGap { value: merged.integral().abs(), exact, s: all.clone(), t: all });
    }
    let norm = if merged.block_count() <= MAX_EXACT_CUT_BLOCKS {
        exact_cut_norm(&merged)
    } else {
        exact = false;
        heuristic_cut_norm(&merged, restarts.max(1), seed)
    };
    let unmerge = |pick: &[f64]| group_of.iter().map(|&g| pick[g]).collect();
    Ok(CutGap { value: norm.value, exact: exact && norm.exact, s: unmerge(&norm.s), t: unmerge(&norm.t) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::graphon::AnalyticGraphon;

    /// Independent oracle: every pair of block subsets.
    fn all_subset_pairs(w: &StepGraphon) -> f64 {
        let m = w.block_count();
        let widths = w.widths();
        let mut best: f64 = 0.0;
        for s in 0u32..1 << m {
            for t in 0u32..1 << m {
                let mut v = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        if s >> i & 1 == 1 && t >> j & 1 == 1 {
                            v += w.value(i, j) * widths[i] * widths[j];
                        }
                    }
                }
                best = best.max(v.abs());
            }
        }
        best
    }

    fn random_step(m: usize, seed: u64, signed: bool) -> StepGraphon {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut widths: Vec<f64> = raw.iter().map(|r| r / total).collect();
        let head: f64 = widths[..m - 1].iter().sum();
        widths[m - 1] = 1.0 - head;
        let mut v = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..=i {
                let x = if signed { rng.gen_range(-1.0..1.0) } else { rng.gen_range(0.0..1.0) };
                v[i][j] = x;
                v[j][i] = x;
            }
        }
        StepGraphon::new(widths, v).unwrap()
    }

    #[test]
    fn spec_examples() {
        let one = StepGraphon::constant(1.0);
        assert_eq!(cut_norm(&one, CutNormMode::Exact).unwrap().value, 1.0);

        let k2 = StepGraphon::from_graph(&Graph::from_edges(2, [(0, 1)]).unwrap());
        let c = cut_norm(&k2, CutNormMode::Exact).unwrap();
        assert!((c.value - 0.5).abs() < EXACT_TOL);
        assert_eq!((c.s.clone(), c.t.clone()), (vec![1.0, 1.0], vec![1.0, 1.0]));

        let checker = StepGraphon::uniform(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap().sub_constant(0.5);
        let c = cut_norm(&checker, CutNormMode::Exact).unwrap();
        assert!((c.value - 0.125).abs() < EXACT_TOL);
        assert!((c.witness_value(&checker) - c.value).abs() < EXACT_TOL);
    }

    #[test]
    fn exact_matches_subset_pair_oracle() {
        for seed in 0..30 {
            let m = 1 + (seed as usize % 6);
            let w = random_step(m, seed, seed % 2 == 0);
            let c = cut_norm(&w, CutNormMode::Exact).unwrap();
            let oracle = all_subset_pairs(&w);
            assert!((c.value - oracle).abs() < EXACT_TOL, "seed {seed}");
            assert!((c.witness_value(&w) - c.value).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn capacity_and_parameter_errors() {
        let big = StepGraphon::from_graph(&Graph::empty(23));
        assert!(matches!(cut_norm(&big, CutNormMode::Exact), Err(crate::Error::Capacity(_))));
        assert!(matches!(
            cut_norm(&big, CutNormMode::Heuristic { restarts: 0, seed: 1 }),
            Err(crate::Error::Parameter(_))
        ));
        assert!(cut_norm_forms(&StepGraphon::from_graph(&Graph::empty(11))).is_err());
    }

    #[test]
    fn heuristic_is_a_lower_bound_and_usually_tight() {
        for seed in 0..40 {
            let m = 2 + (seed as usize % 5);
            let w = random_step(m, 100 + seed, true);
            let exact = cut_norm(&w, CutNormMode::Exact).unwrap().value;
            let h = cut_norm(&w, CutNormMode::Heuristic { restarts: 32, seed }).unwrap();
            assert!(h.value <= exact + EXACT_TOL);
            assert!((h.value - exact).abs() < EXACT_TOL, "seed {seed}");
            assert!((h.witness_value(&w) - h.value).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn forms_on_constant_kernel() {
        let f = cut_norm_forms(&StepGraphon::constant(1.0)).unwrap();
        assert!((f.rectangles - 1.0).abs() < EXACT_TOL);
        assert!((f.functional - 1.0).abs() < EXACT_TOL);
        assert!((f.complement - 0.25).abs() < EXACT_TOL);
        assert!((f.disjoint - 0.25).abs() < EXACT_TOL);

        let zero = cut_norm_forms(&StepGraphon::constant(0.0)).unwrap();
        assert_eq!((zero.rectangles, zero.complement, zero.disjoint, zero.functional), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn forms_pairwise_equal_on_random_w0() {
        for seed in [7u64, 8, 9, 10] {
            let w = random_step(3, seed, false);
            let f = cut_norm_forms(&w).unwrap();
            assert!((f.rectangles - f.functional).abs() < EXACT_TOL);
            assert!((f.complement - f.disjoint).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn complement_form_matches_fine_grid_search() {
        // s ranges over a fine lattice of each block; the exact value can
        // only be larger, and by at most the lattice resolution.
        let w = random_step(2, 11, false);
        let exact = cut_norm_forms(&w).unwrap().complement;
        let widths = w.widths();
        let k = 400;
        let mut best: f64 = 0.0;
        for a in 0..=k {
            for b in 0..=k {
                let s = [widths[0] * a as f64 / k as f64, widths[1] * b as f64 / k as f64];
                let mut v = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        v += w.value(i, j) * s[i] * (widths[j] - s[j]);
                    }
                }
                best = best.max(v.abs());
            }
        }
        assert!(exact >= best - EXACT_TOL);
        assert!(exact - best < 1e-4);
    }

    #[test]
    fn cut_distance_examples() {
        let a = StepGraphon::uniform(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let b = StepGraphon::uniform(vec![vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(cut_distance_blocks(&a, &a).unwrap(), 0.0);
        assert_eq!(cut_distance_blocks(&a, &b).unwrap(), 0.0);
        let k2 = StepGraphon::from_graph(&Graph::from_edges(2, [(0, 1)]).unwrap());
        let zero = StepGraphon::uniform(vec![vec![0.0; 2]; 2]).unwrap();
        assert!((cut_distance_blocks(&k2, &zero).unwrap() - 0.5).abs() < EXACT_TOL);

        let three = StepGraphon::uniform(vec![vec![0.0; 3]; 3]).unwrap();
        assert!(matches!(cut_distance_blocks(&a, &three), Err(crate::Error::Structural(_))));
        let nine = StepGraphon::from_graph(&Graph::empty(9));
        assert!(matches!(cut_distance_blocks(&nine, &nine), Err(crate::Error::Capacity(_))));
    }

    #[test]
    fn cut_distance_is_bounded_by_identity_difference() {
        for seed in 0..10 {
            let u = random_step(4, seed, false);
            let u = StepGraphon::uniform(u.values()).unwrap();
            let w = StepGraphon::uniform(random_step(4, seed + 50, false).values()).unwrap();
            let dist = cut_distance_blocks(&u, &w).unwrap();
            let direct = cut_norm(&u.sub(&w), CutNormMode::Exact).unwrap().value;
            assert!(dist <= direct + EXACT_TOL);
        }
    }

    #[test]
    fn cut_norm_is_bounded_by_l1() {
        for seed in 0..20 {
            let w = random_step(5, 200 + seed, true);
            let c = cut_norm(&w, CutNormMode::Exact).unwrap().value;
            assert!(c <= w.l1_norm() + EXACT_TOL);
        }
    }

    #[test]
    fn gap_against_halfgraph_is_exact_and_small() {
        for n in [4usize, 8, 16] {
            let k = n / 2;
            let edges = (0..k).flat_map(|i| (i + k..n).map(move |j| (i, j)));
            let g = Graph::from_edges(n, edges).unwrap();
            let gap =
                cut_gap(&StepGraphon::from_graph(&g), &AnalyticGraphon::halfgraph().into(), 8, 0).unwrap();
            assert!(gap.exact);
            assert!((gap.value - 0.5 / n as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn tie_break_prefers_low_indices() {
        assert!(lex_less(0b01, 0b11) && lex_less(0b11, 0b10) && lex_less(0, 0b1));
        assert!(!lex_less(0b10, 0b01) && !lex_less(0b101, 0b101));
        let w = StepGraphon::uniform(vec![vec![-0.5, 0.5], vec![0.5, -0.5]]).unwrap();
        let c = cut_norm(&w, CutNormMode::Exact).unwrap();
        assert_eq!((c.value, c.s, c.t), (0.125, vec![1.0, 0.0], vec![1.0, 0.0]));
    }

    #[test]
    fn gap_witness_reproduces_value() {
        let limit: Graphon = AnalyticGraphon::halfgraph().into();
        for w in
            [StepGraphon::uniform(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(), random_step(4, 31, true)]
        {
            let gap = cut_gap(&w, &limit, 4, 0).unwrap();
            let b = w.bounds();
            let mut total = 0.0;
            for i in 0..w.block_count() {
                for j in 0..w.block_count() {
                    if gap.s[i] > 0.5 && gap.t[j] > 0.5 {
                        let (x, y) = ((b[i], b[i + 1]), (b[j], b[j + 1]));
                        total += w.value(i, j) * (x.1 - x.0) * (y.1 - y.0) - limit.rect_integral(x, y);
                    }
                }
            }
            assert!((total.abs() - gap.value).abs() < 1e-12, "{total} vs {}", gap.value);
        }
    }

    #[test]
    fn permutation_enumeration_visits_all() {
        let mut v = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
