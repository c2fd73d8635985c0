//! Graph sequences with known graphon limits, W-random sampling, and the
//! oscillating sign–sine spin field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::graph::Graph;
use crate::graphon::{AnalyticGraphon, Graphon, Kernel, StepGraphon};

// Slack for floor(n·Σλ) when the partial sum lands on an integer up to
// rounding, e.g. 10·(0.45 + 0.35) = 7.999999999999999.
const FLOOR_SLACK: f64 = 1e-9;

fn floor_tol(x: f64) -> usize {
    (x + FLOOR_SLACK).floor() as usize
}

/// A finite graph together with the graphon its family converges to.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub graph: Graph,
    pub limit: Graphon,
}

/// `K_n`, converging to the constant kernel 1.
pub fn complete(n: usize) -> Result<FamilyInstance> {
    if n == 0 {
        bail!(Parameter, "complete graph needs at least one node");
    }
    let graph = Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))?;
    Ok(FamilyInstance { graph, limit: AnalyticGraphon::constant(1.0)?.into() })
}

/// Node ranges `[start, end)` of the blocks `C_k^n`, whose last 1-based
/// index is `⌊n Σ_{i≤k} λ_i⌋`.
pub fn block_ranges(lambda: &[f64], n: usize) -> Result<Vec<(usize, usize)>> {
    // validates λ
    AnalyticGraphon::block_family(lambda.to_vec())?;
    let mut ranges = Vec::with_capacity(lambda.len());
    let mut start = 0;
    let mut acc = 0.0;
    for (k, l) in lambda.iter().enumerate() {
        acc += l;
        let end = if k + 1 == lambda.len() { n } else { floor_tol(n as f64 * acc).min(n) };
        if end <= start {
            bail!(Parameter, "block {} is empty at n = {n}", k + 1);
        }
        ranges.push((start, end));
        start = end;
    }
    Ok(ranges)
}

/// Disjoint cliques on the blocks `C_k^n`, chained by one bridge edge from
/// the last node of each block to the first node of the next.
pub fn block_family(lambda: &[f64], n: usize) -> Result<FamilyInstance> {
    let ranges = block_ranges(lambda, n)?;
    let mut graph = Graph::empty(n);
    for &(s, e) in &ranges {
        for i in s..e {
            for j in i + 1..e {
                graph.insert_edge(i, j);
            }
        }
    }
    for pair in ranges.windows(2) {
        graph.insert_edge(pair[0].1 - 1, pair[1].0);
    }
    Ok(FamilyInstance { graph, limit: AnalyticGraphon::block_family(lambda.to_vec())?.into() })
}

/// `K_{p,q}` with `p = ⌊nγ⌋` nodes in the first group.
pub fn bipartite(gamma: f64, n: usize) -> Result<FamilyInstance> {
    let limit = AnalyticGraphon::bipartite(gamma)?;
    let p = floor_tol(n as f64 * gamma).min(n);
    if p == 0 || p == n {
        bail!(Parameter, "γ = {gamma} leaves a group empty at n = {n}");
    }
    let graph = Graph::from_edges(n, (0..p).flat_map(|i| (p..n).map(move |j| (i, j))))?;
    Ok(FamilyInstance { graph, limit: limit.into() })
}

/// The half graph `H_{k,k}` on `n = 2k` nodes: `i ~ j` iff
/// `i ≤ k < j` and `i ≤ j - k` (1-based).
pub fn halfgraph(n: usize) -> Result<FamilyInstance> {
    if n == 0 || !n.is_multiple_of(2) {
        bail!(Parameter, "half graph needs a positive even node count, got {n}");
    }
    let k = n / 2;
    let graph = Graph::from_edges(n, (0..k).flat_map(|i| (i + k..n).map(move |j| (i, j))))?;
    Ok(FamilyInstance { graph, limit: AnalyticGraphon::halfgraph().into() })
}

/// `2n` equal blocks; value 1 between blocks of different parity.
pub fn checkerboard(n: usize) -> Result<StepGraphon> {
    if n == 0 {
        bail!(Parameter, "checkerboard needs n >= 1");
    }
    let m = 2 * n;
    let values = (0..m).map(|i| (0..m).map(|j| ((i + j) % 2) as f64).collect()).collect();
    StepGraphon::uniform(values)
}

/// Samples a W-random graph: `x_1..x_n` uniform, then each pair `i < j`
/// (row-major) joined iff a fresh uniform draw falls below `W(x_i, x_j)`.
pub fn w_random(w: &Graphon, n: usize, seed: u64) -> Result<Graph> {
    if !w.is_w0() {
        bail!(Parameter, "W-random sampling needs a [0,1]-valued kernel");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let mut graph = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            let u: f64 = rng.gen();
            if u < w.eval(x[i], x[j]) {
                graph.insert_edge(i, j);
            }
        }
    }
    Ok(graph)
}

/// `sign(sin(nπx))` at the midpoints of `m` equal cells, `m` a multiple of
/// `n`. The sign is read off the parity of `⌊n x⌋`, which is exact.
pub fn sign_sin_field(n: usize, m: usize) -> Result<Vec<f64>> {
    if n == 0 || m == 0 || !m.is_multiple_of(n) {
        bail!(Parameter, "grid {m} is not a positive multiple of n = {n}");
    }
    Ok((0..m)
        .map(|i| {
            let half_period = (n * (2 * i + 1)) / (2 * m);
            if half_period.is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        })
        .collect())
}

/// The labeled families with an explicit limit, as named on the command
/// line and in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Complete,
    Blocks { lambda: Vec<f64> },
    Bipartite { gamma: f64 },
    Halfgraph,
}

impl Family {
    pub fn generate(&self, n: usize) -> Result<FamilyInstance> {
        match self {
            Family::Complete => complete(n),
            Family::Blocks { lambda } => block_family(lambda, n),
            Family::Bipartite { gamma } => bipartite(*gamma, n),
            Family::Halfgraph => halfgraph(n),
        }
    }

    pub fn limit(&self) -> Result<Graphon> {
        Ok(match self {
            Family::Complete => AnalyticGraphon::constant(1.0)?.into(),
            Family::Blocks { lambda } => AnalyticGraphon::block_family(lambda.clone())?.into(),
            Family::Bipartite { gamma } => AnalyticGraphon::bipartite(*gamma)?.into(),
            Family::Halfgraph => AnalyticGraphon::halfgraph().into(),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Blocks { .. } => "blocks",
            Family::Bipartite { .. } => "bipartite",
            Family::Halfgraph => "halfgraph",
        }
    }
}
