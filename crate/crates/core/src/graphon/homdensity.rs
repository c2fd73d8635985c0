use num_rational::Ratio;

use super::StepGraphon;
use crate::error::{bail, Result};
use crate::graph::{Graph, Motif};

/// Largest host graph accepted by [`hom_density_graph`].
pub const MAX_HOM_GRAPH_NODES: usize = 12;
const MAX_BLOCK_ASSIGNMENTS: u64 = 10_000_000;

/// Calls `visit` with every map `{0..k} → {0..n}` (odometer order).
fn for_each_map(k: usize, n: usize, mut visit: impl FnMut(&[usize])) {
    let mut map = vec![0usize; k];
    loop {
        visit(&map);
        let mut pos = 0;
        loop {
            if pos == k {
                return;
            }
            map[pos] += 1;
            if map[pos] < n {
                break;
            }
            map[pos] = 0;
            pos += 1;
        }
    }
}

/// `t(F, G) = hom(F, G) / |V(G)|^|V(F)|`, counted exactly.
pub fn hom_density_graph(f: &Motif, g: &Graph) -> Result<Ratio<u64>> {
    let n = g.n();
    if n > MAX_HOM_GRAPH_NODES {
        bail!(Capacity, "exact homomorphism counting supports host graphs up to {MAX_HOM_GRAPH_NODES} nodes");
    }
    if n == 0 {
        bail!(Input, "host graph has no nodes");
    }
    let k = f.order();
    let edges: Vec<(usize, usize)> = f.graph().edges().collect();
    let mut hom = 0u64;
    for_each_map(k, n, |phi| {
        if edges.iter().all(|&(a, b)| g.has_edge(phi[a], phi[b])) {
            hom += 1;
        }
    });
    Ok(Ratio::new(hom, (n as u64).pow(k as u32)))
}

/// `t(F, W) = ∫ Π_{ij∈E(F)} W(x_i, x_j) dx`, summed exactly over block
/// assignments of the motif's nodes.
pub fn hom_density_graphon(f: &Motif, w: &StepGraphon) -> Result<f64> {
    let m = w.block_count();
    let k = f.order();
    let assignments = (m as u64).checked_pow(k as u32);
    if assignments.is_none_or(|a| a > MAX_BLOCK_ASSIGNMENTS) {
        bail!(Capacity, "{m} blocks and a {k}-node motif exceed {MAX_BLOCK_ASSIGNMENTS} block assignments");
    }
    let edges: Vec<(usize, usize)> = f.graph().edges().collect();
    let widths = w.widths();
    let mut total = 0.0;
    for_each_map(k, m, |b| {
        let mut p: f64 = b.iter().map(|&i| widths[i]).product();
        for &(u, v) in &edges {
            p *= w.value(b[u], b[v]);
            if p == 0.0 {
                return;
            }
        }
        total += p;
    });
    Ok(total)
}
