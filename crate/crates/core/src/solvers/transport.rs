//! Linear minimization over the feasible fields: a transportation problem
//! from cells (supply 1 each) to labels (demand `m·mass_k`).

use crate::error::{bail, Result};
use crate::fields::validate_masses;

const FLOW_EPS: f64 = 1e-14;

/// Vertex `s` minimizing `Σ_{a,k} grad_ak s_ak` over the feasible fields.
/// Two labels: cells sorted by `grad_a0 - grad_a1` (ties by index) take
/// label 0 until its mass is filled. More labels: successive shortest
/// paths on the transportation network.
pub fn transport_lmo(grad: &[f64], m: usize, masses: &[f64]) -> Result<Vec<f64>> {
    validate_masses(masses)?;
    let n = masses.len();
    if grad.len() != m * n {
        bail!(Input, "expected {} gradient entries, got {}", m * n, grad.len());
    }
    if grad.iter().any(|g| !g.is_finite()) {
        bail!(Input, "gradient is not finite");
    }
    Ok(match n {
        1 => vec![1.0; m],
        2 => sorted_fill(grad, m, masses[0]),
        _ => min_cost_flow(grad, m, masses),
    })
}

fn sorted_fill(grad: &[f64], m: usize, mass0: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        let (da, db) = (grad[2 * a] - grad[2 * a + 1], grad[2 * b] - grad[2 * b + 1]);
        da.total_cmp(&db).then(a.cmp(&b))
    });
    let mut left = mass0 * m as f64;
    let mut s = vec![0.0; 2 * m];
    for a in order {
        let t = left.clamp(0.0, 1.0);
        left -= t;
        s[2 * a] = t;
        s[2 * a + 1] = 1.0 - t;
    }
    s
}

struct Edge {
    to: usize,
    cap: f64,
    cost: f64,
}

fn min_cost_flow(grad: &[f64], m: usize, masses: &[f64]) -> Vec<f64> {
    let n = masses.len();
    let source = 0;
    let cell = |a: usize| 1 + a;
    let label = |k: usize| 1 + m + k;
    let sink = 1 + m + n;
    let nodes = sink + 1;

    let mut edges: Vec<Edge> = Vec::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut add = |edges: &mut Vec<Edge>, u: usize, v: usize, cap: f64, cost: f64| -> usize {
        out[u].push(edges.len());
        edges.push(Edge { to: v, cap, cost });
        out[v].push(edges.len());
        edges.push(Edge { to: u, cap: 0.0, cost: -cost });
        edges.len() - 2
    };
    for a in 0..m {
        add(&mut edges, source, cell(a), 1.0, 0.0);
    }
    let mut assign = vec![0usize; m * n];
    for a in 0..m {
        for k in 0..n {
            assign[a * n + k] = add(&mut edges, cell(a), label(k), 1.0, grad[a * n + k]);
        }
    }
    for (k, p) in masses.iter().enumerate() {
        add(&mut edges, label(k), sink, p * m as f64, 0.0);
    }

    let mut sent = 0.0;
    while sent < m as f64 - 1e-12 {
        // Bellman–Ford over the residual graph, fixed scan order
        let mut dist = vec![f64::INFINITY; nodes];
        let mut via = vec![usize::MAX; nodes];
        dist[source] = 0.0;
        for _ in 0..nodes {
            let mut changed = false;
            for u in 0..nodes {
                if dist[u] == f64::INFINITY {
                    continue;
                }
                for &e in &out[u] {
                    let edge = &edges[e];
                    if edge.cap > FLOW_EPS && dist[u] + edge.cost < dist[edge.to] - 1e-15 {
                        dist[edge.to] = dist[u] + edge.cost;
                        via[edge.to] = e;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[sink] == f64::INFINITY {
            break;
        }
        let mut push = f64::INFINITY;
        let mut v = sink;
        while v != source {
            let e = via[v];
            push = push.min(edges[e].cap);
            v = edges[e ^ 1].to;
        }
        let mut v = sink;
        while v != source {
            let e = via[v];
            edges[e].cap -= push;
            edges[e ^ 1].cap += push;
            v = edges[e ^ 1].to;
        }
        sent += push;
    }
    // flow on cell→label edges is the capacity used
    assign.iter().map(|&e| 1.0 - edges[e].cap).collect()
}
