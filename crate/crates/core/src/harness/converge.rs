//! The convergence experiment: for each `n`, the discrete minimum of
//! `F_n` on the family member, the continuum minimum `J*` of its limit, and
//! the labeled cut-norm gap between the two kernels.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::io::{csv_err, format_g17};
use crate::error::{bail, Error, Result};
use crate::families::Family;
use crate::fields::{LabelModel, PartitionSpec};
use crate::graphon::{cut_gap, StepGraphon};
use crate::solvers::{
    brute_bisection, local_search_partition, minimize_j, vertex_enumeration_blocks, ContinuumMethod,
    MinimizeOptions, MAX_BRUTE_BISECTION_NODES,
};

pub const CONVERGE_HEADER: [&str; 8] =
    ["n", "F_n", "F_exact_flag", "J_star", "gap", "cutnorm", "cutnorm_exact_flag", "seconds"];

fn default_grid() -> usize {
    48
}
fn default_masses() -> Vec<f64> {
    vec![0.5, 0.5]
}
fn default_restarts() -> usize {
    20
}
fn default_labels() -> usize {
    2
}

/// Experiment description, read from JSON or assembled from flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub family: Family,
    /// Node counts, one row each.
    pub n: Vec<usize>,
    /// Grid for the continuum problem.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// 2 selects the spin model, more labels the Potts model.
    #[serde(default = "default_labels")]
    pub labels: usize,
    #[serde(default = "default_masses")]
    pub masses: Vec<f64>,
    #[serde(default = "pgd")]
    pub method: ContinuumMethod,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Record wall time per row; off keeps outputs byte-identical.
    #[serde(default)]
    pub timing: bool,
}

fn pgd() -> ContinuumMethod {
    ContinuumMethod::Pgd
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| Error::Parameter(format!("config line {} column {}: {e}", e.line(), e.column())))?;
        Ok(cfg)
    }

    pub fn model(&self) -> Result<LabelModel> {
        match self.labels {
            2 => Ok(LabelModel::spin()),
            k if k > 2 => LabelModel::potts(k),
            k => bail!(Parameter, "labels: need at least 2, got {k}"),
        }
    }

    fn is_bisection(&self) -> bool {
        self.labels == 2 && self.masses == [0.5, 0.5]
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() {
            bail!(Parameter, "n: at least one node count is required");
        }
        if self.masses.len() != self.labels {
            bail!(Parameter, "masses: {} values for {} labels", self.masses.len(), self.labels);
        }
        crate::fields::validate_masses(&self.masses)
            .map_err(|e| Error::Infeasible(format!("masses: {e}")))?;
        if self.is_bisection() {
            if let Some(bad) = self.n.iter().find(|&&n| n % 2 != 0) {
                bail!(Parameter, "n: bisection needs even node counts, got {bad}");
            }
        }
        if self.grid == 0 {
            bail!(Parameter, "grid: must be positive");
        }
        for (k, p) in self.masses.iter().enumerate() {
            let c = p * self.grid as f64;
            if (c - c.round()).abs() > 1e-9 {
                bail!(Parameter, "masses[{k}]: {p} times grid {} is not an integer", self.grid);
            }
        }
        if self.restarts == 0 {
            bail!(Parameter, "restarts: must be positive");
        }
        self.model()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub f_n: f64,
    pub f_exact: bool,
    pub j_star: f64,
    pub gap: f64,
    pub cutnorm: f64,
    pub cutnorm_exact: bool,
    pub seconds: f64,
}

impl ConvergenceRow {
    pub fn record(&self) -> [String; 8] {
        let flag = |b: bool| if b { "1" } else { "0" }.to_string();
        [
            self.n.to_string(),
            format_g17(self.f_n),
            flag(self.f_exact),
            format_g17(self.j_star),
            format_g17(self.gap),
            format_g17(self.cutnorm),
            flag(self.cutnorm_exact),
            format_g17(self.seconds),
        ]
    }
}

/// `J*` for the configured limit. Block kernels under bisection use the
/// exact vertex enumeration; everything else the multi-restart solver.
pub fn continuum_minimum(cfg: &ExperimentConfig) -> Result<f64> {
    let model = cfg.model()?;
    if let Family::Blocks { lambda } = &cfg.family {
        if cfg.is_bisection() {
            return Ok(vertex_enumeration_blocks(lambda, 0.5)?.min_j);
        }
    }
    let opts =
        MinimizeOptions { method: cfg.method, seed: cfg.seed, restarts: cfg.restarts, ..Default::default() };
    Ok(minimize_j(&cfg.family.limit()?, &model, &cfg.masses, cfg.grid, &opts)?.value)
}

fn row(cfg: &ExperimentConfig, model: &LabelModel, j_star: f64, n: usize) -> Result<ConvergenceRow> {
    let clock = Instant::now();
    let inst = cfg.family.generate(n)?;
    let row_seed = cfg.seed.wrapping_add(n as u64);
    let (f_n, f_exact) = if cfg.is_bisection() && n <= MAX_BRUTE_BISECTION_NODES {
        (brute_bisection(&inst.graph)?.value, true)
    } else {
        let spec = PartitionSpec::from_masses(cfg.masses.clone(), n)?;
        let r = local_search_partition(&inst.graph, &spec, model, row_seed, cfg.restarts)?;
        (r.value, false)
    };
    let gap = cut_gap(&StepGraphon::from_graph(&inst.graph), &inst.limit, cfg.restarts, row_seed)?;
    let seconds = if cfg.timing { clock.elapsed().as_secs_f64() } else { 0.0 };
    Ok(ConvergenceRow {
        n,
        f_n,
        f_exact,
        j_star,
        gap: (f_n - j_star).abs(),
        cutnorm: gap.value,
        cutnorm_exact: gap.exact,
        seconds,
    })
}

/// Runs the experiment and writes the CSV to `sink` in `n` order. Rows are
/// computed in parallel; on a per-row failure the rows before it are
/// written and flushed, then the error is returned.
pub fn run_converge<W: Write>(cfg: &ExperimentConfig, sink: W) -> Result<Vec<ConvergenceRow>> {
    cfg.validate()?;
    let model = cfg.model()?;
    let j_star = continuum_minimum(cfg)?;
    let results: Vec<Result<ConvergenceRow>> =
        cfg.n.par_iter().map(|&n| row(cfg, &model, j_star, n)).collect();

    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CONVERGE_HEADER).map_err(csv_err)?;
    let mut rows = Vec::with_capacity(results.len());
    for (r, &n) in results.into_iter().zip(&cfg.n) {
        match r {
            Ok(row) => {
                w.write_record(row.record()).map_err(csv_err)?;
                rows.push(row);
            }
            Err(e) => {
                w.flush()?;
                return Err(prefix(e, n));
            }
        }
    }
    w.flush()?;
    Ok(rows)
}

fn prefix(e: Error, n: usize) -> Error {
    match e {
        Error::Capacity(m) => Error::Capacity(format!("n = {n}: {m}")),
        Error::Parameter(m) => Error::Parameter(format!("n = {n}: {m}")),
        Error::Input(m) => Error::Input(format!("n = {n}: {m}")),
        Error::Infeasible(m) => Error::Infeasible(format!("n = {n}: {m}")),
        Error::Structural(m) => Error::Structural(format!("n = {n}: {m}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(family: Family, n: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            family,
            n,
            grid: 12,
            labels: 2,
            masses: vec![0.5, 0.5],
            method: ContinuumMethod::Pgd,
            restarts: 4,
            seed: 0,
            out: None,
            timing: false,
        }
    }

    #[test]
    fn complete_rows() {
        let cfg = config(Family::Complete, vec![8, 12, 16]);
        let mut out = Vec::new();
        let rows = run_converge(&cfg, &mut out).unwrap();
        for r in &rows {
            assert_eq!(r.f_n, 2.0);
            assert_eq!(r.j_star, 2.0);
            assert_eq!(r.gap, 0.0);
            assert!(r.f_exact && r.cutnorm_exact);
        }
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with(
            "n,F_n,F_exact_flag,J_star,gap,cutnorm,cutnorm_exact_flag,seconds\n8,2,1,2,0,0.125,1,0\n"
        ));
    }

    #[test]
    fn bipartite_row() {
        let cfg = config(Family::Bipartite { gamma: 0.5 }, vec![12]);
        let rows = run_converge(&cfg, std::io::sink()).unwrap();
        assert_eq!(rows[0].f_n, 1.0);
        assert!((rows[0].j_star - 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_json() {
        let cfg =
            ExperimentConfig::from_json(r#"{"family":"bipartite","gamma":0.5,"n":[4,8],"grid":16}"#).unwrap();
        assert_eq!(cfg.family, Family::Bipartite { gamma: 0.5 });
        assert_eq!(cfg.restarts, 20);
        let err = ExperimentConfig::from_json("{\"family\":\"halfgraph\",\n\"n\":\"x\"}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let bad = config(Family::Halfgraph, vec![7]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn partial_rows_are_flushed() {
        // three labels skip the even-n check, so n = 5 fails inside generation
        let mut cfg = config(Family::Halfgraph, vec![4, 6]);
        cfg.labels = 3;
        cfg.masses = vec![0.5, 0.25, 0.25];
        cfg.n = vec![4, 5];
        let mut out = Vec::new();
        assert!(run_converge(&cfg, &mut out).is_err());
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("4,"));
    }
}
