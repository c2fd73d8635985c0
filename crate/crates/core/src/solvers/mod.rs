//! Minimal-cut solvers for graphs and minimizers of the limit functional.

mod blocks;
mod continuum;
mod discrete;
mod projection;
mod transport;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fields::ThetaField;

pub use blocks::{sharpen_plateau, vertex_enumeration_blocks, Sharpened, VertexEnumeration};
pub use continuum::{minimize_j, minimize_j_with, ContinuumMethod, MinimizeOptions};
pub use discrete::{brute_bisection, local_search_partition, swap_descent, MAX_BRUTE_BISECTION_NODES};
pub use projection::{project_box_mean, project_feasible, project_simplex};
pub use transport::transport_lmo;

/// The minimizer a solver returns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Argument {
    /// Label index (into the label model) of every node.
    Labels(Vec<usize>),
    /// Rows of the label-weight field, one per cell.
    Theta(Vec<Vec<f64>>),
}

/// Outcome of a solve. Serializes with the fields `value`,
/// `labels` or `theta`, `method`, `seed`, `restarts`, `iterations`,
/// `residual`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub value: f64,
    #[serde(flatten)]
    pub argument: Argument,
    pub method: String,
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    /// Stationarity residual; continuum solvers only.
    pub residual: Option<f64>,
}

impl SolveReport {
    pub fn labels(&self) -> Option<&[usize]> {
        match &self.argument {
            Argument::Labels(l) => Some(l),
            Argument::Theta(_) => None,
        }
    }

    pub fn theta(&self) -> Option<Result<ThetaField>> {
        match &self.argument {
            Argument::Theta(rows) => Some(ThetaField::from_rows(rows.clone())),
            Argument::Labels(_) => None,
        }
    }
}

/// Order used to reduce over restarts: smaller value first, then the
/// lexicographically smaller argument.
pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn better<T: PartialOrd>(value: f64, arg: &T, best_value: f64, best_arg: &T) -> bool {
    match value.total_cmp(&best_value) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => arg < best_arg,
    }
}
