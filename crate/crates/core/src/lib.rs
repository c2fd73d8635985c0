//! Graph cut functionals, their graphon limits, and exact or heuristic
//! solvers for both.

// NaN-rejecting `!(x > 0.0)` checks and index loops over matrices are deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

mod error;

pub mod families;
pub mod fields;
pub mod functionals;
pub mod graph;
pub mod graphon;
pub mod harness;
pub mod solvers;

pub use error::{Error, Result};
pub use fields::{LabelModel, PartitionSpec, ThetaField};
pub use graph::{Graph, Motif};
pub use graphon::{AnalyticGraphon, Graphon, Kernel, StepGraphon};
