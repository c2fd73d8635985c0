//! Command line, file formats and the convergence experiment.

pub mod cli;
pub mod converge;
pub mod io;

pub use cli::run;
pub use converge::{run_converge, ConvergenceRow, ExperimentConfig};
