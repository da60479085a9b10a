//! Leave-node-out network jackknife for variance estimation of graph
//! functionals under sparse graphon models.
//!
//! Graphs come from [`graph`] (edge lists) or [`sim`] (samplers). Statistics
//! live in [`functionals`]; [`resampling`] turns them into variance
//! estimates, which [`inference`] uses for intervals and [`experiment`] for
//! Monte Carlo ratio studies.

// `!(x >= 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod functionals;
pub mod graph;
pub mod inference;
pub mod par;
pub mod resampling;
pub mod sim;

pub use error::{Error, ErrorClass, Result};
pub use functionals::{LooCounts, LooVector, Pattern, PatternKind, RhoMode, StatKind, Statistic};
pub use graph::{Graph, NodeSubset};
pub use sim::{GraphonModel, SampledGraph};
