//! Scale-free geometric random graphs with tunable degree assortativity.
//!
//! The crate generates Chung-Lu graphs, random geometric graphs (RGGs), geometric
//! inhomogeneous random graphs (GIRGs) and their tunable variants, in which the
//! smaller endpoint weight enters the connection kernel with exponent `sigma`.
//! On top of the generators it provides the degree-correlation toolkit: Pearson,
//! Spearman and Kendall assortativity, bucketed joint degree distributions,
//! conditional change heatmaps, degree CCDF curves, and closed-form predictors
//! that can be compared against simulation.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assortativity;
pub mod cli;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod joint;
pub mod rng;
pub mod stats;
pub mod svg;
pub mod theory;
pub mod validation;

pub use error::{Error, Result};
pub use generators::{Alpha, Model, ModelParams};
pub use graph::{build_graph, DegreeSequence, Graph};
