//! Synthetic directed graphs: the R-MAT cascade, its expected degree
//! distribution and marginal fit, and graphs with planted spam nodes.

mod automat;
mod rmat;
mod spam;

pub use automat::{automat_fit, degree_chi_square, AutomatFit, DegreeBins, DegreeChiSquare};
pub use rmat::{rmat_degree_expectation, rmat_degree_expectations, rmat_generate, RmatParams, RmatShape, DEFAULT_SKEW};
pub use spam::{spam_graph_generate, NodeClass, Quadrant, SpamGraph, SpamGraphSpec};
