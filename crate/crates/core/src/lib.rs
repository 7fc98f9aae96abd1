//! Quantitative toolkit for microblog activity data.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! filesystem, the command line, or text formats lives in the `tweetstat`
//! companion crate.
//!
//! | module        | what it does                                                     |
//! |---------------|------------------------------------------------------------------|
//! | [`ingest`]    | retweet syntax detection, histograms, retweet graphs, intervals  |
//! | [`debias`]    | EM recovery of population counts from a binomially thinned sample|
//! | [`distfit`]   | heavy-tailed families, MLE, binning, G/KS/Vuong tests, Kendall τ |
//! | [`urnsim`]    | Monte Carlo urn process for count distributions                  |
//! | [`netmetrics`]| degrees, reciprocity, paths, assortativity, directed clustering  |
//! | [`synthgen`]  | R-MAT generation, degree expectation, spam-structured graphs     |
//! | [`spamlab`]   | distance/max-flow features, C4.5 tree, cross-validation, sweeps  |

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

mod error;
pub mod graph;
pub mod hist;
pub mod numeric;
pub mod rng;
pub mod special;

pub mod debias;
pub mod distfit;
pub mod ingest;
pub mod netmetrics;
pub mod spamlab;
pub mod synthgen;
pub mod urnsim;

pub use error::{Error, Result};
pub use graph::WeightedDigraph;
pub use hist::{CountHistogram, HistogramKind};
