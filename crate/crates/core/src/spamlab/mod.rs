//! Spammer detection from the shape of a retweet graph around a trusted
//! root: hop distance and edge-disjoint connectivity as features, a C4.5
//! decision tree as the classifier, and parameter sweeps over synthetic
//! spam graphs.

mod evaluate;
mod features;
mod flow;
mod sweep;
mod tree;

pub use evaluate::{
    knee, roc_curve, stratified_folds, train_evaluate, train_evaluate_with, ClassifierModel, Evaluation, RocPoint,
};
pub use features::{bfs_distances, features_from_root, labelled_features, FeatureVector};
pub use flow::{max_flow_unit, FlowNetwork};
pub use sweep::{
    class_counts, connectivity_fraction, pick_root, sweep, sweep_cell, SkippedCell, SweepReport, SweepResult, CV_FOLDS,
};
pub use tree::{DecisionTree, TreeNode, TreeOptions};
