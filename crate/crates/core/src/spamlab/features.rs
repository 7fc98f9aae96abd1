use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::flow::FlowNetwork;
use crate::error::{bail, Result};
use crate::graph::{NodeId, WeightedDigraph};
use crate::synthgen::NodeClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureVector {
    pub node: NodeId,
    /// Hops from the root; `None` when no directed path exists.
    pub distance: Option<u32>,
    /// Edge-disjoint paths from the root.
    pub max_flow: u32,
    pub label: Option<NodeClass>,
}

/// Hop distances from `root` along edge direction.
pub fn bfs_distances(g: &WeightedDigraph, root: NodeId) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.node_count()];
    dist[root as usize] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize].unwrap() + 1;
        for &v in g.out_neighbors(u) {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(d);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Distance and connectivity of each target as seen from `root`: one BFS,
/// then one max-flow per reachable target.
pub fn features_from_root(g: &WeightedDigraph, root: NodeId, targets: &[NodeId]) -> Result<Vec<FeatureVector>> {
    let n = g.node_count();
    if root as usize >= n {
        bail!(Domain, "root {root} outside a graph of {n} nodes");
    }
    if let Some(&t) = targets.iter().find(|&&t| t as usize >= n || t == root) {
        bail!(Domain, "target {t} is the root or outside the graph");
    }
    let dist = bfs_distances(g, root);
    let mut net = FlowNetwork::new(g);
    targets
        .iter()
        .map(|&t| {
            let distance = dist[t as usize];
            let max_flow = if distance.is_some() { net.max_flow(root, t)? } else { 0 };
            Ok(FeatureVector { node: t, distance, max_flow, label: None })
        })
        .collect()
}

/// Features of every node but the root, labelled from `labels`.
pub fn labelled_features(g: &WeightedDigraph, labels: &[NodeClass], root: NodeId) -> Result<Vec<FeatureVector>> {
    if labels.len() != g.node_count() {
        bail!(InvalidParameter, "{} labels for {} nodes", labels.len(), g.node_count());
    }
    let targets: Vec<NodeId> = (0..g.node_count() as NodeId).filter(|&v| v != root).collect();
    let mut f = features_from_root(g, root, &targets)?;
    for x in &mut f {
        x.label = Some(labels[x.node as usize]);
    }
    Ok(f)
}
