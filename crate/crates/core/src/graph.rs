//! Immutable weighted directed graph in compressed sparse row form, with
//! both out- and in-adjacency kept sorted by neighbour id.

use alloc::vec;
use alloc::vec::Vec;

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedDigraph {
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    out_weights: Vec<u32>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    in_weights: Vec<u32>,
}

impl WeightedDigraph {
    /// Graph with `nodes` nodes and no edges.
    pub fn empty(nodes: usize) -> Self {
        Self::from_edges(nodes, core::iter::empty())
    }

    /// Builds from `(src, dst, weight)` triples. Self-loops and zero weights
    /// are dropped; repeated pairs have their weights added.
    ///
    /// # Panics
    /// If an endpoint is `>= nodes`.
    pub fn from_edges<I>(nodes: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId, u32)>,
    {
        let mut list: Vec<(NodeId, NodeId, u32)> = edges
            .into_iter()
            .filter(|&(u, v, w)| {
                assert!((u as usize) < nodes && (v as usize) < nodes, "edge ({u},{v}) outside {nodes} nodes");
                u != v && w > 0
            })
            .collect();
        list.sort_unstable_by_key(|&(u, v, _)| (u, v));
        let mut merged: Vec<(NodeId, NodeId, u32)> = Vec::with_capacity(list.len());
        for (u, v, w) in list {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 = last.2.saturating_add(w),
                _ => merged.push((u, v, w)),
            }
        }
        Self::from_sorted_unique(nodes, &merged)
    }

    fn from_sorted_unique(nodes: usize, edges: &[(NodeId, NodeId, u32)]) -> Self {
        let mut out_offsets = vec![0usize; nodes + 1];
        let mut in_offsets = vec![0usize; nodes + 1];
        for &(u, v, _) in edges {
            out_offsets[u as usize + 1] += 1;
            in_offsets[v as usize + 1] += 1;
        }
        for i in 0..nodes {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let out_targets = edges.iter().map(|e| e.1).collect();
        let out_weights = edges.iter().map(|e| e.2).collect();
        // Edges are sorted by (src, dst), so filling in-lists in that order
        // keeps each in-list sorted by source.
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![0; edges.len()];
        let mut in_weights = vec![0; edges.len()];
        for &(u, v, w) in edges {
            let slot = &mut cursor[v as usize];
            in_sources[*slot] = u;
            in_weights[*slot] = w;
            *slot += 1;
        }
        Self { out_offsets, out_targets, out_weights, in_offsets, in_sources, in_weights }
    }

    pub fn node_count(&self) -> usize {
        self.out_offsets.len().saturating_sub(1)
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.out_targets[self.out_offsets[u]..self.out_offsets[u + 1]]
    }

    pub fn out_weights(&self, u: NodeId) -> &[u32] {
        let u = u as usize;
        &self.out_weights[self.out_offsets[u]..self.out_offsets[u + 1]]
    }

    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn in_weights(&self, v: NodeId) -> &[u32] {
        let v = v as usize;
        &self.in_weights[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        let u = u as usize;
        self.out_offsets[u + 1] - self.out_offsets[u]
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<u32> {
        self.out_neighbors(u).binary_search(&v).ok().map(|i| self.out_weights(u)[i])
    }

    /// All edges `(src, dst, weight)` in `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u32)> + '_ {
        (0..self.node_count() as NodeId).flat_map(move |u| {
            self.out_neighbors(u).iter().zip(self.out_weights(u)).map(move |(&v, &w)| (u, v, w))
        })
    }

    pub fn total_weight(&self) -> u64 {
        self.out_weights.iter().map(|&w| u64::from(w)).sum()
    }

    /// Union of two graphs over the larger node set, adding weights.
    pub fn merged(&self, other: &WeightedDigraph) -> WeightedDigraph {
        let n = self.node_count().max(other.node_count());
        Self::from_edges(n, self.edges().chain(other.edges()))
    }

    /// Graph with every edge present in both directions.
    pub fn symmetrized(&self) -> WeightedDigraph {
        let mut list: Vec<(NodeId, NodeId, u32)> = Vec::with_capacity(2 * self.edge_count());
        for (u, v, w) in self.edges() {
            list.push((u, v, w));
            if !self.has_edge(v, u) {
                list.push((v, u, w));
            }
        }
        Self::from_edges(self.node_count(), list)
    }

    /// Subgraph keeping the edges for which `keep` returns true; all nodes stay.
    pub fn filter_edges<F: FnMut(NodeId, NodeId, u32) -> bool>(&self, mut keep: F) -> WeightedDigraph {
        let kept: Vec<_> = self.edges().filter(|&(u, v, w)| keep(u, v, w)).collect();
        Self::from_sorted_unique(self.node_count(), &kept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregates_and_drops_self_loops() {
        let g = WeightedDigraph::from_edges(3, [(0, 1, 1), (0, 1, 2), (1, 1, 5), (2, 0, 1), (1, 0, 1)]);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.weight(0, 1), Some(3));
        assert_eq!(g.in_neighbors(0), &[1, 2]);
        assert_eq!(g.out_degree(1), 1);
        assert!(!g.has_edge(1, 1));
        assert_eq!(g.total_weight(), 5);
    }

    #[test]
    fn in_and_out_views_agree() {
        let g = WeightedDigraph::from_edges(5, [(4, 0, 1), (3, 0, 1), (0, 2, 2), (2, 4, 1), (1, 4, 3)]);
        for (u, v, w) in g.edges() {
            let pos = g.in_neighbors(v).iter().position(|&s| s == u).unwrap();
            assert_eq!(g.in_weights(v)[pos], w);
        }
        let indeg: usize = (0..5).map(|v| g.in_degree(v)).sum();
        assert_eq!(indeg, g.edge_count());
    }

    #[test]
    fn symmetrized_is_fully_reciprocal() {
        let g = WeightedDigraph::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 1, 1), (3, 0, 1)]);
        let s = g.symmetrized();
        assert!(s.edges().all(|(u, v, _)| s.has_edge(v, u)));
        assert_eq!(s.edge_count(), 6);
    }
}
