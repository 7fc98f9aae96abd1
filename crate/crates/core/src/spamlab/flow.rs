use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::graph::{NodeId, WeightedDigraph};

const NONE: u32 = u32::MAX;

/// Unit-capacity residual network of a digraph, reusable across many
/// source/sink pairs. Every edge becomes a forward arc of capacity 1 and a
/// paired reverse arc of capacity 0; edge weights are ignored.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    offsets: Vec<usize>,
    head: Vec<NodeId>,
    twin: Vec<u32>,
    cap: Vec<i8>,
    flow: Vec<i8>,
    out_degree: Vec<u32>,
    in_degree: Vec<u32>,
    // scratch for the bidirectional search
    stamp: u32,
    s_mark: Vec<u32>,
    t_mark: Vec<u32>,
    s_parent: Vec<u32>,
    t_parent: Vec<u32>,
    touched: Vec<u32>,
}

impl FlowNetwork {
    pub fn new(g: &WeightedDigraph) -> Self {
        let n = g.node_count();
        let mut offsets = vec![0usize; n + 1];
        for u in 0..n {
            offsets[u + 1] = offsets[u] + g.out_degree(u as NodeId) + g.in_degree(u as NodeId);
        }
        let arcs = offsets[n];
        let (mut head, mut cap) = (vec![0; arcs], vec![0i8; arcs]);
        for u in 0..n as NodeId {
            let base = offsets[u as usize];
            let outs = g.out_neighbors(u);
            for (k, &v) in outs.iter().enumerate() {
                head[base + k] = v;
                cap[base + k] = 1;
            }
            for (k, &v) in g.in_neighbors(u).iter().enumerate() {
                head[base + outs.len() + k] = v;
            }
        }
        // forward arc u→v pairs with the reverse arc stored at v among its
        // in-neighbours; both lists are sorted, so binary search finds it
        let mut twin = vec![0u32; arcs];
        for u in 0..n as NodeId {
            let base = offsets[u as usize];
            for (k, &v) in g.out_neighbors(u).iter().enumerate() {
                let pos = g.in_neighbors(v).binary_search(&u).expect("adjacency views agree");
                let rev = offsets[v as usize] + g.out_degree(v) + pos;
                twin[base + k] = rev as u32;
                twin[rev] = (base + k) as u32;
            }
        }
        FlowNetwork {
            offsets,
            head,
            twin,
            cap,
            flow: vec![0; arcs],
            out_degree: (0..n as NodeId).map(|u| g.out_degree(u) as u32).collect(),
            in_degree: (0..n as NodeId).map(|u| g.in_degree(u) as u32).collect(),
            stamp: 0,
            s_mark: vec![0; n],
            t_mark: vec![0; n],
            s_parent: vec![NONE; n],
            t_parent: vec![NONE; n],
            touched: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.out_degree.len()
    }

    fn residual(&self, arc: usize) -> i8 {
        self.cap[arc] - self.flow[arc]
    }

    fn arcs(&self, u: NodeId) -> core::ops::Range<usize> {
        self.offsets[u as usize]..self.offsets[u as usize + 1]
    }

    fn frontier_cost(&self, frontier: &[NodeId]) -> usize {
        frontier.iter().map(|&u| self.offsets[u as usize + 1] - self.offsets[u as usize]).sum()
    }

    fn next_stamp(&mut self) -> u32 {
        if self.stamp == u32::MAX - 1 {
            self.s_mark.iter_mut().for_each(|m| *m = 0);
            self.t_mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 0;
        }
        self.stamp += 1;
        self.stamp
    }

    /// One augmenting path found by growing a search tree from `s` over
    /// residual arcs and one from `t` over reversed residual arcs, always
    /// extending the cheaper frontier. Returns the arc joining the trees.
    fn find_path(&mut self, s: NodeId, t: NodeId) -> Option<usize> {
        let stamp = self.next_stamp();
        self.s_mark[s as usize] = stamp;
        self.t_mark[t as usize] = stamp;
        self.s_parent[s as usize] = NONE;
        self.t_parent[t as usize] = NONE;
        let (mut fs, mut ft) = (vec![s], vec![t]);
        let mut next = Vec::new();
        while !fs.is_empty() && !ft.is_empty() {
            next.clear();
            if self.frontier_cost(&fs) <= self.frontier_cost(&ft) {
                for &u in &fs {
                    for a in self.arcs(u) {
                        if self.residual(a) <= 0 {
                            continue;
                        }
                        let v = self.head[a] as usize;
                        if self.t_mark[v] == stamp {
                            return Some(a);
                        }
                        if self.s_mark[v] != stamp {
                            self.s_mark[v] = stamp;
                            self.s_parent[v] = a as u32;
                            next.push(v as NodeId);
                        }
                    }
                }
                core::mem::swap(&mut fs, &mut next);
            } else {
                for &v in &ft {
                    for a in self.arcs(v) {
                        let b = self.twin[a] as usize;
                        if self.residual(b) <= 0 {
                            continue;
                        }
                        let u = self.head[a] as usize;
                        if self.s_mark[u] == stamp {
                            return Some(b);
                        }
                        if self.t_mark[u] != stamp {
                            self.t_mark[u] = stamp;
                            self.t_parent[u] = b as u32;
                            next.push(u as NodeId);
                        }
                    }
                }
                core::mem::swap(&mut ft, &mut next);
            }
        }
        None
    }

    fn push(&mut self, arc: usize) {
        self.flow[arc] += 1;
        self.flow[self.twin[arc] as usize] -= 1;
        self.touched.push(arc as u32);
    }

    fn augment(&mut self, meet: usize) {
        let (x, y) = (self.head[self.twin[meet] as usize], self.head[meet]);
        self.push(meet);
        let mut u = x;
        while self.s_parent[u as usize] != NONE {
            let a = self.s_parent[u as usize] as usize;
            self.push(a);
            u = self.head[self.twin[a] as usize];
        }
        let mut v = y;
        while self.t_parent[v as usize] != NONE {
            let a = self.t_parent[v as usize] as usize;
            self.push(a);
            v = self.head[a];
        }
    }

    /// Maximum number of edge-disjoint directed paths from `s` to `t`.
    pub fn max_flow(&mut self, s: NodeId, t: NodeId) -> Result<u32> {
        let n = self.node_count();
        if s as usize >= n || t as usize >= n {
            bail!(Domain, "nodes {s}, {t} outside a graph of {n} nodes");
        }
        if s == t {
            bail!(Domain, "source and sink coincide");
        }
        let bound = self.out_degree[s as usize].min(self.in_degree[t as usize]);
        let mut value = 0;
        while value < bound {
            match self.find_path(s, t) {
                Some(meet) => {
                    self.augment(meet);
                    value += 1;
                }
                None => break,
            }
        }
        let mut touched = core::mem::take(&mut self.touched);
        for a in touched.drain(..) {
            self.flow[a as usize] = 0;
            self.flow[self.twin[a as usize] as usize] = 0;
        }
        self.touched = touched;
        Ok(value)
    }
}

/// Maximum number of edge-disjoint directed paths from `s` to `t`.
pub fn max_flow_unit(g: &WeightedDigraph, s: NodeId, t: NodeId) -> Result<u32> {
    FlowNetwork::new(g).max_flow(s, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Largest set of pairwise edge-disjoint simple `s→t` paths, by
    /// enumerating the paths as edge bitmasks.
    fn disjoint_paths(n: usize, adj: u32, s: usize, t: usize) -> u32 {
        let mut paths = Vec::new();
        fn walk(n: usize, adj: u32, u: usize, t: usize, seen: u32, used: u32, out: &mut Vec<u32>) {
            if u == t {
                out.push(used);
                return;
            }
            for v in 0..n {
                let b = 1u32 << (u * n + v);
                if adj & b != 0 && seen & (1 << v) == 0 {
                    walk(n, adj, v, t, seen | 1 << v, used | b, out);
                }
            }
        }
        walk(n, adj, s, t, 1 << s, 0, &mut paths);
        fn best(paths: &[u32], used: u32) -> u32 {
            match paths.split_first() {
                None => 0,
                Some((&p, rest)) => {
                    let skip = best(rest, used);
                    if p & used == 0 {
                        skip.max(1 + best(rest, used | p))
                    } else {
                        skip
                    }
                }
            }
        }
        best(&paths, 0)
    }

    fn graph(n: usize, adj: u32) -> WeightedDigraph {
        let edges = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| u != v && adj >> (u * n + v) & 1 == 1);
        WeightedDigraph::from_edges(n, edges.map(|(u, v)| (u as NodeId, v as NodeId, 1)))
    }

    #[test]
    fn example_topology() {
        // A=0, B=1, S=2; three paths A→B, the shortest of length two, and a
        // single A→P→Q→S chain
        let edges = [(0, 3), (3, 1), (0, 4), (4, 1), (0, 5), (5, 6), (6, 1), (0, 7), (7, 8), (8, 2)];
        let g = WeightedDigraph::from_edges(9, edges.iter().map(|&(u, v)| (u, v, 1)));
        assert_eq!(max_flow_unit(&g, 0, 1).unwrap(), 3);
        assert_eq!(max_flow_unit(&g, 0, 2).unwrap(), 1);
        assert_eq!(max_flow_unit(&g, 1, 0).unwrap(), 0);
        assert!(max_flow_unit(&g, 0, 0).is_err());
    }

    #[test]
    fn reverse_arcs_are_used() {
        // the greedy path 0→1→2→5 blocks 0→3 paths unless flow is undone
        let edges = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 2), (1, 4), (4, 5)];
        let g = WeightedDigraph::from_edges(6, edges.iter().map(|&(u, v)| (u, v, 1)));
        assert_eq!(max_flow_unit(&g, 0, 5).unwrap(), 2);
    }

    #[test]
    fn menger_on_every_small_digraph() {
        // every (graph, s, t) is isomorphic to one with s = 0 and t = 1, so
        // those two roles suffice
        for n in 2..=5usize {
            let cells: Vec<u32> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u * n + v) as u32)).collect();
            for mask in 0u32..1 << cells.len() {
                let adj = cells.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).fold(0, |a, (_, &c)| a | 1 << c);
                let g = graph(n, adj);
                let mut net = FlowNetwork::new(&g);
                let f = net.max_flow(0, 1).unwrap();
                assert_eq!(f, disjoint_paths(n, adj, 0, 1), "n={n} adj={adj:#x}");
                assert!(f as usize <= g.out_degree(0).min(g.in_degree(1)));
            }
        }
    }

    #[test]
    fn network_reuse_matches_fresh_networks() {
        let g = crate::netmetrics::tests::random_digraph(60, 0.08, 4);
        let mut net = FlowNetwork::new(&g);
        for s in 0..6 {
            for t in 0..60 {
                if s != t {
                    assert_eq!(net.max_flow(s, t).unwrap(), max_flow_unit(&g, s, t).unwrap());
                }
            }
        }
    }
}
