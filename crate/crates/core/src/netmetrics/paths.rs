use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{bail, Result};
use crate::graph::{NodeId, WeightedDigraph};
use crate::rng;

/// Hop counts of directed shortest paths from a set of sampled sources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathLengthDistribution {
    /// `hops[d]` is the number of (source, target) pairs at distance `d`;
    /// `hops[0]` is always zero.
    pub hops: Vec<u64>,
    pub sources: u64,
    /// Pairs with no directed path.
    pub unreachable: u64,
}

impl PathLengthDistribution {
    pub fn reachable(&self) -> u64 {
        self.hops.iter().sum()
    }

    /// Mean hop count over reachable pairs.
    pub fn average_path_length(&self) -> Option<f64> {
        let mass = self.reachable();
        if mass == 0 {
            return None;
        }
        let s: u128 = self.hops.iter().enumerate().map(|(d, &c)| d as u128 * c as u128).sum();
        Some(s as f64 / mass as f64)
    }

    /// Hop count below which a fraction `q` of the reachable pairs lie,
    /// interpolated linearly between integer distances.
    pub fn percentile(&self, q: f64) -> Option<f64> {
        let mass = self.reachable();
        if mass == 0 || !(0.0..=1.0).contains(&q) {
            return None;
        }
        let target = q * mass as f64;
        let mut cum = 0u64;
        for (d, &c) in self.hops.iter().enumerate() {
            if c > 0 && (cum + c) as f64 >= target {
                return Some((d as f64 - 1.0 + (target - cum as f64) / c as f64).max(0.0));
            }
            cum += c;
        }
        Some((self.hops.len() - 1) as f64)
    }

    pub fn effective_diameter(&self) -> Option<f64> {
        self.percentile(0.9)
    }
}

/// Breadth-first search from `sources` nodes drawn uniformly without
/// replacement. `sources == N` visits every node.
pub fn path_length_distribution(g: &WeightedDigraph, sources: usize, seed: u64) -> Result<PathLengthDistribution> {
    let n = g.node_count();
    if sources == 0 || sources > n {
        bail!(InvalidParameter, "need between 1 and {n} sources, got {sources}");
    }
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    if sources < n {
        let mut r = rng::stream(seed, "bfs-sources", 0);
        for i in 0..sources {
            let j = r.random_range(i..n);
            order.swap(i, j);
        }
    }
    let mut hops = vec![0u64];
    let mut dist = vec![u32::MAX; n];
    let mut visited = Vec::new();
    let mut queue = VecDeque::new();
    let mut reached = 0u64;
    for &s in &order[..sources] {
        dist[s as usize] = 0;
        visited.push(s);
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &v in g.out_neighbors(u) {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = du + 1;
                    visited.push(v);
                    queue.push_back(v);
                    let d = du as usize + 1;
                    if hops.len() <= d {
                        hops.resize(d + 1, 0);
                    }
                    hops[d] += 1;
                    reached += 1;
                }
            }
        }
        for v in visited.drain(..) {
            dist[v as usize] = u32::MAX;
        }
    }
    let pairs = sources as u64 * (n as u64 - 1);
    Ok(PathLengthDistribution { hops, sources: sources as u64, unreachable: pairs - reached })
}

pub const DEFAULT_APL_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AplCorrection {
    pub corrected: f64,
    /// `false` when the factor lies outside the usual inflation range [1.5, 3].
    pub factor_in_range: bool,
}

/// Undo the path-length inflation caused by edge sampling.
pub fn apl_correction(sampled_apl: f64, factor: f64) -> Result<AplCorrection> {
    if !(factor > 0.0 && factor.is_finite()) {
        bail!(InvalidParameter, "correction factor must be positive, got {factor}");
    }
    Ok(AplCorrection { corrected: sampled_apl / factor, factor_in_range: (1.5..=3.0).contains(&factor) })
}
