use alloc::vec;

use crate::error::{bail, Result};
use crate::graph::{NodeId, WeightedDigraph};

/// The four directed triplets centred at `i` with neighbours `j` and `h`,
/// named by the two edges at `i` and closed by a third edge between the
/// neighbours.
///
/// | type      | edges at `i`  | closing edge |
/// |-----------|---------------|--------------|
/// | cycle     | `h→i`, `i→j`  | `j→h`        |
/// | middleman | `h→i`, `i→j`  | `h→j`        |
/// | in        | `j→i`, `h→i`  | `j→h`        |
/// | out       | `i→j`, `i→h`  | `j→h`        |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TripletType {
    Cycle,
    Middleman,
    In,
    Out,
}

impl TripletType {
    pub const ALL: [TripletType; 4] = [TripletType::Cycle, TripletType::Middleman, TripletType::In, TripletType::Out];

    pub fn name(self) -> &'static str {
        match self {
            TripletType::Cycle => "cycle",
            TripletType::Middleman => "middleman",
            TripletType::In => "in",
            TripletType::Out => "out",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletStats {
    /// Open and closed triplets.
    pub total: u64,
    pub closed: u64,
    /// `closed / total`, `None` without triplets.
    pub coefficient: Option<f64>,
    /// Set by [`clustering_estimator`] when the rescaled coefficient
    /// exceeded 1 and was clamped.
    pub saturated: bool,
}

impl TripletStats {
    fn new(total: u64, closed: u64) -> Self {
        let coefficient = (total > 0).then(|| closed as f64 / total as f64);
        TripletStats { total, closed, coefficient, saturated: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringReport {
    /// Indexed in the order of [`TripletType::ALL`].
    pub types: [TripletStats; 4],
}

impl ClusteringReport {
    pub fn get(&self, t: TripletType) -> &TripletStats {
        &self.types[t as usize]
    }

    pub fn coefficient(&self, t: TripletType) -> Option<f64> {
        self.get(t).coefficient
    }
}

/// Global directed clustering coefficients. Every ordered pair of distinct
/// neighbours of `i` is visited, so each unordered pair yields up to two
/// triplets of each type.
pub fn clustering(g: &WeightedDigraph) -> Result<ClusteringReport> {
    let n = g.node_count();
    if n < 3 {
        bail!(InsufficientData, "clustering needs at least three nodes");
    }
    // stamp[v] == i + 1 marks v as an in- or out-neighbour of the current i
    let (mut in_mark, mut out_mark) = (vec![0u32; n], vec![0u32; n]);
    let (mut total_cm, mut total_in, mut total_out) = (0u64, 0u64, 0u64);
    let mut closed = [0u64; 4];
    for i in 0..n as NodeId {
        let stamp = i + 1;
        let (ins, outs) = (g.in_neighbors(i), g.out_neighbors(i));
        for &h in ins {
            in_mark[h as usize] = stamp;
        }
        let mut mutual = 0u64;
        for &j in outs {
            out_mark[j as usize] = stamp;
            mutual += u64::from(in_mark[j as usize] == stamp);
        }
        let (ki, ko) = (ins.len() as u64, outs.len() as u64);
        total_cm += ki * ko - mutual;
        total_in += ki * ki.saturating_sub(1);
        total_out += ko * ko.saturating_sub(1);
        for &j in outs {
            for &x in g.out_neighbors(j) {
                // cycle: j→h with h→i; out: j→h with i→h
                closed[0] += u64::from(in_mark[x as usize] == stamp);
                closed[3] += u64::from(out_mark[x as usize] == stamp);
            }
        }
        for &h in ins {
            for &x in g.out_neighbors(h) {
                // middleman: h→j with i→j; in: h→x with x→i
                closed[1] += u64::from(out_mark[x as usize] == stamp);
                closed[2] += u64::from(in_mark[x as usize] == stamp);
            }
        }
    }
    Ok(ClusteringReport {
        types: [
            TripletStats::new(total_cm, closed[0]),
            TripletStats::new(total_cm, closed[1]),
            TripletStats::new(total_in, closed[2]),
            TripletStats::new(total_out, closed[3]),
        ],
    })
}

/// Full-graph estimate `C / alpha` from the report of an `alpha`-edge
/// sample. Counts are left as sampled.
pub fn clustering_estimator(sampled: &ClusteringReport, alpha: f64) -> Result<ClusteringReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        bail!(InvalidParameter, "sampling probability must lie in (0, 1], got {alpha}");
    }
    let mut out = *sampled;
    for t in &mut out.types {
        if let Some(c) = t.coefficient {
            let scaled = c / alpha;
            t.saturated = scaled > 1.0;
            t.coefficient = Some(scaled.min(1.0));
        }
    }
    Ok(out)
}
