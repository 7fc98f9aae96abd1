//! Tweet records, retweet resolution, and the histograms, graphs, and
//! interval series every other module consumes.

mod intervals;
mod retweet;

pub use intervals::{extract_intervals, IntervalGroup, IntervalSeries};
pub use retweet::detect_retweet;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::graph::{NodeId, WeightedDigraph};
use crate::hist::{CountHistogram, HistogramKind};

pub const MAX_USER_LEN: usize = 64;

/// One message from the stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub author: String,
    /// Seconds since the epoch.
    pub timestamp: u64,
    pub text: String,
    /// Retweeted user as reported by the platform, when present.
    pub retweet_of: Option<String>,
}

impl TweetRecord {
    pub fn new(author: &str, timestamp: u64, text: &str, retweet_of: Option<&str>) -> Result<Self> {
        if author.is_empty() {
            bail!(InvalidParameter, "empty author");
        }
        if author.len() > MAX_USER_LEN {
            bail!(InvalidParameter, "author longer than {MAX_USER_LEN} bytes: {author}");
        }
        let retweet_of = retweet_of.filter(|s| !s.is_empty());
        if let Some(r) = retweet_of {
            if r.len() > MAX_USER_LEN {
                bail!(InvalidParameter, "retweet target longer than {MAX_USER_LEN} bytes: {r}");
            }
        }
        Ok(Self { author: author.into(), timestamp, text: text.into(), retweet_of: retweet_of.map(Into::into) })
    }

    /// Normalised author handle.
    pub fn author_key(&self) -> String {
        self.author.to_ascii_lowercase()
    }

    /// Normalised retweetee: platform metadata first, message syntax second.
    pub fn retweetee(&self) -> Option<String> {
        self.retweet_of
            .as_deref()
            .or_else(|| detect_retweet(&self.text))
            .map(str::to_ascii_lowercase)
    }
}

/// Per-user tallies of the requested kind. Users with zero items do not
/// appear.
pub fn build_count_histogram(records: &[TweetRecord], kind: HistogramKind) -> CountHistogram {
    let mut per_user: BTreeMap<String, u64> = BTreeMap::new();
    for r in records {
        let key = match (kind, r.retweetee()) {
            (HistogramKind::Tweets, None) | (HistogramKind::Other, _) => Some(r.author_key()),
            (HistogramKind::RetweetsSent, Some(_)) => Some(r.author_key()),
            (HistogramKind::TimesRetweeted, Some(target)) => Some(target),
            _ => None,
        };
        if let Some(k) = key {
            *per_user.entry(k).or_insert(0) += 1;
        }
    }
    CountHistogram::from_values(kind, per_user.into_values())
}

/// A retweet graph plus the handle of each node (node `i` is `names[i]`,
/// names sorted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetweetGraph {
    pub graph: WeightedDigraph,
    pub names: Vec<String>,
    /// Retweets of oneself, which carry no edge.
    pub self_loops_dropped: u64,
}

impl RetweetGraph {
    pub fn node_of(&self, name: &str) -> Option<NodeId> {
        let key = name.to_ascii_lowercase();
        self.names.binary_search(&key).ok().map(|i| i as NodeId)
    }
}

/// Edge `u → v` weighted by how often `u` retweeted `v`. Every retweeter and
/// retweetee gets a node, including handles seen only inside retweet syntax.
pub fn build_retweet_graph(records: &[TweetRecord]) -> RetweetGraph {
    let mut pairs: BTreeMap<(String, String), u32> = BTreeMap::new();
    let mut users: BTreeMap<String, NodeId> = BTreeMap::new();
    let mut self_loops_dropped = 0;
    for r in records {
        if let Some(target) = r.retweetee() {
            let src = r.author_key();
            users.insert(src.clone(), 0);
            users.insert(target.clone(), 0);
            if src == target {
                self_loops_dropped += 1;
            } else {
                let w = pairs.entry((src, target)).or_insert(0);
                *w = w.saturating_add(1);
            }
        }
    }
    for (i, id) in users.values_mut().enumerate() {
        *id = i as NodeId;
    }
    let edges = pairs.iter().map(|((s, t), &w)| (users[s], users[t], w));
    let graph = WeightedDigraph::from_edges(users.len(), edges);
    RetweetGraph { graph, names: users.into_keys().collect(), self_loops_dropped }
}
