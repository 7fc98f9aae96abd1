//! Sparse count histograms: how many users (or nodes, or samples) have each
//! positive count.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{bail, Result};

/// What a histogram counts. Only used for labelling and routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum HistogramKind {
    /// Original messages per author.
    #[default]
    Tweets,
    /// Retweets sent per author.
    RetweetsSent,
    /// Retweets received per retweetee.
    TimesRetweeted,
    /// Anything else (degrees, simulated counts, raw samples).
    Other,
}

/// Sparse map `count -> frequency`, counts ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountHistogram {
    entries: BTreeMap<u64, u64>,
    kind: HistogramKind,
}

impl CountHistogram {
    pub fn new(kind: HistogramKind) -> Self {
        Self { entries: BTreeMap::new(), kind }
    }

    /// Tally of the positive values in `values`; zeros are skipped.
    pub fn from_values<I: IntoIterator<Item = u64>>(kind: HistogramKind, values: I) -> Self {
        let mut h = Self::new(kind);
        for v in values {
            if v > 0 {
                *h.entries.entry(v).or_insert(0) += 1;
            }
        }
        h
    }

    /// Builds from `(count, frequency)` pairs; zero frequencies are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(kind: HistogramKind, pairs: I) -> Result<Self> {
        let mut h = Self::new(kind);
        for (c, f) in pairs {
            h.add(c, f)?;
        }
        Ok(h)
    }

    pub fn kind(&self) -> HistogramKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: HistogramKind) -> Self {
        self.kind = kind;
        self
    }

    /// Adds `frequency` users with `count` items.
    pub fn add(&mut self, count: u64, frequency: u64) -> Result<()> {
        if count == 0 {
            bail!(Domain, "histogram counts must be positive");
        }
        if frequency > 0 {
            *self.entries.entry(count).or_insert(0) += frequency;
        }
        Ok(())
    }

    pub fn frequency(&self, count: u64) -> u64 {
        self.entries.get(&count).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct counts.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `Σ frequency`: the number of users.
    pub fn total_mass(&self) -> u64 {
        self.entries.values().sum()
    }

    /// `Σ count × frequency`: the number of underlying items.
    pub fn total_items(&self) -> u64 {
        self.entries.iter().map(|(c, f)| c * f).sum()
    }

    pub fn min_count(&self) -> Option<u64> {
        self.entries.keys().next().copied()
    }

    pub fn max_count(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    /// `(count, frequency)` in ascending count order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u64, u64)> + '_ {
        self.entries.iter().map(|(&c, &f)| (c, f))
    }

    /// Merges another histogram by adding frequencies.
    pub fn merge(&mut self, other: &CountHistogram) {
        for (c, f) in other.iter() {
            *self.entries.entry(c).or_insert(0) += f;
        }
    }

    /// Restriction to counts `≥ x_min`.
    pub fn truncated_below(&self, x_min: u64) -> CountHistogram {
        Self { entries: self.entries.range(x_min..).map(|(&c, &f)| (c, f)).collect(), kind: self.kind }
    }

    /// Dense `(count, number of users with count ≥ this)` pairs at the
    /// distinct counts, ascending.
    pub fn survivors(&self) -> Vec<(u64, u64)> {
        let mut remaining = self.total_mass();
        let mut out = Vec::with_capacity(self.len());
        for (c, f) in self.iter() {
            out.push((c, remaining));
            remaining -= f;
        }
        out
    }

    /// Mean count.
    pub fn mean(&self) -> f64 {
        let n = self.total_mass();
        if n == 0 {
            return 0.0;
        }
        self.total_items() as f64 / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tallies_and_masses() {
        let h = CountHistogram::from_values(HistogramKind::Other, [3, 1, 3, 0, 7]);
        assert_eq!(h.frequency(3), 2);
        assert_eq!(h.total_mass(), 4);
        assert_eq!(h.total_items(), 14);
        assert_eq!(h.survivors(), alloc::vec![(1, 4), (3, 3), (7, 1)]);
        assert_eq!(h.truncated_below(3).total_mass(), 3);
    }

    #[test]
    fn zero_count_rejected() {
        let mut h = CountHistogram::new(HistogramKind::Tweets);
        assert!(h.add(0, 1).is_err());
        h.add(2, 0).unwrap();
        assert!(h.is_empty());
    }
}
