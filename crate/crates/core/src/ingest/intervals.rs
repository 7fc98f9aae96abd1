use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::TweetRecord;
use crate::error::{bail, Result};

/// Inter-tweet gaps of the users whose total tweet count lies in
/// `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalGroup {
    pub lower: u64,
    pub upper: u64,
    pub intervals: Vec<u64>,
    /// Arithmetic mean of `intervals`; `None` for an empty group.
    pub mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSeries {
    pub groups: Vec<IntervalGroup>,
    /// Gaps dropped because a user's timestamps went backwards.
    pub skew_warnings: u64,
}

impl IntervalGroup {
    pub fn new(lower: u64, upper: u64, intervals: Vec<u64>) -> Self {
        let mean = if intervals.is_empty() {
            None
        } else {
            Some(intervals.iter().map(|&x| x as f64).sum::<f64>() / intervals.len() as f64)
        };
        Self { lower, upper, intervals, mean }
    }
}

/// Groups users by their number of records and collects the gaps between
/// consecutive records of each user, in stream order. A negative gap (clock
/// skew) is dropped and counted in `skew_warnings`.
pub fn extract_intervals(records: &[TweetRecord], bounds: &[(u64, u64)]) -> Result<IntervalSeries> {
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        if lo == 0 || lo > hi {
            bail!(InvalidParameter, "group bound {lo}:{hi} is not a positive ascending range");
        }
        if i > 0 && bounds[i - 1].1 >= lo {
            bail!(InvalidParameter, "group bounds overlap or are not ascending at {lo}:{hi}");
        }
    }
    let mut per_user: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for r in records {
        per_user.entry(r.author_key()).or_default().push(r.timestamp);
    }
    let mut groups: Vec<Vec<u64>> = bounds.iter().map(|_| Vec::new()).collect();
    let mut skew_warnings = 0;
    for times in per_user.values() {
        let n = times.len() as u64;
        let Some(g) = bounds.iter().position(|&(lo, hi)| lo <= n && n <= hi) else {
            continue;
        };
        for w in times.windows(2) {
            match w[1].checked_sub(w[0]) {
                Some(gap) => groups[g].push(gap),
                None => skew_warnings += 1,
            }
        }
    }
    let groups = bounds.iter().zip(groups).map(|(&(lo, hi), iv)| IntervalGroup::new(lo, hi, iv)).collect();
    Ok(IntervalSeries { groups, skew_warnings })
}
