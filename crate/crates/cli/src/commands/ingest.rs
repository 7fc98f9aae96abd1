use anyhow::Result;
use tweetstat_core::ingest::{build_count_histogram, build_retweet_graph, extract_intervals};
use tweetstat_core::HistogramKind;

use super::on;
use crate::args::{Ingest, Kind};
use crate::io::{histogram_rows, num, parse_records, read_input, HISTOGRAM_COLUMNS};
use crate::RunContext;

pub fn run(cmd: &Ingest, ctx: &RunContext) -> Result<()> {
    match cmd {
        Ingest::Histogram { kind, records } => {
            let recs = parse_records(&read_input(records)?, records)?;
            let (kind, name) = match kind {
                Kind::Tweets => (HistogramKind::Tweets, "tweets"),
                Kind::Retweets => (HistogramKind::RetweetsSent, "retweets"),
                Kind::Retweeted => (HistogramKind::TimesRetweeted, "retweeted"),
            };
            let h = build_count_histogram(&recs, kind);
            ctx.sink.table(
                &format!("histogram_{name}.csv"),
                &format!("users per {name} count"),
                &HISTOGRAM_COLUMNS,
                &histogram_rows(&h),
            )?;
        }
        Ingest::Graph { records } => {
            let recs = parse_records(&read_input(records)?, records)?;
            let g = build_retweet_graph(&recs);
            if g.self_loops_dropped > 0 {
                log::warn!("{}: dropped {} self-retweets", records.display(), g.self_loops_dropped);
            }
            let rows: Vec<Vec<String>> = g
                .graph
                .edges()
                .map(|(u, v, w)| vec![g.names[u as usize].clone(), g.names[v as usize].clone(), w.to_string()])
                .collect();
            ctx.sink.table(
                "graph.tsv",
                "retweet graph",
                &[("src", "retweeting user"), ("dst", "retweeted user"), ("weight", "number of retweets")],
                &rows,
            )?;
        }
        Ingest::Intervals { bounds, records } => {
            let recs = parse_records(&read_input(records)?, records)?;
            let s = on(extract_intervals(&recs, bounds), records)?;
            if s.skew_warnings > 0 {
                log::warn!("{}: dropped {} gaps with decreasing timestamps", records.display(), s.skew_warnings);
            }
            let mut rows = Vec::new();
            for g in &s.groups {
                rows.extend(g.intervals.iter().map(|x| vec![g.lower.to_string(), g.upper.to_string(), x.to_string()]));
            }
            ctx.sink.table(
                "intervals.csv",
                "gaps between consecutive records of a user",
                &[
                    ("lower", "smallest record count of the group"),
                    ("upper", "largest record count of the group"),
                    ("interval", "seconds between consecutive records"),
                ],
                &rows,
            )?;
            let summary: Vec<Vec<String>> = s
                .groups
                .iter()
                .map(|g| {
                    let mean = g.mean.map_or_else(String::new, num);
                    vec![g.lower.to_string(), g.upper.to_string(), g.intervals.len().to_string(), mean]
                })
                .collect();
            ctx.sink.table(
                "interval_groups.csv",
                "interval groups",
                &[
                    ("lower", "smallest record count of the group"),
                    ("upper", "largest record count of the group"),
                    ("intervals", "number of gaps"),
                    ("mean", "mean gap in seconds, empty for an empty group"),
                ],
                &summary,
            )?;
        }
    }
    Ok(())
}
