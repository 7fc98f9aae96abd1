use std::collections::BTreeMap;

use rand::Rng;
use regex::bytes::Regex;
use tweetstat_core::ingest::{build_count_histogram, build_retweet_graph, detect_retweet, TweetRecord};
use tweetstat_core::{rng, HistogramKind};

const PATTERN: &str = r"(?i-u)(?:^|\W)(?:rt|retweet(?:ing)?|via)\s*:?\s*@\s*([a-zA-Z0-9_]{1,20})(?:$|\W)";

const PIECES: &[&str] = &[
    "rt", "RT", "Rt", "retweet", "ReTweeting", "retweeting", "via", "VIA", "@", "@", " ", "  ", "\t", ":", ": ", "a",
    "Zq", "_", "9", "bob", "x_y_z", "abcdefghij", "é", "ü", "-", ".", "art", "!", "\n", "\u{0B}", "\u{0C}", "#",
];

fn corpus(n: usize, seed: u64) -> Vec<String> {
    let mut r = rng::from_seed(seed);
    (0..n)
        .map(|_| {
            let mut piece = |r: &mut rng::Rng| PIECES[r.random_range(0..PIECES.len())];
            if r.random() {
                let len = r.random_range(0..12);
                return (0..len).map(|_| piece(&mut r)).collect();
            }
            // marker, separators, '@', handle, with noise on either side
            let mut s: String = (0..r.random_range(0..3)).map(|_| piece(&mut r)).collect();
            s += ["rt", "RT", "via", "Retweet", "retweeting", "RTX"][r.random_range(0..6)];
            s += [" ", "", ":", " : ", "\t", "  "][r.random_range(0..6)];
            s += ["@", "@ ", "", "@@"][r.random_range(0..4)];
            let handle_len = r.random_range(0..25);
            s.extend((0..handle_len).map(|_| ['a', 'B', '7', '_'][r.random_range(0..4)]));
            s.extend((0..r.random_range(0..3)).map(|_| piece(&mut r)));
            s
        })
        .collect()
}

#[test]
fn detector_agrees_with_regex_engine() {
    let re = Regex::new(PATTERN).unwrap();
    let mut hits = 0;
    for s in corpus(1000, 7).iter().chain(corpus(1000, 8).iter()) {
        let want = re.captures(s.as_bytes()).map(|c| c.get(1).unwrap().as_bytes().to_vec());
        let got = detect_retweet(s).map(|h| h.as_bytes().to_vec());
        assert_eq!(got, want, "{s:?}");
        hits += usize::from(want.is_some());
    }
    // the corpus must exercise both outcomes
    assert!(hits > 200 && hits < 1800, "{hits}");
}

#[test]
fn examples() {
    assert_eq!(detect_retweet("RT @alice check this"), Some("alice"));
    assert_eq!(detect_retweet("plain message no marker"), None);
    assert_eq!(detect_retweet("heard via @Bob_42: news"), Some("Bob_42"));
}

/// Synthetic stream: 200 users, each tweeting at its own rate, a share of the
/// tweets being retweets of a random user, half of those carried only in the
/// text.
fn synthetic_records(n: usize, seed: u64) -> Vec<TweetRecord> {
    let mut r = rng::from_seed(seed);
    let rates: Vec<f64> = (0..200).map(|i| 1.0 / (1 + i) as f64).collect();
    let total: f64 = rates.iter().sum();
    let pick = |r: &mut rng::Rng| {
        let mut u = r.random::<f64>() * total;
        for (i, &w) in rates.iter().enumerate() {
            if u < w {
                return i;
            }
            u -= w;
        }
        rates.len() - 1
    };
    (0..n)
        .map(|t| {
            let author = format!("User{}", pick(&mut r));
            if r.random::<f64>() < 0.4 {
                let target = format!("user{}", pick(&mut r));
                if r.random() {
                    TweetRecord::new(&author, t as u64, "look", Some(&target)).unwrap()
                } else {
                    TweetRecord::new(&author, t as u64, &format!("RT @{target}: look"), None).unwrap()
                }
            } else {
                TweetRecord::new(&author, t as u64, "hello", None).unwrap()
            }
        })
        .collect()
}

/// Retweetee of a synthetic record, read off the generator's two layouts.
fn known_target(r: &TweetRecord) -> Option<String> {
    r.retweet_of
        .clone()
        .or_else(|| r.text.strip_prefix("RT @").map(|s| s.trim_end_matches(": look").to_string()))
        .map(|t| t.to_lowercase())
}

fn tally_histogram(tally: &BTreeMap<String, u64>) -> Vec<(u64, u64)> {
    let mut h: BTreeMap<u64, u64> = BTreeMap::new();
    for &c in tally.values() {
        *h.entry(c).or_default() += 1;
    }
    h.into_iter().collect()
}

#[test]
fn histograms_match_single_pass_tally() {
    let recs = synthetic_records(10_000, 3);
    let (mut tweets, mut sent, mut received) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    for r in &recs {
        let author = r.author.to_lowercase();
        match known_target(r) {
            Some(t) => {
                *sent.entry(author).or_insert(0) += 1;
                *received.entry(t).or_insert(0) += 1;
            }
            None => *tweets.entry(author).or_insert(0) += 1,
        }
    }
    for (kind, tally) in [
        (HistogramKind::Tweets, &tweets),
        (HistogramKind::RetweetsSent, &sent),
        (HistogramKind::TimesRetweeted, &received),
    ] {
        let h = build_count_histogram(&recs, kind);
        assert_eq!(h.iter().collect::<Vec<_>>(), tally_histogram(tally), "{kind:?}");
        assert_eq!(h.total_items(), tally.values().sum::<u64>());
    }
}

#[test]
fn graph_matches_pair_counter() {
    let recs = synthetic_records(1000, 4);
    let mut pairs: BTreeMap<(String, String), u32> = BTreeMap::new();
    let mut resolved = 0u64;
    for r in &recs {
        if let Some(t) = known_target(r) {
            resolved += 1;
            let s = r.author.to_lowercase();
            if s != t {
                *pairs.entry((s, t)).or_default() += 1;
            }
        }
    }
    let g = build_retweet_graph(&recs);
    assert_eq!(g.graph.total_weight(), resolved - g.self_loops_dropped);
    assert_eq!(g.graph.edge_count(), pairs.len());
    for ((s, t), w) in pairs {
        let (u, v) = (g.node_of(&s).unwrap(), g.node_of(&t).unwrap());
        assert_eq!(g.graph.weight(u, v), Some(w));
    }
}
