//! File formats and atomic output.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use tweetstat_core::graph::NodeId;
use tweetstat_core::ingest::{IntervalGroup, IntervalSeries, TweetRecord};
use tweetstat_core::synthgen::NodeClass;
use tweetstat_core::{CountHistogram, HistogramKind, WeightedDigraph};

/// `-` reads standard input.
pub fn read_input(path: &Path) -> Result<String> {
    let mut s = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
    } else {
        let f = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        BufReader::new(f).read_to_string(&mut s).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(s)
}

/// Lines that are neither blank nor `#` comments, with 1-based numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

/// `author<TAB>timestamp<TAB>retweet_of-or-empty<TAB>text`; the text may
/// itself hold tabs.
pub fn parse_records(text: &str, origin: &Path) -> Result<Vec<TweetRecord>> {
    let mut out = Vec::new();
    for (k, (n, line)) in data_lines(text).enumerate() {
        if k == 0 && line.split('\t').nth(1) == Some("timestamp") {
            continue;
        }
        let mut f = line.splitn(4, '\t');
        let (Some(author), Some(ts)) = (f.next(), f.next()) else {
            bail!("{}:{n}: expected author and timestamp", origin.display());
        };
        let retweet_of = f.next().filter(|s| !s.is_empty());
        let body = f.next().unwrap_or("");
        let ts: u64 = ts.trim().parse().with_context(|| format!("{}:{n}: bad timestamp {ts:?}", origin.display()))?;
        out.push(TweetRecord::new(author, ts, body, retweet_of).with_context(|| format!("{}:{n}", origin.display()))?);
    }
    Ok(out)
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes())
}

/// Rows of a numeric CSV, skipping a non-numeric header row.
fn numeric_rows(text: &str, origin: &Path, width: usize) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (k, rec) in csv_reader(text).records().enumerate() {
        let rec = rec.with_context(|| format!("{}: malformed CSV", origin.display()))?;
        let parsed: Result<Vec<f64>, _> = rec.iter().take(width).map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) if v.len() == width => rows.push(v),
            Err(_) if k == 0 => continue,
            _ => bail!("{}: row {} needs {width} numeric fields: {:?}", origin.display(), k + 1, rec),
        }
    }
    Ok(rows)
}

fn as_count(x: f64, what: &str, origin: &Path) -> Result<u64> {
    if x < 0.0 || x.fract() != 0.0 || x > u64::MAX as f64 {
        bail!("{}: {what} must be a non-negative integer, got {x}", origin.display());
    }
    Ok(x as u64)
}

/// `count,frequency`.
pub fn parse_histogram(text: &str, origin: &Path, kind: HistogramKind) -> Result<CountHistogram> {
    let mut pairs = Vec::new();
    for r in numeric_rows(text, origin, 2)? {
        pairs.push((as_count(r[0], "count", origin)?, as_count(r[1], "frequency", origin)?));
    }
    CountHistogram::from_pairs(kind, pairs).with_context(|| format!("{}: invalid histogram", origin.display()))
}

/// Data for fitting: a `count,frequency` histogram when lines hold commas,
/// otherwise one value per line.
pub enum Observations {
    Histogram(CountHistogram),
    Values(Vec<f64>),
}

pub fn parse_observations(text: &str, origin: &Path) -> Result<Observations> {
    if data_lines(text).any(|(_, l)| l.contains(',')) {
        return Ok(Observations::Histogram(parse_histogram(text, origin, HistogramKind::Other)?));
    }
    let mut v = Vec::new();
    for (n, l) in data_lines(text) {
        v.push(l.trim().parse::<f64>().with_context(|| format!("{}:{n}: not a number: {l:?}", origin.display()))?);
    }
    Ok(Observations::Values(v))
}

/// A graph read from an edge list, with the original node tokens.
pub struct NamedGraph {
    pub graph: WeightedDigraph,
    /// `names[i]` is node `i`; `None` when the file used integer ids.
    pub names: Option<Vec<String>>,
}

impl NamedGraph {
    pub fn name(&self, v: NodeId) -> String {
        match &self.names {
            Some(n) => n[v as usize].clone(),
            None => v.to_string(),
        }
    }

    pub fn node(&self, token: &str) -> Option<NodeId> {
        match &self.names {
            Some(n) => n.binary_search_by(|x| x.as_str().cmp(token)).ok().map(|i| i as NodeId),
            None => token.parse::<NodeId>().ok().filter(|&v| (v as usize) < self.graph.node_count()),
        }
    }
}

/// `src<TAB>dst[<TAB>weight]`. Integer tokens are taken as node ids (the
/// node count is one past the largest); anything else is a name, numbered
/// in sorted order.
pub fn parse_graph(text: &str, origin: &Path, min_nodes: usize) -> Result<NamedGraph> {
    let mut rows = Vec::new();
    for (k, (n, line)) in data_lines(text).enumerate() {
        let f: Vec<&str> = line.split('\t').map(str::trim).collect();
        if k == 0 && f.len() >= 2 && f[0] == "src" && f[1] == "dst" {
            continue;
        }
        if f.len() < 2 || f.len() > 3 {
            bail!("{}:{n}: expected src, dst and optional weight", origin.display());
        }
        let w: u32 = match f.get(2) {
            Some(w) => w.parse().with_context(|| format!("{}:{n}: bad weight {w:?}", origin.display()))?,
            None => 1,
        };
        if w == 0 {
            bail!("{}:{n}: weights must be positive", origin.display());
        }
        rows.push((f[0].to_string(), f[1].to_string(), w));
    }
    let numeric = rows.iter().all(|(s, d, _)| s.parse::<NodeId>().is_ok() && d.parse::<NodeId>().is_ok());
    if numeric {
        let ids: Vec<(NodeId, NodeId, u32)> =
            rows.iter().map(|(s, d, w)| (s.parse().unwrap(), d.parse().unwrap(), *w)).collect();
        let n = ids.iter().map(|&(s, d, _)| s.max(d) as usize + 1).max().unwrap_or(0).max(min_nodes);
        return Ok(NamedGraph { graph: WeightedDigraph::from_edges(n, ids), names: None });
    }
    let mut index: BTreeMap<&str, NodeId> = BTreeMap::new();
    for (s, d, _) in &rows {
        index.insert(s, 0);
        index.insert(d, 0);
    }
    for (i, v) in index.values_mut().enumerate() {
        *v = i as NodeId;
    }
    let edges = rows.iter().map(|(s, d, w)| (index[s.as_str()], index[d.as_str()], *w));
    let graph = WeightedDigraph::from_edges(index.len(), edges);
    Ok(NamedGraph { graph, names: Some(index.keys().map(|s| s.to_string()).collect()) })
}

/// `node<TAB>benign|spam`, one line per node of `g`.
pub fn parse_labels(text: &str, origin: &Path, g: &NamedGraph) -> Result<Vec<NodeClass>> {
    let mut labels = vec![None; g.graph.node_count()];
    for (k, (n, line)) in data_lines(text).enumerate() {
        if k == 0 && line.starts_with("node\t") {
            continue;
        }
        let Some((node, class)) = line.split_once('\t') else {
            bail!("{}:{n}: expected node and label", origin.display());
        };
        let v = g.node(node.trim()).with_context(|| format!("{}:{n}: node {node:?} is not in the graph", origin.display()))?;
        labels[v as usize] = Some(match class.trim() {
            "benign" => NodeClass::Benign,
            "spam" => NodeClass::Spam,
            other => bail!("{}:{n}: label must be benign or spam, got {other:?}", origin.display()),
        });
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.with_context(|| format!("{}: no label for node {}", origin.display(), g.name(v as NodeId))))
        .collect()
}

/// `lower,upper,interval` rows, grouped by their bounds.
pub fn parse_intervals(text: &str, origin: &Path) -> Result<IntervalSeries> {
    let mut groups: BTreeMap<(u64, u64), Vec<u64>> = BTreeMap::new();
    for r in numeric_rows(text, origin, 3)? {
        let key = (as_count(r[0], "lower bound", origin)?, as_count(r[1], "upper bound", origin)?);
        groups.entry(key).or_default().push(as_count(r[2], "interval", origin)?);
    }
    let groups = groups.into_iter().map(|((lo, hi), v)| IntervalGroup::new(lo, hi, v)).collect();
    Ok(IntervalSeries { groups, skew_warnings: 0 })
}

/// Where results go, plus the header lines every CSV carries.
#[derive(Debug, Clone)]
pub struct Sink {
    /// `None` writes to standard output.
    pub dir: Option<PathBuf>,
    pub command: String,
    pub seed: u64,
    pub timestamp: bool,
}

impl Sink {
    fn commit(&self, name: &str, bytes: &[u8]) -> Result<Option<PathBuf>> {
        let Some(dir) = &self.dir else {
            let mut out = io::stdout().lock();
            out.write_all(bytes).context("writing standard output")?;
            out.flush()?;
            return Ok(None);
        };
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let path = dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write in {}", dir.display()))?;
        tmp.write_all(bytes).with_context(|| format!("writing {}", path.display()))?;
        tmp.persist(&path).with_context(|| format!("cannot replace {}", path.display()))?;
        log::info!("wrote {}", path.display());
        Ok(Some(path))
    }

    fn preamble(&self, description: &str, columns: &[(&str, &str)], sep: char) -> String {
        let mut s = format!("# {description}\n# tweetstat {} seed={}\n", self.command, self.seed);
        if self.timestamp {
            let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs());
            s += &format!("# generated-unix-time: {secs}\n");
        }
        for (name, doc) in columns {
            s += &format!("# {name}: {doc}\n");
        }
        let names: Vec<&str> = columns.iter().map(|c| c.0).collect();
        s += &names.join(&sep.to_string());
        s.push('\n');
        s
    }

    /// Comment lines naming and documenting each column, a header row, then
    /// the rows.
    pub fn table(&self, name: &str, description: &str, columns: &[(&str, &str)], rows: &[Vec<String>]) -> Result<Option<PathBuf>> {
        let sep = if name.ends_with(".tsv") { '\t' } else { ',' };
        let mut s = self.preamble(description, columns, sep);
        for r in rows {
            debug_assert_eq!(r.len(), columns.len());
            let fields: Vec<String> = r.iter().map(|f| quote(f, sep)).collect();
            s += &fields.join(&sep.to_string());
            s.push('\n');
        }
        self.commit(name, s.as_bytes())
    }

    pub fn json(&self, name: &str, value: &serde_json::Value) -> Result<Option<PathBuf>> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.commit(name, s.as_bytes())
    }
}

fn quote(field: &str, sep: char) -> String {
    if field.contains([sep, '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn class_name(c: NodeClass) -> &'static str {
    match c {
        NodeClass::Benign => "benign",
        NodeClass::Spam => "spam",
    }
}

pub fn histogram_rows(h: &CountHistogram) -> Vec<Vec<String>> {
    h.iter().map(|(c, f)| vec![c.to_string(), f.to_string()]).collect()
}

pub const HISTOGRAM_COLUMNS: [(&str, &str); 2] =
    [("count", "items per user (tweets, retweets or degree)"), ("frequency", "users with exactly that count")];

/// Shortest decimal that parses back to the same value.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt_num(x: Option<f64>) -> serde_json::Value {
    x.filter(|v| v.is_finite()).map_or(serde_json::Value::Null, serde_json::Value::from)
}
