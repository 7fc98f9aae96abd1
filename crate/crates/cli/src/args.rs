use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "tweetstat", version, about = "Statistics of microblog activity: counts, fits, simulations, graphs and spam detection")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Root seed of every random stream; drawn at random and printed when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory, `-` for standard output. Overrides TWEETSTAT_OUT_DIR.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Flat `key = value` file supplying flags absent from the command line.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "warn", value_name = "LEVEL")]
    pub log_level: log::LevelFilter,
    /// Leave the generation-time comment out of CSV headers.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse message records into histograms, graphs and intervals.
    #[command(subcommand)]
    Ingest(Ingest),
    /// Recover population counts from a thinned sample.
    #[command(subcommand)]
    Debias(Debias),
    /// Fit and inspect heavy-tailed distributions.
    #[command(subcommand)]
    Distfit(Distfit),
    /// Simulate the urn process.
    #[command(subcommand)]
    Urnsim(Urnsim),
    /// Structural metrics of a directed graph.
    #[command(subcommand)]
    Net(Net),
    /// Generate synthetic graphs.
    #[command(subcommand)]
    Synth(Synth),
    /// Connectivity features and spam classification.
    #[command(subcommand)]
    Spam(Spam),
}

impl Command {
    pub fn name(&self) -> String {
        let (group, leaf) = match self {
            Command::Ingest(c) => ("ingest", c.name()),
            Command::Debias(c) => ("debias", c.name()),
            Command::Distfit(c) => ("distfit", c.name()),
            Command::Urnsim(c) => ("urnsim", c.name()),
            Command::Net(c) => ("net", c.name()),
            Command::Synth(c) => ("synth", c.name()),
            Command::Spam(c) => ("spam", c.name()),
        };
        format!("{group} {leaf}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Tweets,
    Retweets,
    Retweeted,
}

#[derive(Debug, Subcommand)]
pub enum Ingest {
    /// Users per count of tweets, retweets sent, or times retweeted.
    Histogram {
        #[arg(long)]
        kind: Kind,
        /// Records as `author<TAB>timestamp<TAB>retweet_of<TAB>text`; `-` for stdin.
        records: PathBuf,
    },
    /// Weighted retweeter → retweetee edge list.
    Graph { records: PathBuf },
    /// Gaps between consecutive records per user, grouped by record count.
    Intervals {
        /// Inclusive count ranges, e.g. `100:199,1000:1999`.
        #[arg(long, value_delimiter = ',', value_parser = parse_bound, required = true)]
        bounds: Vec<(u64, u64)>,
        records: PathBuf,
    },
}

impl Ingest {
    fn name(&self) -> &'static str {
        match self {
            Ingest::Histogram { .. } => "histogram",
            Ingest::Graph { .. } => "graph",
            Ingest::Intervals { .. } => "intervals",
        }
    }
}

fn parse_bound(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lower:upper, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

#[derive(Debug, Subcommand)]
pub enum Debias {
    /// EM estimate of the population histogram behind a thinned one.
    Em {
        /// Probability that an item is observed.
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Largest population count considered; defaults to ten times the largest observed.
        #[arg(long)]
        max_count: Option<u64>,
        /// `count,frequency` CSV.
        histogram: PathBuf,
    },
    /// Keep each item independently with probability `p`.
    Thin {
        #[arg(long)]
        p: f64,
        histogram: PathBuf,
    },
}

impl Debias {
    fn name(&self) -> &'static str {
        match self {
            Debias::Em { .. } => "em",
            Debias::Thin { .. } => "thin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BinMode {
    Log,
    Eqcount,
}

#[derive(Debug, Subcommand)]
pub enum Distfit {
    /// Maximum-likelihood fit with a bootstrap KS test.
    Fit {
        /// One of pl, dw2, plln, dpln, plexp.
        #[arg(long)]
        family: String,
        /// Fixed lower cut-off; the power law scans for one when absent.
        #[arg(long)]
        x_min: Option<f64>,
        /// Bootstrap resamples for the KS p-value.
        #[arg(long, default_value_t = 1000)]
        resamples: usize,
        /// Either a `count,frequency` CSV or one value per line.
        data: PathBuf,
    },
    /// Empirical density on logarithmic or equal-count bins.
    Bin {
        #[arg(long)]
        mode: BinMode,
        #[arg(long, default_value_t = 10)]
        bins_per_decade: u32,
        /// Number of equal-count bins; defaults to a tenth of the sample size.
        #[arg(long)]
        bins: Option<u64>,
        data: PathBuf,
    },
    /// Empirical hazard series and its log-log slope.
    Hazard {
        #[arg(long, default_value_t = 50)]
        floor: u64,
        #[arg(long, default_value_t = 10)]
        bins_per_decade: u32,
        histogram: PathBuf,
    },
    /// Mean-scaled interval densities per activity group.
    Collapse {
        #[arg(long, default_value_t = 10)]
        bins_per_decade: u32,
        #[arg(long, default_value_t = 1000)]
        min_intervals: usize,
        /// `lower,upper,interval` CSV as written by `ingest intervals`.
        intervals: PathBuf,
    },
}

impl Distfit {
    fn name(&self) -> &'static str {
        match self {
            Distfit::Fit { .. } => "fit",
            Distfit::Bin { .. } => "bin",
            Distfit::Hazard { .. } => "hazard",
            Distfit::Collapse { .. } => "collapse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Join {
    /// The joining user's first tweet is part of the step's budget.
    Budget,
    /// The first tweet comes on top of the budget.
    Extra,
}

#[derive(Debug, Args)]
pub struct UrnFlags {
    /// Initial attractiveness.
    #[arg(long = "A", default_value_t = 1.0)]
    pub a: f64,
    /// Preference exponent.
    #[arg(long, default_value_t = 0.88)]
    pub alpha: f64,
    /// Tweets per step per existing user.
    #[arg(long, default_value_t = 2.07e-4)]
    pub c: f64,
    #[arg(long, value_enum, default_value_t = Join::Budget)]
    pub join: Join,
}

#[derive(Debug, Subcommand)]
pub enum Urnsim {
    /// One run, histogram of tweets per user at the end.
    Run {
        #[command(flatten)]
        urn: UrnFlags,
        /// Steps (joining users).
        #[arg(long = "T", default_value_t = 1_000_000)]
        t: u64,
    },
    /// One run observed at several step counts.
    Sweep {
        #[command(flatten)]
        urn: UrnFlags,
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<u64>,
    },
}

impl Urnsim {
    fn name(&self) -> &'static str {
        match self {
            Urnsim::Run { .. } => "run",
            Urnsim::Sweep { .. } => "sweep",
        }
    }
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Edge list `src<TAB>dst[<TAB>weight]`.
    pub graph: PathBuf,
    /// Treat the input as a uniform edge sample kept with this probability.
    #[arg(long)]
    pub sampled_alpha: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Net {
    Degrees {
        #[command(flatten)]
        input: GraphInput,
    },
    Reciprocity {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Shortest-path lengths from sampled sources.
    Paths {
        #[arg(long, default_value_t = 1000)]
        sources: usize,
        /// Inflation factor undone when `--sampled-alpha` is given.
        #[arg(long, default_value_t = tweetstat_core::netmetrics::DEFAULT_APL_FACTOR)]
        apl_factor: f64,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Degree correlations across edges.
    Assort {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Directed clustering coefficients of the four triplet types.
    Cluster {
        #[command(flatten)]
        input: GraphInput,
    },
}

impl Net {
    fn name(&self) -> &'static str {
        match self {
            Net::Degrees { .. } => "degrees",
            Net::Reciprocity { .. } => "reciprocity",
            Net::Paths { .. } => "paths",
            Net::Assort { .. } => "assort",
            Net::Cluster { .. } => "cluster",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Synth {
    /// R-MAT graph on 2^n nodes.
    Rmat {
        #[arg(long, default_value_t = 0.52)]
        a: f64,
        #[arg(long, default_value_t = 0.18)]
        b: f64,
        #[arg(long, default_value_t = 0.17)]
        c: f64,
        #[arg(long, default_value_t = 0.13)]
        d: f64,
        /// log2 of the node count.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        edges: u64,
    },
    /// Graph with benign and spam blocks, plus node labels.
    Spam {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0.1)]
        spam_frac: f64,
        #[arg(long)]
        benign_density: f64,
        #[arg(long)]
        bs_rate: f64,
    },
    /// Fit cascade marginals to the degree histograms of a graph.
    Automat { graph: PathBuf },
}

impl Synth {
    fn name(&self) -> &'static str {
        match self {
            Synth::Rmat { .. } => "rmat",
            Synth::Spam { .. } => "spam",
            Synth::Automat { .. } => "automat",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Spam {
    /// Distance and max-flow from a root to every other node.
    Features {
        #[arg(long)]
        graph: PathBuf,
        /// `node<TAB>benign|spam`.
        #[arg(long)]
        labels: PathBuf,
        /// `auto` picks a random benign node with outgoing edges.
        #[arg(long, default_value = "auto")]
        root: String,
    },
    /// Train and cross-validate over a grid of synthetic graphs.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        densities: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        bs_rates: Vec<f64>,
        #[arg(long, default_value_t = 13)]
        n: u32,
        /// Graphs per grid cell.
        #[arg(long, default_value_t = 1)]
        replicates: u64,
    },
    /// Fraction of benign pairs joined by a directed path.
    Connectivity {
        #[arg(long, value_delimiter = ',', required = true)]
        densities: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        bs_rate: f64,
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
}

impl Spam {
    fn name(&self) -> &'static str {
        match self {
            Spam::Features { .. } => "features",
            Spam::Sweep { .. } => "sweep",
            Spam::Connectivity { .. } => "connectivity",
        }
    }
}
