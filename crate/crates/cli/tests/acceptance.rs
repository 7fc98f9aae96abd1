//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`cargo test --test acceptance`). The exit status
//! is 0 even when a criterion fails unless `ACCEPTANCE_STRICT=1` is set;
//! `ACCEPTANCE_ONLY=1,5,12` restricts the run to the listed criteria.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use anyhow::{anyhow, ensure, Result};
use rand::Rng as _;
use tweetstat_core::debias::{em_estimate, thin_histogram, EmOptions, ThinningModel};
use tweetstat_core::distfit::{
    equal_count_bin, fit_mle, fit_power_law_regression, g_test, hazard_slope, ks_test, likelihood_ratio, log_bin,
    scale_collapse, DiscreteWeibull2, Family, FitOptions, KsOptions, Model, PowerLawExpCutoff, PowerLawLognormalCutoff,
    Preference, Sample,
};
use tweetstat_core::graph::NodeId;
use tweetstat_core::ingest::{IntervalGroup, IntervalSeries};
use tweetstat_core::netmetrics::{
    assortativity, clustering, clustering_estimator, path_length_distribution, reciprocity, sample_edges, DegreeKind,
};
use tweetstat_core::rng;
use tweetstat_core::spamlab::{connectivity_fraction, max_flow_unit, sweep_cell};
use tweetstat_core::synthgen::{automat_fit, degree_chi_square, rmat_generate, DegreeBins, RmatParams, RmatShape, SpamGraphSpec};
use tweetstat_core::urnsim::{crossing_point, log_slope, simulate_snapshots, JoinAccounting, UrnParams};
use tweetstat_core::{CountHistogram, HistogramKind, WeightedDigraph};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn param(m: &dyn Model, name: &str) -> f64 {
    m.params().into_iter().find(|p| p.0 == name).map(|p| p.1).unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------- AC1

fn ac1() -> Result<Outcome> {
    let h: f64 = (1..=100).map(|i| (i as f64).powi(-2)).sum();
    let truth = CountHistogram::from_pairs(
        HistogramKind::Other,
        (1..=100u64).map(|i| (i, (1e6 * (i as f64).powi(-2) / h).round() as u64)),
    )?;
    let g = thin_histogram(&truth, 0.1, 1)?;
    let start = Instant::now();
    let est = em_estimate(&g, ThinningModel::for_histogram(0.1, &g)?, EmOptions { trace: true, ..EmOptions::default() })?;
    let elapsed = start.elapsed();
    let total = est.population_total();
    let len = est.f_hat.len().max(100);
    let tv = 0.5
        * (1..=len as u64)
            .map(|i| {
                let f = est.f_hat.get(i as usize - 1).copied().unwrap_or(0.0) / total;
                (f - truth.frequency(i) as f64 / truth.total_mass() as f64).abs()
            })
            .sum::<f64>();
    let monotone = est.log_likelihood.windows(2).all(|w| w[1] >= w[0]);
    outcome(
        tv < 0.05 && monotone && elapsed < Duration::from_secs(60),
        format!(
            "TV {tv:.4} (< 0.05), log-likelihood non-decreasing {monotone}, {} iterations, converged {}, {:.1}s (< 60s)",
            est.iterations,
            est.converged,
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- AC2, AC3

fn weibull_sample() -> Result<Sample> {
    let m = DiscreteWeibull2::new(0.17, 0.32)?;
    Ok(Sample::from_integer_values(&m.sample_n(&mut rng::from_seed(2), 1_000_000))?)
}

fn ac2() -> Result<Outcome> {
    let s = weibull_sample()?;
    let fit = fit_mle(Family::Weibull2, &s, &FitOptions::default())?;
    let (beta, c) = (param(&fit.model, "beta"), param(&fit.model, "c"));
    let slope = hazard_slope(&s.to_histogram().ok_or_else(|| anyhow!("non-integer sample"))?, 10, 50)?.slope;
    outcome(
        (beta - 0.17).abs() <= 0.02 && (c - 0.32).abs() <= 0.02 && (slope + 0.83).abs() <= 0.05,
        format!("beta {beta:.4} (0.17 ± 0.02), c {c:.4} (0.32 ± 0.02), hazard slope {slope:.4} (-0.83 ± 0.05)"),
    )
}

fn ac3() -> Result<Outcome> {
    let s = weibull_sample()?;
    // regression fit and G-test on equal-count bins of the tail
    let x_min = 12u64;
    let tail = s.at_least(x_min as f64);
    let binned = equal_count_bin(&tail, tail.len() / 10)?;
    let regression = fit_power_law_regression(&binned, x_min)?;
    let g = g_test(&binned, &regression)?;
    // MLE power law and bootstrap KS on the raw values
    let mle = fit_mle(Family::PowerLaw, &s, &FitOptions::default())?;
    let ks = ks_test(&s, &mle.model, &KsOptions::default())?;
    // apparent slopes over the top decade of each binning
    let top_slope = |b: &tweetstat_core::distfit::BinnedDensity| {
        let top = b.center(b.len() - 1);
        b.log_slope(top / 10.0, top).unwrap_or(f64::NAN)
    };
    let eq = equal_count_bin(&s, 1000)?;
    let lg = log_bin(&s, 10)?;
    outcome(
        g.p_value > 0.5 && ks.p_value < 0.05,
        format!(
            "G-test p {:.3} (> 0.5, alpha {:.3}), KS p {:.3} (< 0.05, D {:.4}, x_min {}); top-decade slopes equal-count {:.2} vs log {:.2}",
            g.p_value,
            param(&regression, "alpha"),
            ks.p_value,
            ks.d,
            mle.model.lower_bound(),
            top_slope(&eq),
            top_slope(&lg)
        ),
    )
}

// ---------------------------------------------------------------- AC4

fn ac4() -> Result<Outcome> {
    let truth = PowerLawLognormalCutoff::new(1.13, 7.6, 1.06, 1.0)?;
    let s = Sample::from_values(&truth.sample_n(&mut rng::from_seed(4), 1_000_000))?;
    let opts = FitOptions { x_min: Some(1.0), ..FitOptions::default() };
    let plln = fit_mle(Family::PowerLawLognormal, &s, &opts)?;
    let dpln = fit_mle(Family::Dpln, &s, &opts)?;
    let lr = likelihood_ratio(&plln.model, &dpln.model, &s, 0.05)?;
    outcome(
        lr.preferred == Preference::A,
        format!(
            "log-ratio {:.1}, z {:.2}, p {:.2e}: prefers {:?} (lognormal cutoff beta {:.3} mu {:.3} sigma {:.3})",
            lr.log_ratio,
            lr.z,
            lr.p_value,
            lr.preferred,
            param(&plln.model, "beta"),
            param(&plln.model, "mu"),
            param(&plln.model, "sigma")
        ),
    )
}

// ---------------------------------------------------------------- AC5

fn ac5() -> Result<Outcome> {
    let t_max = 1_000_000u64;
    let p = UrnParams { a: 1.0, alpha: 0.88, c: 207.0 / t_max as f64, t: t_max, seed: 5, join: JoinAccounting::BudgetInclusive };
    let start = Instant::now();
    let snaps = simulate_snapshots(&p, &[10_000, 100_000, t_max])?;
    let elapsed = start.elapsed();
    let crossings: Vec<Option<f64>> = snaps.iter().map(|h| crossing_point(h, 10, 3, -2.0, 5)).collect::<Result<_, _>>()?;
    let monotone = crossings.iter().all(Option::is_some) && crossings.windows(2).all(|w| w[0] <= w[1]);
    let last = snaps.last().unwrap();
    let k_c = crossing_point(last, 10, 5, -2.0, 10)?.ok_or_else(|| anyhow!("no crossing at the largest T"))?;
    let slope = log_slope(last, 10, 1.0, k_c)?.slope;
    let shown: Vec<String> = crossings.iter().map(|c| c.map_or("none".into(), |x| format!("{x:.1}"))).collect();
    outcome(
        (slope + 1.13).abs() <= 0.1 && monotone && elapsed < Duration::from_secs(300),
        format!(
            "lower-tail slope {slope:.3} over [1, {k_c:.0}] (-1.13 ± 0.1), crossings {} non-decreasing {monotone}, {:.1}s (< 300s)",
            shown.join(" / "),
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- AC6

fn ac6() -> Result<Outcome> {
    let m = PowerLawExpCutoff::new(0.8, 8.1 * 86_400.0, 60.0)?;
    let groups = [1.0, 3.0, 10.0]
        .iter()
        .enumerate()
        .map(|(i, &scale)| {
            let x = m.sample_n(&mut rng::stream(6, "group", i as u64), 100_000);
            let k = i as u64 + 1;
            IntervalGroup::new(k, k, x.iter().map(|v| (v * scale).round() as u64).collect())
        })
        .collect();
    let c = scale_collapse(&IntervalSeries { groups, skew_warnings: 0 }, 10, 1000)?;
    let means: Vec<String> = c.groups.iter().map(|g| format!("{:.0}", g.mean)).collect();
    outcome(c.metric < 0.1, format!("collapse metric {:.4} (< 0.1), group means {}", c.metric, means.join(" / ")))
}

// ---------------------------------------------------------------- AC7

fn random_digraph(n: usize, p: f64, seed: u64) -> WeightedDigraph {
    let mut r = rng::from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in 0..n as NodeId {
            if u != v && r.random::<f64>() < p {
                edges.push((u, v, r.random_range(1..4)));
            }
        }
    }
    WeightedDigraph::from_edges(n, edges)
}

fn adjacency(g: &WeightedDigraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v, _) in g.edges() {
        a[u as usize][v as usize] = true;
    }
    a
}

fn brute_pearson(g: &WeightedDigraph, a: &[Vec<bool>], src: DegreeKind, dst: DegreeKind) -> Option<f64> {
    let n = a.len();
    let deg = |v: usize, k: DegreeKind| match k {
        DegreeKind::Out => a[v].iter().filter(|&&x| x).count() as f64,
        DegreeKind::In => (0..n).filter(|&u| a[u][v]).count() as f64,
    };
    let pairs: Vec<(f64, f64)> = g.edges().map(|(u, v, _)| (deg(u as usize, src), deg(v as usize, dst))).collect();
    let m = pairs.len() as f64;
    let (mx, my) = (pairs.iter().map(|p| p.0).sum::<f64>() / m, pairs.iter().map(|p| p.1).sum::<f64>() / m);
    let cov: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let vx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let vy: f64 = pairs.iter().map(|p| (p.1 - my).powi(2)).sum();
    (vx > 0.0 && vy > 0.0).then(|| cov / (vx * vy).sqrt())
}

/// (total, closed) per type in the order cycle, middleman, in, out.
fn brute_triplets(a: &[Vec<bool>]) -> [(u64, u64); 4] {
    let n = a.len();
    let mut c = [(0u64, 0u64); 4];
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                if i == j || j == h || i == h {
                    continue;
                }
                let cases = [
                    (a[h][i] && a[i][j], a[j][h]),
                    (a[h][i] && a[i][j], a[h][j]),
                    (a[j][i] && a[h][i], a[j][h]),
                    (a[i][j] && a[i][h], a[j][h]),
                ];
                for (k, (open, closed)) in cases.into_iter().enumerate() {
                    if open {
                        c[k].0 += 1;
                        c[k].1 += u64::from(closed);
                    }
                }
            }
        }
    }
    c
}

/// Hop histogram over all ordered pairs, by Floyd–Warshall.
fn brute_hops(a: &[Vec<bool>]) -> (Vec<u64>, u64) {
    let n = a.len();
    const INF: usize = usize::MAX / 2;
    let mut d = vec![vec![INF; n]; n];
    for u in 0..n {
        for v in 0..n {
            if a[u][v] {
                d[u][v] = 1;
            }
        }
    }
    for k in 0..n {
        for u in 0..n {
            for v in 0..n {
                if d[u][k] + d[k][v] < d[u][v] {
                    d[u][v] = d[u][k] + d[k][v];
                }
            }
        }
    }
    let mut hops = vec![0u64; n];
    let mut unreachable = 0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                if d[u][v] < INF {
                    hops[d[u][v]] += 1;
                } else {
                    unreachable += 1;
                }
            }
        }
    }
    while hops.len() > 1 && *hops.last().unwrap() == 0 {
        hops.pop();
    }
    (hops, unreachable)
}

/// Largest set of pairwise edge-disjoint simple s→t paths, by enumeration.
fn exhaustive_disjoint_paths(n: usize, a: &[Vec<bool>], s: usize, t: usize) -> u32 {
    let mut paths: Vec<u64> = Vec::new();
    let mut stack = vec![(s, 1u64 << s, 0u64)];
    while let Some((u, seen, used)) = stack.pop() {
        if u == t {
            paths.push(used);
            continue;
        }
        for v in 0..n {
            if a[u][v] && seen >> v & 1 == 0 {
                stack.push((v, seen | 1 << v, used | 1 << (u * n + v)));
            }
        }
    }
    fn best(paths: &[u64], used: u64) -> u32 {
        match paths.split_first() {
            None => 0,
            Some((&p, rest)) if p & used == 0 => best(rest, used).max(1 + best(rest, used | p)),
            Some((_, rest)) => best(rest, used),
        }
    }
    best(&paths, 0)
}

fn ac7() -> Result<Outcome> {
    use DegreeKind::{In, Out};
    let mut mismatches = Vec::new();
    for seed in 0..200u64 {
        let n = 2 + (seed as usize * 7) % 49;
        let g = random_digraph(n, [0.05, 0.15, 0.4][seed as usize % 3], 1000 + seed);
        let a = adjacency(&g);
        let assort = assortativity(&g).ok();
        for (x, y) in [(In, In), (In, Out), (Out, In), (Out, Out)] {
            let want = if g.edge_count() == 0 { None } else { brute_pearson(&g, &a, x, y) };
            let got = assort.and_then(|r| r.get(x, y));
            let same = match (got, want) {
                (Some(p), Some(q)) => (p - q).abs() <= 1e-12 * q.abs().max(1.0),
                (p, q) => p.is_none() && q.is_none(),
            };
            if !same {
                mismatches.push(format!("seed {seed}: assortativity {x:?}-{y:?} {got:?} vs {want:?}"));
            }
        }
        if n >= 3 {
            let c = clustering(&g)?;
            let got: Vec<(u64, u64)> = c.types.iter().map(|t| (t.total, t.closed)).collect();
            if got != brute_triplets(&a) {
                mismatches.push(format!("seed {seed}: clustering"));
            }
        }
        let mutual = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| a[u][v] && a[v][u]).count();
        match reciprocity(&g) {
            Ok(r) if r == mutual as f64 / g.edge_count() as f64 => {}
            Err(_) if g.edge_count() == 0 => {}
            r => mismatches.push(format!("seed {seed}: reciprocity {r:?}")),
        }
        let d = path_length_distribution(&g, n, seed)?;
        let (hops, unreachable) = brute_hops(&a);
        let mut got = d.hops.clone();
        while got.len() > 1 && *got.last().unwrap() == 0 {
            got.pop();
        }
        if got != hops || d.unreachable != unreachable {
            mismatches.push(format!("seed {seed}: path lengths"));
        }
    }
    // every digraph on up to five nodes; relabelling makes s = 0, t = 1 general
    let mut graphs = 0u64;
    for n in 2..=5usize {
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
        for mask in 0u64..1 << cells.len() {
            let chosen: Vec<(usize, usize)> =
                cells.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &c)| c).collect();
            let g = WeightedDigraph::from_edges(n, chosen.iter().map(|&(u, v)| (u as NodeId, v as NodeId, 1)));
            let mut a = vec![vec![false; n]; n];
            for &(u, v) in &chosen {
                a[u][v] = true;
            }
            let f = max_flow_unit(&g, 0, 1)?;
            let want = exhaustive_disjoint_paths(n, &a, 0, 1);
            if f != want {
                mismatches.push(format!("n={n} mask={mask:#x}: flow {f} vs {want}"));
            }
            graphs += 1;
        }
    }
    let shown: Vec<&str> = mismatches.iter().take(3).map(String::as_str).collect();
    outcome(
        mismatches.is_empty(),
        format!("200 random digraphs and {graphs} small flow instances, {} mismatches {}", mismatches.len(), shown.join("; ")),
    )
}

// ---------------------------------------------------------------- AC8

/// Nodes of similar fitness link preferentially, so degree correlations are
/// clearly positive and degrees are large.
fn fitness_graph(n: u32, seed: u64) -> WeightedDigraph {
    let mut r = rng::from_seed(seed);
    let fit: Vec<f64> = (0..n).map(|_| (1.0 - r.random::<f64>()).powf(-0.8)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let (a, b) = (fit[u as usize], fit[v as usize]);
            let p = (0.1 * a * b).min(1.0) * (a.min(b) / a.max(b));
            if u != v && r.random::<f64>() < p {
                edges.push((u, v, 1));
            }
        }
    }
    WeightedDigraph::from_edges(n as usize, edges)
}

fn communities(groups: usize, size: usize, p: f64, seed: u64) -> WeightedDigraph {
    let mut r = rng::from_seed(seed);
    let mut edges = Vec::new();
    for g in 0..groups {
        let base = (g * size) as NodeId;
        for a in 0..size as NodeId {
            for b in 0..size as NodeId {
                if a != b && r.random::<f64>() < p {
                    edges.push((base + a, base + b, 1));
                }
            }
        }
    }
    WeightedDigraph::from_edges(groups * size, edges)
}

fn ac8() -> Result<Outcome> {
    use DegreeKind::{In, Out};
    let kinds = [(In, In), (In, Out), (Out, In), (Out, Out)];
    let g = fitness_graph(8000, 77);
    let full = assortativity(&g)?;
    let mut mean = [0.0; 4];
    for seed in 0..20 {
        let s = assortativity(&sample_edges(&g, 0.1, seed)?)?;
        for (k, &(x, y)) in kinds.iter().enumerate() {
            mean[k] += s.get(x, y).ok_or_else(|| anyhow!("undefined sampled assortativity"))? / 20.0;
        }
    }
    let mut worst_r = 0.0f64;
    for (k, &(x, y)) in kinds.iter().enumerate() {
        let f = full.get(x, y).ok_or_else(|| anyhow!("undefined assortativity"))?;
        worst_r = worst_r.max((mean[k] - f).abs());
    }
    let c = communities(400, 50, 0.3, 11);
    let truth = clustering(&c)?;
    let mut est = [0.0; 4];
    for seed in 0..20 {
        let e = clustering_estimator(&clustering(&sample_edges(&c, 0.1, seed)?)?, 0.1)?;
        for (k, t) in e.types.iter().enumerate() {
            est[k] += t.coefficient.ok_or_else(|| anyhow!("no triplets in a sample"))? / 20.0;
        }
    }
    let mut worst_c = 0.0f64;
    for (k, t) in truth.types.iter().enumerate() {
        worst_c = worst_c.max((est[k] - t.coefficient.unwrap_or(f64::NAN)).abs());
    }
    outcome(
        worst_r <= 0.02 && worst_c <= 0.05,
        format!(
            "largest assortativity error {worst_r:.4} (±0.02, full r_out_in {:.3}), largest clustering error {worst_c:.4} (±0.05)",
            full.r_out_in.unwrap_or(f64::NAN)
        ),
    )
}

// ---------------------------------------------------------------- AC9

fn ac9() -> Result<Outcome> {
    let p = RmatParams::new(RmatShape::RETWEET, 16, 16 << 16)?;
    let g = rmat_generate(&p, 1)?;
    let hist = |k: DegreeKind| {
        CountHistogram::from_values(
            HistogramKind::Other,
            (0..g.node_count() as NodeId).map(|v| match k {
                DegreeKind::In => g.in_degree(v) as u64,
                DegreeKind::Out => g.out_degree(v) as u64,
            }),
        )
    };
    let out_h = hist(DegreeKind::Out);
    let chi = degree_chi_square(&DegreeBins::from_histogram(&out_h, 16)?, 16, p.edges, p.shape.p())?;
    let fit = automat_fit(&out_h, &hist(DegreeKind::In), 16, p.edges)?;
    let target = p.shape.a + p.shape.b;
    outcome(
        chi.p_value > 0.01 && (fit.p - target).abs() <= 0.02,
        format!(
            "out-degree chi-square p {:.4} (> 0.01, {} dof), automat p {:.4} (a+b = {target:.2} ± 0.02)",
            chi.p_value, chi.dof, fit.p
        ),
    )
}

// ---------------------------------------------------------------- AC10

fn ac10() -> Result<Outcome> {
    let mut slowest = Duration::ZERO;
    let mut rates = |bs: f64| -> Result<(f64, f64)> {
        let (mut tpr, mut fpr) = (0.0, 0.0);
        for seed in 1..=5 {
            let start = Instant::now();
            let r = sweep_cell(0.003, bs, 13, seed)?;
            slowest = slowest.max(start.elapsed());
            tpr += r.tpr / 5.0;
            fpr += r.fpr / 5.0;
        }
        Ok((tpr, fpr))
    };
    let (tpr, fpr) = rates(0.1)?;
    let (tpr_low, _) = rates(0.01)?;
    let (tpr_high, _) = rates(1.0)?;
    outcome(
        tpr >= 0.95 && fpr <= 0.08 && tpr_high < tpr_low && slowest < Duration::from_secs(600),
        format!(
            "bs-rate 0.1: mean TPR {tpr:.3} (>= 0.95), mean FPR {fpr:.3} (<= 0.08); TPR at bs-rate 1.0 {tpr_high:.3} vs 0.01 {tpr_low:.3}; slowest cell {:.1}s",
            slowest.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- AC11

fn ac11() -> Result<Outcome> {
    let f = |d: f64| -> Result<Vec<f64>> {
        (1..=3).map(|seed| Ok(connectivity_fraction(&SpamGraphSpec::new(10, d, 0.1, seed), 1000, seed)?)).collect()
    };
    let (at5, at10) = (f(0.05)?, f(0.10)?);
    let show = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join("/");
    outcome(
        at5.iter().all(|&x| x > 0.9) && at10.iter().all(|&x| x > 0.99),
        format!("density 0.05: {} (> 0.9), density 0.10: {} (> 0.99), seeds 1-3", show(&at5), show(&at10)),
    )
}

// ---------------------------------------------------------------- AC12

fn cli(args: &[&str], cwd: &Path) -> Result<String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tweetstat"))
        .args(args)
        .current_dir(cwd)
        .env_remove(tweetstat::OUT_DIR_ENV)
        .output()?;
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    ensure!(out.status.success(), "{args:?} failed: {err}");
    err.lines()
        .find_map(|l| l.strip_prefix("seed: "))
        .map(|s| s.trim().to_string())
        .ok_or_else(|| anyhow!("{args:?} printed no seed"))
}

fn outputs(dir: &Path) -> Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    for e in fs::read_dir(dir)? {
        let p = e?.path();
        let text = fs::read_to_string(&p)?;
        let kept: String = text.lines().filter(|l| !l.starts_with("# generated-unix-time:")).map(|l| format!("{l}\n")).collect();
        files.push((p.file_name().unwrap().to_string_lossy().into_owned(), kept.into_bytes()));
    }
    files.sort();
    Ok(files)
}

fn ac12() -> Result<Outcome> {
    let tmp = tempfile::tempdir()?;
    let d = tmp.path();
    let records = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/records_100.tsv");
    let records = records.to_str().unwrap();
    cli(&["synth", "spam", "--n", "9", "--benign-density", "0.02", "--bs-rate", "0.1", "--seed", "3", "--out-dir", "in"], d)?;
    cli(&["urnsim", "run", "--T", "20000", "--c", "0.01", "--seed", "3", "--out-dir", "in"], d)?;
    cli(&["ingest", "intervals", "--bounds", "1:100", records, "--out-dir", "in"], d)?;
    let runs: Vec<Vec<&str>> = vec![
        vec!["ingest", "histogram", "--kind", "retweeted", records],
        vec!["ingest", "graph", records],
        vec!["ingest", "intervals", "--bounds", "1:3,4:100", records],
        vec!["debias", "thin", "--p", "0.3", "in/urn.csv"],
        vec!["debias", "em", "--p", "0.3", "--max-iter", "200", "in/urn.csv"],
        vec!["distfit", "fit", "--family", "dw2", "--resamples", "20", "in/urn.csv"],
        vec!["distfit", "bin", "--mode", "eqcount", "in/urn.csv"],
        vec!["distfit", "hazard", "in/urn.csv"],
        vec!["distfit", "collapse", "--min-intervals", "5", "in/intervals.csv"],
        vec!["urnsim", "run", "--T", "20000", "--c", "0.01"],
        vec!["urnsim", "sweep", "--T", "3000,30000", "--c", "0.01"],
        vec!["net", "degrees", "in/spam_graph.tsv"],
        vec!["net", "paths", "in/spam_graph.tsv", "--sources", "100"],
        vec!["net", "cluster", "in/spam_graph.tsv", "--sampled-alpha", "0.5"],
        vec!["synth", "rmat", "--n", "10", "--edges", "8000"],
        vec!["synth", "spam", "--n", "9", "--benign-density", "0.02", "--bs-rate", "0.1"],
        vec!["spam", "features", "--graph", "in/spam_graph.tsv", "--labels", "in/spam_labels.tsv"],
        vec!["spam", "sweep", "--densities", "0.01,0.03", "--bs-rates", "0.1,1", "--n", "9", "--replicates", "2"],
        vec!["spam", "connectivity", "--densities", "0.01,0.05", "--n", "9", "--pairs", "300"],
    ];
    let mut differing = Vec::new();
    let mut files = 0;
    for (i, args) in runs.iter().enumerate() {
        let (a, b) = (format!("r{i}a"), format!("r{i}b"));
        let seed = cli(&[&args[..], &["--out-dir", &a]].concat(), d)?;
        cli(&[&args[..], &["--out-dir", &b, "--seed", &seed, "--threads", "1"]].concat(), d)?;
        let (fa, fb) = (outputs(&d.join(&a))?, outputs(&d.join(&b))?);
        ensure!(!fa.is_empty(), "{args:?} wrote nothing");
        files += fa.len();
        if fa != fb {
            differing.push(format!("{} {}", args[0], args[1]));
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} invocations, {files} output files compared; differing: {}", runs.len(), if differing.is_empty() { "none".into() } else { differing.join(", ") }),
    )
}

// ----------------------------------------------------------------

type Criterion = (u32, &'static str, fn() -> Result<Outcome>);

const CRITERIA: [Criterion; 12] = [
    (1, "EM round trip", ac1),
    (2, "Weibull recovery", ac2),
    (3, "binning critique", ac3),
    (4, "lognormal cutoff preferred over DPLN", ac4),
    (5, "urn dynamics", ac5),
    (6, "interevent collapse", ac6),
    (7, "graph-metric oracles", ac7),
    (8, "sampling estimators", ac8),
    (9, "R-MAT fidelity", ac9),
    (10, "spam classification", ac10),
    (11, "connectivity curve", ac11),
    (12, "CLI determinism", ac12),
];

fn main() {
    let only: Option<Vec<u32>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut failed = 0;
    for (id, name, run) in CRITERIA {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e:#}")),
        };
        failed += usize::from(!pass);
        println!(
            "AC{id} {} {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {failed} failing");
    if strict && failed > 0 {
        std::process::exit(1);
    }
}
