use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{bail, Result};
use crate::special::norm_sf;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KendallTau {
    pub tau: f64,
    /// Two-sided p-value from the tie-corrected normal approximation.
    pub p_value: f64,
    /// Concordant minus discordant pairs.
    pub s: i64,
}

/// Sizes of runs of equal values in a sorted slice.
fn tie_runs<T: PartialEq>(sorted: &[T]) -> Vec<u64> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if j - i > 1 {
            runs.push((j - i) as u64);
        }
        i = j;
    }
    runs
}

fn pairs(t: u64) -> u64 {
    t * (t - 1) / 2
}

/// Merge sort counting the inversions it removes.
fn sort_counting_swaps(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (l, r) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        sort_counting_swaps(l, bl) + sort_counting_swaps(r, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Kendall's tau-b in `O(n log n)` (Knight's algorithm).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<KendallTau> {
    if x.len() != y.len() {
        bail!(InvalidParameter, "length mismatch: {} vs {}", x.len(), y.len());
    }
    if x.len() < 2 {
        bail!(InsufficientData, "need at least two pairs");
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        bail!(Domain, "NaN in rank correlation input");
    }
    let n = x.len() as u64;
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(y[a].total_cmp(&y[b])));
    let xs: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
    let xy: Vec<(f64, f64)> = idx.iter().map(|&i| (x[i], y[i])).collect();
    let x_ties = tie_runs(&xs);
    let joint: u64 = tie_runs(&xy).into_iter().map(pairs).sum();
    let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let mut buf = alloc::vec![0.0; ys.len()];
    let swaps = sort_counting_swaps(&mut ys, &mut buf);
    let y_ties = tie_runs(&ys);

    let n0 = pairs(n);
    let n1: u64 = x_ties.iter().map(|&t| pairs(t)).sum();
    let n2: u64 = y_ties.iter().map(|&t| pairs(t)).sum();
    let s = n0 as i64 - n1 as i64 - n2 as i64 + joint as i64 - 2 * swaps as i64;
    let denom = ((n0 - n1) as f64 * (n0 - n2) as f64).sqrt();
    if denom == 0.0 {
        bail!(Degenerate, "one of the variables is constant");
    }
    let tau = s as f64 / denom;

    let nf = n as f64;
    let v = |ts: &[u64], f: &dyn Fn(f64) -> f64| ts.iter().map(|&t| f(t as f64)).sum::<f64>();
    let v0 = nf * (nf - 1.0) * (2.0 * nf + 5.0);
    let vt = v(&x_ties, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let vu = v(&y_ties, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let t1 = v(&x_ties, &|t| t * (t - 1.0));
    let u1 = v(&y_ties, &|t| t * (t - 1.0));
    let t2 = v(&x_ties, &|t| t * (t - 1.0) * (t - 2.0));
    let u2 = v(&y_ties, &|t| t * (t - 1.0) * (t - 2.0));
    let mut var = (v0 - vt - vu) / 18.0 + t1 * u1 / (2.0 * nf * (nf - 1.0));
    if n > 2 {
        var += t2 * u2 / (9.0 * nf * (nf - 1.0) * (nf - 2.0));
    }
    let p_value = if var > 0.0 { (2.0 * norm_sf((s as f64).abs() / var.sqrt())).min(1.0) } else { 1.0 };
    Ok(KendallTau { tau, p_value, s })
}
