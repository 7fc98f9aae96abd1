//! Small numerical building blocks: compensated summation, bounded
//! derivative-free minimisation, golden-section search, and weighted
//! least-squares lines.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods shadow it whenever std is linked
use num_traits::Float;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl core::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Axis-aligned box constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        Self { lower, upper }
    }

    fn clamp(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.max(*lo).min(*hi);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evaluations: usize,
    /// Stop once the spread of simplex values falls below this.
    pub f_tol: f64,
    /// ... and the simplex diameter falls below this (relative to the box).
    pub x_tol: f64,
    /// Number of times the search is restarted from the best point.
    pub restarts: usize,
    /// Initial step as a fraction of each box side.
    pub step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_evaluations: 2000, f_tol: 1e-9, x_tol: 1e-7, restarts: 3, step: 0.1 }
    }
}

/// Bounded Nelder–Mead. Trial points are projected onto the box; non-finite
/// objective values are treated as `+∞`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], bounds: &Bounds, opts: NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut eval = |x: &[f64], count: &mut usize| {
        *count += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let dim = x0.len();
    let mut best = x0.to_vec();
    bounds.clamp(&mut best);
    let mut evaluations = 0;
    let mut best_value = eval(&best, &mut evaluations);
    let mut converged = false;

    for _ in 0..=opts.restarts {
        let mut simplex: Vec<Vec<f64>> = vec![best.clone()];
        for i in 0..dim {
            let mut p = best.clone();
            let span = bounds.upper[i] - bounds.lower[i];
            let step = opts.step * if span.is_finite() { span } else { 1.0 + p[i].abs() };
            p[i] += step;
            if p[i] > bounds.upper[i] {
                p[i] = best[i] - step;
            }
            bounds.clamp(&mut p);
            simplex.push(p);
        }
        let mut values: Vec<f64> = simplex.iter().map(|p| eval(p, &mut evaluations)).collect();

        converged = false;
        while evaluations < opts.max_evaluations {
            let mut order: Vec<usize> = (0..=dim).collect();
            order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(core::cmp::Ordering::Equal));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let spread = values[dim] - values[0];
            let diameter = simplex[1..]
                .iter()
                .flat_map(|p| {
                    p.iter().zip(&simplex[0]).enumerate().map(|(i, (a, b))| {
                        let span = bounds.upper[i] - bounds.lower[i];
                        let scale = if span.is_finite() { span } else { 1.0 + b.abs() };
                        (a - b).abs() / scale
                    })
                })
                .fold(0.0, f64::max);
            if spread.abs() <= opts.f_tol * (1.0 + values[0].abs()) && diameter <= opts.x_tol {
                converged = true;
                break;
            }

            let mut centroid = vec![0.0; dim];
            for p in &simplex[..dim] {
                for (c, v) in centroid.iter_mut().zip(p) {
                    *c += v / dim as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                let mut p: Vec<f64> =
                    centroid.iter().zip(&simplex[dim]).map(|(c, w)| c + t * (c - w)).collect();
                bounds.clamp(&mut p);
                p
            };
            let reflected = along(1.0);
            let fr = eval(&reflected, &mut evaluations);
            if fr < values[0] {
                let expanded = along(2.0);
                let fe = eval(&expanded, &mut evaluations);
                if fe < fr {
                    simplex[dim] = expanded;
                    values[dim] = fe;
                } else {
                    simplex[dim] = reflected;
                    values[dim] = fr;
                }
            } else if fr < values[dim - 1] {
                simplex[dim] = reflected;
                values[dim] = fr;
            } else {
                let (contracted, fc) = if fr < values[dim] {
                    let c = along(0.5);
                    let v = eval(&c, &mut evaluations);
                    (c, v)
                } else {
                    let c = along(-0.5);
                    let v = eval(&c, &mut evaluations);
                    (c, v)
                };
                if fc < values[dim].min(fr) {
                    simplex[dim] = contracted;
                    values[dim] = fc;
                } else {
                    for i in 1..=dim {
                        let mut p: Vec<f64> =
                            simplex[0].iter().zip(&simplex[i]).map(|(b, x)| b + 0.5 * (x - b)).collect();
                        bounds.clamp(&mut p);
                        values[i] = eval(&p, &mut evaluations);
                        simplex[i] = p;
                    }
                }
            }
        }
        let (i_best, v_best) = values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        let improved = v_best < best_value - opts.f_tol * (1.0 + best_value.abs());
        if v_best <= best_value {
            best = simplex[i_best].clone();
            best_value = v_best;
        }
        if !improved && converged {
            break;
        }
        if evaluations >= opts.max_evaluations {
            break;
        }
    }
    Minimum { x: best, value: best_value, evaluations, converged }
}

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Minimum {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evaluations = 2;
    let mut converged = false;
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            converged = true;
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evaluations += 1;
    }
    let (x, value) = if fc < fd { (c, fc) } else { (d, fd) };
    Minimum { x: vec![x], value, evaluations, converged }
}

/// Fitted line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

/// Weighted least squares; `None` when fewer than two distinct abscissae
/// carry weight.
pub fn weighted_line(points: &[(f64, f64)], weights: &[f64]) -> Option<Line> {
    assert_eq!(points.len(), weights.len());
    let sw: f64 = weights.iter().sum();
    if sw <= 0.0 {
        return None;
    }
    let mx = points.iter().zip(weights).map(|(p, w)| w * p.0).sum::<f64>() / sw;
    let my = points.iter().zip(weights).map(|(p, w)| w * p.1).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for ((x, y), w) in points.iter().zip(weights) {
        sxx += w * (x - mx) * (x - mx);
        sxy += w * (x - mx) * (y - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(Line { slope, intercept: my - slope * mx })
}

/// Ordinary least squares.
pub fn line(points: &[(f64, f64)]) -> Option<Line> {
    weighted_line(points, &vec![1.0; points.len()])
}

/// Population Pearson correlation with compensated one-pass moments;
/// `None` when either variance is zero.
pub fn pearson<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Option<f64> {
    let (mut n, mut sx, mut sy) = (0usize, CompensatedSum::new(), CompensatedSum::new());
    let (mut sxx, mut syy, mut sxy) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    for (x, y) in pairs {
        n += 1;
        sx.add(x);
        sy.add(y);
        sxx.add(x * x);
        syy.add(y * y);
        sxy.add(x * y);
    }
    if n == 0 {
        return None;
    }
    let nf = n as f64;
    let (mx, my) = (sx.value() / nf, sy.value() / nf);
    let vx = sxx.value() / nf - mx * mx;
    let vy = syy.value() / nf - my * my;
    let scale_x = (sxx.value() / nf).max(f64::MIN_POSITIVE);
    let scale_y = (syy.value() / nf).max(f64::MIN_POSITIVE);
    if vx <= 1e-12 * scale_x || vy <= 1e-12 * scale_y {
        return None;
    }
    let r = (sxy.value() / nf - mx * my) / (vx.sqrt() * vy.sqrt());
    Some(r.max(-1.0).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_rosenbrock_minimum() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let b = Bounds::new(vec![-2.0, -2.0], vec![2.0, 2.0]);
        let m = nelder_mead(rosen, &[-1.0, 1.5], &b, NelderMeadOptions { max_evaluations: 5000, ..Default::default() });
        assert!((m.x[0] - 1.0).abs() < 1e-3 && (m.x[1] - 1.0).abs() < 1e-3, "{:?}", m);
    }

    #[test]
    fn nelder_mead_respects_bounds() {
        let m = nelder_mead(|x| (x[0] - 5.0).powi(2), &[0.0], &Bounds::new(vec![-1.0], vec![1.0]), Default::default());
        assert!((m.x[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn golden_section_on_parabola() {
        let m = golden_section(|x| (x - 0.7).powi(2), 0.5, 1.0, 1e-9, 200);
        assert!((m.x[0] - 0.7).abs() < 1e-8);
    }

    #[test]
    fn pearson_matches_two_pass() {
        let pts: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, ((i * 7) % 11) as f64)).collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let cov = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / n;
        let sx = (pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>() / n).sqrt();
        let sy = (pts.iter().map(|p| (p.1 - my).powi(2)).sum::<f64>() / n).sqrt();
        assert!((pearson(pts.iter().copied()).unwrap() - cov / (sx * sy)).abs() < 1e-12);
        assert_eq!(pearson([(1.0, 2.0), (1.0, 3.0)]), None);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }
}
