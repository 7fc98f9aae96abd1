use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng as _;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use crate::error::{bail, Result};
use crate::rng::Rng;
use crate::special::{ln_hurwitz_zeta, ln_norm_sf, ln_upper_gamma, log_add_exp, norm_cdf, norm_sf};

/// The five parametric families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    PowerLaw,
    Weibull2,
    PowerLawLognormal,
    Dpln,
    PowerLawExp,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::PowerLaw, Family::Weibull2, Family::PowerLawLognormal, Family::Dpln, Family::PowerLawExp];

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            Family::PowerLaw => "pl",
            Family::Weibull2 => "dw2",
            Family::PowerLawLognormal => "plln",
            Family::Dpln => "dpln",
            Family::PowerLawExp => "plexp",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn is_discrete(self) -> bool {
        matches!(self, Family::PowerLaw | Family::Weibull2)
    }
}

/// Common interface of the families. Densities are masses for the discrete
/// ones.
pub trait Model {
    fn family(&self) -> Family;
    /// Smallest point of the support.
    fn lower_bound(&self) -> f64;
    /// Log density, `-∞` outside the support, no argument checks.
    fn ln_density_unchecked(&self, x: f64) -> f64;
    /// `P(X ≤ x)`.
    fn cdf(&self, x: f64) -> f64;
    fn sample_n(&self, rng: &mut Rng, n: usize) -> Vec<f64>;
    fn params(&self) -> Vec<(&'static str, f64)>;

    fn is_discrete(&self) -> bool {
        self.family().is_discrete()
    }

    /// Number of free continuous parameters.
    fn n_params(&self) -> usize {
        self.params().iter().filter(|(name, _)| *name != "x_min").count()
    }

    fn in_support(&self, x: f64) -> bool {
        x.is_finite() && x >= self.lower_bound() && (!self.is_discrete() || x.fract() == 0.0)
    }

    fn log_density(&self, x: f64) -> Result<f64> {
        if !self.in_support(x) {
            bail!(Domain, "{x} is outside the support of {}", self.family().name());
        }
        Ok(self.ln_density_unchecked(x))
    }

    fn density(&self, x: f64) -> Result<f64> {
        self.log_density(x).map(f64::exp)
    }
}

fn uniform_open(rng: &mut Rng) -> f64 {
    // (0, 1]
    1.0 - rng.random::<f64>()
}

/// `x^{-α} / ζ(α, x_min)` for integers `x ≥ x_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretePowerLaw {
    pub alpha: f64,
    pub x_min: u64,
    ln_zeta: f64,
}

impl DiscretePowerLaw {
    pub fn new(alpha: f64, x_min: u64) -> Result<Self> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            bail!(InvalidParameter, "power-law exponent must exceed 1, got {alpha}");
        }
        if x_min < 1 {
            bail!(InvalidParameter, "power-law x_min must be at least 1");
        }
        Ok(Self { alpha, x_min, ln_zeta: ln_hurwitz_zeta(alpha, x_min as f64) })
    }

    pub fn ln_pmf(&self, x: u64) -> f64 {
        if x < self.x_min {
            return f64::NEG_INFINITY;
        }
        -self.alpha * (x as f64).ln() - self.ln_zeta
    }

    /// `ln P(X ≥ x)`.
    pub fn ln_sf(&self, x: f64) -> f64 {
        if x <= self.x_min as f64 {
            return 0.0;
        }
        ln_hurwitz_zeta(self.alpha, x) - self.ln_zeta
    }

    fn draw(&self, rng: &mut Rng) -> f64 {
        const CAP: f64 = 1e15;
        let ln_u = uniform_open(rng).ln();
        // Largest x with P(X ≥ x) ≥ u.
        let ok = |x: f64| self.ln_sf(x) >= ln_u;
        let x_min = self.x_min as f64;
        let guess = ((x_min - 0.5) * (-ln_u / (self.alpha - 1.0)).exp() + 0.5).floor();
        let mut lo = guess.max(x_min).min(CAP);
        let mut step = 1.0;
        let mut hi;
        if ok(lo) {
            hi = lo + step;
            while ok(hi) && hi < CAP {
                lo = hi;
                step *= 2.0;
                hi = (lo + step).min(CAP);
            }
            if ok(hi) {
                return hi;
            }
        } else {
            hi = lo;
            loop {
                lo = (hi - step).max(x_min);
                if ok(lo) {
                    break;
                }
                hi = lo;
                step *= 2.0;
            }
        }
        // ok(lo), !ok(hi)
        while hi - lo > 1.0 {
            let mid = ((lo + hi) / 2.0).floor();
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

impl Model for DiscretePowerLaw {
    fn family(&self) -> Family {
        Family::PowerLaw
    }
    fn lower_bound(&self) -> f64 {
        self.x_min as f64
    }
    fn ln_density_unchecked(&self, x: f64) -> f64 {
        self.ln_pmf(x as u64)
    }
    fn cdf(&self, x: f64) -> f64 {
        if x < self.x_min as f64 {
            return 0.0;
        }
        -self.ln_sf(x.floor() + 1.0).exp_m1()
    }
    fn sample_n(&self, rng: &mut Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha), ("x_min", self.x_min as f64)]
    }
}

/// Type-II discrete Weibull: hazard `h(x) = c·x^{β-1}` on `x ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteWeibull2 {
    pub beta: f64,
    pub c: f64,
}

const SERIES_START: u64 = 1000;

/// `Σ_{n=a}^{b-1} n^{-s}` by Euler–Maclaurin, for `a ≥ SERIES_START`.
fn power_sum(s: f64, a: f64, b: f64) -> f64 {
    let t = 1.0 - s;
    let integral = if t.abs() < 1e-12 {
        (b / a).ln()
    } else {
        a.powf(t) * (t * (b / a).ln()).exp_m1() / t
    };
    let f = |x: f64| x.powf(-s);
    let d1 = |x: f64| -s * x.powf(-s - 1.0);
    let d3 = |x: f64| -s * (s + 1.0) * (s + 2.0) * x.powf(-s - 3.0);
    integral + (f(a) - f(b)) / 2.0 + (d1(b) - d1(a)) / 12.0 - (d3(b) - d3(a)) / 720.0
}

impl DiscreteWeibull2 {
    pub fn new(beta: f64, c: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&beta) {
            bail!(InvalidParameter, "Weibull shape must lie in [0, 1), got {beta}");
        }
        if !(c > 0.0 && c <= 1.0) {
            bail!(InvalidParameter, "Weibull hazard scale must lie in (0, 1], got {c}");
        }
        Ok(Self { beta, c })
    }

    pub fn hazard(&self, x: u64) -> f64 {
        self.c * (x as f64).powf(self.beta - 1.0)
    }

    /// `Σ_{n=a}^{b-1} ln(1 - h(n))`.
    pub fn ln_survival_between(&self, a: u64, b: u64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let s = 1.0 - self.beta;
        let start = a.max(SERIES_START);
        let u_start = self.c * (start as f64).powf(-s);
        let direct_end = if b - a <= 64 || u_start > 0.05 { b } else { start.min(b) };
        let mut total = 0.0;
        for n in a..direct_end {
            total += (-self.hazard(n)).ln_1p();
        }
        if direct_end < b {
            // ln(1-u) = -Σ u^k / k
            let (a, b) = (direct_end as f64, b as f64);
            let mut ck = 1.0;
            for k in 1..=60 {
                ck *= self.c;
                let term = ck / k as f64 * power_sum(k as f64 * s, a, b);
                total -= term;
                if term.abs() < 1e-17 * total.abs().max(1e-300) {
                    break;
                }
            }
        }
        total
    }

    /// `ln P(X > x)`.
    pub fn ln_sf(&self, x: u64) -> f64 {
        self.ln_survival_between(1, x + 1)
    }

    pub fn ln_pmf(&self, x: u64) -> f64 {
        if x < 1 {
            return f64::NEG_INFINITY;
        }
        self.hazard(x).ln() + self.ln_survival_between(1, x)
    }
}

impl Model for DiscreteWeibull2 {
    fn family(&self) -> Family {
        Family::Weibull2
    }
    fn lower_bound(&self) -> f64 {
        1.0
    }
    fn ln_density_unchecked(&self, x: f64) -> f64 {
        self.ln_pmf(x as u64)
    }
    fn cdf(&self, x: f64) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        -self.ln_sf(x.floor().min(u64::MAX as f64) as u64).exp_m1()
    }
    fn sample_n(&self, rng: &mut Rng, n: usize) -> Vec<f64> {
        const TABLE: usize = 1 << 20;
        // table[x] = ln P(X > x)
        let mut table = Vec::with_capacity(1024);
        table.push(0.0);
        let mut acc = 0.0;
        for x in 1..=TABLE as u64 {
            acc += (-self.hazard(x)).ln_1p();
            table.push(acc);
            if acc < -745.0 {
                break;
            }
        }
        let last = (table.len() - 1) as u64;
        let ln_last = table[last as usize];
        (0..n)
            .map(|_| {
                let ln_u = uniform_open(rng).ln();
                // smallest x with ln P(X > x) < ln u
                let k = table.partition_point(|&v| v >= ln_u);
                if k < table.len() {
                    return k as f64;
                }
                let below = |x: u64| ln_last + self.ln_survival_between(last + 1, x + 1) < ln_u;
                let (mut lo, mut hi) = (last, last + 1);
                let mut step = 1;
                while !below(hi) {
                    lo = hi;
                    step *= 2;
                    hi = hi.saturating_add(step);
                }
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if below(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi as f64
            })
            .collect()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("beta", self.beta), ("c", self.c)]
    }
}

/// `C x^{-β} Φᶜ((ln x − μ)/σ)` on `[x_min, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawLognormalCutoff {
    pub beta: f64,
    pub mu: f64,
    pub sigma: f64,
    pub x_min: f64,
    ln_norm: f64,
}

impl PowerLawLognormalCutoff {
    pub fn new(beta: f64, mu: f64, sigma: f64, x_min: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            bail!(InvalidParameter, "cutoff width must be positive, got {sigma}");
        }
        if !(x_min > 0.0 && x_min.is_finite()) {
            bail!(InvalidParameter, "x_min must be positive, got {x_min}");
        }
        if !(beta.is_finite() && mu.is_finite()) {
            bail!(InvalidParameter, "non-finite parameter");
        }
        let mut m = Self { beta, mu, sigma, x_min, ln_norm: 0.0 };
        m.ln_norm = m.ln_tail_integral(x_min.ln());
        if !m.ln_norm.is_finite() {
            bail!(InvalidParameter, "density is not normalisable for beta={beta}, mu={mu}, sigma={sigma}");
        }
        Ok(m)
    }

    /// `ln ∫_y^∞ e^{k t} Φᶜ((t − μ)/σ) dt` with `k = 1 − β`.
    fn ln_tail_integral(&self, y: f64) -> f64 {
        let (k, mu, s) = (1.0 - self.beta, self.mu, self.sigma);
        let z0 = (y - mu) / s;
        if k.abs() < 1e-7 {
            // limit: σ[φ(z0) − z0 Φᶜ(z0)]
            let ln_phi = -0.5 * z0 * z0 - 0.5 * (2.0 * PI).ln();
            let mills = (ln_norm_sf(z0) - ln_phi).exp();
            return s.ln() + ln_phi + (1.0 - z0 * mills).ln() + k * y;
        }
        let ln_a = k * mu + 0.5 * k * k * s * s + ln_norm_sf(z0 - k * s);
        let ln_b = k * y + ln_norm_sf(z0);
        if k > 0.0 {
            ln_a + (-(ln_b - ln_a).exp()).ln_1p() - k.ln()
        } else {
            ln_b + (-(ln_a - ln_b).exp()).ln_1p() - (-k).ln()
        }
    }

    /// Samples in `y = ln x`: a truncated exponential envelope below `μ` and
    /// a shifted normal envelope above it.
    fn draw_ln(&self, rng: &mut Rng) -> f64 {
        let (k, mu, s) = (1.0 - self.beta, self.mu, self.sigma);
        let y0 = self.x_min.ln();
        let split = mu.max(y0);
        // envelope masses, in logs
        let ln_m1 = if y0 < mu { ln_exp_integral(k, y0, mu) } else { f64::NEG_INFINITY };
        let shift = mu + k * s * s;
        let ln_m2 = (0.5f64).ln() + k * mu + 0.5 * k * k * s * s + s.ln() + 0.5 * (2.0 * PI).ln()
            + ln_norm_sf((split - shift) / s);
        let p1 = 1.0 / (1.0 + (ln_m2 - ln_m1).exp());
        loop {
            if rng.random::<f64>() < p1 {
                let y = sample_truncated_exp(rng, k, y0, mu);
                let z = (y - mu) / s;
                if rng.random::<f64>() < norm_sf(z) {
                    return y;
                }
            } else {
                let y = sample_normal_above(rng, shift, s, split);
                let z = (y - mu) / s;
                // target / envelope = Φᶜ(z) / (½ e^{-z²/2}) ≤ 1 for z ≥ 0
                let ratio = (ln_norm_sf(z) + 0.5 * z * z - (0.5f64).ln()).exp();
                if rng.random::<f64>() < ratio {
                    return y;
                }
            }
        }
    }
}

/// `ln ∫_a^b e^{k t} dt`.
fn ln_exp_integral(k: f64, a: f64, b: f64) -> f64 {
    if k.abs() < 1e-12 {
        return (b - a).ln();
    }
    if k > 0.0 {
        k * b + (-(-(k * (b - a))).exp_m1()).ln() - k.ln()
    } else {
        k * a + (-(k * (b - a)).exp_m1()).ln() - (-k).ln()
    }
}

/// Density `∝ e^{k t}` on `[a, b]`.
fn sample_truncated_exp(rng: &mut Rng, k: f64, a: f64, b: f64) -> f64 {
    let u = rng.random::<f64>();
    if k.abs() < 1e-12 {
        return a + u * (b - a);
    }
    // invert (e^{k(t-a)} - 1) / (e^{k(b-a)} - 1) = u
    let t = a + (u * (k * (b - a)).exp_m1()).ln_1p() / k;
    t.max(a).min(b)
}

/// Normal(`m`, `s`) conditioned on `≥ a`.
fn sample_normal_above(rng: &mut Rng, m: f64, s: f64, a: f64) -> f64 {
    let alpha = (a - m) / s;
    if alpha < 1.0 {
        loop {
            let z: f64 = rng.sample(StandardNormal);
            if z >= alpha {
                return m + s * z;
            }
        }
    }
    // Robert's exponential proposal
    let lambda = 0.5 * (alpha + (alpha * alpha + 4.0).sqrt());
    loop {
        let e: f64 = rng.sample(Exp1);
        let z = alpha + e / lambda;
        if rng.random::<f64>() <= (-0.5 * (z - lambda) * (z - lambda)).exp() {
            return m + s * z;
        }
    }
}

impl Model for PowerLawLognormalCutoff {
    fn family(&self) -> Family {
        Family::PowerLawLognormal
    }
    fn lower_bound(&self) -> f64 {
        self.x_min
    }
    fn ln_density_unchecked(&self, x: f64) -> f64 {
        if x < self.x_min {
            return f64::NEG_INFINITY;
        }
        let lx = x.ln();
        -self.beta * lx + ln_norm_sf((lx - self.mu) / self.sigma) - self.ln_norm
    }
    fn cdf(&self, x: f64) -> f64 {
        if x <= self.x_min {
            return 0.0;
        }
        -(self.ln_tail_integral(x.ln()) - self.ln_norm).min(0.0).exp_m1()
    }
    fn sample_n(&self, rng: &mut Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw_ln(rng).exp()).collect()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("beta", self.beta), ("mu", self.mu), ("sigma", self.sigma), ("x_min", self.x_min)]
    }
}

/// Double Pareto-lognormal; optionally truncated to `[x_min, ∞)`
/// (`x_min = 0` for the full support).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dpln {
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub tau: f64,
    pub x_min: f64,
    ln_mass: f64,
}

impl Dpln {
    pub fn new(alpha: f64, beta: f64, nu: f64, tau: f64) -> Result<Self> {
        Self::truncated(alpha, beta, nu, tau, 0.0)
    }

    pub fn truncated(alpha: f64, beta: f64, nu: f64, tau: f64, x_min: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("tau", tau)] {
            if !(v > 0.0 && v.is_finite()) {
                bail!(InvalidParameter, "DPLN {name} must be positive, got {v}");
            }
        }
        if !nu.is_finite() || !(x_min >= 0.0 && x_min.is_finite()) {
            bail!(InvalidParameter, "DPLN location and x_min must be finite");
        }
        let mut m = Self { alpha, beta, nu, tau, x_min, ln_mass: 0.0 };
        if x_min > 0.0 {
            m.ln_mass = m.ln_sf_full(x_min);
            if !m.ln_mass.is_finite() {
                bail!(InvalidParameter, "DPLN puts no mass above {x_min}");
            }
        }
        Ok(m)
    }

    /// `A(θ, ν, τ) = exp(θν + θ²τ²/2)`.
    pub fn ln_a(theta: f64, nu: f64, tau: f64) -> f64 {
        theta * nu + 0.5 * theta * theta * tau * tau
    }

    /// The two Mills-ratio terms `ln[φ(z) R(w)]` for `w = ατ − z` and
    /// `w = βτ + z`.
    fn mills_terms(&self, y: f64) -> (f64, f64, f64) {
        let z = (y - self.nu) / self.tau;
        let w1 = self.alpha * self.tau - z;
        let w2 = self.beta * self.tau + z;
        let t1 = 0.5 * (w1 * w1 - z * z) + ln_norm_sf(w1);
        let t2 = 0.5 * (w2 * w2 - z * z) + ln_norm_sf(w2);
        (z, t1, t2)
    }

    fn ln_pdf_full(&self, x: f64) -> f64 {
        let y = x.ln();
        let (_, t1, t2) = self.mills_terms(y);
        (self.alpha * self.beta / (self.alpha + self.beta)).ln() + log_add_exp(t1, t2) - y
    }

    /// `ln P(X > x)` of the untruncated law.
    fn ln_sf_full(&self, x: f64) -> f64 {
        let (z, t1, t2) = self.mills_terms(x.ln());
        let ab = self.alpha + self.beta;
        let sf = norm_sf(z) + (self.beta * t1.exp() - self.alpha * t2.exp()) / ab;
        sf.max(0.0).min(1.0).ln()
    }

    /// Right-tail component `f₁ = α x^{-α-1} A(α,ν,τ) Φ((ln x − ν − ατ²)/τ)`.
    pub fn f1(&self, x: f64) -> f64 {
        let (a, n, t) = (self.alpha, self.nu, self.tau);
        a * (-(a + 1.0) * x.ln() + Self::ln_a(a, n, t)).exp() * norm_cdf((x.ln() - n - a * t * t) / t)
    }

    /// Left-tail component `f₂ = β x^{β-1} A(−β,ν,τ) Φᶜ((ln x − ν + βτ²)/τ)`.
    pub fn f2(&self, x: f64) -> f64 {
        let (b, n, t) = (self.beta, self.nu, self.tau);
        b * ((b - 1.0) * x.ln() + Self::ln_a(-b, n, t)).exp() * norm_sf((x.ln() - n + b * t * t) / t)
    }
}

impl Model for Dpln {
    fn family(&self) -> Family {
        Family::Dpln
    }
    fn lower_bound(&self) -> f64 {
        self.x_min
    }
    fn in_support(&self, x: f64) -> bool {
        x.is_finite() && x > 0.0 && x >= self.x_min
    }
    fn ln_density_unchecked(&self, x: f64) -> f64 {
        if !(x > 0.0) || x < self.x_min {
            return f64::NEG_INFINITY;
        }
        self.ln_pdf_full(x) - self.ln_mass
    }
    fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) || x <= self.x_min {
            return 0.0;
        }
        -(self.ln_sf_full(x) - self.ln_mass).min(0.0).exp_m1()
    }
    fn sample_n(&self, rng: &mut Rng, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let zn: f64 = rng.sample(StandardNormal);
            let e1: f64 = rng.sample(Exp1);
            let e2: f64 = rng.sample(Exp1);
            let x = (self.nu + self.tau * zn + e1 / self.alpha - e2 / self.beta).exp();
            if x >= self.x_min {
                out.push(x);
            }
        }
        out
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        let mut p = vec![("alpha", self.alpha), ("beta", self.beta), ("nu", self.nu), ("tau", self.tau)];
        if self.x_min > 0.0 {
            p.push(("x_min", self.x_min));
        }
        p
    }
}

/// `x^{-α} e^{-x/τ} / (τ^{1-α} Γ(1−α, x_min/τ))` on `[x_min, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawExpCutoff {
    pub alpha: f64,
    pub tau: f64,
    pub x_min: f64,
    ln_norm: f64,
}

impl PowerLawExpCutoff {
    pub fn new(alpha: f64, tau: f64, x_min: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            bail!(InvalidParameter, "cutoff must be positive, got {tau}");
        }
        if !(x_min > 0.0 && x_min.is_finite()) || !alpha.is_finite() {
            bail!(InvalidParameter, "x_min must be positive and alpha finite");
        }
        let ln_norm = (1.0 - alpha) * tau.ln() + ln_upper_gamma(1.0 - alpha, x_min / tau);
        if !ln_norm.is_finite() {
            bail!(InvalidParameter, "density is not normalisable for alpha={alpha}, tau={tau}");
        }
        Ok(Self { alpha, tau, x_min, ln_norm })
    }

    fn draw(&self, rng: &mut Rng) -> f64 {
        let (a, t, m) = (self.alpha, self.tau, self.x_min);
        let gamma_accept = if a < 1.0 { (ln_upper_gamma(1.0 - a, m / t) - crate::special::ln_gamma(1.0 - a)).exp() } else { 0.0 };
        if a < 1.0 && (gamma_accept >= 0.25 || a < 0.0) {
            let g = Gamma::new(1.0 - a, t).expect("valid gamma");
            loop {
                let x: f64 = g.sample(rng);
                if x >= m {
                    return x;
                }
            }
        }
        if a > 1.0 + 1e-3 && t > m {
            loop {
                let x = m * uniform_open(rng).powf(-1.0 / (a - 1.0));
                if rng.random::<f64>() < (-(x - m) / t).exp() {
                    return x;
                }
            }
        }
        loop {
            let e: f64 = rng.sample(Exp1);
            let x = m + t * e;
            if rng.random::<f64>() < (x / m).powf(-a) {
                return x;
            }
        }
    }
}

impl Model for PowerLawExpCutoff {
    fn family(&self) -> Family {
        Family::PowerLawExp
    }
    fn lower_bound(&self) -> f64 {
        self.x_min
    }
    fn ln_density_unchecked(&self, x: f64) -> f64 {
        if x < self.x_min {
            return f64::NEG_INFINITY;
        }
        -self.alpha * x.ln() - x / self.tau - self.ln_norm
    }
    fn cdf(&self, x: f64) -> f64 {
        if x <= self.x_min {
            return 0.0;
        }
        let ln_sf = (1.0 - self.alpha) * self.tau.ln() + ln_upper_gamma(1.0 - self.alpha, x / self.tau) - self.ln_norm;
        -ln_sf.min(0.0).exp_m1()
    }
    fn sample_n(&self, rng: &mut Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha), ("tau", self.tau), ("x_min", self.x_min)]
    }
}

/// Any of the five families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionModel {
    PowerLaw(DiscretePowerLaw),
    Weibull2(DiscreteWeibull2),
    PowerLawLognormal(PowerLawLognormalCutoff),
    Dpln(Dpln),
    PowerLawExp(PowerLawExpCutoff),
}

macro_rules! dispatch {
    ($self:ident, $m:ident => $e:expr) => {
        match $self {
            DistributionModel::PowerLaw($m) => $e,
            DistributionModel::Weibull2($m) => $e,
            DistributionModel::PowerLawLognormal($m) => $e,
            DistributionModel::Dpln($m) => $e,
            DistributionModel::PowerLawExp($m) => $e,
        }
    };
}

impl Model for DistributionModel {
    fn family(&self) -> Family {
        dispatch!(self, m => m.family())
    }
    fn lower_bound(&self) -> f64 {
        dispatch!(self, m => m.lower_bound())
    }
    fn in_support(&self, x: f64) -> bool {
        dispatch!(self, m => m.in_support(x))
    }
    fn ln_density_unchecked(&self, x: f64) -> f64 {
        dispatch!(self, m => m.ln_density_unchecked(x))
    }
    fn cdf(&self, x: f64) -> f64 {
        dispatch!(self, m => m.cdf(x))
    }
    fn sample_n(&self, rng: &mut Rng, n: usize) -> Vec<f64> {
        dispatch!(self, m => m.sample_n(rng, n))
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        dispatch!(self, m => m.params())
    }
}

macro_rules! from_model {
    ($($t:ident => $v:ident),*) => {$(
        impl From<$t> for DistributionModel {
            fn from(m: $t) -> Self {
                DistributionModel::$v(m)
            }
        }
    )*};
}
from_model!(
    DiscretePowerLaw => PowerLaw,
    DiscreteWeibull2 => Weibull2,
    PowerLawLognormalCutoff => PowerLawLognormal,
    Dpln => Dpln,
    PowerLawExpCutoff => PowerLawExp
);

/// CDF of the model after spreading each integer atom uniformly over
/// `[x, x + 1)`; the plain CDF for continuous models.
pub fn continuized_cdf<M: Model + ?Sized>(model: &M, t: f64) -> f64 {
    if !model.is_discrete() {
        return model.cdf(t);
    }
    let x = t.floor();
    let below = model.cdf(x - 1.0);
    below + (t - x) * (model.cdf(x) - below)
}
