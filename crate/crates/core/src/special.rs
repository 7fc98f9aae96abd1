//! Special functions needed by the fitting and testing code: log-gamma,
//! binomial mass, normal tails, incomplete gamma, chi-square tails, and the
//! Hurwitz zeta function.

use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)] // inherent float methods shadow it whenever std is linked
use num_traits::Float;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln C(n, k)` for real arguments.
pub fn ln_choose(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// Log of the binomial mass `C(n,k) p^k (1-p)^(n-k)`.
pub fn ln_binom_pmf(k: u64, n: u64, p: f64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if p <= 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if p >= 1.0 {
        return if k == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let (kf, nf) = (k as f64, n as f64);
    ln_choose(nf, kf) + kf * p.ln() + (nf - kf) * (-p).ln_1p()
}

/// Standard normal density.
pub fn norm_pdf(z: f64) -> f64 {
    (-0.5 * z * z - LN_SQRT_2PI).exp()
}

/// Standard normal CDF.
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Standard normal survival function `1 - Φ(z)`.
pub fn norm_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

/// `ln(1 - Φ(z))`, accurate in both tails.
pub fn ln_norm_sf(z: f64) -> f64 {
    if z < 0.0 {
        (-norm_cdf(z)).ln_1p()
    } else if z < 30.0 {
        norm_sf(z).ln()
    } else {
        let r = 1.0 / (z * z);
        let series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
        -0.5 * z * z - LN_SQRT_2PI - z.ln() + series.ln()
    }
}

/// `ln Φ(z)`.
pub fn ln_norm_cdf(z: f64) -> f64 {
    ln_norm_sf(-z)
}

/// Inverse of the standard normal CDF (Acklam's rational approximation
/// polished with one Halley step).
pub fn norm_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    let plow = 0.02425;
    let x = if p < plow {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - plow {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (-p).ln_1p()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let e = norm_cdf(x) - p;
    let u = e * (2.0 * PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

const GAMMA_EPS: f64 = 1e-15;
const GAMMA_ITMAX: usize = 10_000;

/// Series for the lower regularized gamma `P(a, x)`; needs `x < a + 1`.
fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..GAMMA_ITMAX {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * GAMMA_EPS {
            break;
        }
    }
    (sum.ln() - x + a * x.ln() - ln_gamma(a)).exp()
}

/// `ln Γ(a, x)` (not regularized) by Lentz's continued fraction. Valid for
/// any real `a` once `x` is not small; converges fastest for `x > a + 1`.
fn ln_upper_gamma_cf(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_ITMAX {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < GAMMA_EPS {
            break;
        }
    }
    -x + a * x.ln() + h.ln()
}

/// Lower regularized incomplete gamma `P(a, x)`, `a > 0`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - (ln_upper_gamma_cf(a, x) - ln_gamma(a)).exp()
    }
}

/// Upper regularized incomplete gamma `Q(a, x)`, `a > 0`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        (ln_upper_gamma_cf(a, x) - ln_gamma(a)).exp()
    }
}

/// Exponential integral `E1(x)` for `x > 0`.
pub fn exp_int_e1(x: f64) -> f64 {
    if x > 1.0 {
        return ln_upper_gamma_cf(0.0, x).exp();
    }
    const EULER: f64 = 0.577_215_664_901_532_9;
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -x / kf;
        let add = term / kf;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER - x.ln() - sum
}

/// `ln Γ(a, x)` for real `a` (any sign) and `x > 0`.
pub fn ln_upper_gamma(a: f64, x: f64) -> f64 {
    if a > 0.0 {
        return if x < a + 1.0 {
            ln_gamma(a) + (1.0 - gamma_series(a, x)).ln()
        } else {
            ln_upper_gamma_cf(a, x)
        };
    }
    if x > 1.0 {
        return ln_upper_gamma_cf(a, x);
    }
    if a == 0.0 {
        return exp_int_e1(x).ln();
    }
    // Recurrence Γ(b-1, x) = (Γ(b, x) - x^(b-1) e^-x) / (b-1), started from
    // the first b = a + m that is non-negative.
    let m = (-a).ceil();
    let mut b = a + m;
    let mut value = if b == 0.0 {
        exp_int_e1(x)
    } else {
        (ln_gamma(b) + gamma_q(b, x).ln()).exp()
    };
    while b > a + 0.5 {
        b -= 1.0;
        value = (value - (b * x.ln() - x).exp()) / b;
    }
    value.ln()
}

/// Chi-square survival function with `dof` degrees of freedom.
pub fn chi2_sf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(0.5 * dof, 0.5 * x)
}

const BERNOULLI_2J: [f64; 9] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
];

/// `ln ζ(s, q)` for `s > 1`, `q > 0`, by direct summation up to `q + N ≥ 16`
/// followed by an Euler–Maclaurin tail.
pub fn ln_hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    let n_direct = if q >= 16.0 { 0 } else { (16.0 - q).ceil() as u32 };
    let w = q + f64::from(n_direct);
    let ln_w = w.ln();
    // Everything is scaled by w^s so that huge q and large s stay finite.
    let mut sum = 0.0;
    for k in 0..n_direct {
        sum += (-s * ((q + f64::from(k)).ln() - ln_w)).exp();
    }
    sum += w / (s - 1.0) + 0.5;
    let mut fac = s / w;
    let mut fact = 2.0;
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let term = b / fact * fac;
        sum += term;
        if term.abs() < 1e-17 * sum {
            break;
        }
        let j2 = 2.0 * (j as f64 + 1.0);
        fac *= (s + j2 - 1.0) * (s + j2) / (w * w);
        fact *= (j2 + 1.0) * (j2 + 2.0);
    }
    -s * ln_w + sum.ln()
}

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (q + k)^{-s}`.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    ln_hurwitz_zeta(s, q).exp()
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}
