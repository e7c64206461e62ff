//! Small statistical toolbox shared by the dominance tests and the test
//! suites: exact Poisson tails, normal tail probabilities, binomial
//! confidence intervals, and a Kolmogorov-Smirnov statistic.

use alloc::vec::Vec;

use crate::math;

/// `P(Poisson(mean) >= k)`, summed forward from the `k`-th term so no
/// cancellation occurs. The first term is computed in log space, which keeps
/// the routine valid for means far beyond the crate's desk scale.
#[must_use]
pub fn poisson_tail(mean: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if mean <= 0.0 {
        return 0.0;
    }
    let kf = k as f64;
    let log_term = kf * math::ln(mean) - mean - math::ln_gamma(kf + 1.0);
    let mut term = math::exp(log_term);
    if term == 0.0 {
        return 0.0;
    }
    let mut sum = term;
    let mut j = kf;
    loop {
        term *= mean / (j + 1.0);
        sum += term;
        j += 1.0;
        if term < sum * 1e-18 || term < f64::MIN_POSITIVE {
            break;
        }
    }
    sum.min(1.0)
}

/// Smallest `q` with `P(Poisson(mean) <= q) >= prob`.
#[must_use]
pub fn poisson_quantile(mean: f64, prob: f64) -> u64 {
    let mut q = 0u64;
    // CDF(q) >= prob  <=>  tail(q + 1) <= 1 - prob.
    while poisson_tail(mean, q + 1) > 1.0 - prob {
        q += 1;
    }
    q
}

/// Upper normal tail `P(Z >= z)`.
#[must_use]
pub fn normal_tail(z: f64) -> f64 {
    0.5 * math::erfc(z / core::f64::consts::SQRT_2)
}

/// Half-width `z * sqrt(p(1-p)/n)` of a binomial proportion interval, with
/// the proportion clamped away from 0 and 1 by `1/(2n)` so the width never
/// degenerates to zero at the boundary counts.
#[must_use]
pub fn binomial_half_width(successes: u64, n: u64, z: f64) -> f64 {
    assert!(n > 0, "binomial_half_width needs n > 0");
    let n_f = n as f64;
    let guard = 0.5 / n_f;
    let p = (successes as f64 / n_f).clamp(guard, 1.0 - guard);
    z * math::sqrt(p * (1.0 - p) / n_f)
}

/// Sample mean.
#[must_use]
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample standard deviation.
#[must_use]
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    math::sqrt(ss / (xs.len() - 1) as f64)
}

/// Kolmogorov-Smirnov statistic of a sample against a reference CDF.
/// The sample is sorted internally.
#[must_use]
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs: Vec<f64> = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in xs.iter().enumerate() {
        let f = cdf(*x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Asymptotic KS critical value at one-sided significance `alpha`.
#[must_use]
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    math::sqrt(math::ln(2.0 / alpha) / 2.0) / math::sqrt(n as f64)
}
