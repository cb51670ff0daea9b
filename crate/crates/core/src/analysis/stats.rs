//! Summary statistics, two-sample tests, regressions and tail diagnostics
//! for Monte Carlo ensembles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Probabilities reported in every quantile table.
pub const QUANTILE_LEVELS: [f64; 7] = [0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99];
/// Bootstrap resamples used for confidence intervals.
pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// Sample quantile with linear interpolation between order statistics
/// (the "type 7" definition). `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sorted_copy(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Unbiased sample variance (two-pass).
pub fn variance(samples: &[f64]) -> f64 {
    let m = mean(samples);
    samples.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (samples.len() as f64 - 1.0)
}

/// Standard error of the sample mean.
pub fn std_err(samples: &[f64]) -> f64 {
    (variance(samples) / samples.len() as f64).sqrt()
}

fn check_samples(samples: &[f64], min: usize) -> Result<()> {
    if samples.len() < min {
        return Err(invalid(
            "samples",
            format!("need at least {min} samples, got {}", samples.len()),
        ));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("samples".into()));
    }
    Ok(())
}

/// Mean, spread and quantiles of one statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_err: f64,
    /// `(p, quantile)` pairs at [`QUANTILE_LEVELS`].
    pub quantiles: Vec<(f64, f64)>,
}

impl Summary {
    pub fn new(samples: &[f64]) -> Result<Self> {
        check_samples(samples, 2)?;
        let sorted = sorted_copy(samples);
        let variance = variance(samples);
        Ok(Self {
            n: samples.len(),
            mean: mean(samples),
            variance,
            std_err: (variance / samples.len() as f64).sqrt(),
            quantiles: QUANTILE_LEVELS
                .iter()
                .map(|&p| (p, quantile_sorted(&sorted, p)))
                .collect(),
        })
    }
}

/// Two-sample Kolmogorov-Smirnov result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Kolmogorov distribution tail `Q(lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2)`.
fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value (with the
/// usual small-sample correction of the effective size).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    check_samples(a, 1)?;
    check_samples(b, 1)?;
    let sa = sorted_copy(a);
    let sb = sorted_copy(b);
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0_f64;
    while i < sa.len() && j < sb.len() {
        let x = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] <= x {
            i += 1;
        }
        while j < sb.len() && sb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_tail(lambda),
    })
}

/// Ordinary least squares fit `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    /// Standard error of the slope (zero with two points).
    pub slope_std_err: f64,
}

pub fn ols(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(invalid("points", "need at least two (x, y) pairs"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("regression data".into()));
    }
    let n = x.len() as f64;
    let mx = mean(x);
    let my = mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all abscissae coincide".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    let slope_std_err = if x.len() > 2 {
        (ss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
        slope_std_err,
    })
}

/// Percentile bootstrap interval of `stat` over resamples of `0..n`.
/// Returns the central `level` interval; resamples where `stat` fails are
/// skipped.
pub fn bootstrap_ci(
    n: usize,
    seed: u64,
    level: f64,
    mut stat: impl FnMut(&[usize]) -> Option<f64>,
) -> Option<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut idx = vec![0usize; n];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        for slot in idx.iter_mut() {
            *slot = rng.random_range(0..n);
        }
        if let Some(v) = stat(&idx) {
            if v.is_finite() {
                values.push(v);
            }
        }
    }
    if values.len() < BOOTSTRAP_RESAMPLES / 2 {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let tail = 0.5 * (1.0 - level);
    Some((
        quantile_sorted(&values, tail),
        quantile_sorted(&values, 1.0 - tail),
    ))
}

/// Smallest constant with `mean exp(X^q / C) <= target`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCertificate {
    pub q: f64,
    pub target: f64,
    pub c_star: f64,
    /// Empirical `mean exp(X^q / C*)`.
    pub value: f64,
    /// Monte Carlo standard error of `value`.
    pub value_std_err: f64,
    /// 95% bootstrap interval of `C*`.
    pub ci: Option<(f64, f64)>,
    /// Effective sample fraction `(sum w)^2 / (n sum w^2)` of the weights
    /// `w = exp(X^q / C*)`.
    pub ess_fraction: f64,
    /// Set when a handful of samples dominate the moment.
    pub heavy_tail: bool,
}

/// Smallest probed constant; returned when every sample vanishes.
pub const MIN_CONSTANT: f64 = 1e-12;
/// Effective sample fraction below which the certificate is flagged.
pub const HEAVY_TAIL_ESS: f64 = 0.02;

fn log_mean_exp(powers: &[f64], c: f64) -> f64 {
    let m = powers.iter().fold(f64::NEG_INFINITY, |m, &p| m.max(p / c));
    let s: f64 = powers.iter().map(|&p| (p / c - m).exp()).sum();
    m + (s / powers.len() as f64).ln()
}

fn certificate_constant(powers: &[f64], target: f64) -> f64 {
    let max = powers.iter().fold(0.0_f64, |m, &p| m.max(p));
    if max == 0.0 {
        return MIN_CONSTANT;
    }
    let log_target = target.ln();
    // every term is at most `target` once C >= max / ln(target)
    let mut hi = (max / log_target).max(MIN_CONSTANT);
    let mut lo = MIN_CONSTANT;
    if log_mean_exp(powers, lo) <= log_target {
        return lo;
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if log_mean_exp(powers, mid) <= log_target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi / lo < 1.0 + 1e-12 {
            break;
        }
    }
    hi
}

/// Exponential-moment certificate: the smallest `C` with
/// `mean exp(X^q / C) <= target`, found by bisection in `log C`, with a
/// bootstrap interval and a heavy-tail diagnostic.
pub fn exp_moment_certificate(samples: &[f64], q: f64, target: f64, seed: u64) -> Result<MomentCertificate> {
    check_samples(samples, 1)?;
    if samples.iter().any(|&x| x < 0.0) {
        return Err(invalid("samples", "must be nonnegative"));
    }
    if !(q > 0.0) {
        return Err(invalid("q", "must be positive"));
    }
    if !(target > 1.0) {
        return Err(invalid("target", "must exceed 1"));
    }
    let powers: Vec<f64> = samples.iter().map(|x| x.powf(q)).collect();
    let c_star = certificate_constant(&powers, target);
    let m = powers.iter().fold(f64::NEG_INFINITY, |m, &p| m.max(p / c_star));
    let weights: Vec<f64> = powers.iter().map(|&p| (p / c_star - m).exp()).collect();
    let sum: f64 = weights.iter().sum();
    let sum2: f64 = weights.iter().map(|w| w * w).sum();
    let n = samples.len() as f64;
    let ess_fraction = sum * sum / (sum2 * n);
    let value = log_mean_exp(&powers, c_star).exp();
    let scale = m.exp();
    let raw: Vec<f64> = weights.iter().map(|w| w * scale).collect();
    let value_std_err = if samples.len() > 1 { std_err(&raw) } else { 0.0 };
    let ci = if samples.len() > 1 {
        let mut buf = vec![0.0; samples.len()];
        bootstrap_ci(samples.len(), seed, 0.95, |idx| {
            for (b, &i) in buf.iter_mut().zip(idx) {
                *b = powers[i];
            }
            Some(certificate_constant(&buf, target))
        })
    } else {
        None
    };
    Ok(MomentCertificate {
        q,
        target,
        c_star,
        value,
        value_std_err,
        ci,
        ess_fraction,
        heavy_tail: ess_fraction < HEAVY_TAIL_ESS,
    })
}

/// Fit of `P(X > s) ~ exp(-s^p / C)` on the upper tail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailFit {
    pub p: f64,
    pub c: f64,
    pub residual: f64,
    pub points: usize,
}

/// Quantile band used by [`tail_exponent_fit`].
pub const TAIL_BAND: (f64, f64) = (0.90, 0.995);

/// Regress `log(-log P(X > s))` on `log s` over the empirical 90-99.5%
/// quantile band, with `P(X > x_(i)) = (n - i - 1/2) / n` at the `i`-th
/// order statistic.
pub fn tail_exponent_fit(samples: &[f64]) -> Result<TailFit> {
    check_samples(samples, 1000)?;
    let sorted = sorted_copy(samples);
    let n = sorted.len();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, &x) in sorted.iter().enumerate() {
        let level = (i as f64 + 0.5) / n as f64;
        if level < TAIL_BAND.0 || level > TAIL_BAND.1 || x <= 0.0 {
            continue;
        }
        let surv = (n - i) as f64 - 0.5;
        let surv = surv / n as f64;
        xs.push(x.ln());
        ys.push((-surv.ln()).ln());
    }
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if xs.len() < 3 || !(hi > lo) {
        return Err(Error::Degenerate("tail has no spread".into()));
    }
    let fit = ols(&xs, &ys)?;
    Ok(TailFit {
        p: fit.slope,
        c: (-fit.intercept).exp(),
        residual: fit.residual,
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand_distr::{Distribution, Exp, StandardNormal};

    fn abs_normal(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                z.abs()
            })
            .collect()
    }

    fn exponential(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = Exp::new(1.0).unwrap();
        (0..n).map(|_| e.sample(&mut rng)).collect()
    }

    #[test]
    fn quantiles_and_summary() {
        let v = [3.0, 1.0, 2.0, 4.0];
        let s = Summary::new(&v).unwrap();
        assert_eq!(s.mean, 2.5);
        assert_relative_eq!(s.variance, 5.0 / 3.0);
        assert_eq!(quantile_sorted(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.5);
        assert_eq!(quantile_sorted(&[1.0, 2.0, 3.0, 4.0], 1.0), 4.0);
        for w in s.quantiles.windows(2) {
            assert!(w[0].1 <= w[1].1);
        }
        assert!(Summary::new(&[1.0]).is_err());
    }

    #[test]
    fn ks_same_and_shifted() {
        let a = abs_normal(2000, 1);
        let b = abs_normal(2000, 2);
        assert!(ks_two_sample(&a, &b).unwrap().p_value > 0.01);
        let c: Vec<f64> = b.iter().map(|x| x * 1.3).collect();
        assert!(ks_two_sample(&a, &c).unwrap().p_value < 0.01);
        let r = ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn kolmogorov_reference_values() {
        // Q(1.36) ~ 0.049, Q(1.63) ~ 0.0098
        assert!((kolmogorov_tail(1.36) - 0.0494).abs() < 1e-3);
        assert!((kolmogorov_tail(1.63) - 0.0098).abs() < 5e-4);
    }

    #[test]
    fn ols_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let f = ols(&x, &y).unwrap();
        assert_relative_eq!(f.slope, 2.0, epsilon = 1e-14);
        assert_relative_eq!(f.intercept, -1.0, epsilon = 1e-14);
        assert!(ols(&[1.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn certificate_all_zero() {
        let c = exp_moment_certificate(&[0.0; 50], 2.0, 2.0, 1).unwrap();
        assert_eq!(c.c_star, MIN_CONSTANT);
        assert_eq!(c.value, 1.0);
        assert!(!c.heavy_tail);
        assert!(exp_moment_certificate(&[], 2.0, 2.0, 1).is_err());
        assert!(exp_moment_certificate(&[-1.0], 2.0, 2.0, 1).is_err());
    }

    #[test]
    fn certificate_gaussian_is_stable() {
        let a = abs_normal(10_000, 3);
        let b = abs_normal(20_000, 3);
        let ca = exp_moment_certificate(&a, 2.0, 2.0, 9).unwrap();
        let cb = exp_moment_certificate(&b, 2.0, 2.0, 9).unwrap();
        assert!(ca.c_star.is_finite() && ca.c_star > 1.0);
        assert!((ca.c_star / cb.c_star - 1.0).abs() < 0.15, "{} vs {}", ca.c_star, cb.c_star);
        assert!(!ca.heavy_tail && !cb.heavy_tail);
        assert!((ca.value - 2.0).abs() < 1e-6);
        let (lo, hi) = ca.ci.unwrap();
        assert!(lo <= ca.c_star && ca.c_star <= hi);
    }

    #[test]
    fn certificate_flags_exponential_tail() {
        let e = exponential(10_000, 4);
        let c = exp_moment_certificate(&e, 2.0, 2.0, 9).unwrap();
        assert!(c.heavy_tail, "ess {}", c.ess_fraction);
    }

    #[test]
    fn tail_fits() {
        let g = tail_exponent_fit(&abs_normal(100_000, 5)).unwrap();
        assert!((g.p - 2.0).abs() <= 0.5, "p = {}", g.p);
        let e = tail_exponent_fit(&exponential(100_000, 6)).unwrap();
        assert!((e.p - 1.0).abs() <= 0.3, "p = {}", e.p);
        assert!(matches!(tail_exponent_fit(&[1.5; 2000]), Err(Error::Degenerate(_))));
        assert!(tail_exponent_fit(&[1.0; 10]).is_err());
    }
}
