//! Closed-form Gaussian theory of the linear equation
//! `dg/dt - a0 g'' = xi` started from `g = 0` at `t = -1`.
//!
//! The covariance of `g` follows from the semigroup property of the heat
//! kernel: for `-1 <= s <= t`,
//!
//! ```text
//! E[g(t,x) g(s,y)] = 1/2 int_{t-s}^{t+s+2} G(a0 sigma, x - y) dsigma.
//! ```
//!
//! The `sigma^-1/2` endpoint singularity is removed by `sigma = tau^2`, after
//! which the integrand is `(4 pi a0)^-1/2 exp(-d^2 / (4 a0 tau^2))`.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::replica_seed;
use crate::par::{map_range, ExecMode};

/// Initial time of `g`.
pub const INITIAL_TIME: f64 = -1.0;
/// Absolute tolerance of the covariance quadrature.
pub const QUAD_TOL: f64 = 1e-9;
/// Largest point set accepted by the dense sampler.
pub const MAX_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceTimePoint {
    pub t: f64,
    pub x: f64,
}

impl SpaceTimePoint {
    pub fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }

    /// Parabolic distance `sqrt|t - s| + |x - y|`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.t - other.t).abs().sqrt() + (self.x - other.x).abs()
    }
}

/// `G(t, x) = (4 pi t)^-1/2 exp(-x^2 / 4t)`.
pub fn heat_kernel(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("heat kernel needs t > 0, got {t}")));
    }
    Ok((4.0 * std::f64::consts::PI * t).powf(-0.5) * (-x * x / (4.0 * t)).exp())
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights on the odd-indexed Kronrod nodes (and the centre).
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = K15_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) quadrature to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut stack = vec![(a, b, tol)];
    let mut total = 0.0;
    let mut worst = 0.0_f64;
    let mut evaluations = 0usize;
    while let Some((lo, hi, local_tol)) = stack.pop() {
        let (value, err) = gauss_kronrod(&f, lo, hi);
        evaluations += 1;
        if err <= local_tol || evaluations > 20_000 || (hi - lo).abs() < 1e-14 * (1.0 + lo.abs()) {
            if err > local_tol {
                worst = worst.max(err);
            }
            total += value;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * local_tol));
            stack.push((mid, hi, 0.5 * local_tol));
        }
    }
    if worst > 0.0 {
        return Err(Error::QuadratureNonConvergence {
            error: worst,
            tolerance: tol,
        });
    }
    Ok(total)
}

fn check_a0(a0: f64) -> Result<()> {
    if !(a0 > 0.0 && a0 <= 1.0) {
        return Err(invalid("a0", format!("must lie in (0, 1], got {a0}")));
    }
    Ok(())
}

/// Covariance of `g` started from zero at `t_init`, at tolerance `tol`.
pub fn covariance_from(
    a0: f64,
    p: SpaceTimePoint,
    q: SpaceTimePoint,
    t_init: f64,
    tol: f64,
) -> Result<f64> {
    check_a0(a0)?;
    if p.t < t_init || q.t < t_init {
        return Err(invalid(
            "point",
            format!("times must be at least {t_init}, got {} and {}", p.t, q.t),
        ));
    }
    let (late, early) = if p.t >= q.t { (p, q) } else { (q, p) };
    let lo = (late.t - early.t).sqrt();
    let hi = (late.t + early.t - 2.0 * t_init).sqrt();
    if hi <= lo {
        return Ok(0.0);
    }
    let d = late.x - early.x;
    let c = d * d / (4.0 * a0);
    let amp = (4.0 * std::f64::consts::PI * a0).powf(-0.5);
    if c == 0.0 {
        return Ok(amp * (hi - lo));
    }
    integrate(
        |tau| {
            if tau == 0.0 {
                0.0
            } else {
                amp * (-c / (tau * tau)).exp()
            }
        },
        lo,
        hi,
        tol,
    )
}

/// `E[g(p) g(q)]` for `g` started at `t = -1`.
pub fn covariance_g(a0: f64, p: SpaceTimePoint, q: SpaceTimePoint) -> Result<f64> {
    covariance_from(a0, p, q, INITIAL_TIME, QUAD_TOL)
}

/// Covariance matrix of `g` on a point set.
pub fn covariance_matrix(a0: f64, points: &[SpaceTimePoint]) -> Result<DMatrix<f64>> {
    let m = points.len();
    let mut c = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = covariance_g(a0, points[i], points[j])?;
            c[(i, j)] = v;
            c[(j, i)] = v;
        }
    }
    Ok(c)
}

/// Exact joint draws of `g` on a point set.
#[derive(Debug, Clone)]
pub struct ExactSamples {
    pub points: Vec<SpaceTimePoint>,
    /// One row per draw, one column per point.
    pub draws: Vec<Vec<f64>>,
    /// Jitter added to the diagonal before factorization.
    pub jitter: f64,
}

impl ExactSamples {
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.draws.iter().map(|row| row[i]).collect()
    }
}

/// `n` joint draws of `g` at `points` by Cholesky factorization of the exact
/// covariance. Points at the initial time are exactly zero. Draw `k` uses
/// its own stream, so ranges of draws can be generated independently.
pub fn sample_exact_g(
    points: &[SpaceTimePoint],
    a0: f64,
    n: usize,
    seed: u64,
    mode: ExecMode,
) -> Result<ExactSamples> {
    if points.len() > MAX_POINTS {
        return Err(invalid(
            "points",
            format!("at most {MAX_POINTS} points, got {}", points.len()),
        ));
    }
    let live: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].t > INITIAL_TIME)
        .collect();
    let live_points: Vec<SpaceTimePoint> = live.iter().map(|&i| points[i]).collect();
    let cov = covariance_matrix(a0, &live_points)?;
    let (factor, jitter) = cholesky_with_jitter(cov)?;
    let m = live.len();
    let draws = map_range(0..n as u64, mode, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(replica_seed(seed, k));
        let z = DVector::from_iterator(m, (0..m).map(|_| StandardNormal.sample(&mut rng)));
        let g = &factor * z;
        let mut row = vec![0.0; points.len()];
        for (slot, &i) in live.iter().enumerate() {
            row[i] = g[slot];
        }
        row
    });
    Ok(ExactSamples {
        points: points.to_vec(),
        draws,
        jitter,
    })
}

/// Lower Cholesky factor, retrying once with diagonal jitter
/// `1e-10 * max diag`.
pub fn cholesky_with_jitter(cov: DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    if cov.nrows() == 0 {
        return Ok((cov, 0.0));
    }
    if let Some(ch) = cov.clone().cholesky() {
        return Ok((ch.l(), 0.0));
    }
    let max_diag = cov.diagonal().iter().fold(0.0_f64, |m, v| m.max(*v));
    let jitter = 1e-10 * max_diag;
    let mut shifted = cov;
    for i in 0..shifted.nrows() {
        shifted[(i, i)] += jitter;
    }
    match shifted.cholesky() {
        Some(ch) => Ok((ch.l(), jitter)),
        None => Err(Error::NotPositiveSemidefinite(format!(
            "covariance not factorizable with jitter {jitter:e}"
        ))),
    }
}

/// One probed pair of the increment bound.
#[derive(Debug, Clone, Serialize)]
pub struct IncrementCase {
    pub p: SpaceTimePoint,
    pub q: SpaceTimePoint,
    /// `E[(g(p) - g(q))^2]`.
    pub variance: f64,
    /// Parabolic distance.
    pub distance: f64,
    /// `variance / distance`, zero for coincident points.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IncrementReport {
    pub a0: f64,
    pub cases: Vec<IncrementCase>,
    pub max_ratio: f64,
}

/// Exact increment variances against the parabolic distance.
pub fn increment_bound_check(
    a0: f64,
    pairs: &[(SpaceTimePoint, SpaceTimePoint)],
) -> Result<IncrementReport> {
    let mut cases = Vec::with_capacity(pairs.len());
    for &(p, q) in pairs {
        let var = covariance_g(a0, p, p)? + covariance_g(a0, q, q)? - 2.0 * covariance_g(a0, p, q)?;
        let var = var.max(0.0);
        let distance = p.distance(&q);
        let ratio = if distance == 0.0 { 0.0 } else { var / distance };
        cases.push(IncrementCase {
            p,
            q,
            variance: var,
            distance,
            ratio,
        });
    }
    let max_ratio = cases.iter().map(|c| c.ratio).fold(0.0, f64::max);
    Ok(IncrementReport {
        a0,
        cases,
        max_ratio,
    })
}

/// Pairs approaching `(0, 0)` along time and along space, at distances
/// `4^-k`, `k = 1..=levels`.
pub fn standard_probe_pairs(levels: u32) -> Vec<(SpaceTimePoint, SpaceTimePoint)> {
    let base = SpaceTimePoint::new(0.0, 0.0);
    let mut out = Vec::new();
    for k in 1..=levels {
        let h = 4f64.powi(-(k as i32));
        out.push((base, SpaceTimePoint::new(-h * h, 0.0)));
        out.push((base, SpaceTimePoint::new(0.0, h)));
    }
    out
}

/// Analytic against empirical second moment for one probe.
#[derive(Debug, Clone, Serialize)]
pub struct OracleComparison {
    pub id: String,
    pub analytic: f64,
    pub empirical: f64,
    pub z: f64,
}

impl OracleComparison {
    /// Compare `E[a b]` with the sample mean of `a_k b_k` (centred ensemble).
    pub fn from_products(id: impl Into<String>, analytic: f64, a: &[f64], b: &[f64]) -> Self {
        let n = a.len() as f64;
        let prods: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        let mean = prods.iter().sum::<f64>() / n;
        let var = prods.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        let z = if se > 0.0 { (mean - analytic) / se } else { 0.0 };
        Self {
            id: id.into(),
            analytic,
            empirical: mean,
            z,
        }
    }

    pub fn relative_error(&self) -> f64 {
        ((self.empirical - self.analytic) / self.analytic).abs()
    }
}

/// CSV `id,analytic,empirical,z`.
pub fn write_comparisons_csv(rows: &[OracleComparison], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "id,analytic,empirical,z")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.id, r.analytic, r.empirical, r.z)?;
    }
    Ok(())
}
