//! Multiscale regularity estimators for sampled fields.
//!
//! Every weighted quantity uses the exponential cutoff
//! `eta_r(x) = exp(-|x|/r) / (2r)`, evaluated at periodic distance from the
//! origin column and renormalized to sum to one on the lattice, so the mean
//! subtraction identity `D(u + c, r) = D(u, r)` holds exactly. Time averages
//! are left-endpoint sums over the `floor(r^2 / dt)` whole steps ending at the
//! origin slice.

use std::io::Write;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::{Field, GridSpec};
use crate::par::{map_ordered, ExecMode};

/// Smallest admissible scale, in units of `dx`.
pub const RESOLUTION_CELLS: f64 = 8.0;

const SNAP_TOL: f64 = 1e-9;

/// `eta_r(x) = exp(-|x|/r) / (2r)`.
pub fn eta_weight(r: f64, x: f64) -> f64 {
    (-x.abs() / r).exp() / (2.0 * r)
}

/// Space-time anchor of a parabolic window `(t - r^2, t) x R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Origin {
    pub t: f64,
    pub x: f64,
}

impl Origin {
    pub fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }

    /// Final time of the field at `x = 0`.
    pub fn end_of(grid: &GridSpec) -> Self {
        Self {
            t: grid.t_end(),
            x: 0.0,
        }
    }
}

/// Parabolic window snapped to the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    /// Slice of the origin time.
    pub end_slice: usize,
    /// Number of whole steps averaged, `floor(r^2 / dt)`.
    pub steps: usize,
    /// Column of the origin.
    pub column: usize,
}

impl Window {
    pub fn first_slice(&self) -> usize {
        self.end_slice - self.steps
    }
}

/// Renormalized discrete `eta_r` weights centred at column `j0`.
pub fn eta_weights(grid: &GridSpec, r: f64, j0: usize) -> Vec<f64> {
    let nx = grid.nx();
    let dx = grid.dx();
    let mut w: Vec<f64> = (0..nx)
        .map(|j| {
            let d = j.abs_diff(j0);
            let d = d.min(nx - d) as f64 * dx;
            (-d / r).exp()
        })
        .collect();
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    w
}

fn check_resolution(grid: &GridSpec, r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid("r", format!("must be positive, got {r}")));
    }
    let floor = RESOLUTION_CELLS * grid.dx();
    if r < floor * (1.0 - SNAP_TOL) {
        return Err(Error::BelowResolution { r, floor });
    }
    Ok(())
}

/// Snap the window `(t0 - r^2, t0)` to the lattice.
pub fn window(grid: &GridSpec, r: f64, origin: Origin) -> Result<Window> {
    check_resolution(grid, r)?;
    let out_of_range = || Error::WindowOutOfRange {
        from: origin.t - r * r,
        to: origin.t,
        start: grid.t_start(),
        end: grid.t_end(),
    };
    let end_slice = grid.slice_of(origin.t).ok_or_else(out_of_range)?;
    let steps = (r * r / grid.dt() + SNAP_TOL).floor() as usize;
    if steps == 0 {
        return Err(Error::BelowResolution {
            r,
            floor: grid.dt().sqrt(),
        });
    }
    if steps > end_slice {
        return Err(out_of_range());
    }
    Ok(Window {
        end_slice,
        steps,
        column: grid.column_of(origin.x),
    })
}

fn weighted_mean(row: &[f64], w: &[f64]) -> f64 {
    row.iter().zip(w).map(|(a, b)| a * b).sum()
}

fn weighted_centered_square(row: &[f64], w: &[f64], m: f64) -> f64 {
    row.iter()
        .zip(w)
        .map(|(a, b)| {
            let d = a - m;
            b * d * d
        })
        .sum()
}

fn modulus_with_weights(u: &Field, win: Window, w: &[f64]) -> f64 {
    let k = win.steps as f64;
    let slices = win.first_slice()..win.end_slice;
    let m = slices
        .clone()
        .map(|n| weighted_mean(u.slice(n), w))
        .sum::<f64>()
        / k;
    let d2 = slices
        .map(|n| weighted_centered_square(u.slice(n), w, m))
        .sum::<f64>()
        / k;
    d2.sqrt()
}

/// `D(u, r)`: the `eta_r`-weighted, mean-subtracted L2 modulus of `u` over
/// the parabolic window of size `r` ending at `origin`.
pub fn d_modulus(u: &Field, r: f64, origin: Origin) -> Result<f64> {
    let win = window(u.grid(), r, origin)?;
    let w = eta_weights(u.grid(), r, win.column);
    Ok(modulus_with_weights(u, win, &w))
}

/// Split of `D(u, r)` into the time fluctuation of the weighted spatial mean
/// and the time-averaged spatial fluctuation, `D^2 = temporal^2 + spatial^2`.
pub fn d_split(u: &Field, r: f64, origin: Origin) -> Result<(f64, f64)> {
    let win = window(u.grid(), r, origin)?;
    let w = eta_weights(u.grid(), r, win.column);
    let k = win.steps as f64;
    let means: Vec<f64> = (win.first_slice()..win.end_slice)
        .map(|n| weighted_mean(u.slice(n), &w))
        .collect();
    let m = means.iter().sum::<f64>() / k;
    let temporal = means.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / k;
    let spatial = (win.first_slice()..win.end_slice)
        .zip(&means)
        .map(|(n, &mn)| weighted_centered_square(u.slice(n), &w, mn))
        .sum::<f64>()
        / k;
    Ok((temporal.sqrt(), spatial.sqrt()))
}

/// `D'(u, r)`: the weighted modulus of the single slice at `t0 - r^2`.
pub fn d_prime(u: &Field, r: f64, origin: Origin) -> Result<f64> {
    let win = window(u.grid(), r, origin)?;
    let w = eta_weights(u.grid(), r, win.column);
    let row = u.slice(win.first_slice());
    let m = weighted_mean(row, &w);
    Ok(weighted_centered_square(row, &w, m).sqrt())
}

/// Uncentred `eta`-weighted L2 norm over the last unit of time at `x = 0`.
pub fn e_norm(u: &Field) -> Result<f64> {
    let grid = u.grid();
    let win = window(grid, 1.0, Origin::end_of(grid))?;
    let w = eta_weights(grid, 1.0, win.column);
    let e2 = (win.first_slice()..win.end_slice)
        .map(|n| weighted_centered_square(u.slice(n), &w, 0.0))
        .sum::<f64>()
        / win.steps as f64;
    Ok(e2.sqrt())
}

/// Dyadic scales `r_max, r_max/2, ...` not below `r_min`.
pub fn dyadic_scales(r_max: f64, r_min: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut r = r_max;
    while r >= r_min * (1.0 - SNAP_TOL) && r > 0.0 {
        out.push(r);
        r *= 0.5;
    }
    out
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Windowed maximum and minimum of `v` over `[i - k, i + k]`.
fn windowed_extrema(v: &[f64], k: usize, max: &mut Vec<f64>, min: &mut Vec<f64>) {
    use std::collections::VecDeque;
    let n = v.len();
    max.clear();
    min.clear();
    let mut qmax: VecDeque<usize> = VecDeque::new();
    let mut qmin: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    for i in 0..n {
        let hi = (i + k).min(n - 1);
        while next <= hi {
            while qmax.back().is_some_and(|&b| v[b] <= v[next]) {
                qmax.pop_back();
            }
            qmax.push_back(next);
            while qmin.back().is_some_and(|&b| v[b] >= v[next]) {
                qmin.pop_back();
            }
            qmin.push_back(next);
            next += 1;
        }
        let lo = i.saturating_sub(k);
        while qmax.front().is_some_and(|&f| f < lo) {
            qmax.pop_front();
        }
        while qmin.front().is_some_and(|&f| f < lo) {
            qmin.pop_front();
        }
        max.push(v[qmax[0]]);
        min.push(v[qmin[0]]);
    }
}

/// Columns of the region `x in [-1, 1]`, in order, and the slices of
/// `t in [t_end - 1, t_end]`.
fn holder_region(grid: &GridSpec) -> Result<(Vec<usize>, usize)> {
    if grid.width() < 2.0 + grid.dx() {
        return Err(Error::WindowOutOfRange {
            from: -1.0,
            to: 1.0,
            start: -0.5 * grid.width(),
            end: 0.5 * grid.width(),
        });
    }
    let steps = (1.0 / grid.dt() + SNAP_TOL).floor() as usize;
    if steps > grid.nt() {
        return Err(Error::WindowOutOfRange {
            from: grid.t_end() - 1.0,
            to: grid.t_end(),
            start: grid.t_start(),
            end: grid.t_end(),
        });
    }
    let half = (1.0 / grid.dx() + SNAP_TOL).floor() as usize;
    let j0 = grid.origin_column();
    Ok(((j0 - half..=j0 + half).collect(), grid.nt() - steps))
}

/// Local Hölder seminorm
/// `sup_R R^-alpha sup { |u(t,x) - u(s,y)| : sqrt|t-s| + |x-y| < R }`
/// over lattice points of `[t_end - 1, t_end] x [-1, 1]` and dyadic
/// `R = 1, 1/2, ...` down to `2 dx`. A lower bound for the continuum value.
pub fn holder_seminorm(u: &Field, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let grid = *u.grid();
    let (cols, first) = holder_region(&grid)?;
    let nt = grid.nt() + 1 - first;
    let series: Vec<Vec<f64>> = cols
        .iter()
        .map(|&j| (first..=grid.nt()).map(|n| u.at(n, j)).collect())
        .collect();
    let dx = grid.dx();
    let dt = grid.dt();
    let mut best = 0.0_f64;
    let (mut wmax, mut wmin) = (Vec::with_capacity(nt), Vec::with_capacity(nt));
    for r in dyadic_scales(1.0, 2.0 * dx) {
        let mut sup = 0.0_f64;
        let mut dj = 0usize;
        while (dj as f64) * dx < r {
            let room = r - dj as f64 * dx;
            // largest k with sqrt(k dt) < room
            let k = ((room * room / dt) * (1.0 - 1e-12)).ceil() as usize;
            let k = k.saturating_sub(1);
            for c in 0..cols.len().saturating_sub(dj) {
                windowed_extrema(&series[c + dj], k, &mut wmax, &mut wmin);
                for (n, &v) in series[c].iter().enumerate() {
                    sup = sup.max(wmax[n] - v).max(v - wmin[n]);
                }
                if dj > 0 {
                    windowed_extrema(&series[c], k, &mut wmax, &mut wmin);
                    for (n, &v) in series[c + dj].iter().enumerate() {
                        sup = sup.max(wmax[n] - v).max(v - wmin[n]);
                    }
                }
            }
            dj += 1;
        }
        best = best.max(sup * r.powf(-alpha));
    }
    Ok(best)
}

/// Modified seminorm: the supremum of `R^-alpha D(u, R)` over dyadic
/// `R in [r_min, 1]` and over translated origins on the lattice
/// `R^2 Z x R Z` within `[-1, 0] x [-1, 1]` (times relative to the field's
/// end) whose windows fit inside the field.
pub fn modified_holder(u: &Field, alpha: f64, r_min: f64, mode: ExecMode) -> Result<f64> {
    check_alpha(alpha)?;
    let grid = *u.grid();
    check_resolution(&grid, r_min)?;
    let t_end = grid.t_end();
    let mut jobs = Vec::new();
    for r in dyadic_scales(1.0, r_min) {
        let r2 = r * r;
        let nt_max = (1.0 / r2 + SNAP_TOL).floor() as i64;
        let nx_max = (1.0 / r + SNAP_TOL).floor() as i64;
        for a in 0..=nt_max {
            let t = t_end - a as f64 * r2;
            if t - r2 < grid.t_start() - SNAP_TOL * grid.dt() {
                continue;
            }
            for b in -nx_max..=nx_max {
                jobs.push((r, Origin::new(t, b as f64 * r)));
            }
        }
    }
    let values = map_ordered(&jobs, mode, |&(r, o)| {
        d_modulus(u, r, o).map(|d| d * r.powf(-alpha))
    });
    let mut best = 0.0_f64;
    for v in values {
        best = best.max(v?);
    }
    Ok(best)
}

/// `D(u, r)` over a dyadic ladder with its scaled supremum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusProfile {
    /// Decreasing dyadic scales.
    pub scales: Vec<f64>,
    pub d_values: Vec<f64>,
    pub alpha: Option<f64>,
    /// `max_r r^-alpha D(u, r)` (the plain maximum of `D` without `alpha`).
    pub sup_ratio: f64,
}

impl ModulusProfile {
    pub fn compute(u: &Field, r_min: f64, alpha: Option<f64>, origin: Origin) -> Result<Self> {
        check_resolution(u.grid(), r_min)?;
        let scales = dyadic_scales(1.0, r_min);
        let d_values = scales
            .iter()
            .map(|&r| d_modulus(u, r, origin))
            .collect::<Result<Vec<_>>>()?;
        let a = alpha.unwrap_or(0.0);
        let sup_ratio = scales
            .iter()
            .zip(&d_values)
            .map(|(r, d)| r.powf(-a) * d)
            .fold(0.0, f64::max);
        Ok(Self {
            scales,
            d_values,
            alpha,
            sup_ratio,
        })
    }

    /// CSV with columns `r,D,r^-alpha D`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "r,D,scaled_D")?;
        let a = self.alpha.unwrap_or(0.0);
        for (r, d) in self.scales.iter().zip(&self.d_values) {
            writeln!(out, "{r},{d},{}", r.powf(-a) * d)?;
        }
        Ok(())
    }
}

/// `max_{r dyadic in [r_min, 1]} r^-alpha D(u, r)` at the field's end.
pub fn sup_ratio(u: &Field, alpha: f64, r_min: f64) -> Result<f64> {
    Ok(ModulusProfile::compute(u, r_min, Some(alpha), Origin::end_of(u.grid()))?.sup_ratio)
}

/// `int int eta (u(t, x + h) - u(t, x))^2 dx dt` over the field's time
/// range (left-endpoint sums), with `eta = eta_1` centred at `x = 0` and the
/// shift taken periodically. `h` must be a multiple of `dx`.
pub fn shift_difference(u: &Field, h: f64) -> Result<f64> {
    let grid = *u.grid();
    let dx = grid.dx();
    let steps = h / dx;
    let shift = steps.round();
    if (steps - shift).abs() > 1e-6 {
        return Err(invalid("h", format!("{h} is not a multiple of dx = {dx}")));
    }
    let nx = grid.nx() as i64;
    let s = (shift as i64).rem_euclid(nx) as usize;
    let w = eta_weights(&grid, 1.0, grid.origin_column());
    let nx = grid.nx();
    let total: f64 = (0..grid.nt())
        .map(|n| {
            let row = u.slice(n);
            (0..nx)
                .map(|j| {
                    let d = row[(j + s) % nx] - row[j];
                    w[j] * d * d
                })
                .sum::<f64>()
        })
        .sum();
    Ok(total * grid.dt())
}
