//! Linear response of the stationary solution to a localized noise
//! perturbation.
//!
//! `u` is driven by `xi` and `u_eps` by `xi + eps * dxi` from the same state
//! at `t = -1`; the finite-difference response `du = (u_eps - u) / eps` is
//! measured by `D(du, r) r^(3/2) / |dxi|_L2` across scales.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::estimators::{d_modulus, Origin};
use crate::grid::{sample_white_noise, GridSpec, NoiseField};
use crate::nonlinearity::Nonlinearity;
use crate::par::{map_ordered, ExecMode};
use crate::solver::{integrate_nonlinear_with, sample_stationary_with, SolverConfig};

use super::report::{CaseRatio, Stability, VerificationReport};

/// Gaussian bump `amplitude * exp(-(t - t0)^2 / 2 st^2 - (x - x0)^2 / 2 sx^2)`
/// restricted to `-1 < t < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub t_center: f64,
    pub x_center: f64,
    pub t_width: f64,
    pub x_width: f64,
    pub amplitude: f64,
}

impl Default for Bump {
    fn default() -> Self {
        Self {
            t_center: -0.1,
            x_center: 0.0,
            t_width: 0.05,
            x_width: 0.1,
            amplitude: 1.0,
        }
    }
}

impl Bump {
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        if !(t > -1.0 && t < 0.0) {
            return 0.0;
        }
        let a = (t - self.t_center) / self.t_width;
        let b = (x - self.x_center) / self.x_width;
        self.amplitude * (-0.5 * (a * a + b * b)).exp()
    }

    pub fn noise(&self, grid: &GridSpec) -> Result<NoiseField> {
        NoiseField::from_fn(*grid, |t, x| self.eval(t, x))
    }
}

/// Responses of one base-noise realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRun {
    pub seed: u64,
    pub eps: f64,
    /// `D(du, r) r^(3/2) / |dxi|` per scale; zero when `dxi = 0`.
    pub ratios: Vec<f64>,
    pub norm_dxi: f64,
}

/// Lattice `(-1, 0)` for the sensitivity experiment.
pub fn response_grid(width: f64, nx: usize) -> Result<GridSpec> {
    GridSpec::parabolic(width, nx, -1.0, 0.0, 0.5)
}

/// Response ratios for one seed and one `eps`.
pub fn sensitivity_run(
    grid: &GridSpec,
    pi: &Nonlinearity,
    solver: &SolverConfig,
    bump: &Bump,
    eps: f64,
    scales: &[f64],
    seed: u64,
) -> Result<SensitivityRun> {
    if !(eps > 0.0) {
        return Err(invalid("eps", format!("must be positive, got {eps}")));
    }
    if (grid.t_start() + 1.0).abs() > 1e-12 || grid.t_end().abs() > 1e-12 {
        return Err(invalid("grid", "the response lattice must cover (-1, 0)"));
    }
    let (stationary, _) = sample_stationary_with(grid, pi, solver, seed)?;
    let u0 = stationary.slice(0).to_vec();
    let noise = sample_white_noise(grid, seed);
    let dxi = bump.noise(grid)?;
    let norm_dxi = (dxi.cells().iter().map(|v| v * v).sum::<f64>() * grid.cell_volume()).sqrt();
    let (u, _) = integrate_nonlinear_with(grid, pi, solver, &noise, &u0)?;
    let (u_eps, _) = integrate_nonlinear_with(grid, pi, solver, &noise.perturbed(&dxi, eps)?, &u0)?;
    let du = u_eps.scaled_difference(&u, 1.0 / eps)?;
    let origin = Origin::end_of(grid);
    let ratios = scales
        .iter()
        .map(|&r| {
            let d = d_modulus(&du, r, origin)?;
            Ok(if norm_dxi == 0.0 {
                0.0
            } else {
                d * r.powf(1.5) / norm_dxi
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SensitivityRun {
        seed,
        eps,
        ratios,
        norm_dxi,
    })
}

/// Setup of [`sensitivity_experiment`].
#[derive(Debug, Clone)]
pub struct SensitivitySetup {
    pub width: f64,
    /// Coarse resolution; the refined run uses `2 nx`.
    pub nx: usize,
    pub pi: Nonlinearity,
    pub solver: SolverConfig,
    pub bump: Bump,
    pub eps: f64,
    pub scales: Vec<f64>,
    pub seeds: usize,
}

fn mean_ratios(runs: &[SensitivityRun]) -> Vec<f64> {
    let k = runs[0].ratios.len();
    (0..k)
        .map(|i| runs.iter().map(|r| r.ratios[i]).sum::<f64>() / runs.len() as f64)
        .collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Seed-averaged ratios at `nx` with `eps` and `eps / 2`, and at `2 nx`.
/// Passes iff the maximum ratio moves by at most 5% under eps halving and
/// by at most a factor 2 under resolution doubling.
pub fn sensitivity_experiment(setup: &SensitivitySetup, seed: u64, mode: ExecMode) -> Result<VerificationReport> {
    if setup.seeds == 0 {
        return Err(invalid("seeds", "must be at least 1"));
    }
    let coarse = response_grid(setup.width, setup.nx)?;
    let fine = response_grid(setup.width, 2 * setup.nx)?;
    let seeds: Vec<u64> = (0..setup.seeds as u64)
        .map(|k| crate::grid::replica_seed(seed, k))
        .collect();
    let runs = |grid: &GridSpec, eps: f64| -> Result<Vec<SensitivityRun>> {
        map_ordered(&seeds, mode, |&s| {
            sensitivity_run(grid, &setup.pi, &setup.solver, &setup.bump, eps, &setup.scales, s)
        })
        .into_iter()
        .collect()
    };
    let base = mean_ratios(&runs(&coarse, setup.eps)?);
    let half = mean_ratios(&runs(&coarse, 0.5 * setup.eps)?);
    let refined = mean_ratios(&runs(&fine, setup.eps)?);
    let cases = base
        .iter()
        .enumerate()
        .map(|(i, &ratio)| CaseRatio {
            case: i,
            lhs: ratio,
            rhs: 1.0,
            ratio,
        })
        .collect();
    Ok(VerificationReport::new("sensitivity", cases, 0)
        .with_stability(Stability::relative(
            "eps halving",
            max_of(&base),
            max_of(&half),
            0.05,
        ))
        .with_stability(Stability::factor(
            "resolution doubling",
            max_of(&base),
            max_of(&refined),
            2.0,
        )))
}
