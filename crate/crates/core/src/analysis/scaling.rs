//! Two-sample test of the parabolic scaling law of the stationary solution.
//!
//! Ensemble A rescales stationary samples of `(pi, T)` by `R`; ensemble B
//! samples the stationary solution of `(pi^, T / R^2)` directly on the
//! relabelled lattice. Their moduli at a common probe scale must agree in
//! law.

use serde::Serialize;

use crate::error::Result;
use crate::estimators::{d_modulus, Origin};
use crate::grid::{replica_seed, rescale_field_with_exponent};
use crate::nonlinearity::{mass_rescale, rescale_pi};
use crate::par::ExecMode;
use crate::solver::{sample_stationary_with, SolverConfig, WarmStart};

use super::ensemble::{require_rows, run_ensemble, FnExperiment};
use super::report::StationarySetup;
use super::stats::{ks_two_sample, mean, std_err, KsResult};

/// Significance level of the scaling test.
pub const SCALING_LEVEL: f64 = 0.01;

/// Seed offset separating ensemble B from ensemble A.
const SECOND_SIDE: u64 = 0xB5_1DE5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub r: f64,
    pub r_probe: f64,
    pub exponent: f64,
    pub n: usize,
    pub mean_rescaled: f64,
    pub mean_direct: f64,
    pub std_err_rescaled: f64,
    pub std_err_direct: f64,
    pub ks: KsResult,
    pub failures: usize,
    pub pass: bool,
}

/// Solver settings for the relabelled problem: mass, burn-in and fine
/// warm-start time all shrink by `R^2`.
pub fn rescaled_solver(config: &SolverConfig, r: f64) -> Result<SolverConfig> {
    let r2 = r * r;
    Ok(SolverConfig {
        mass: mass_rescale(config.mass, r)?,
        burn_in: config.burn_in / r2,
        warm_start: config.warm_start.map(|w| WarmStart {
            coarsen: w.coarsen,
            fine_time: w.fine_time / r2,
        }),
        ..*config
    })
}

/// Compare `D(., r_probe)` of `R^-exponent u(R^2 t, R x)` (ensemble A)
/// with that of direct samples for the rescaled problem (ensemble B).
/// `exponent = 1/2` is the true scaling; other exponents serve as negative
/// controls. `r_probe` refers to the rescaled lattice.
pub fn scaling_invariance_test(
    setup: &StationarySetup,
    r: f64,
    exponent: f64,
    r_probe: f64,
    n: usize,
    seed: u64,
    mode: ExecMode,
) -> Result<ScalingReport> {
    let grid_b = setup.grid.relabel(r)?;
    let pi_b = rescale_pi(&setup.pi, r)?;
    let solver_b = rescaled_solver(&setup.solver, r)?;
    let origin = Origin::end_of(&grid_b);
    // fail early on an invalid probe instead of once per replica
    d_modulus(&crate::grid::Field::zeros(grid_b), r_probe, origin)?;

    let names = vec![format!("D({r_probe})")];
    let side_a = FnExperiment::new(names.clone(), |s| {
        let (u, _) = sample_stationary_with(&setup.grid, &setup.pi, &setup.solver, s)?;
        let u_hat = rescale_field_with_exponent(&u, r, exponent)?;
        Ok(vec![d_modulus(&u_hat, r_probe, origin)?])
    });
    let side_b = FnExperiment::new(names, |s| {
        let (u, _) = sample_stationary_with(&grid_b, &pi_b, &solver_b, s)?;
        Ok(vec![d_modulus(&u, r_probe, origin)?])
    });
    let table_a = run_ensemble(&side_a, n, seed, mode)?;
    let table_b = run_ensemble(&side_b, n, replica_seed(seed ^ SECOND_SIDE, 1), mode)?;
    require_rows(&table_a)?;
    require_rows(&table_b)?;
    let a = table_a.column_at(0);
    let b = table_b.column_at(0);
    let ks = ks_two_sample(&a, &b)?;
    Ok(ScalingReport {
        r,
        r_probe,
        exponent,
        n,
        mean_rescaled: mean(&a),
        mean_direct: mean(&b),
        std_err_rescaled: std_err(&a),
        std_err_direct: std_err(&b),
        ks,
        failures: table_a.failure_count() + table_b.failure_count(),
        pass: ks.p_value >= SCALING_LEVEL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::nonlinearity::Nonlinearity;

    fn setup() -> StationarySetup {
        let grid = GridSpec::parabolic(8.0, 64, -1.0, 0.0, 0.5).unwrap();
        let solver = SolverConfig {
            mass: 1.0,
            burn_in: 5.0,
            ..SolverConfig::default()
        };
        StationarySetup::new(grid, Nonlinearity::linear(1.0).unwrap(), solver).unwrap()
    }

    #[test]
    fn identity_rescaling_passes() {
        let rep = scaling_invariance_test(&setup(), 1.0, 0.5, 1.0, 200, 3, ExecMode::Parallel).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn wrong_exponent_fails() {
        let rep = scaling_invariance_test(&setup(), 2.0, 0.0, 0.5, 200, 3, ExecMode::Parallel).unwrap();
        assert!(!rep.pass, "{rep:?}");
        assert!(rep.mean_rescaled > 1.2 * rep.mean_direct);
    }

    #[test]
    fn probe_below_resolution_is_rejected() {
        assert!(scaling_invariance_test(&setup(), 2.0, 0.5, 0.05, 10, 3, ExecMode::Sequential).is_err());
    }

    #[test]
    fn rescaled_solver_shrinks_times() {
        let c = SolverConfig {
            mass: 8.0,
            burn_in: 40.0,
            warm_start: Some(WarmStart {
                coarsen: 4,
                fine_time: 1.0,
            }),
            ..SolverConfig::default()
        };
        let s = rescaled_solver(&c, 2.0).unwrap();
        assert_eq!(s.mass, 2.0);
        assert_eq!(s.burn_in, 10.0);
        assert_eq!(s.warm_start.unwrap().fine_time, 0.25);
    }
}
