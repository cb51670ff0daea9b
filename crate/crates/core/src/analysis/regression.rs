//! Empirical Hölder exponent of the L2 modulus from stationary ensembles.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::estimators::RESOLUTION_CELLS;
use crate::par::ExecMode;

use super::ensemble::{require_rows, run_ensemble, SampleTable, StationaryExperiment, Statistic};
use super::report::StationarySetup;
use super::stats::{bootstrap_ci, mean, ols, std_err, LineFit};

/// Slope of `log mean D(u, r)` against `log r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderFit {
    pub scales: Vec<f64>,
    pub mean_d: Vec<f64>,
    pub std_err_d: Vec<f64>,
    pub slope: f64,
    /// 95% bootstrap interval over replicas.
    pub ci: Option<(f64, f64)>,
    pub fit: LineFit,
    pub replicas: usize,
    pub failures: usize,
}

impl HolderFit {
    pub fn within(&self, band: (f64, f64)) -> bool {
        self.slope >= band.0 && self.slope <= band.1
    }
}

/// Check that every scale is `2^-k`, at most `1/2` and at least `8 dx`.
pub fn check_dyadic_scales(scales: &[f64], dx: f64) -> Result<()> {
    if scales.len() < 2 {
        return Err(invalid("scales", "need at least two scales"));
    }
    for &r in scales {
        let k = -r.log2();
        if !(r > 0.0) || (k - k.round()).abs() > 1e-9 || k.round() < 1.0 {
            return Err(invalid("scales", format!("{r} is not a dyadic scale 2^-k <= 1/2")));
        }
        let floor = RESOLUTION_CELLS * dx;
        if r < floor * (1.0 - 1e-9) {
            return Err(Error::BelowResolution { r, floor });
        }
    }
    Ok(())
}

/// Regress the log of the column means of `table` against `log scales`.
/// The columns must hold `D(u, r)` for the listed scales, in order.
pub fn fit_modulus_slope(table: &SampleTable, scales: &[f64], seed: u64) -> Result<HolderFit> {
    require_rows(table)?;
    if table.statistics.len() != scales.len() {
        return Err(invalid("scales", "one column per scale expected"));
    }
    let columns: Vec<Vec<f64>> = (0..scales.len()).map(|i| table.column_at(i)).collect();
    let mean_d: Vec<f64> = columns.iter().map(|c| mean(c)).collect();
    if mean_d.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::Degenerate(
            "a scale has zero mean modulus; the slope is undefined".into(),
        ));
    }
    let log_r: Vec<f64> = scales.iter().map(|r| r.ln()).collect();
    let log_m: Vec<f64> = mean_d.iter().map(|m| m.ln()).collect();
    let fit = ols(&log_r, &log_m)?;
    let ci = bootstrap_ci(table.len(), seed, 0.95, |idx| {
        let ys: Option<Vec<f64>> = columns
            .iter()
            .map(|c| {
                let m = idx.iter().map(|&i| c[i]).sum::<f64>() / idx.len() as f64;
                (m > 0.0).then(|| m.ln())
            })
            .collect();
        ols(&log_r, &ys?).ok().map(|f| f.slope)
    });
    Ok(HolderFit {
        scales: scales.to_vec(),
        std_err_d: columns.iter().map(|c| std_err(c)).collect(),
        mean_d,
        slope: fit.slope,
        ci,
        fit,
        replicas: table.len(),
        failures: table.failure_count(),
    })
}

/// Run `n` stationary replicas, measure `D(u, r)` at the window's end for
/// every scale and fit the slope. Returns the fit and the sample table.
pub fn holder_exponent_regression(
    setup: &StationarySetup,
    scales: &[f64],
    n: usize,
    seed: u64,
    mode: ExecMode,
) -> Result<(HolderFit, SampleTable)> {
    check_dyadic_scales(scales, setup.grid.dx())?;
    let experiment = StationaryExperiment {
        grid: setup.grid,
        pi: setup.pi.clone(),
        solver: setup.solver,
        statistics: scales.iter().map(|&r| Statistic::Modulus(r)).collect(),
    };
    let table = run_ensemble(&experiment, n, seed, mode)?;
    let fit = fit_modulus_slope(&table, scales, seed ^ 0x5EED)?;
    Ok((fit, table))
}
