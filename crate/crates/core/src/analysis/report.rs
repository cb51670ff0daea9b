//! Report types shared by the experiments.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::GridSpec;
use crate::nonlinearity::Nonlinearity;
use crate::solver::SolverConfig;

use super::stats::{
    exp_moment_certificate, tail_exponent_fit, MomentCertificate, Summary, TailFit,
};

/// Lattice, flux and solver settings of a stationary ensemble.
#[derive(Debug, Clone)]
pub struct StationarySetup {
    pub grid: GridSpec,
    pub pi: Nonlinearity,
    pub solver: SolverConfig,
}

impl StationarySetup {
    pub fn new(grid: GridSpec, pi: Nonlinearity, solver: SolverConfig) -> Result<Self> {
        crate::solver::check_stationary_config(&solver)?;
        Ok(Self { grid, pi, solver })
    }
}

/// Distributional summary of one statistic over an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub statistic: String,
    pub summary: Summary,
    /// Replicas that failed and were left out.
    pub failures: usize,
    pub tail_fit: Option<TailFit>,
    pub moment_certificate: Option<MomentCertificate>,
}

impl EnsembleSummary {
    /// Summarize `samples`. The tail fit needs at least 1000 samples and is
    /// skipped below that; the certificate is computed for `moment_q`.
    pub fn new(
        statistic: impl Into<String>,
        samples: &[f64],
        failures: usize,
        moment_q: Option<f64>,
        seed: u64,
    ) -> Result<Self> {
        let summary = Summary::new(samples)?;
        let tail_fit = if samples.len() >= 1000 {
            tail_exponent_fit(samples).ok()
        } else {
            None
        };
        let moment_certificate = match moment_q {
            Some(q) => Some(exp_moment_certificate(samples, q, 2.0, seed)?),
            None => None,
        };
        Ok(Self {
            statistic: statistic.into(),
            summary,
            failures,
            tail_fit,
            moment_certificate,
        })
    }
}

/// Both sides of an inequality for one case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseRatio {
    pub case: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl CaseRatio {
    /// `lhs / rhs`, with `0 / 0 = 0`.
    pub fn new(case: usize, lhs: f64, rhs: f64) -> Result<Self> {
        if !(lhs >= 0.0 && rhs >= 0.0) || !lhs.is_finite() || !rhs.is_finite() {
            return Err(Error::NonFinite(format!(
                "case {case}: sides must be finite and non-negative, got {lhs} and {rhs}"
            )));
        }
        let ratio = if lhs == 0.0 {
            0.0
        } else if rhs == 0.0 {
            return Err(Error::Degenerate(format!(
                "case {case}: right-hand side vanishes with lhs = {lhs}"
            )));
        } else {
            lhs / rhs
        };
        Ok(Self {
            case,
            lhs,
            rhs,
            ratio,
        })
    }
}

/// Agreement of a measured quantity between two runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stability {
    pub label: String,
    pub reference: f64,
    pub value: f64,
    /// `max(value / reference, reference / value)`, or `|value / reference - 1|`
    /// when `relative` is set.
    pub deviation: f64,
    pub tolerance: f64,
    pub relative: bool,
    pub pass: bool,
}

impl Stability {
    /// Within a multiplicative `factor`.
    pub fn factor(label: impl Into<String>, reference: f64, value: f64, factor: f64) -> Self {
        let deviation = if reference == 0.0 && value == 0.0 {
            1.0
        } else if reference <= 0.0 || value <= 0.0 {
            f64::INFINITY
        } else {
            (value / reference).max(reference / value)
        };
        Self {
            label: label.into(),
            reference,
            value,
            deviation,
            tolerance: factor,
            relative: false,
            pass: deviation <= factor,
        }
    }

    /// Within relative error `tol`.
    pub fn relative(label: impl Into<String>, reference: f64, value: f64, tol: f64) -> Self {
        let deviation = if reference == value {
            0.0
        } else {
            ((value - reference) / reference).abs()
        };
        Self {
            label: label.into(),
            reference,
            value,
            deviation,
            tolerance: tol,
            relative: true,
            pass: deviation <= tol,
        }
    }
}

/// Fitted exponent with a 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub value: f64,
    pub ci: (f64, f64),
}

/// Measured constant of an inequality, with its verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub cases: Vec<CaseRatio>,
    pub max_ratio: f64,
    pub skipped: usize,
    pub stability: Vec<Stability>,
    pub exponent: Option<ExponentEstimate>,
    pub pass: bool,
}

impl VerificationReport {
    /// Report over `cases` whose verdict is the conjunction of the
    /// stability checks (and `true` without any).
    pub fn new(id: impl Into<String>, cases: Vec<CaseRatio>, skipped: usize) -> Self {
        let max_ratio = cases.iter().map(|c| c.ratio).fold(0.0, f64::max);
        Self {
            id: id.into(),
            cases,
            max_ratio,
            skipped,
            stability: Vec::new(),
            exponent: None,
            pass: true,
        }
    }

    pub fn with_stability(mut self, check: Stability) -> Self {
        self.pass &= check.pass;
        self.stability.push(check);
        self
    }

    pub fn with_exponent(mut self, exponent: ExponentEstimate, pass: bool) -> Self {
        self.exponent = Some(exponent);
        self.pass &= pass;
        self
    }
}

pub(crate) fn check_cases(n_cases: usize) -> Result<()> {
    if n_cases == 0 {
        return Err(invalid("n_cases", "must be at least 1"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(CaseRatio::new(0, 0.0, 0.0).unwrap().ratio, 0.0);
        assert_eq!(CaseRatio::new(0, 1.0, 4.0).unwrap().ratio, 0.25);
        assert!(CaseRatio::new(0, 1.0, 0.0).is_err());
        assert!(CaseRatio::new(0, f64::NAN, 1.0).is_err());
        let r = VerificationReport::new(
            "x",
            vec![CaseRatio::new(0, 1.0, 2.0).unwrap(), CaseRatio::new(1, 3.0, 2.0).unwrap()],
            0,
        );
        assert_eq!(r.max_ratio, 1.5);
        assert!(r.pass);
        let r = r.with_stability(Stability::factor("res", 1.0, 2.5, 2.0));
        assert!(!r.pass);
    }

    #[test]
    fn stability_checks() {
        assert!(Stability::factor("a", 2.0, 1.1, 2.0).pass);
        assert!(!Stability::factor("a", 2.0, 0.9, 2.0).pass);
        assert!(Stability::factor("a", 0.0, 0.0, 2.0).pass);
        assert!(Stability::relative("b", 1.0, 1.04, 0.05).pass);
        assert!(!Stability::relative("b", 1.0, 0.94, 0.05).pass);
    }
}
