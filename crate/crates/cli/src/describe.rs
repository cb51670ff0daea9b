//! Human-readable description of each experiment kind.

use crate::config::Kind;

pub fn describe(kind: Kind) -> String {
    let (what, keys, outputs, verdict) = match kind {
        Kind::Simulate => (
            "One stationary sample of the massive equation on the window (-window, 0), \
             started from zero and relaxed for burn_in time units.",
            "grid.*, nonlinearity.*, mass, burn_in, solver.*, scales, alphas",
            "field.bin (binary field dump), profile.csv (D(r) per dyadic scale), \
             samples.csv, report.json (solver diagnostics and profile)",
            "always passes unless the solver fails",
        ),
        Kind::Ensemble => (
            "Independent stationary replicas reduced to D(r) per scale, the E norm and the \
             sup ratio per alpha, with quantiles, a tail-exponent fit (n >= 1000) and an \
             optional exponential-moment certificate. With [ensemble.lemmas] it also runs \
             the averaged-shift, bulk-versus-initial and space-time-split checks.",
            "replicas, scales, alphas, ensemble.certificate_q, ensemble.lemmas.*",
            "samples.csv, lemmas.csv (with lemmas), report.json",
            "passes unless a lemma check fails",
        ),
        Kind::VerifyDeterministic => (
            "Deterministic energy checks on random data, each at nx and 2 nx:\n  \
             p3: weighted energy estimate of the constant-coefficient equation with forcing\n  \
             p4-local / p4-global: localized energy estimate with rough coefficients\n  \
             p5: equi-integrability exponent of homogeneous solutions (95% CI above zero)\n  \
             sensitivity: response of the stationary solution to a localized noise bump",
            "deterministic.cases, deterministic.nx, deterministic.lambda, deterministic.cell, \
             deterministic.coefficient, deterministic.p5_*, deterministic.sensitivity*",
            "report.json",
            "passes iff every ratio is finite and stable within a factor 2 under resolution \
             doubling, the p5 interval lies above zero and the sensitivity ratio moves by \
             at most 5% when eps is halved",
        ),
        Kind::OracleCompare => (
            "Monte Carlo variances and covariances of the linear equation started from zero \
             at t = -1, against the exact covariance of the continuum solution.",
            "nonlinearity.lambda (slope a0), oracle.points, oracle.pairs, oracle.tolerance, replicas",
            "samples.csv, comparisons.csv, report.json",
            "passes iff every relative error is at most oracle.tolerance",
        ),
        Kind::ScalingTest => (
            "Parabolic scaling: D(r_probe / R) of R^-exponent u(R^2 t, R x) against direct \
             samples of the rescaled problem, with a two-sample KS test at level 0.01. An \
             exponent-0 negative control must be rejected.",
            "scaling.factors, scaling.r_probe, scaling.exponent, scaling.negative_control, replicas",
            "report.json",
            "passes iff every test accepts and every control rejects",
        ),
        Kind::HolderFit => (
            "Log-log regression of the mean modulus D(r) over dyadic scales r <= 1/2. The \
             slope estimates the Hoelder exponent of the stationary solution; the target \
             is alpha < 1/2, so the slope should sit just below 1/2.",
            "scales (dyadic, >= 8 dx), holder.band, replicas",
            "samples.csv, report.json (slope, bootstrap CI)",
            "passes iff the slope lies in holder.band (default [0.40, 0.55])",
        ),
    };
    format!(
        "{kind}\n\n{what}\n\nkeys:    {keys}\noutputs: {outputs} and manifest.json\nverdict: {verdict}\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_kind_is_described() {
        for k in Kind::ALL {
            let text = describe(k);
            assert!(text.starts_with(k.name()));
        }
        assert!(describe(Kind::HolderFit).contains("alpha < 1/2"));
        assert!(describe(Kind::VerifyDeterministic).contains("p5"));
    }
}
