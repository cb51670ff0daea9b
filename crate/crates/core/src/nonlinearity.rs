//! Admissible flux functions `pi` with `lambda <= pi' <= 1`, `|pi''| <= L`
//! and `pi(0) = 0`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Flux {
    Linear(f64),
    Benchmark(f64),
    Custom { eval: ScalarFn, deriv: ScalarFn },
}

/// A flux `pi` together with its certified constants.
///
/// Rescaled fluxes are represented through an inner scale `s`, so that
/// `pi_s(u) = pi(s u) / s` and `pi_s'(u) = pi'(s u)`.
#[derive(Clone)]
pub struct Nonlinearity {
    flux: Flux,
    inner_scale: f64,
    lambda: f64,
    lipschitz: f64,
    label: String,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("label", &self.label)
            .field("lambda", &self.lambda)
            .field("lipschitz", &self.lipschitz)
            .field("inner_scale", &self.inner_scale)
            .finish()
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(invalid("lambda", format!("must lie in (0, 1], got {lambda}")));
    }
    Ok(())
}

// s(u) = (u + sqrt(u^2 + 1)) / 2, written without cancellation for u < 0.
#[inline]
fn soft_plus(u: f64, root: f64) -> f64 {
    if u >= 0.0 {
        0.5 * (u + root)
    } else {
        0.5 / (root - u)
    }
}

#[inline]
fn benchmark_eval_deriv(lambda: f64, u: f64) -> (f64, f64) {
    let root = (u * u + 1.0).sqrt();
    let s = soft_plus(u, root);
    let ds = 0.5 * (1.0 + u / root);
    (
        lambda * u + (1.0 - lambda) * (s - 0.5),
        lambda + (1.0 - lambda) * ds,
    )
}

impl Nonlinearity {
    /// `pi(u) = a0 u`, elliptic with `lambda = a0`.
    pub fn linear(a0: f64) -> Result<Self> {
        check_lambda(a0)?;
        Ok(Self {
            flux: Flux::Linear(a0),
            inner_scale: 1.0,
            lambda: a0,
            lipschitz: 0.0,
            label: format!("linear({a0})"),
        })
    }

    /// Smooth benchmark family
    /// `pi(u) = lambda u + (1 - lambda) (s(u) - s(0))`,
    /// `s(u) = (u + sqrt(u^2 + 1)) / 2`, with `L = (1 - lambda) / 2`.
    pub fn benchmark(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self {
            flux: Flux::Benchmark(lambda),
            inner_scale: 1.0,
            lambda,
            lipschitz: 0.5 * (1.0 - lambda),
            label: format!("benchmark({lambda})"),
        })
    }

    /// User-supplied flux; the constants are claims, check them with
    /// [`verify_ellipticity`].
    pub fn custom(
        label: impl Into<String>,
        lambda: f64,
        lipschitz: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            flux: Flux::Custom {
                eval: Arc::new(eval),
                deriv: Arc::new(deriv),
            },
            inner_scale: 1.0,
            lambda,
            lipschitz,
            label: label.into(),
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `true` for fluxes that are exactly linear (`pi'' = 0`).
    pub fn is_linear(&self) -> bool {
        matches!(self.flux, Flux::Linear(_))
    }

    pub fn eval(&self, u: f64) -> f64 {
        let s = self.inner_scale;
        let v = s * u;
        let p = match &self.flux {
            Flux::Linear(a) => a * v,
            Flux::Benchmark(l) => benchmark_eval_deriv(*l, v).0,
            Flux::Custom { eval, .. } => eval(v),
        };
        p / s
    }

    pub fn deriv(&self, u: f64) -> f64 {
        let v = self.inner_scale * u;
        match &self.flux {
            Flux::Linear(a) => *a,
            Flux::Benchmark(l) => benchmark_eval_deriv(*l, v).1,
            Flux::Custom { deriv, .. } => deriv(v),
        }
    }

    /// Batched `pi(u)` and `pi'(u)`.
    pub fn eval_deriv_into(&self, u: &[f64], pi: &mut [f64], dpi: &mut [f64]) {
        let s = self.inner_scale;
        match &self.flux {
            Flux::Linear(a) => {
                for ((&x, p), d) in u.iter().zip(pi.iter_mut()).zip(dpi.iter_mut()) {
                    *p = a * (s * x) / s;
                    *d = *a;
                }
            }
            Flux::Benchmark(l) => {
                for ((&x, p), d) in u.iter().zip(pi.iter_mut()).zip(dpi.iter_mut()) {
                    let (e, de) = benchmark_eval_deriv(*l, s * x);
                    *p = e / s;
                    *d = de;
                }
            }
            Flux::Custom { eval, deriv } => {
                for ((&x, p), d) in u.iter().zip(pi.iter_mut()).zip(dpi.iter_mut()) {
                    *p = eval(s * x) / s;
                    *d = deriv(s * x);
                }
            }
        }
    }
}

/// Smooth benchmark flux for the given ellipticity.
pub fn make_benchmark_pi(lambda: f64) -> Result<Nonlinearity> {
    Nonlinearity::benchmark(lambda)
}

/// Scan range and step used for certification.
pub const SCAN_RANGE: (f64, f64) = (-50.0, 50.0);
pub const SCAN_STEP: f64 = 1e-3;
const SECOND_DERIV_TOL: f64 = 1e-6;
const WINDOW_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct EllipticityReport {
    pub min_deriv: f64,
    pub max_deriv: f64,
    pub max_second_deriv: f64,
    pub value_at_zero: f64,
    pub pass: bool,
}

/// Dense-scan certification of `lambda <= pi' <= 1`, `|pi''| <= L` (centred
/// differences of `pi'`) and `pi(0) = 0`.
pub fn verify_ellipticity(pi: &Nonlinearity) -> EllipticityReport {
    let (lo, hi) = SCAN_RANGE;
    let steps = ((hi - lo) / SCAN_STEP).round() as usize;
    let derivs: Vec<f64> = (0..=steps)
        .map(|k| pi.deriv(lo + k as f64 * SCAN_STEP))
        .collect();
    let mut min_deriv = f64::INFINITY;
    let mut max_deriv = f64::NEG_INFINITY;
    for &d in &derivs {
        min_deriv = min_deriv.min(d);
        max_deriv = max_deriv.max(d);
    }
    let max_second_deriv = derivs
        .windows(3)
        .map(|w| ((w[2] - w[0]) / (2.0 * SCAN_STEP)).abs())
        .fold(0.0_f64, f64::max);
    let value_at_zero = pi.eval(0.0);
    let finite = min_deriv.is_finite() && max_deriv.is_finite() && max_second_deriv.is_finite();
    let pass = finite
        && min_deriv >= pi.lambda() - WINDOW_TOL
        && max_deriv <= 1.0 + WINDOW_TOL
        && max_second_deriv <= pi.lipschitz() + SECOND_DERIV_TOL
        && value_at_zero.abs() <= WINDOW_TOL;
    EllipticityReport {
        min_deriv,
        max_deriv,
        max_second_deriv,
        value_at_zero,
        pass,
    }
}

/// `pi^(u^) = R^(-1/2) pi(R^(1/2) u^)`, with `lambda^ = lambda` and
/// `L^ = R^(1/2) L`.
pub fn rescale_pi(pi: &Nonlinearity, r: f64) -> Result<Nonlinearity> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid("R", format!("must be positive, got {r}")));
    }
    if r == 1.0 {
        return Ok(pi.clone());
    }
    let root = r.sqrt();
    Ok(Nonlinearity {
        flux: pi.flux.clone(),
        inner_scale: pi.inner_scale * root,
        lambda: pi.lambda,
        lipschitz: pi.lipschitz * root,
        label: format!("{}@R={r}", pi.label),
    })
}

/// `T^ = R^(-2) T`.
pub fn mass_rescale(t: f64, r: f64) -> Result<f64> {
    if !(t > 0.0) || !(r > 0.0) || !r.is_finite() {
        return Err(invalid("T, R", format!("must be positive, got T = {t}, R = {r}")));
    }
    Ok(t / (r * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_case_of_benchmark() {
        let pi = make_benchmark_pi(1.0).unwrap();
        assert_eq!(pi.lipschitz(), 0.0);
        for u in [-3.0, -0.5, 0.0, 0.7, 12.0] {
            assert_eq!(pi.eval(u), u);
            assert_eq!(pi.deriv(u), 1.0);
        }
    }

    #[test]
    fn benchmark_derivative_at_zero() {
        let pi = make_benchmark_pi(0.5).unwrap();
        assert!((pi.deriv(0.0) - 0.75).abs() < 1e-15);
        assert_eq!(pi.eval(0.0), 0.0);
    }

    #[test]
    fn benchmark_certified_lipschitz() {
        let pi = make_benchmark_pi(0.5).unwrap();
        assert_eq!(pi.lipschitz(), 0.25);
        let report = verify_ellipticity(&pi);
        assert!(report.pass, "{report:?}");
        assert!((report.max_second_deriv - 0.25).abs() < 1e-4);
        assert!(report.min_deriv >= 0.5 && report.max_deriv <= 1.0);

        let report = verify_ellipticity(&make_benchmark_pi(0.25).unwrap());
        assert!(report.pass);
        assert!((report.max_second_deriv - 0.375).abs() < 1e-4);
    }

    #[test]
    fn quadratic_flux_fails() {
        let pi = Nonlinearity::custom("u^2", 0.5, 2.0, |u| u * u, |u| 2.0 * u);
        let report = verify_ellipticity(&pi);
        assert!(!report.pass);
        assert!(report.max_deriv > 1.0);
    }

    #[test]
    fn lambda_out_of_range() {
        assert!(make_benchmark_pi(0.0).is_err());
        assert!(make_benchmark_pi(1.5).is_err());
        assert!(Nonlinearity::linear(-0.1).is_err());
    }

    #[test]
    fn rescale_examples() {
        let pi = make_benchmark_pi(0.3).unwrap();
        let same = rescale_pi(&pi, 1.0).unwrap();
        for u in [-2.0, 0.1, 5.0] {
            assert_eq!(same.eval(u), pi.eval(u));
        }
        let unit = Nonlinearity::custom("L=1", 0.5, 1.0, |u| u, |_| 1.0);
        assert_eq!(rescale_pi(&unit, 0.25).unwrap().lipschitz(), 0.5);
        let hat = rescale_pi(&pi, 4.0).unwrap();
        assert_eq!(hat.deriv(2.0), pi.deriv(4.0));
        assert!((hat.eval(2.0) - pi.eval(4.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn mass_rescale_examples() {
        assert_eq!(mass_rescale(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(mass_rescale(1.0, 2.0).unwrap(), 0.25);
        let twice = mass_rescale(mass_rescale(1.0, 2.0).unwrap(), 2.0).unwrap();
        assert_eq!(twice, mass_rescale(1.0, 4.0).unwrap());
        assert!(mass_rescale(0.0, 1.0).is_err());
    }

    #[test]
    fn batched_matches_scalar() {
        let pi = rescale_pi(&make_benchmark_pi(0.4).unwrap(), 3.0).unwrap();
        let u: Vec<f64> = (0..50).map(|k| -5.0 + 0.21 * k as f64).collect();
        let mut p = vec![0.0; 50];
        let mut d = vec![0.0; 50];
        pi.eval_deriv_into(&u, &mut p, &mut d);
        for i in 0..50 {
            assert_eq!(p[i], pi.eval(u[i]));
            assert_eq!(d[i], pi.deriv(u[i]));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rescaling_preserves_ellipticity(lambda in 0.05f64..1.0, r in 0.01f64..50.0) {
            let hat = rescale_pi(&make_benchmark_pi(lambda).unwrap(), r).unwrap();
            prop_assert_eq!(hat.eval(0.0), 0.0);
            let report = verify_ellipticity(&hat);
            prop_assert!(report.pass, "{:?}", report);
            prop_assert_eq!(hat.lambda(), lambda);
        }

        #[test]
        fn double_rescale_composes(lambda in 0.05f64..1.0, r1 in 0.1f64..10.0, r2 in 0.1f64..10.0,
                                   u in -20.0f64..20.0) {
            let pi = make_benchmark_pi(lambda).unwrap();
            let a = rescale_pi(&rescale_pi(&pi, r1).unwrap(), r2).unwrap();
            let b = rescale_pi(&pi, r1 * r2).unwrap();
            prop_assert!((a.eval(u) - b.eval(u)).abs() <= 1e-12 * (1.0 + u.abs()));
            prop_assert!((a.deriv(u) - b.deriv(u)).abs() <= 1e-12);
            prop_assert!((a.lipschitz() - b.lipschitz()).abs() <= 1e-12);
        }
    }
}
