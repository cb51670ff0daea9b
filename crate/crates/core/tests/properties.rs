//! Property tests of estimator invariants, rescaling and reproducibility.

use proptest::prelude::*;
use shelab::analysis::ensemble::{run_ensemble, Statistic, StationaryExperiment};
use shelab::estimators::{d_modulus, d_prime, d_split, dyadic_scales, e_norm, Origin};
use shelab::grid::{rescale_field, sample_white_noise};
use shelab::io::{read_field, write_field};
use shelab::solver::{integrate_nonlinear_with, SolverConfig};
use shelab::{ExecMode, Field, GridSpec, Nonlinearity};

fn grid() -> GridSpec {
    GridSpec::parabolic(8.0, 64, -1.0, 0.0, 0.5).unwrap()
}

fn field_from(values: &[f64]) -> Field {
    let g = grid();
    let len = (g.nt() + 1) * g.nx();
    Field::from_values(g, (0..len).map(|i| values[i % values.len()] + (i as f64 * 0.37).sin()).collect()).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn modulus_invariants(values in prop::collection::vec(-5.0..5.0f64, 1..97), c in -10.0..10.0f64, s in -4.0..4.0f64) {
        let u = field_from(&values);
        let o = Origin::end_of(u.grid());
        let shifted = u.map(|v| v + c).unwrap();
        let scaled = u.map(|v| v * s).unwrap();
        let scales = dyadic_scales(1.0, 1.0);
        for &r in &scales {
            let d = d_modulus(&u, r, o).unwrap();
            prop_assert!(close(d_modulus(&shifted, r, o).unwrap(), d));
            prop_assert!(close(d_modulus(&scaled, r, o).unwrap(), s.abs() * d));
            let (t, x) = d_split(&u, r, o).unwrap();
            prop_assert!(close(t * t + x * x, d * d));
            prop_assert!(d_prime(&u, r, o).unwrap() >= 0.0);
        }
        prop_assert!(e_norm(&u).unwrap() >= d_modulus(&u, 1.0, o).unwrap());
    }

    #[test]
    fn rescaling_moves_scales_exactly(values in prop::collection::vec(-5.0..5.0f64, 1..33), k in 1u32..3) {
        // D(u^, r) = R^(-1/2) D(u, R r) on the relabeled lattice
        let g = GridSpec::parabolic(16.0, 128, -1.0, 0.0, 0.5).unwrap();
        let len = (g.nt() + 1) * g.nx();
        let u = Field::from_values(g, (0..len).map(|i| values[i % values.len()] + (i as f64 * 0.11).cos()).collect()).unwrap();
        let big_r = 2f64.powi(k as i32);
        let hat = rescale_field(&u, big_r).unwrap();
        let r = 1.0 / big_r;
        let lhs = d_modulus(&hat, r, Origin::end_of(hat.grid())).unwrap();
        let rhs = big_r.powf(-0.5) * d_modulus(&u, 1.0, Origin::end_of(&g)).unwrap();
        prop_assert!(close(lhs, rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn binary_dump_round_trips(values in prop::collection::vec(-1e6..1e6f64, 1..50)) {
        let u = field_from(&values);
        let mut buf = Vec::new();
        write_field(&u, &mut buf).unwrap();
        prop_assert_eq!(read_field(buf.as_slice()).unwrap(), u);
    }
}

#[test]
fn modes_give_identical_tables() {
    let exp = StationaryExperiment {
        grid: grid(),
        pi: Nonlinearity::benchmark(0.5).unwrap(),
        solver: SolverConfig {
            mass: 1.0,
            burn_in: 5.0,
            ..SolverConfig::default()
        },
        statistics: vec![Statistic::Modulus(1.0), Statistic::ENorm],
    };
    let a = run_ensemble(&exp, 6, 99, ExecMode::Sequential).unwrap();
    let b = run_ensemble(&exp, 6, 99, ExecMode::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn solver_is_bitwise_reproducible() {
    let g = grid();
    let noise = sample_white_noise(&g, 5);
    let pi = Nonlinearity::benchmark(0.5).unwrap();
    let config = SolverConfig::default();
    let u0 = vec![0.0; g.nx()];
    let (a, _) = integrate_nonlinear_with(&g, &pi, &config, &noise, &u0).unwrap();
    let (b, _) = integrate_nonlinear_with(&g, &pi, &config, &noise, &u0).unwrap();
    assert_eq!(a, b);
}
