//! Simulated second moments of the linear equation against the exact
//! covariance.

use crate::error::{invalid, Result};
use crate::grid::{fill_noise_row, GridSpec};
use crate::oracle::{covariance_g, OracleComparison, SpaceTimePoint, INITIAL_TIME};
use crate::par::ExecMode;
use crate::solver::Stepper;

use super::ensemble::{require_rows, run_ensemble, FnExperiment, SampleTable};

const LATTICE_TOL: f64 = 1e-9;

/// Lattice indices `(slice, column)` of a point that must be a node.
fn node_of(grid: &GridSpec, p: SpaceTimePoint) -> Result<(usize, usize)> {
    let n = grid
        .slice_of(p.t)
        .ok_or_else(|| invalid("points", format!("t = {} is not a time slice of the lattice", p.t)))?;
    let j = grid.column_of(p.x);
    if (grid.x(j) - p.x).abs() > LATTICE_TOL * grid.dx().max(1.0) {
        return Err(invalid("points", format!("x = {} is not a lattice column", p.x)));
    }
    Ok((n, j))
}

/// Values of `g` at the given nodes for one noise seed, stepping from
/// `g = 0` at the first slice.
fn simulate_points(grid: &GridSpec, a0: f64, nodes: &[(usize, usize)], seed: u64) -> Result<Vec<f64>> {
    let nx = grid.nx();
    let last = nodes.iter().map(|&(n, _)| n).max().unwrap_or(0);
    let mut stepper = Stepper::linear_constant(grid, a0)?;
    let std_dev = grid.cell_volume().sqrt().recip();
    let mut u = vec![0.0; nx];
    let mut row = vec![0.0; nx];
    let mut out = vec![0.0; nodes.len()];
    for n in 0..=last {
        if n > 0 {
            fill_noise_row(seed, grid.time_key(n - 1), nx, std_dev, &mut row);
            stepper.step(&mut u, &row)?;
        }
        for (slot, &(m, j)) in out.iter_mut().zip(nodes) {
            if m == n {
                *slot = u[j];
            }
        }
    }
    Ok(out)
}

/// Ensemble of the linear constant-coefficient solver from `g = 0` at
/// `t = -1`, compared at every point (variance) and listed pair
/// (covariance) with the exact covariance.
pub fn linear_oracle_comparison(
    grid: &GridSpec,
    a0: f64,
    points: &[SpaceTimePoint],
    pairs: &[(usize, usize)],
    n: usize,
    seed: u64,
    mode: ExecMode,
) -> Result<(Vec<OracleComparison>, SampleTable)> {
    if (grid.t_start() - INITIAL_TIME).abs() > LATTICE_TOL {
        return Err(invalid("grid", "the lattice must start at t = -1"));
    }
    if points.is_empty() {
        return Err(invalid("points", "need at least one probe point"));
    }
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= points.len() || j >= points.len()) {
        return Err(invalid("pairs", format!("pair ({i}, {j}) refers to a missing point")));
    }
    let nodes = points
        .iter()
        .map(|&p| node_of(grid, p))
        .collect::<Result<Vec<_>>>()?;
    let names = (0..points.len()).map(|i| format!("g(p{i})")).collect();
    let experiment = FnExperiment::new(names, |s| simulate_points(grid, a0, &nodes, s));
    let table = run_ensemble(&experiment, n, seed, mode)?;
    require_rows(&table)?;
    let cols: Vec<Vec<f64>> = (0..points.len()).map(|i| table.column_at(i)).collect();
    let mut rows = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        rows.push(OracleComparison::from_products(
            format!("var(p{i})"),
            covariance_g(a0, p, p)?,
            &cols[i],
            &cols[i],
        ));
    }
    for &(i, j) in pairs {
        rows.push(OracleComparison::from_products(
            format!("cov(p{i},p{j})"),
            covariance_g(a0, points[i], points[j])?,
            &cols[i],
            &cols[j],
        ));
    }
    Ok((rows, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample_white_noise, Field};
    use crate::solver::integrate_linear_constant;

    fn grid() -> GridSpec {
        GridSpec::parabolic(8.0, 64, -1.0, 0.0, 0.5).unwrap()
    }

    #[test]
    fn point_values_match_full_trajectory() {
        let g = grid();
        let noise = sample_white_noise(&g, 17);
        let full: Field = integrate_linear_constant(&g, 0.8, &noise, &vec![0.0; 64]).unwrap();
        let nodes = [(g.nt(), 32), (10, 3), (0, 5)];
        let vals = simulate_points(&g, 0.8, &nodes, 17).unwrap();
        for (&(n, j), v) in nodes.iter().zip(&vals) {
            assert_eq!(full.at(n, j), *v);
        }
    }

    #[test]
    fn off_lattice_points_are_rejected() {
        let g = grid();
        let p = [SpaceTimePoint::new(0.0, 0.01)];
        assert!(linear_oracle_comparison(&g, 1.0, &p, &[], 4, 1, ExecMode::Sequential).is_err());
        let p = [SpaceTimePoint::new(0.0, 0.0)];
        assert!(linear_oracle_comparison(&g, 1.0, &p, &[(0, 1)], 4, 1, ExecMode::Sequential).is_err());
    }

    #[test]
    fn small_ensemble_is_close() {
        let g = grid();
        let p = [SpaceTimePoint::new(0.0, 0.0), SpaceTimePoint::new(-0.5, 0.5)];
        let (rows, _) = linear_oracle_comparison(&g, 1.0, &p, &[(0, 1)], 2000, 3, ExecMode::Parallel).unwrap();
        for r in &rows[..2] {
            assert!(r.relative_error() < 0.15, "{r:?}");
        }
    }
}
