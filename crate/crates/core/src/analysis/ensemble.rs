//! Seeded replica ensembles and their sample tables.
//!
//! Replica `k` of a run with base seed `s` always uses the derived seed
//! `replica_seed(s, k)`, so ensembles can be split over disjoint replica
//! ranges and merged afterwards without changing a single value.

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::Range;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::estimators::{
    d_modulus, d_prime, e_norm, holder_seminorm, modified_holder, shift_difference, sup_ratio, Origin,
};
use crate::grid::{replica_seed, GridSpec};
use crate::nonlinearity::Nonlinearity;
use crate::par::{map_range, ExecMode};
use crate::solver::{sample_stationary_with, SolverConfig};

/// A replica-level computation producing a fixed list of named statistics.
pub trait Experiment: Sync {
    fn statistics(&self) -> Vec<String>;
    fn replica(&self, seed: u64) -> Result<Vec<f64>>;
}

/// Closure-backed experiment.
pub struct FnExperiment<F> {
    names: Vec<String>,
    f: F,
}

impl<F> FnExperiment<F>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    pub fn new(names: Vec<String>, f: F) -> Self {
        Self { names, f }
    }
}

impl<F> Experiment for FnExperiment<F>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    fn statistics(&self) -> Vec<String> {
        self.names.clone()
    }

    fn replica(&self, seed: u64) -> Result<Vec<f64>> {
        (self.f)(seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicaFailure {
    pub replica: u64,
    pub message: String,
}

/// Per-replica statistics keyed by replica id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleTable {
    pub base_seed: u64,
    pub statistics: Vec<String>,
    rows: BTreeMap<u64, Vec<f64>>,
    failures: BTreeMap<u64, String>,
}

impl SampleTable {
    pub fn new(base_seed: u64, statistics: Vec<String>) -> Self {
        Self {
            base_seed,
            statistics,
            rows: BTreeMap::new(),
            failures: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn failure_count(&self) -> usize {
        self.failures.len()
    }

    pub fn failures(&self) -> Vec<ReplicaFailure> {
        self.failures
            .iter()
            .map(|(&replica, m)| ReplicaFailure {
                replica,
                message: m.clone(),
            })
            .collect()
    }

    pub fn replica_ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.keys().copied()
    }

    pub fn row(&self, replica: u64) -> Option<&[f64]> {
        self.rows.get(&replica).map(Vec::as_slice)
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.statistics
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| invalid("statistic", format!("unknown statistic `{name}`")))
    }

    /// Values of one statistic in replica order.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.index_of(name)?;
        Ok(self.rows.values().map(|r| r[i]).collect())
    }

    pub fn column_at(&self, i: usize) -> Vec<f64> {
        self.rows.values().map(|r| r[i]).collect()
    }

    pub fn insert(&mut self, replica: u64, outcome: Result<Vec<f64>>) -> Result<()> {
        if self.rows.contains_key(&replica) || self.failures.contains_key(&replica) {
            return Err(invalid("replica", format!("replica {replica} recorded twice")));
        }
        match outcome {
            Ok(values) => {
                if values.len() != self.statistics.len() {
                    return Err(invalid(
                        "replica",
                        format!(
                            "replica {replica} produced {} values for {} statistics",
                            values.len(),
                            self.statistics.len()
                        ),
                    ));
                }
                self.rows.insert(replica, values);
            }
            Err(e) => {
                self.failures.insert(replica, e.to_string());
            }
        }
        Ok(())
    }

    /// Union of two tables over disjoint replica ranges.
    pub fn merge(mut self, other: SampleTable) -> Result<SampleTable> {
        if self.base_seed != other.base_seed || self.statistics != other.statistics {
            return Err(invalid("table", "tables from different experiments"));
        }
        for (k, v) in other.rows {
            self.insert(k, Ok(v))?;
        }
        for (k, m) in other.failures {
            if self.rows.contains_key(&k) || self.failures.insert(k, m).is_some() {
                return Err(invalid("replica", format!("replica {k} recorded twice")));
            }
        }
        Ok(self)
    }

    /// Long-format CSV `replica_id,statistic,value`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "replica_id,statistic,value")?;
        for (k, row) in &self.rows {
            for (name, v) in self.statistics.iter().zip(row) {
                writeln!(out, "{k},{name},{v}")?;
            }
        }
        Ok(())
    }
}

/// Run replicas `range` of an experiment.
pub fn run_replicas(
    experiment: &dyn Experiment,
    range: Range<u64>,
    base_seed: u64,
    mode: ExecMode,
) -> SampleTable {
    let outcomes = map_range(range.clone(), mode, |k| {
        experiment.replica(replica_seed(base_seed, k))
    });
    let mut table = SampleTable::new(base_seed, experiment.statistics());
    for (k, outcome) in range.zip(outcomes) {
        // ids are unique by construction
        let _ = table.insert(k, outcome);
    }
    table
}

/// Run replicas `0..n`.
pub fn run_ensemble(experiment: &dyn Experiment, n: usize, base_seed: u64, mode: ExecMode) -> Result<SampleTable> {
    if n == 0 {
        return Err(invalid("replicas", "must be at least 1"));
    }
    Ok(run_replicas(experiment, 0..n as u64, base_seed, mode))
}

/// A statistic of one stationary sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Statistic {
    /// `D(u, r)` at the window's end.
    Modulus(f64),
    /// `D'(u, r)` at the window's end.
    InitialModulus(f64),
    ENorm,
    Holder { alpha: f64 },
    ModifiedHolder { alpha: f64, r_min: f64 },
    SupRatio { alpha: f64, r_min: f64 },
    Shift(f64),
}

impl Statistic {
    pub fn name(&self) -> String {
        match self {
            Statistic::Modulus(r) => format!("D({r})"),
            Statistic::InitialModulus(r) => format!("Dprime({r})"),
            Statistic::ENorm => "E".into(),
            Statistic::Holder { alpha } => format!("holder({alpha})"),
            Statistic::ModifiedHolder { alpha, r_min } => format!("modified_holder({alpha},{r_min})"),
            Statistic::SupRatio { alpha, r_min } => format!("sup_ratio({alpha},{r_min})"),
            Statistic::Shift(h) => format!("shift({h})"),
        }
    }

    pub fn evaluate(&self, u: &crate::grid::Field) -> Result<f64> {
        let o = Origin::end_of(u.grid());
        match *self {
            Statistic::Modulus(r) => d_modulus(u, r, o),
            Statistic::InitialModulus(r) => d_prime(u, r, o),
            Statistic::ENorm => e_norm(u),
            Statistic::Holder { alpha } => holder_seminorm(u, alpha),
            Statistic::ModifiedHolder { alpha, r_min } => {
                modified_holder(u, alpha, r_min, ExecMode::Sequential)
            }
            Statistic::SupRatio { alpha, r_min } => sup_ratio(u, alpha, r_min),
            Statistic::Shift(h) => shift_difference(u, h),
        }
    }
}

/// Stationary samples of the nonlinear equation, reduced to statistics.
#[derive(Debug, Clone)]
pub struct StationaryExperiment {
    pub grid: GridSpec,
    pub pi: Nonlinearity,
    pub solver: SolverConfig,
    pub statistics: Vec<Statistic>,
}

impl StationaryExperiment {
    pub fn sample(&self, seed: u64) -> Result<crate::grid::Field> {
        sample_stationary_with(&self.grid, &self.pi, &self.solver, seed).map(|(f, _)| f)
    }
}

impl Experiment for StationaryExperiment {
    fn statistics(&self) -> Vec<String> {
        self.statistics.iter().map(Statistic::name).collect()
    }

    fn replica(&self, seed: u64) -> Result<Vec<f64>> {
        let u = self.sample(seed)?;
        self.statistics.iter().map(|s| s.evaluate(&u)).collect()
    }
}

/// Failure when a table has no usable rows.
pub(crate) fn require_rows(table: &SampleTable) -> Result<()> {
    if table.is_empty() {
        return Err(Error::Degenerate(format!(
            "all {} replicas failed",
            table.failure_count()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> FnExperiment<impl Fn(u64) -> Result<Vec<f64>> + Sync> {
        FnExperiment::new(vec!["a".into(), "b".into()], |seed| {
            if seed % 7 == 0 {
                Err(Error::Degenerate("unlucky".into()))
            } else {
                Ok(vec![(seed % 1000) as f64, (seed % 13) as f64])
            }
        })
    }

    #[test]
    fn deterministic_and_splittable() {
        let e = toy();
        let full = run_ensemble(&e, 1000, 42, ExecMode::Parallel).unwrap();
        let again = run_ensemble(&e, 1000, 42, ExecMode::Sequential).unwrap();
        assert_eq!(full, again);
        let a = run_replicas(&e, 0..500, 42, ExecMode::Parallel);
        let b = run_replicas(&e, 500..1000, 42, ExecMode::Parallel);
        assert_eq!(b.clone().merge(a.clone()).unwrap(), full);
        assert_eq!(a.merge(b).unwrap(), full);
        assert_eq!(full.len() + full.failure_count(), 1000);
    }

    #[test]
    fn single_replica_and_errors() {
        let e = toy();
        let t = run_ensemble(&e, 1, 3, ExecMode::Sequential).unwrap();
        assert_eq!(t.len() + t.failure_count(), 1);
        assert!(run_ensemble(&e, 0, 3, ExecMode::Sequential).is_err());
        let a = run_replicas(&e, 0..10, 1, ExecMode::Sequential);
        assert!(a.clone().merge(a).is_err());
        assert!(t.column("c").is_err());
    }

    #[test]
    fn csv_is_long_format() {
        let e = toy();
        let t = run_replicas(&e, 0..3, 5, ExecMode::Sequential);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("replica_id,statistic,value\n"));
        assert_eq!(text.lines().count(), 1 + 2 * t.len());
    }
}
