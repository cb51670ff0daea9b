//! Execution of each experiment kind and its output files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use shelab::analysis::deterministic::DeterministicSetup;
use shelab::analysis::ensemble::{run_ensemble, SampleTable, Statistic, StationaryExperiment};
use shelab::analysis::lemmas::LemmaScales;
use shelab::analysis::{
    holder_exponent_regression, linear_oracle_comparison, scaling_invariance_test, sensitivity_experiment,
    shift_inequality_check, verify_p3, verify_p4, verify_p5, EnsembleSummary, SensitivitySetup, StationarySetup,
    VerificationReport,
};
use shelab::estimators::{ModulusProfile, Origin};
use shelab::grid::replica_seed;
use shelab::oracle::{write_comparisons_csv, SpaceTimePoint};
use shelab::solver::sample_stationary_with;
use shelab::ExecMode;

use crate::config::{Kind, Prepared};

/// Verdict of one run and the files it wrote (relative to the output dir).
#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub pass: bool,
    pub lines: Vec<String>,
    pub files: Vec<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Writer<'_> {
    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        self.files.push(name.to_string());
        Ok(BufWriter::new(file))
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut w = self.create(name)?;
        shelab::io::write_json(value, &mut w)?;
        w.flush()?;
        Ok(())
    }

    /// `report.json`: the kind-specific fields plus the seed and config echo.
    fn report(&mut self, prep: &Prepared, mut body: Value) -> Result<()> {
        if let Value::Object(map) = &mut body {
            map.insert("seed".into(), json!(prep.config.seed));
            map.insert("config".into(), serde_json::to_value(&prep.config)?);
        }
        self.json("report.json", &body)
    }

    fn table(&mut self, name: &str, table: &SampleTable) -> Result<()> {
        let mut w = self.create(name)?;
        table.write_csv(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

fn report_line(r: &VerificationReport) -> String {
    let mut line = format!(
        "{:<22} {}  max ratio {:.4}",
        r.id,
        if r.pass { "PASS" } else { "FAIL" },
        r.max_ratio
    );
    for s in &r.stability {
        line.push_str(&format!("; {} {:.4} -> {:.4}", s.label, s.reference, s.value));
    }
    if let Some(e) = &r.exponent {
        line.push_str(&format!("; exponent {:.3} [{:.3}, {:.3}]", e.value, e.ci.0, e.ci.1));
    }
    line
}

/// Run the prepared experiment, writing every file into `dir`.
pub fn run(prep: &Prepared, dir: &Path, mode: ExecMode) -> Result<Outcome> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut w = Writer { dir, files: Vec::new() };
    let (pass, lines) = match prep.config.kind {
        Kind::Simulate => simulate(prep, &mut w)?,
        Kind::Ensemble => ensemble(prep, &mut w, mode)?,
        Kind::HolderFit => holder_fit(prep, &mut w, mode)?,
        Kind::ScalingTest => scaling(prep, &mut w, mode)?,
        Kind::OracleCompare => oracle(prep, &mut w, mode)?,
        Kind::VerifyDeterministic => deterministic(prep, &mut w, mode)?,
    };
    Ok(Outcome {
        pass,
        lines,
        files: w.files,
    })
}

fn stationary(prep: &Prepared) -> Result<StationarySetup> {
    Ok(StationarySetup::new(prep.grid, prep.pi.clone(), prep.solver)?)
}

fn simulate(prep: &Prepared, w: &mut Writer) -> Result<(bool, Vec<String>)> {
    let c = &prep.config;
    let seed = replica_seed(c.seed, 0);
    let (u, diagnostics) = sample_stationary_with(&prep.grid, &prep.pi, &prep.solver, seed)?;
    let mut f = w.create("field.bin")?;
    shelab::io::write_field(&u, &mut f)?;
    f.flush()?;

    let r_min = c.scales.iter().copied().fold(f64::INFINITY, f64::min);
    let profile = ModulusProfile::compute(&u, r_min, c.alphas.first().copied(), Origin::end_of(&prep.grid))?;
    let mut p = w.create("profile.csv")?;
    profile.write_csv(&mut p)?;
    p.flush()?;

    let mut statistics: Vec<Statistic> = c.scales.iter().map(|&r| Statistic::Modulus(r)).collect();
    statistics.push(Statistic::ENorm);
    statistics.extend(c.alphas.iter().map(|&alpha| Statistic::SupRatio { alpha, r_min }));
    let mut table = SampleTable::new(c.seed, statistics.iter().map(Statistic::name).collect());
    let values: shelab::Result<Vec<f64>> = statistics.iter().map(|s| s.evaluate(&u)).collect();
    table.insert(0, values)?;
    w.table("samples.csv", &table)?;
    w.report(prep, json!({ "kind": c.kind, "diagnostics": diagnostics, "profile": profile }))?;
    let lines = vec![format!(
        "simulated {} slices x {} columns; max |u| {:.4}, max residual {:.2e}",
        prep.grid.nt() + 1,
        prep.grid.nx(),
        diagnostics.max_abs_u,
        diagnostics.max_residual
    )];
    Ok((true, lines))
}

fn ensemble(prep: &Prepared, w: &mut Writer, mode: ExecMode) -> Result<(bool, Vec<String>)> {
    let c = &prep.config;
    let r_min = c.scales.iter().copied().fold(f64::INFINITY, f64::min);
    let mut statistics: Vec<Statistic> = c.scales.iter().map(|&r| Statistic::Modulus(r)).collect();
    statistics.push(Statistic::ENorm);
    statistics.extend(c.alphas.iter().map(|&alpha| Statistic::SupRatio { alpha, r_min }));
    let experiment = StationaryExperiment {
        grid: prep.grid,
        pi: prep.pi.clone(),
        solver: prep.solver,
        statistics,
    };
    let table = run_ensemble(&experiment, c.replicas, c.seed, mode)?;
    w.table("samples.csv", &table)?;
    let mut summaries = Vec::new();
    let mut lines = Vec::new();
    for (i, name) in table.statistics.iter().enumerate() {
        let col = table.column_at(i);
        if col.is_empty() {
            continue;
        }
        let s = EnsembleSummary::new(
            name.clone(),
            &col,
            table.failure_count(),
            c.ensemble.certificate_q,
            replica_seed(c.seed ^ 0xC0FFEE, i as u64),
        )?;
        lines.push(format!(
            "{:<22} mean {:.5} +- {:.5} (n = {})",
            name, s.summary.mean, s.summary.std_err, s.summary.n
        ));
        summaries.push(s);
    }
    let mut pass = true;
    let mut lemma_reports = Vec::new();
    if let Some(l) = &c.ensemble.lemmas {
        let scales = LemmaScales {
            shift: l.shift_scales.clone(),
            split: l.split_scales.clone(),
        };
        let (reports, lemma_table) =
            shift_inequality_check(&stationary(prep)?, &scales, c.replicas, c.seed ^ 0x1E44A, mode)?;
        w.table("lemmas.csv", &lemma_table)?;
        for r in &reports {
            pass &= r.pass;
            lines.push(report_line(r));
        }
        lemma_reports = reports;
    }
    if table.failure_count() > 0 {
        lines.push(format!("{} replicas failed", table.failure_count()));
    }
    w.report(
        prep,
        json!({
            "kind": c.kind,
            "replicas": table.len(),
            "failures": table.failures(),
            "summaries": summaries,
            "lemmas": lemma_reports,
            "pass": pass,
        }),
    )?;
    Ok((pass, lines))
}

fn holder_fit(prep: &Prepared, w: &mut Writer, mode: ExecMode) -> Result<(bool, Vec<String>)> {
    let c = &prep.config;
    let (fit, table) = holder_exponent_regression(&stationary(prep)?, &c.scales, c.replicas, c.seed, mode)?;
    w.table("samples.csv", &table)?;
    let band = (c.holder.band[0], c.holder.band[1]);
    let pass = fit.within(band);
    let ci = fit
        .ci
        .map(|(a, b)| format!("[{a:.3}, {b:.3}]"))
        .unwrap_or_else(|| "n/a".into());
    let lines = vec![format!(
        "holder slope {:.4}, 95% CI {ci}, band [{}, {}]: {}",
        fit.slope,
        band.0,
        band.1,
        if pass { "PASS" } else { "FAIL" }
    )];
    w.report(prep, json!({ "kind": c.kind, "fit": fit, "slope": fit.slope, "band": band, "pass": pass }))?;
    Ok((pass, lines))
}

fn scaling(prep: &Prepared, w: &mut Writer, mode: ExecMode) -> Result<(bool, Vec<String>)> {
    let c = &prep.config;
    let s = &c.scaling;
    let setup = stationary(prep)?;
    let mut pass = true;
    let mut lines = Vec::new();
    let mut tests = Vec::new();
    let mut controls = Vec::new();
    for (i, &r) in s.factors.iter().enumerate() {
        let seed = replica_seed(c.seed, i as u64);
        let probe = s.r_probe / r;
        let t = scaling_invariance_test(&setup, r, s.exponent, probe, c.replicas, seed, mode)?;
        pass &= t.pass;
        lines.push(format!(
            "R = {r}: means {:.5} vs {:.5}, KS p = {:.3}: {}",
            t.mean_rescaled,
            t.mean_direct,
            t.ks.p_value,
            if t.pass { "PASS" } else { "FAIL" }
        ));
        tests.push(t);
        if s.negative_control {
            let ctl = scaling_invariance_test(&setup, r, 0.0, probe, c.replicas, seed, mode)?;
            // the control passes when the wrong exponent is rejected
            pass &= !ctl.pass;
            lines.push(format!(
                "R = {r} control (exponent 0): KS p = {:.2e}: {}",
                ctl.ks.p_value,
                if ctl.pass { "NOT REJECTED" } else { "rejected" }
            ));
            controls.push(ctl);
        }
    }
    w.report(prep, json!({ "kind": c.kind, "tests": tests, "controls": controls, "pass": pass }))?;
    Ok((pass, lines))
}

fn oracle(prep: &Prepared, w: &mut Writer, mode: ExecMode) -> Result<(bool, Vec<String>)> {
    let c = &prep.config;
    let o = &c.oracle;
    let points: Vec<SpaceTimePoint> = o.points.iter().map(|p| SpaceTimePoint::new(p[0], p[1])).collect();
    let pairs: Vec<(usize, usize)> = o.pairs.iter().map(|p| (p[0], p[1])).collect();
    let a0 = c.nonlinearity.lambda.unwrap_or(1.0);
    let (rows, table) = linear_oracle_comparison(&prep.grid, a0, &points, &pairs, c.replicas, c.seed, mode)?;
    w.table("samples.csv", &table)?;
    let mut f = w.create("comparisons.csv")?;
    write_comparisons_csv(&rows, &mut f)?;
    f.flush()?;
    let mut pass = true;
    let mut lines = Vec::new();
    let mut checked = Vec::new();
    for r in &rows {
        let ok = r.relative_error() <= o.tolerance;
        pass &= ok;
        lines.push(format!(
            "{:<14} exact {:.5} simulated {:.5} rel err {:.4}: {}",
            r.id,
            r.analytic,
            r.empirical,
            r.relative_error(),
            if ok { "PASS" } else { "FAIL" }
        ));
        checked.push(json!({ "comparison": r, "relative_error": r.relative_error(), "pass": ok }));
    }
    w.report(prep, json!({ "kind": c.kind, "tolerance": o.tolerance, "comparisons": checked, "pass": pass }))?;
    Ok((pass, lines))
}

fn deterministic(prep: &Prepared, w: &mut Writer, mode: ExecMode) -> Result<(bool, Vec<String>)> {
    let c = &prep.config;
    let d = &c.deterministic;
    let setup = DeterministicSetup {
        width: c.grid.width,
        nx: d.nx,
        lambda: d.lambda,
        cell: d.cell,
        coefficient: d.coefficient,
    };
    let mut reports = vec![verify_p3(&setup, d.cases, c.seed, mode)?];
    reports.extend(verify_p4(&setup, d.cases, c.seed, mode)?);
    let p5_setup = DeterministicSetup {
        nx: d.p5_nx,
        cell: d.p5_cell,
        ..setup
    };
    reports.push(verify_p5(&p5_setup, d.cases, &d.p5_scales, c.seed, mode)?);
    if d.sensitivity {
        let s = SensitivitySetup {
            width: d.sensitivity_width,
            nx: d.sensitivity_nx,
            pi: prep.pi.clone(),
            solver: prep.solver,
            bump: d.bump,
            eps: d.eps,
            scales: d.sensitivity_scales.clone(),
            seeds: d.sensitivity_seeds,
        };
        reports.push(sensitivity_experiment(&s, c.seed, mode)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let lines = reports.iter().map(report_line).collect();
    w.report(prep, json!({ "kind": c.kind, "reports": reports, "pass": pass }))?;
    Ok((pass, lines))
}
