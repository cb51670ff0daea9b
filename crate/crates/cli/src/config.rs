//! Experiment configuration files (TOML).

use std::fmt;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use shelab::analysis::deterministic::CoefficientKind;
use shelab::analysis::sensitivity::Bump;
use shelab::estimators::RESOLUTION_CELLS;
use shelab::oracle::SpaceTimePoint;
use shelab::solver::{SolverConfig, WarmStart, MAX_PICARD};
use shelab::{GridSpec, Nonlinearity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Simulate,
    Ensemble,
    VerifyDeterministic,
    OracleCompare,
    ScalingTest,
    HolderFit,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::Simulate,
        Kind::Ensemble,
        Kind::VerifyDeterministic,
        Kind::OracleCompare,
        Kind::ScalingTest,
        Kind::HolderFit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Simulate => "simulate",
            Kind::Ensemble => "ensemble",
            Kind::VerifyDeterministic => "verify-deterministic",
            Kind::OracleCompare => "oracle-compare",
            Kind::ScalingTest => "scaling-test",
            Kind::HolderFit => "holder-fit",
        }
    }

    pub fn parse(name: &str) -> Result<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == name).ok_or_else(|| {
            let valid: Vec<&str> = Kind::ALL.iter().map(|k| k.name()).collect();
            anyhow!("unknown experiment kind `{name}`; valid kinds: {}", valid.join(", "))
        })
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_nx")]
    pub nx: usize,
    /// Defaults to `dx^2 / 2`.
    pub dt: Option<f64>,
    /// Length of the sampled window `(-window, 0)`.
    #[serde(default = "default_window")]
    pub window: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            width: default_width(),
            nx: default_nx(),
            dt: None,
            window: default_window(),
        }
    }
}

fn default_width() -> f64 {
    16.0
}
fn default_nx() -> usize {
    512
}
fn default_window() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FluxKind {
    /// `pi(u) = lambda u`.
    #[default]
    Linear,
    Benchmark,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct NonlinearityConfig {
    #[serde(default)]
    pub kind: FluxKind,
    /// Slope of the linear flux (default 1) or ellipticity of the benchmark
    /// flux (default 0.5).
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default = "default_picard")]
    pub picard_iters: usize,
    pub warm_start: Option<WarmStart>,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            picard_iters: default_picard(),
            warm_start: None,
        }
    }
}

fn default_picard() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolderSection {
    /// Accepted slope interval.
    #[serde(default = "default_band")]
    pub band: [f64; 2],
}

impl Default for HolderSection {
    fn default() -> Self {
        Self { band: default_band() }
    }
}

fn default_band() -> [f64; 2] {
    [0.40, 0.55]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSection {
    #[serde(default = "default_factors")]
    pub factors: Vec<f64>,
    /// Probe scale on the original lattice; the rescaled lattice is probed
    /// at `r_probe / R`.
    #[serde(default = "default_r_probe")]
    pub r_probe: f64,
    #[serde(default = "default_exponent")]
    pub exponent: f64,
    #[serde(default = "yes")]
    pub negative_control: bool,
}

impl Default for ScalingSection {
    fn default() -> Self {
        Self {
            factors: default_factors(),
            r_probe: default_r_probe(),
            exponent: default_exponent(),
            negative_control: true,
        }
    }
}

fn default_factors() -> Vec<f64> {
    vec![2.0, 4.0]
}
fn default_r_probe() -> f64 {
    1.0
}
fn default_exponent() -> f64 {
    0.5
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    /// Probe points `[t, x]` on the lattice.
    #[serde(default = "default_points")]
    pub points: Vec<[f64; 2]>,
    /// Index pairs into `points` whose covariance is compared.
    #[serde(default = "default_pairs")]
    pub pairs: Vec<[usize; 2]>,
    /// Accepted relative error.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            points: default_points(),
            pairs: default_pairs(),
            tolerance: default_tolerance(),
        }
    }
}

fn default_points() -> Vec<[f64; 2]> {
    vec![[0.0, 0.0], [-0.25, 0.0], [0.0, 0.5], [-0.5, -0.25], [-0.75, 1.0]]
}
fn default_pairs() -> Vec<[usize; 2]> {
    vec![[0, 1], [0, 2], [1, 3]]
}
fn default_tolerance() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeterministicSection {
    #[serde(default = "default_cases")]
    pub cases: usize,
    #[serde(default = "default_det_nx")]
    pub nx: usize,
    #[serde(default = "default_det_lambda")]
    pub lambda: f64,
    #[serde(default = "default_cell")]
    pub cell: f64,
    #[serde(default = "default_coefficient")]
    pub coefficient: CoefficientKind,
    /// Resolution of the equi-integrability check.
    #[serde(default = "default_p5_nx")]
    pub p5_nx: usize,
    #[serde(default = "default_p5_scales")]
    pub p5_scales: Vec<f64>,
    #[serde(default = "default_p5_cell")]
    pub p5_cell: f64,
    /// Also run the noise-sensitivity experiment.
    #[serde(default = "yes")]
    pub sensitivity: bool,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_sens_width")]
    pub sensitivity_width: f64,
    #[serde(default = "default_det_nx")]
    pub sensitivity_nx: usize,
    #[serde(default = "default_sens_scales")]
    pub sensitivity_scales: Vec<f64>,
    #[serde(default = "default_sens_seeds")]
    pub sensitivity_seeds: usize,
    #[serde(default)]
    pub bump: Bump,
}

impl Default for DeterministicSection {
    fn default() -> Self {
        Self {
            cases: default_cases(),
            nx: default_det_nx(),
            lambda: default_det_lambda(),
            cell: default_cell(),
            coefficient: default_coefficient(),
            p5_nx: default_p5_nx(),
            p5_scales: default_p5_scales(),
            p5_cell: default_p5_cell(),
            sensitivity: true,
            eps: default_eps(),
            sensitivity_width: default_sens_width(),
            sensitivity_nx: default_det_nx(),
            sensitivity_scales: default_sens_scales(),
            sensitivity_seeds: default_sens_seeds(),
            bump: Bump::default(),
        }
    }
}

fn default_cases() -> usize {
    20
}
fn default_det_nx() -> usize {
    256
}
fn default_det_lambda() -> f64 {
    0.5
}
fn default_cell() -> f64 {
    0.25
}
fn default_coefficient() -> CoefficientKind {
    CoefficientKind::Mixed
}
fn default_p5_nx() -> usize {
    1024
}
fn default_p5_scales() -> Vec<f64> {
    vec![1.0, 0.5, 0.25, 0.125]
}
fn default_p5_cell() -> f64 {
    1.0 / 16.0
}
fn default_eps() -> f64 {
    1e-3
}
fn default_sens_width() -> f64 {
    8.0
}
fn default_sens_scales() -> Vec<f64> {
    vec![1.0, 0.5, 0.25]
}
fn default_sens_seeds() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaSection {
    #[serde(default = "default_shift_scales")]
    pub shift_scales: Vec<f64>,
    #[serde(default = "default_split_scales")]
    pub split_scales: Vec<f64>,
}

fn default_shift_scales() -> Vec<f64> {
    vec![0.25, 0.125, 0.0625]
}
fn default_split_scales() -> Vec<f64> {
    vec![0.5, 0.25]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    /// Exponent `q` of the exponential-moment certificate of every statistic.
    pub certificate_q: Option<f64>,
    /// Also evaluate the shift, bulk and space-time-split checks.
    pub lemmas: Option<LemmaSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    /// Mass time `T`.
    #[serde(default = "default_mass")]
    pub mass: f64,
    /// Defaults to `5 T`.
    pub burn_in: Option<f64>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub nonlinearity: NonlinearityConfig,
    #[serde(default)]
    pub solver: SolverSection,
    /// Probe scales; defaults to the dyadic scales from 1/2 down to `8 dx`.
    #[serde(default)]
    pub scales: Vec<f64>,
    /// Hölder exponents.
    #[serde(default)]
    pub alphas: Vec<f64>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub holder: HolderSection,
    #[serde(default)]
    pub scaling: ScalingSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub deterministic: DeterministicSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
}

fn default_replicas() -> usize {
    100
}
fn default_mass() -> f64 {
    1.0
}

/// A configuration after defaults have been filled in and cross-checks run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: ExperimentConfig,
    pub grid: GridSpec,
    pub pi: Nonlinearity,
    pub solver: SolverConfig,
    pub warnings: Vec<String>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow!("config error: {}", e.message().trim()).context(render_span(text, e.span())))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn dx(&self) -> f64 {
        self.grid.width / self.grid.nx as f64
    }
}

fn render_span(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(s) => {
            let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
            format!("at line {line}")
        }
        None => "in config".into(),
    }
}

fn named(field: &str, msg: impl fmt::Display) -> anyhow::Error {
    anyhow!("config error: `{field}` {msg}")
}

fn check_positive(field: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(named(field, format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

fn check_scale(field: &str, r: f64, dx: f64) -> Result<()> {
    check_positive(field, r)?;
    let floor = RESOLUTION_CELLS * dx;
    if r < floor * (1.0 - 1e-9) {
        bail!(named(field, format!("r = {r} is below the resolution floor 8 dx = {floor}")));
    }
    Ok(())
}

fn default_scales(dx: f64, r_max: f64) -> Vec<f64> {
    shelab::estimators::dyadic_scales(r_max, RESOLUTION_CELLS * dx)
}

/// Fill defaults, build the lattice, flux and solver settings and run the
/// cross-checks. Errors name the offending field.
pub fn prepare(mut config: ExperimentConfig) -> Result<Prepared> {
    let mut warnings = Vec::new();
    if config.replicas == 0 {
        bail!(named("replicas", "must be at least 1"));
    }
    check_positive("grid.width", config.grid.width)?;
    if config.grid.nx < 16 || config.grid.nx % 2 != 0 {
        bail!(named("grid.nx", format!("must be even and at least 16, got {}", config.grid.nx)));
    }
    check_positive("grid.window", config.grid.window)?;
    if config.kind == Kind::OracleCompare && (config.grid.window - 1.0).abs() > 1e-12 {
        bail!(named("grid.window", "must be 1 for oracle-compare (the linear solution starts at t = -1)"));
    }
    let dx = config.dx();
    let dt = config.grid.dt.unwrap_or(0.5 * dx * dx);
    check_positive("grid.dt", dt)?;
    if dt > dx * dx {
        warnings.push(format!(
            "warning: grid.dt = {dt} exceeds dx^2 = {}; time-stepping error dominates",
            dx * dx
        ));
    }
    let steps = config.grid.window / dt;
    if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
        bail!(named("grid.dt", format!("must divide the window {} into whole steps", config.grid.window)));
    }
    config.grid.dt = Some(dt);
    let grid = GridSpec::from_step(config.grid.width, config.grid.nx, -config.grid.window, dt, steps.round() as usize)
        .map_err(|e| named("grid", e))?;

    let lambda = match (config.nonlinearity.kind, config.nonlinearity.lambda) {
        (FluxKind::Linear, l) => l.unwrap_or(1.0),
        (FluxKind::Benchmark, l) => l.unwrap_or(0.5),
    };
    config.nonlinearity.lambda = Some(lambda);
    let pi = match config.nonlinearity.kind {
        FluxKind::Linear => Nonlinearity::linear(lambda),
        FluxKind::Benchmark => Nonlinearity::benchmark(lambda),
    }
    .map_err(|e| named("nonlinearity.lambda", e))?;

    check_positive("mass", config.mass)?;
    let burn_in = config.burn_in.unwrap_or(5.0 * config.mass);
    config.burn_in = Some(burn_in);
    let needs_stationary = !matches!(config.kind, Kind::OracleCompare);
    if needs_stationary && !(burn_in >= 5.0 * config.mass) {
        bail!(named("burn_in", format!("must be at least 5 T = {}, got {burn_in}", 5.0 * config.mass)));
    }
    if config.solver.picard_iters > MAX_PICARD {
        bail!(named("solver.picard_iters", format!("must be at most {MAX_PICARD}")));
    }
    let solver = SolverConfig {
        picard_iters: config.solver.picard_iters,
        mass: config.mass,
        burn_in,
        warm_start: config.solver.warm_start,
        ..SolverConfig::default()
    };
    solver.validate().map_err(|e| named("solver", e))?;

    if config.scales.is_empty() {
        let r_max = match config.kind {
            Kind::HolderFit => 0.5,
            _ => config.grid.window.sqrt().min(1.0),
        };
        config.scales = default_scales(dx, r_max);
    }
    for &r in &config.scales {
        check_scale("scales", r, dx)?;
        if r * r > config.grid.window * (1.0 + 1e-9) {
            bail!(named("scales", format!("r = {r} needs a window of at least r^2 = {}", r * r)));
        }
    }
    for &a in &config.alphas {
        if !(a > 0.0 && a < 1.0) {
            bail!(named("alphas", format!("must lie in (0, 1), got {a}")));
        }
    }
    match config.kind {
        Kind::HolderFit => {
            let [lo, hi] = config.holder.band;
            if !(lo < hi) {
                bail!(named("holder.band", "must be an increasing pair"));
            }
            if config.scales.len() < 2 {
                bail!(named("scales", "a slope needs at least two scales; raise grid.nx"));
            }
            shelab::analysis::regression::check_dyadic_scales(&config.scales, dx).map_err(|e| named("scales", e))?;
        }
        Kind::ScalingTest => {
            if config.scaling.factors.is_empty() {
                bail!(named("scaling.factors", "must list at least one factor"));
            }
            for &r in &config.scaling.factors {
                check_positive("scaling.factors", r)?;
            }
            check_scale("scaling.r_probe", config.scaling.r_probe, dx)?;
        }
        Kind::OracleCompare => {
            if !matches!(config.nonlinearity.kind, FluxKind::Linear) {
                bail!(named("nonlinearity.kind", "oracle-compare needs the linear flux"));
            }
            check_positive("oracle.tolerance", config.oracle.tolerance)?;
            for p in &config.oracle.points {
                let point = SpaceTimePoint::new(p[0], p[1]);
                if grid.slice_of(point.t).is_none() {
                    bail!(named("oracle.points", format!("t = {} is not a lattice time", p[0])));
                }
                let j = grid.column_of(point.x);
                if (grid.x(j) - point.x).abs() > 1e-9 {
                    bail!(named("oracle.points", format!("x = {} is not a lattice column", p[1])));
                }
            }
            if let Some(p) = config.oracle.pairs.iter().find(|p| p[0] >= config.oracle.points.len() || p[1] >= config.oracle.points.len()) {
                bail!(named("oracle.pairs", format!("{p:?} refers to a missing point")));
            }
        }
        Kind::VerifyDeterministic => {
            let d = &config.deterministic;
            if d.cases < 2 {
                bail!(named("deterministic.cases", "must be at least 2"));
            }
            check_positive("deterministic.eps", d.eps)?;
            let p5_dx = config.grid.width / d.p5_nx as f64;
            if d.p5_scales.len() < 4 {
                bail!(named("deterministic.p5_scales", "needs at least four scales"));
            }
            for &r in &d.p5_scales {
                check_scale("deterministic.p5_scales", r, p5_dx)?;
            }
            let s_dx = d.sensitivity_width / d.sensitivity_nx as f64;
            for &r in &d.sensitivity_scales {
                check_scale("deterministic.sensitivity_scales", r, s_dx)?;
            }
        }
        Kind::Ensemble => {
            if let Some(l) = &config.ensemble.lemmas {
                if (config.grid.window - 1.0).abs() > 1e-12 {
                    bail!(named("grid.window", "the lemma checks need the window (-1, 0)"));
                }
                for &r in &l.split_scales {
                    check_scale("ensemble.lemmas.split_scales", r, dx)?;
                }
            }
        }
        Kind::Simulate => {}
    }
    Ok(Prepared {
        config,
        grid,
        pi,
        solver,
        warnings,
    })
}

/// Read and prepare a config file.
pub fn load(path: &std::path::Path) -> Result<Prepared> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    prepare(ExperimentConfig::from_toml(&text)?)
}
