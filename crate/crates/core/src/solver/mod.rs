//! Time integrators for the periodic lattice.
//!
//! All equations share the conservative operator `D2(a u)`, where `D2` is the
//! periodic second difference of the cellwise product. A linearly-implicit
//! step solves
//!
//! ```text
//! (1/dt + 1/T) u' - D2(a u') = rhs
//! ```
//!
//! for the new slice `u'`. Substituting `y = a u'` turns this into the
//! symmetric positive definite cyclic system `(c dx^2 / a_j + 2) y_j - y_{j-1}
//! - y_{j+1} = dx^2 rhs_j`, which [`tridiag::CyclicFactor`] solves; `u' = y / a`.

pub mod tridiag;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{fill_noise_row, Field, GridSpec, NoiseField};
use crate::nonlinearity::Nonlinearity;
use tridiag::CyclicFactor;

/// Hard cap on extra fixed-point corrections per step.
pub const MAX_PICARD: usize = 5;
/// Solutions with `|u|` above this are reported as diverged.
const BLOWUP: f64 = 1e12;
/// Steps between residual checks.
const RESIDUAL_EVERY: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    LinearlyImplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Extra corrections per step that re-freeze `a = pi'(u)` at the latest
    /// iterate (a Newton iteration on the backward Euler step).
    pub picard_iters: usize,
    /// Mass time `T`; `f64::INFINITY` drops the massive term.
    pub mass: f64,
    /// Relaxation time before the returned window.
    pub burn_in: f64,
    pub scheme: Scheme,
    /// Run the early part of the burn-in on a coarser lattice.
    #[serde(default)]
    pub warm_start: Option<WarmStart>,
}

/// Two-level burn-in: the first `burn_in - fine_time` units run on the
/// lattice coarsened by `coarsen` in space (and `coarsen^2` in time, keeping
/// `dt/dx^2`), the state is interpolated linearly onto the working lattice,
/// and the last `fine_time` units run there. Slow modes, which set the
/// burn-in length, are resolved on the coarse lattice; the modes it misses
/// relax within `fine_time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarmStart {
    pub coarsen: usize,
    pub fine_time: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            picard_iters: 1,
            mass: 1.0,
            burn_in: 10.0,
            scheme: Scheme::LinearlyImplicit,
            warm_start: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.picard_iters > MAX_PICARD {
            return Err(invalid(
                "picard_iters",
                format!("at most {MAX_PICARD}, got {}", self.picard_iters),
            ));
        }
        if !(self.burn_in >= 0.0) || !self.burn_in.is_finite() {
            return Err(invalid("burn_in", "must be finite and non-negative"));
        }
        if !(self.mass > 0.0) {
            return Err(invalid("mass", "T must be positive (or infinite)"));
        }
        if let Some(w) = self.warm_start {
            if w.coarsen < 2 || !w.coarsen.is_power_of_two() {
                return Err(invalid("warm_start.coarsen", "must be a power of two >= 2"));
            }
            if !(w.fine_time >= 0.0 && w.fine_time <= self.burn_in) {
                return Err(invalid("warm_start.fine_time", "must lie in [0, burn_in]"));
            }
        }
        Ok(())
    }

    fn inv_mass(&self) -> f64 {
        if self.mass.is_infinite() {
            0.0
        } else {
            1.0 / self.mass
        }
    }
}

/// Diagnostics gathered while stepping.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SolverDiagnostics {
    pub steps: usize,
    pub max_abs_u: f64,
    /// Largest scaled residual `|A y - b|_inf / (1 + |b|_inf)` over checked steps.
    pub max_residual: f64,
    pub residual_checks: usize,
}

/// Periodic second difference `out_j += scale (v_{j-1} - 2 v_j + v_{j+1})`.
#[inline]
fn add_d2(v: &[f64], scale: f64, out: &mut [f64]) {
    let n = v.len();
    out[0] += scale * (v[n - 1] - 2.0 * v[0] + v[1]);
    for j in 1..n - 1 {
        out[j] += scale * (v[j - 1] - 2.0 * v[j] + v[j + 1]);
    }
    out[n - 1] += scale * (v[n - 2] - 2.0 * v[n - 1] + v[0]);
}

enum Coefficient {
    Flux(Nonlinearity),
    Constant,
    Given,
}

/// One-slice-at-a-time integrator shared by every equation in the crate.
pub struct Stepper {
    dt: f64,
    dx2: f64,
    /// `1/dt + 1/T`.
    c: f64,
    picard: usize,
    coefficient: Coefficient,
    factor: Option<CyclicFactor>,
    a: Vec<f64>,
    pi: Vec<f64>,
    corr: Vec<f64>,
    rhs: Vec<f64>,
    scaled: Vec<f64>,
    diag: Vec<f64>,
    y: Vec<f64>,
    next: Vec<f64>,
    diagnostics: SolverDiagnostics,
}

impl Stepper {
    fn with_coefficient(
        grid: &GridSpec,
        inv_mass: f64,
        picard: usize,
        coefficient: Coefficient,
    ) -> Self {
        let nx = grid.nx();
        let dx = grid.dx();
        Self {
            dt: grid.dt(),
            dx2: dx * dx,
            c: 1.0 / grid.dt() + inv_mass,
            picard,
            coefficient,
            factor: None,
            a: vec![0.0; nx],
            pi: vec![0.0; nx],
            corr: vec![0.0; nx],
            rhs: vec![0.0; nx],
            scaled: vec![0.0; nx],
            diag: vec![0.0; nx],
            y: vec![0.0; nx],
            next: vec![0.0; nx],
            diagnostics: SolverDiagnostics::default(),
        }
    }

    /// Stepper for `T^-1 u + du/dt - D2 pi(u) = forcing`.
    pub fn nonlinear(grid: &GridSpec, pi: &Nonlinearity, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        if pi.is_linear() {
            // corrections vanish identically, so one cached factorization suffices
            return Self::constant(grid, pi.deriv(0.0), config.inv_mass());
        }
        Ok(Self::with_coefficient(
            grid,
            config.inv_mass(),
            config.picard_iters,
            Coefficient::Flux(pi.clone()),
        ))
    }

    /// Stepper for `du/dt - a0 D2 u = forcing` (no mass).
    pub fn linear_constant(grid: &GridSpec, a0: f64) -> Result<Self> {
        Self::constant(grid, a0, 0.0)
    }

    fn constant(grid: &GridSpec, a0: f64, inv_mass: f64) -> Result<Self> {
        if !(a0 > 0.0 && a0 <= 1.0) {
            return Err(invalid("a0", format!("must lie in (0, 1], got {a0}")));
        }
        let mut s = Self::with_coefficient(grid, inv_mass, 0, Coefficient::Constant);
        s.a.fill(a0);
        s.build_diag();
        s.factor = Some(CyclicFactor::new(&s.diag).map_err(|e| Error::SolveFailure {
            step: 0,
            reason: e.to_string(),
        })?);
        Ok(s)
    }

    /// Stepper for `dw/dt - D2(a w) = rhs` with a caller-supplied coefficient
    /// row per step (see [`Stepper::step_with_coefficient`]).
    pub fn rough(grid: &GridSpec) -> Self {
        Self::with_coefficient(grid, 0.0, 0, Coefficient::Given)
    }

    pub fn diagnostics(&self) -> &SolverDiagnostics {
        &self.diagnostics
    }

    fn build_diag(&mut self) {
        let k = self.c * self.dx2;
        for (d, &a) in self.diag.iter_mut().zip(&self.a) {
            *d = k / a + 2.0;
        }
    }

    /// Solve with the current `a` and `rhs` into `next`.
    fn solve_current(&mut self, refactor: bool) -> Result<()> {
        let step = self.diagnostics.steps;
        if refactor {
            self.build_diag();
            let res = match self.factor.as_mut() {
                Some(f) => f.refactor(&self.diag),
                None => CyclicFactor::new(&self.diag).map(|f| {
                    self.factor = Some(f);
                }),
            };
            res.map_err(|e| Error::SolveFailure {
                step,
                reason: e.to_string(),
            })?;
        }
        let dx2 = self.dx2;
        for (s, r) in self.scaled.iter_mut().zip(&self.rhs) {
            *s = r * dx2;
        }
        let factor = self.factor.as_ref().expect("factorized");
        factor.solve(&self.scaled, &mut self.y);
        if step % RESIDUAL_EVERY == 0 {
            let res = tridiag::residual(&self.diag, &self.y, &self.scaled);
            let scale = 1.0 + self.scaled.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            self.diagnostics.max_residual = self.diagnostics.max_residual.max(res / scale);
            self.diagnostics.residual_checks += 1;
        }
        for ((n, y), a) in self.next.iter_mut().zip(&self.y).zip(&self.a) {
            *n = y / a;
        }
        Ok(())
    }

    fn finish(&mut self, u: &mut [f64]) -> Result<()> {
        let step = self.diagnostics.steps;
        let mut max_abs = 0.0_f64;
        for v in &self.next {
            max_abs = max_abs.max(v.abs());
        }
        if !max_abs.is_finite() || max_abs > BLOWUP {
            return Err(Error::Diverged { step, max_abs });
        }
        u.copy_from_slice(&self.next);
        self.diagnostics.max_abs_u = self.diagnostics.max_abs_u.max(max_abs);
        self.diagnostics.steps += 1;
        Ok(())
    }

    /// Advance `u` by one step with forcing row `forcing` (constant over the
    /// step).
    pub fn step(&mut self, u: &mut [f64], forcing: &[f64]) -> Result<()> {
        let inv_dt = 1.0 / self.dt;
        match &self.coefficient {
            Coefficient::Constant => {
                for ((r, &x), &f) in self.rhs.iter_mut().zip(u.iter()).zip(forcing) {
                    *r = x * inv_dt + f;
                }
                self.solve_current(false)?;
            }
            Coefficient::Flux(_) => {
                for k in 0..=self.picard {
                    let Coefficient::Flux(pi) = &self.coefficient else {
                        unreachable!()
                    };
                    let guess: &[f64] = if k == 0 { u } else { &self.next };
                    pi.eval_deriv_into(guess, &mut self.pi, &mut self.a);
                    for (((c, &p), &a), &g) in
                        self.corr.iter_mut().zip(&self.pi).zip(&self.a).zip(guess)
                    {
                        *c = p - a * g;
                    }
                    for (r, &x) in self.rhs.iter_mut().zip(u.iter()) {
                        *r = x * inv_dt;
                    }
                    add_d2(&self.corr, 1.0 / self.dx2, &mut self.rhs);
                    for (r, &f) in self.rhs.iter_mut().zip(forcing) {
                        *r += f;
                    }
                    self.solve_current(true)?;
                }
            }
            Coefficient::Given => {
                return Err(invalid("coefficient", "rough stepper needs step_with_coefficient"));
            }
        }
        self.finish(u)
    }

    /// Advance `dw/dt - D2(a w) = dh/dt + D2 g` by one step, with `a` frozen
    /// over the step, `dh/dt` the step increment of `h` and `g` taken at the
    /// new time.
    pub fn step_with_coefficient(
        &mut self,
        w: &mut [f64],
        a: &[f64],
        h_old: &[f64],
        h_new: &[f64],
        g_new: &[f64],
    ) -> Result<()> {
        let inv_dt = 1.0 / self.dt;
        self.a.copy_from_slice(a);
        for (((r, &x), &h0), &h1) in self.rhs.iter_mut().zip(w.iter()).zip(h_old).zip(h_new) {
            *r = x * inv_dt + (h1 - h0) * inv_dt;
        }
        add_d2(g_new, 1.0 / self.dx2, &mut self.rhs);
        self.solve_current(true)?;
        self.finish(w)
    }
}

fn check_initial(grid: &GridSpec, u0: &[f64]) -> Result<()> {
    if u0.len() != grid.nx() {
        return Err(Error::GridMismatch(format!(
            "initial slice has {} values, grid has nx = {}",
            u0.len(),
            grid.nx()
        )));
    }
    if u0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial slice".into()));
    }
    Ok(())
}

fn run_trajectory(
    stepper: &mut Stepper,
    noise: &NoiseField,
    u0: &[f64],
) -> Result<Field> {
    let grid = *noise.grid();
    check_initial(&grid, u0)?;
    let mut field = Field::zeros(grid);
    let mut u = u0.to_vec();
    field.slice_mut(0).copy_from_slice(&u);
    for n in 0..grid.nt() {
        stepper.step(&mut u, noise.row(n))?;
        field.slice_mut(n + 1).copy_from_slice(&u);
    }
    Ok(field)
}

/// Integrate `T^-1 u + du/dt - D2 pi(u) = xi` from `u0` over the noise
/// lattice. `mass = f64::INFINITY` drops the massive term.
pub fn integrate_nonlinear(
    grid: &GridSpec,
    pi: &Nonlinearity,
    mass: f64,
    noise: &NoiseField,
    u0: &[f64],
) -> Result<Field> {
    let config = SolverConfig {
        mass,
        ..SolverConfig::default()
    };
    integrate_nonlinear_with(grid, pi, &config, noise, u0).map(|(f, _)| f)
}

/// As [`integrate_nonlinear`] with explicit solver settings; also returns
/// the diagnostics.
pub fn integrate_nonlinear_with(
    grid: &GridSpec,
    pi: &Nonlinearity,
    config: &SolverConfig,
    noise: &NoiseField,
    u0: &[f64],
) -> Result<(Field, SolverDiagnostics)> {
    grid.ensure_same(noise.grid(), "noise")?;
    let mut stepper = Stepper::nonlinear(grid, pi, config)?;
    let field = run_trajectory(&mut stepper, noise, u0)?;
    Ok((field, stepper.diagnostics))
}

/// Integrate `dg/dt - a0 D2 g = xi` (exact tridiagonal solve, factorized
/// once).
pub fn integrate_linear_constant(
    grid: &GridSpec,
    a0: f64,
    noise: &NoiseField,
    u0: &[f64],
) -> Result<Field> {
    grid.ensure_same(noise.grid(), "noise")?;
    let mut stepper = Stepper::linear_constant(grid, a0)?;
    run_trajectory(&mut stepper, noise, u0)
}

/// Coefficient field `lambda <= a <= 1`, one value per space-time cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RoughCoefficient {
    grid: GridSpec,
    values: Vec<f64>,
    lambda: f64,
}

impl RoughCoefficient {
    pub fn new(grid: GridSpec, values: Vec<f64>, lambda: f64) -> Result<Self> {
        if values.len() != grid.nt() * grid.nx() {
            return Err(Error::GridMismatch(format!(
                "coefficient has {} cells, grid has {}",
                values.len(),
                grid.nt() * grid.nx()
            )));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(invalid("lambda", format!("must lie in (0, 1], got {lambda}")));
        }
        if let Some(bad) = values.iter().find(|&&a| !(a >= lambda && a <= 1.0)) {
            return Err(invalid(
                "a",
                format!("coefficient value {bad} outside [{lambda}, 1]"),
            ));
        }
        Ok(Self {
            grid,
            values,
            lambda,
        })
    }

    /// Cell `(n, j)` holds `f(t_n + dt/2, x_j)` (step midpoint).
    pub fn from_fn(grid: GridSpec, lambda: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let half = 0.5 * grid.dt();
        let mut values = Vec::with_capacity(grid.nt() * grid.nx());
        for n in 0..grid.nt() {
            let t = grid.t(n) + half;
            values.extend((0..grid.nx()).map(|j| f(t, grid.x(j))));
        }
        Self::new(grid, values, lambda)
    }

    pub fn constant(grid: GridSpec, a0: f64) -> Result<Self> {
        Self::new(grid, vec![a0; grid.nt() * grid.nx()], a0)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let nx = self.grid.nx();
        &self.values[n * nx..(n + 1) * nx]
    }
}

/// Integrate `dw/dt - D2(a w) = dh/dt + D2 g` from `w0`.
pub fn integrate_rough(
    a: &RoughCoefficient,
    g_rhs: &Field,
    h_rhs: &Field,
    w0: &[f64],
) -> Result<Field> {
    let grid = *a.grid();
    grid.ensure_same(g_rhs.grid(), "g")?;
    grid.ensure_same(h_rhs.grid(), "h")?;
    check_initial(&grid, w0)?;
    let mut stepper = Stepper::rough(&grid);
    let mut field = Field::zeros(grid);
    let mut w = w0.to_vec();
    field.slice_mut(0).copy_from_slice(&w);
    for n in 0..grid.nt() {
        stepper.step_with_coefficient(
            &mut w,
            a.row(n),
            h_rhs.slice(n),
            h_rhs.slice(n + 1),
            g_rhs.slice(n + 1),
        )?;
        field.slice_mut(n + 1).copy_from_slice(&w);
    }
    Ok(field)
}

/// Discrete resolvent `(1 - D2)^-1 f` on the periodic lattice, the operator
/// behind every `H^-1`-type quantity in the crate.
pub fn helmholtz_inverse(f: &[f64], dx: f64) -> Result<Vec<f64>> {
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("helmholtz right-hand side".into()));
    }
    let dx2 = dx * dx;
    let diag = vec![dx2 + 2.0; f.len()];
    let factor = CyclicFactor::new(&diag).map_err(|e| Error::SolveFailure {
        step: 0,
        reason: e.to_string(),
    })?;
    let rhs: Vec<f64> = f.iter().map(|v| v * dx2).collect();
    let mut out = vec![0.0; f.len()];
    factor.solve(&rhs, &mut out);
    Ok(out)
}

/// Reusable resolvent for repeated application on one lattice.
pub struct Helmholtz {
    factor: CyclicFactor,
    dx2: f64,
    scratch: Vec<f64>,
}

impl Helmholtz {
    pub fn new(nx: usize, dx: f64) -> Result<Self> {
        let dx2 = dx * dx;
        let factor = CyclicFactor::new(&vec![dx2 + 2.0; nx]).map_err(|e| Error::SolveFailure {
            step: 0,
            reason: e.to_string(),
        })?;
        Ok(Self {
            factor,
            dx2,
            scratch: vec![0.0; nx],
        })
    }

    /// `sum_j f_j ((1 - D2)^-1 f)_j dx`.
    pub fn quadratic_form(&mut self, f: &[f64], out: &mut [f64]) -> f64 {
        for (s, v) in self.scratch.iter_mut().zip(f) {
            *s = v * self.dx2;
        }
        self.factor.solve(&self.scratch, out);
        f.iter().zip(out.iter()).map(|(a, b)| a * b).sum::<f64>() * self.dx2.sqrt()
    }
}

/// Sample of the (approximately) stationary solution on the window covered
/// by `grid`.
///
/// Integrates from `u = 0` at `grid.t_start() - burn_in` with noise keyed to
/// the absolute time lattice, and returns the restriction to the window.
pub fn sample_stationary(
    grid: &GridSpec,
    pi: &Nonlinearity,
    mass: f64,
    seed: u64,
    burn_in: f64,
) -> Result<Field> {
    let config = SolverConfig {
        mass,
        burn_in,
        ..SolverConfig::default()
    };
    sample_stationary_with(grid, pi, &config, seed).map(|(f, _)| f)
}

/// As [`sample_stationary`] with explicit solver settings.
pub fn sample_stationary_with(
    grid: &GridSpec,
    pi: &Nonlinearity,
    config: &SolverConfig,
    seed: u64,
) -> Result<(Field, SolverDiagnostics)> {
    check_stationary_config(config)?;
    let nx = grid.nx();
    let mut u = vec![0.0; nx];
    let mut row = vec![0.0; nx];
    let mut fine_burn = config.burn_in;
    if let Some(w) = config.warm_start {
        if nx % w.coarsen != 0 || nx / w.coarsen < 4 || (nx / w.coarsen) % 2 != 0 {
            return Err(invalid(
                "warm_start.coarsen",
                format!("{} does not divide nx = {nx} into an even lattice", w.coarsen),
            ));
        }
        let c = w.coarsen as f64;
        let coarse_dt = grid.dt() * c * c;
        let steps = ((config.burn_in - w.fine_time) / coarse_dt).round() as usize;
        let start = grid.t_start() - w.fine_time - steps as f64 * coarse_dt;
        if steps > 0 {
            let coarse = GridSpec::from_step(grid.width(), nx / w.coarsen, start, coarse_dt, steps)?;
            let coarse_u = run_burn_in(&coarse, pi, config, coarse_seed(seed, w.coarsen), steps, &vec![0.0; coarse.nx()])?;
            prolong(&coarse_u, w.coarsen, &mut u);
        }
        fine_burn = w.fine_time;
    }
    let burn_steps = (fine_burn / grid.dt()).round() as usize;
    let mut stepper = Stepper::nonlinear(grid, pi, config)?;
    let std_dev = grid.cell_volume().sqrt().recip();
    let first_key = grid.time_key(0) - burn_steps as i64;
    for key in first_key..grid.time_key(0) {
        fill_noise_row(seed, key, nx, std_dev, &mut row);
        stepper.step(&mut u, &row)?;
    }
    let mut field = Field::zeros(*grid);
    field.slice_mut(0).copy_from_slice(&u);
    for n in 0..grid.nt() {
        fill_noise_row(seed, grid.time_key(n), nx, std_dev, &mut row);
        stepper.step(&mut u, &row)?;
        field.slice_mut(n + 1).copy_from_slice(&u);
    }
    Ok((field, stepper.diagnostics))
}

fn coarse_seed(seed: u64, coarsen: usize) -> u64 {
    crate::grid::replica_seed(seed ^ 0xC0A2_5E00, coarsen as u64)
}

/// Run `steps` steps on `grid` from `u0` and return the final slice.
fn run_burn_in(
    grid: &GridSpec,
    pi: &Nonlinearity,
    config: &SolverConfig,
    seed: u64,
    steps: usize,
    u0: &[f64],
) -> Result<Vec<f64>> {
    let mut stepper = Stepper::nonlinear(grid, pi, config)?;
    let nx = grid.nx();
    let std_dev = grid.cell_volume().sqrt().recip();
    let mut u = u0.to_vec();
    let mut row = vec![0.0; nx];
    for n in 0..steps {
        fill_noise_row(seed, grid.time_key(n), nx, std_dev, &mut row);
        stepper.step(&mut u, &row)?;
    }
    Ok(u)
}

/// Periodic linear interpolation from a lattice `factor` times coarser.
fn prolong(coarse: &[f64], factor: usize, fine: &mut [f64]) {
    let nc = coarse.len();
    for (i, chunk) in fine.chunks_exact_mut(factor).enumerate() {
        let a = coarse[i];
        let b = coarse[(i + 1) % nc];
        for (m, v) in chunk.iter_mut().enumerate() {
            let s = m as f64 / factor as f64;
            *v = (1.0 - s) * a + s * b;
        }
    }
}

pub(crate) fn check_stationary_config(config: &SolverConfig) -> Result<()> {
    config.validate()?;
    if !config.mass.is_finite() {
        return Err(invalid("mass", "stationary sampling needs a finite mass T"));
    }
    if config.burn_in < 5.0 * config.mass {
        return Err(invalid(
            "burn_in",
            format!("must be at least 5 T = {}", 5.0 * config.mass),
        ));
    }
    Ok(())
}
