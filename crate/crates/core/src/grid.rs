//! Space-time lattices, sampled fields and discrete space-time white noise.
//!
//! Space is the periodic interval `[-width/2, width/2)` split into `nx`
//! cells; the spatial origin `x = 0` is the lattice point `j = nx/2`. Time
//! runs from `t_start` in `nt` uniform steps. A [`Field`] stores the `nt + 1`
//! time slices `t_n = t_start + n dt`; a [`NoiseField`] stores one value per
//! space-time cell `[t_n, t_{n+1}) x [x_j, x_j + dx)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Uniform periodic space-time lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    width: f64,
    nx: usize,
    t_start: f64,
    dt: f64,
    nt: usize,
}

impl GridSpec {
    /// Lattice over `[t_start, t_end]` with `nt` steps.
    pub fn new(width: f64, nx: usize, t_start: f64, t_end: f64, nt: usize) -> Result<Self> {
        if nt == 0 {
            return Err(Error::InvalidGrid("nt must be positive".into()));
        }
        if !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "time range [{t_start}, {t_end}] is empty or not finite"
            )));
        }
        Self::from_step(width, nx, t_start, (t_end - t_start) / nt as f64, nt)
    }

    /// Lattice given by its step directly; this is the serialized form.
    pub fn from_step(width: f64, nx: usize, t_start: f64, dt: f64, nt: usize) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidGrid(format!("width must be positive, got {width}")));
        }
        if nx < 4 || nx % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "nx must be even and at least 4 (origin on the lattice), got {nx}"
            )));
        }
        if nt == 0 {
            return Err(Error::InvalidGrid("nt must be positive".into()));
        }
        if !(dt > 0.0) || !dt.is_finite() || !t_start.is_finite() {
            return Err(Error::InvalidGrid(format!("bad time step dt = {dt}")));
        }
        Ok(Self {
            width,
            nx,
            t_start,
            dt,
            nt,
        })
    }

    /// Lattice over `[t_start, t_end]` whose step is the largest `dt` with
    /// `dt <= ratio * dx^2` that divides the interval evenly.
    pub fn parabolic(width: f64, nx: usize, t_start: f64, t_end: f64, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0) {
            return Err(invalid("dt_ratio", "must be positive"));
        }
        let dx = width / nx as f64;
        let target = ratio * dx * dx;
        let steps = ((t_end - t_start) / target - 1e-9).ceil().max(1.0) as usize;
        Self::new(width, nx, t_start, t_end, steps)
    }

    pub fn width(&self) -> f64 {
        self.width
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn nt(&self) -> usize {
        self.nt
    }
    pub fn dx(&self) -> f64 {
        self.width / self.nx as f64
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn t_start(&self) -> f64 {
        self.t_start
    }
    pub fn t_end(&self) -> f64 {
        self.t_start + self.nt as f64 * self.dt
    }

    /// `dt / dx^2`; values above 1 are legal but inaccurate.
    pub fn anisotropy(&self) -> f64 {
        let dx = self.dx();
        self.dt / (dx * dx)
    }

    pub fn is_accurate(&self) -> bool {
        self.anisotropy() <= 1.0 + 1e-12
    }

    /// Spatial coordinate of lattice column `j`.
    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.width + j as f64 * self.dx()
    }

    /// Time of slice `n`.
    pub fn t(&self, n: usize) -> f64 {
        self.t_start + n as f64 * self.dt
    }

    /// Column holding `x = 0`.
    pub fn origin_column(&self) -> usize {
        self.nx / 2
    }

    /// Nearest column to `x`, wrapping periodically.
    pub fn column_of(&self, x: f64) -> usize {
        let k = ((x + 0.5 * self.width) / self.dx()).round() as i64;
        k.rem_euclid(self.nx as i64) as usize
    }

    /// Nearest slice to `t`, if it lies inside the lattice.
    pub fn slice_of(&self, t: f64) -> Option<usize> {
        let k = ((t - self.t_start) / self.dt).round();
        if k < 0.0 || k > self.nt as f64 {
            None
        } else {
            Some(k as usize)
        }
    }

    /// Absolute time index of slice `n` on the infinite lattice `dt * Z`.
    /// Noise is keyed by this index, so grids sharing `dt` share noise on
    /// overlapping cells.
    pub fn time_key(&self, n: usize) -> i64 {
        (self.t_start / self.dt).round() as i64 + n as i64
    }

    /// Cell volume `dt * dx`.
    pub fn cell_volume(&self) -> f64 {
        self.dt * self.dx()
    }

    /// Same lattice, new time range (same `dt`).
    pub fn with_time(&self, t_start: f64, nt: usize) -> Result<Self> {
        Self::from_step(self.width, self.nx, t_start, self.dt, nt)
    }

    /// The lattice in hatted variables `x = R x^`, `t = R^2 t^`.
    pub fn relabel(&self, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::NonAlignable(r));
        }
        Self::from_step(
            self.width / r,
            self.nx,
            self.t_start / (r * r),
            self.dt / (r * r),
            self.nt,
        )
    }

    pub(crate) fn ensure_same(&self, other: &GridSpec, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{what}: {self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// Real-valued function sampled on a [`GridSpec`], slice-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![0.0; (grid.nt + 1) * grid.nx],
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != (grid.nt + 1) * grid.nx {
            return Err(Error::GridMismatch(format!(
                "expected {} values, got {}",
                (grid.nt + 1) * grid.nx,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("field value #{i}")));
        }
        Ok(Self { grid, values })
    }

    /// Sample `f(t, x)` at every lattice point.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity((grid.nt + 1) * grid.nx);
        for n in 0..=grid.nt {
            let t = grid.t(n);
            values.extend((0..grid.nx).map(|j| f(t, grid.x(j))));
        }
        Self::from_values(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn num_slices(&self) -> usize {
        self.grid.nt + 1
    }

    pub fn slice(&self, n: usize) -> &[f64] {
        let nx = self.grid.nx;
        &self.values[n * nx..(n + 1) * nx]
    }

    pub(crate) fn slice_mut(&mut self, n: usize) -> &mut [f64] {
        let nx = self.grid.nx;
        &mut self.values[n * nx..(n + 1) * nx]
    }

    pub fn at(&self, n: usize, j: usize) -> f64 {
        self.values[n * self.grid.nx + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Slices `from..=to` as a field of their own.
    pub fn restrict(&self, from: usize, to: usize) -> Result<Field> {
        if from >= to || to > self.grid.nt {
            return Err(Error::InvalidGrid(format!(
                "slice range {from}..={to} outside 0..={}",
                self.grid.nt
            )));
        }
        let grid = self.grid.with_time(self.grid.t(from), to - from)?;
        let nx = self.grid.nx;
        Ok(Field {
            grid,
            values: self.values[from * nx..(to + 1) * nx].to_vec(),
        })
    }

    /// Restriction to the slices lying in `[t_from, t_to]`.
    pub fn restrict_time(&self, t_from: f64, t_to: f64) -> Result<Field> {
        let range = || Error::WindowOutOfRange {
            from: t_from,
            to: t_to,
            start: self.grid.t_start(),
            end: self.grid.t_end(),
        };
        let a = self.grid.slice_of(t_from).ok_or_else(range)?;
        let b = self.grid.slice_of(t_to).ok_or_else(range)?;
        self.restrict(a, b)
    }

    /// Pointwise map; the result must stay finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Field> {
        Field::from_values(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// `(self - other) * scale`, used for finite-difference perturbations.
    pub fn scaled_difference(&self, other: &Field, scale: f64) -> Result<Field> {
        self.grid.ensure_same(&other.grid, "difference")?;
        Field::from_values(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b) * scale)
                .collect(),
        )
    }
}

/// Per-cell white-noise values, normalized so each cell has variance
/// `1 / (dt dx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseField {
    grid: GridSpec,
    cells: Vec<f64>,
}

impl NoiseField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            cells: vec![0.0; grid.nt * grid.nx],
        }
    }

    /// Deterministic forcing given by explicit cell values.
    pub fn from_values(grid: GridSpec, cells: Vec<f64>) -> Result<Self> {
        if cells.len() != grid.nt * grid.nx {
            return Err(Error::GridMismatch(format!(
                "expected {} cells, got {}",
                grid.nt * grid.nx,
                cells.len()
            )));
        }
        if let Some(i) = cells.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("noise cell #{i}")));
        }
        Ok(Self { grid, cells })
    }

    /// Forcing whose cell `(n, j)` holds `f(t_n, x_j)`.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut cells = Vec::with_capacity(grid.nt * grid.nx);
        for n in 0..grid.nt {
            let t = grid.t(n);
            cells.extend((0..grid.nx).map(|j| f(t, grid.x(j))));
        }
        Self::from_values(grid, cells)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let nx = self.grid.nx;
        &self.cells[n * nx..(n + 1) * nx]
    }

    pub fn at(&self, n: usize, j: usize) -> f64 {
        self.cells[n * self.grid.nx + j]
    }

    /// `self + eps * other`, cellwise.
    pub fn perturbed(&self, other: &NoiseField, eps: f64) -> Result<NoiseField> {
        self.grid.ensure_same(&other.grid, "perturbation")?;
        NoiseField::from_values(
            self.grid,
            self.cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| a + eps * b)
                .collect(),
        )
    }
}

/// Cells per independently seeded noise block.
const NOISE_BLOCK: i64 = 64;

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replica `k` of an ensemble with the given base seed.
pub fn replica_seed(base_seed: u64, replica: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(replica.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

fn block_seed(seed: u64, time_key: i64, block: i64) -> u64 {
    splitmix64(seed ^ splitmix64((time_key as u64) ^ splitmix64(block as u64).rotate_left(17)))
}

/// Fill one time row of white noise.
///
/// Cells are keyed by `(seed, time_key, j - nx/2)` in blocks of 64 centred
/// columns, so a wider domain with the same `dx` and `dt` reproduces the
/// noise of a narrower one on the shared cells.
pub(crate) fn fill_noise_row(seed: u64, time_key: i64, nx: usize, std_dev: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), nx);
    let half = (nx / 2) as i64;
    let first = (-half).div_euclid(NOISE_BLOCK);
    let last = (half - 1).div_euclid(NOISE_BLOCK);
    let mut buf = [0.0_f64; NOISE_BLOCK as usize];
    for block in first..=last {
        let mut rng = ChaCha8Rng::seed_from_u64(block_seed(seed, time_key, block));
        for v in buf.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut rng);
            *v = z * std_dev;
        }
        let lo = (block * NOISE_BLOCK).max(-half);
        let hi = ((block + 1) * NOISE_BLOCK).min(half);
        for c in lo..hi {
            out[(c + half) as usize] = buf[(c - block * NOISE_BLOCK) as usize];
        }
    }
}

/// Discrete space-time white noise: i.i.d. centred Gaussian cells with
/// standard deviation `1 / sqrt(dt dx)`, deterministic in `(grid, seed)`.
pub fn sample_white_noise(grid: &GridSpec, seed: u64) -> NoiseField {
    let mut noise = NoiseField::zeros(*grid);
    let std_dev = grid.cell_volume().sqrt().recip();
    let nx = grid.nx;
    for n in 0..grid.nt {
        fill_noise_row(
            seed,
            grid.time_key(n),
            nx,
            std_dev,
            &mut noise.cells[n * nx..(n + 1) * nx],
        );
    }
    noise
}

/// Riemann pairing `sum_{n,j} zeta(t_n, x_j) xi_{n,j} dt dx`. The test
/// function is evaluated at the left endpoint of each cell.
pub fn pair(noise: &NoiseField, zeta: &Field) -> Result<f64> {
    noise.grid.ensure_same(&zeta.grid, "pairing")?;
    let nx = noise.grid.nx;
    let sum: f64 = noise
        .cells
        .chunks_exact(nx)
        .enumerate()
        .map(|(n, row)| row.iter().zip(zeta.slice(n)).map(|(a, b)| a * b).sum::<f64>())
        .sum();
    Ok(sum * noise.grid.cell_volume())
}

/// Parabolic rescaling of a field: `u^(t^, x^) = R^(-1/2) u(R^2 t^, R x^)`
/// on the relabeled lattice.
pub fn rescale_field(u: &Field, r: f64) -> Result<Field> {
    rescale_field_with_exponent(u, r, 0.5)
}

/// As [`rescale_field`] with amplitude factor `R^(-exponent)`.
pub fn rescale_field_with_exponent(u: &Field, r: f64, exponent: f64) -> Result<Field> {
    let grid = u.grid.relabel(r)?;
    let factor = r.powf(-exponent);
    Field::from_values(grid, u.values.iter().map(|v| v * factor).collect())
}

/// Rescaling of white noise, `xi^ = R^(3/2) xi`, on the relabeled lattice.
pub fn rescale_noise(noise: &NoiseField, r: f64) -> Result<NoiseField> {
    let grid = noise.grid.relabel(r)?;
    let factor = r.powf(1.5);
    NoiseField::from_values(grid, noise.cells.iter().map(|v| v * factor).collect())
}
