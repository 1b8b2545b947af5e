//! Centered position/frequency grids and the sampled-function containers.
//!
//! Every grid is uniform, has an even number of points and is centered at
//! zero: `x_j = x0 + j*dx` with `x0 = -(n/2)*dx`. The dual grid carries
//! spacing `2*pi/(n*dx)` and is centered the same way, so a forward
//! transform of a `Signal` lands on `grid.dual()`.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const TAU: f64 = std::f64::consts::TAU;

/// Uniform centered grid on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    dx: f64,
}

impl Grid {
    /// Centered grid with `n` points and spacing `dx` (`make_centered_grid`).
    pub fn centered(n: usize, dx: f64) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n_points must be even, got {n}")));
        }
        if n < 8 {
            return Err(Error::InvalidGrid(format!("n_points must be >= 8, got {n}")));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive and finite, got {dx}")));
        }
        Ok(Grid { n, dx })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.dx
    }

    /// Left endpoint, `-(n/2)*dx`.
    pub fn origin(&self) -> f64 {
        -((self.n / 2) as f64) * self.dx
    }

    /// Computed as (j - n/2) * dx so that point(n - j) = -point(j) exactly.
    pub fn point(&self, j: usize) -> f64 {
        (j as i64 - (self.n / 2) as i64) as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// Index of the sample at x = 0.
    pub fn zero_index(&self) -> usize {
        self.n / 2
    }

    /// Half-width `(n/2)*dx` of the covered interval.
    pub fn half_width(&self) -> f64 {
        -self.origin()
    }

    /// Dual grid: spacing `2*pi/(n*dx)`, centered.
    pub fn dual(&self) -> Grid {
        Grid { n: self.n, dx: TAU / (self.n as f64 * self.dx) }
    }

    /// Relative agreement check, tolerant of floating-point noise.
    pub fn approx_eq(&self, other: &Grid) -> bool {
        self.n == other.n && (self.dx - other.dx).abs() <= 1e-12 * self.dx.abs()
    }
}

/// Complex sampled function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: Grid,
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(format!("signal sample {j}")));
        }
        Ok(Signal { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Signal { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// Sample a scalar function on the grid.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = grid.points().map(|x| f(x)).collect();
        Signal { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Discrete L2 norm with the `dx` quadrature weight.
    pub fn norm_l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Riemann inner product `sum f conj(g) dx`.
    pub fn inner(&self, other: &Signal) -> Complex64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            * Complex64::new(self.grid.spacing(), 0.0)
    }

    pub fn scaled(&self, c: Complex64) -> Signal {
        Signal { grid: self.grid, values: self.values.iter().map(|v| v * c).collect() }
    }
}

/// Two-axis phase-space grid (position axis, frequency axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    pub x: Grid,
    pub xi: Grid,
}

impl PhaseGrid {
    pub fn new(x: Grid, xi: Grid) -> Self {
        PhaseGrid { x, xi }
    }

    /// Phase grid generated by a signal grid: frequency axis is the dual.
    pub fn for_signal(g: Grid) -> Self {
        PhaseGrid { x: g, xi: g.dual() }
    }

    /// Fourier-dual phase grid: eta dual to x, y dual to xi.
    pub fn dual(&self) -> PhaseGrid {
        PhaseGrid { x: self.x.dual(), xi: self.xi.dual() }
    }

    pub fn approx_eq(&self, other: &PhaseGrid) -> bool {
        self.x.approx_eq(&other.x) && self.xi.approx_eq(&other.xi)
    }
}

/// Complex matrix sampled on a [`PhaseGrid`]; row index is x, column index xi.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceArray {
    grid: PhaseGrid,
    values: Vec<Complex64>,
}

impl PhaseSpaceArray {
    pub fn new(grid: PhaseGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.x.len() * grid.xi.len() {
            return Err(Error::InvalidGrid(format!(
                "value count {} does not match {}x{} phase grid",
                values.len(),
                grid.x.len(),
                grid.xi.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(format!("phase-space sample {j}")));
        }
        Ok(PhaseSpaceArray { grid, values })
    }

    pub fn zeros(grid: PhaseGrid) -> Self {
        PhaseSpaceArray { grid, values: vec![Complex64::new(0.0, 0.0); grid.x.len() * grid.xi.len()] }
    }

    pub fn from_fn(grid: PhaseGrid, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.x.len() * grid.xi.len());
        for ix in 0..grid.x.len() {
            let x = grid.x.point(ix);
            for ik in 0..grid.xi.len() {
                values.push(f(x, grid.xi.point(ik)));
            }
        }
        PhaseSpaceArray { grid, values }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn nx(&self) -> usize {
        self.grid.x.len()
    }

    pub fn nxi(&self) -> usize {
        self.grid.xi.len()
    }

    #[inline]
    pub fn at(&self, ix: usize, ik: usize) -> Complex64 {
        self.values[ix * self.grid.xi.len() + ik]
    }

    #[inline]
    pub fn at_mut(&mut self, ix: usize, ik: usize) -> &mut Complex64 {
        &mut self.values[ix * self.grid.xi.len() + ik]
    }

    /// Row-major backing storage (x-major).
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Contiguous row at fixed x index.
    pub fn row(&self, ix: usize) -> &[Complex64] {
        let n = self.grid.xi.len();
        &self.values[ix * n..(ix + 1) * n]
    }

    pub fn row_mut(&mut self, ix: usize) -> &mut [Complex64] {
        let n = self.grid.xi.len();
        &mut self.values[ix * n..(ix + 1) * n]
    }

    /// Discrete L2 norm with the phase-space area weight.
    pub fn norm_l2(&self) -> f64 {
        let da = self.grid.x.spacing() * self.grid.xi.spacing();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * da).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Riemann inner product with area weight, conjugating the second slot.
    pub fn inner(&self, other: &PhaseSpaceArray) -> Complex64 {
        let da = self.grid.x.spacing() * self.grid.xi.spacing();
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            * Complex64::new(da, 0.0)
    }

    pub fn scaled(&self, c: Complex64) -> PhaseSpaceArray {
        PhaseSpaceArray { grid: self.grid, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Pointwise sum; grids must agree.
    pub fn add(&self, other: &PhaseSpaceArray) -> Result<PhaseSpaceArray> {
        if !self.grid.approx_eq(&other.grid) {
            return Err(Error::GridMismatch("phase-space arrays on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(PhaseSpaceArray { grid: self.grid, values })
    }

    /// Maximum |.| over the interior fraction of both axes (0 < frac <= 1).
    pub fn norm_inf_interior(&self, frac: f64) -> f64 {
        let (x_lo, x_hi) = interior_range(self.nx(), frac);
        let (k_lo, k_hi) = interior_range(self.nxi(), frac);
        let mut m = 0.0f64;
        for ix in x_lo..x_hi {
            for ik in k_lo..k_hi {
                m = m.max(self.at(ix, ik).norm());
            }
        }
        m
    }
}

/// Index range covering the central `frac` of an axis.
pub fn interior_range(n: usize, frac: f64) -> (usize, usize) {
    let keep = ((n as f64) * frac).round() as usize;
    let keep = keep.clamp(1, n);
    let lo = (n - keep) / 2;
    (lo, lo + keep)
}
