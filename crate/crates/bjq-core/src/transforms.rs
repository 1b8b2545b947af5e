//! Short-time Fourier transform, tau-Wigner distributions, the Born-Jordan
//! distribution (quadrature average and Fourier-multiplier constructions),
//! and marginal utilities.
//!
//! Discrete contracts, with y running over the signal grid:
//!
//! ```text
//! (V_phi f)(x_j, xi_k)  = (2 pi)^{-1/2} dx sum_n f_n conj(phi_{n-j}) e^{-i x_n xi_k}
//! W_tau(f,g)(x_j, xi_k) = (2 pi)^{-1/2} dy sum_m f(x_j + tau y_m)
//!                         conj(g(x_j - (1-tau) y_m)) e^{-i y_m xi_k}
//! ```
//!
//! Off-grid samples are those of the periodic trigonometric interpolant,
//! evaluated spectrally (identical to sampling any zero-padded spectrum).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{
    fft_in_place, forward_values, require_same_grid, shifted_samples_from_spectrum,
    apply_fourier_multiplier,
};
use crate::grid::{PhaseGrid, PhaseSpaceArray, Signal};
use crate::quadrature::QuadratureRule;
use crate::synth::sinc;

/// Fourier-domain form of the Born-Jordan convolution kernel: the real
/// multiplier sinc(eta y / 2) sampled on a dual phase grid.
#[derive(Debug, Clone)]
pub struct BJMultiplier {
    grid: PhaseGrid,
    values: Vec<f64>,
}

impl BJMultiplier {
    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, ie: usize, iy: usize) -> f64 {
        self.values[ie * self.grid.xi.len() + iy]
    }
}

/// Born-Jordan Fourier multiplier sinc(eta_j y_k / 2) on `grid` (the
/// Fourier-dual phase grid of a symbol array).
pub fn bj_multiplier(grid: &PhaseGrid) -> BJMultiplier {
    let mut values = Vec::with_capacity(grid.x.len() * grid.xi.len());
    for ie in 0..grid.x.len() {
        let eta = grid.x.point(ie);
        for iy in 0..grid.xi.len() {
            values.push(sinc(0.5 * eta * grid.xi.point(iy)));
        }
    }
    BJMultiplier { grid: *grid, values }
}

/// Spectral convolution with the Born-Jordan kernel: 2-D transform, pointwise
/// multiply by sinc(eta y / 2), inverse transform.
pub fn apply_bj_multiplier(a: &PhaseSpaceArray) -> PhaseSpaceArray {
    apply_fourier_multiplier(a, |eta, y| Complex64::new(sinc(0.5 * eta * y), 0.0))
}

fn validate_oversample(oversample: usize) -> Result<()> {
    if oversample < 2 {
        return Err(Error::InvalidParameter(format!(
            "oversample must be >= 2, got {oversample}"
        )));
    }
    Ok(())
}

/// Short-time Fourier transform of `f` with the given window, the window
/// shifted circularly; output on `PhaseGrid(f.grid, dual)`.
pub fn stft(f: &Signal, window: &Signal) -> Result<PhaseSpaceArray> {
    require_same_grid(f, window)?;
    if window.values().iter().all(|v| v.norm_sqr() == 0.0) {
        return Err(Error::ZeroWindow);
    }
    let g = *f.grid();
    let n = g.len();
    let grid = PhaseGrid::for_signal(g);
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            // phi(t_n - x_j) = phi at sample index n - j + N/2 (mod N)
            let col: Vec<Complex64> = (0..n)
                .map(|m| f.values()[m] * window.values()[(m + n + n / 2 - j) % n].conj())
                .collect();
            forward_values(&col, g.spacing())
        })
        .collect();
    let mut out = PhaseSpaceArray::zeros(grid);
    for (j, row) in rows.into_iter().enumerate() {
        out.row_mut(j).copy_from_slice(&row);
    }
    Ok(out)
}

/// Weighted accumulation of the pre-transform product arrays
/// P_t[j][m] = f(x_j + t y_m) conj(g(x_j - (1-t) y_m)) over (t, w) pairs.
fn accumulate_products(f: &Signal, g: &Signal, nodes: &[(f64, f64)]) -> Vec<Complex64> {
    let grid = *f.grid();
    let n = grid.len();
    let mut fspec = f.values().to_vec();
    fft_in_place(&mut fspec);
    let mut gspec = g.values().to_vec();
    fft_in_place(&mut gspec);

    // Parallel over y columns; each column sums its nodes in order.
    let cols: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let y = grid.point(m);
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for &(t, w) in nodes {
                let fs = shifted_samples_from_spectrum(f.values(), &fspec, grid.spacing(), t * y);
                let gs = shifted_samples_from_spectrum(
                    g.values(),
                    &gspec,
                    grid.spacing(),
                    -(1.0 - t) * y,
                );
                for j in 0..n {
                    col[j] += w * fs[j] * gs[j].conj();
                }
            }
            col
        })
        .collect();

    // Assemble row-major: P[j][m]
    let mut p = vec![Complex64::new(0.0, 0.0); n * n];
    for (m, col) in cols.iter().enumerate() {
        for j in 0..n {
            p[j * n + m] = col[j];
        }
    }
    p
}

fn products_to_distribution(p: Vec<Complex64>, f: &Signal) -> PhaseSpaceArray {
    let grid = *f.grid();
    let n = grid.len();
    let rows: Vec<Vec<Complex64>> = p
        .par_chunks(n)
        .map(|row| forward_values(row, grid.spacing()))
        .collect();
    let mut out = PhaseSpaceArray::zeros(PhaseGrid::for_signal(grid));
    for (j, row) in rows.into_iter().enumerate() {
        out.row_mut(j).copy_from_slice(&row);
    }
    out
}

/// tau-Wigner distribution W_tau(f, g).
pub fn wigner_tau(f: &Signal, g: &Signal, tau: f64, oversample: usize) -> Result<PhaseSpaceArray> {
    require_same_grid(f, g)?;
    validate_oversample(oversample)?;
    if !tau.is_finite() {
        return Err(Error::InvalidParameter("tau must be finite".into()));
    }
    let p = accumulate_products(f, g, &[(tau, 1.0)]);
    Ok(products_to_distribution(p, f))
}

/// Born-Jordan distribution as the quadrature average of W_t over [0, 1].
/// Must agree with `apply_bj_multiplier(wigner_tau(f, g, 1/2))`.
pub fn wigner_bj(
    f: &Signal,
    g: &Signal,
    quad: &QuadratureRule,
    oversample: usize,
) -> Result<PhaseSpaceArray> {
    require_same_grid(f, g)?;
    validate_oversample(oversample)?;
    let nodes: Vec<(f64, f64)> = quad.iter().collect();
    let p = accumulate_products(f, g, &nodes);
    Ok(products_to_distribution(p, f))
}

/// Position and frequency marginals of a phase-space array:
/// position[j] = sum_k W[j][k] dxi, frequency[k] = sum_j W[j][k] dx.
pub fn marginals(w: &PhaseSpaceArray) -> (Signal, Signal) {
    let grid = *w.grid();
    let dxi = grid.xi.spacing();
    let dx = grid.x.spacing();
    let pos: Vec<Complex64> = (0..grid.x.len())
        .map(|j| w.row(j).iter().sum::<Complex64>() * dxi)
        .collect();
    let mut freq = vec![Complex64::new(0.0, 0.0); grid.xi.len()];
    for j in 0..grid.x.len() {
        for (k, v) in w.row(j).iter().enumerate() {
            freq[k] += v * dx;
        }
    }
    (
        Signal::new(grid.x, pos).expect("finite"),
        Signal::new(grid.xi, freq).expect("finite"),
    )
}
