//! Fourier machinery with the angular-frequency unitary convention
//!
//! ```text
//!     (F f)(xi) = (2*pi)^{-1/2} * Integral f(x) e^{-i x xi} dx
//! ```
//!
//! discretized as `(2*pi)^{-1/2} * dx * sum_n f_n e^{-i x_n xi_k}` on a
//! centered grid and its centered dual. The fast path reduces the centered
//! sum to a plain FFT with parity sign permutations:
//!
//! ```text
//!     F_k = (2*pi)^{-1/2} dx (-1)^{N/2} (-1)^k DFT[(-1)^n f_n]_k .
//! ```
//!
//! Also provides spectral evaluation of the trigonometric interpolant on
//! shifted grids (the off-grid evaluation rule used by the Wigner and
//! quantization kernels) and separable 2-D transforms of phase-space arrays.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Grid, PhaseGrid, PhaseSpaceArray, Signal, TAU};

static FFT_CACHE: Lazy<Mutex<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)>> =
    Lazy::new(|| Mutex::new((FftPlanner::new(), HashMap::new())));

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut guard = FFT_CACHE.lock().unwrap();
    let (planner, cache) = &mut *guard;
    cache
        .entry((n, inverse))
        .or_insert_with(|| {
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// Unnormalized DFT in place: `X_k = sum_n x_n e^{-2 pi i k n / N}`.
pub fn fft_in_place(buf: &mut [Complex64]) {
    plan(buf.len(), false).process(buf);
}

/// Unnormalized inverse DFT in place: `x_n = sum_k X_k e^{+2 pi i k n / N}`.
pub fn ifft_in_place(buf: &mut [Complex64]) {
    plan(buf.len(), true).process(buf);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

fn sign_half(n: usize) -> f64 {
    if (n / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Centered forward transform of raw samples living on a centered grid with
/// spacing `dx`. Output lives on the centered dual grid.
pub fn forward_values(values: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values
        .iter()
        .enumerate()
        .map(|(j, v)| if j % 2 == 0 { *v } else { -*v })
        .collect();
    fft_in_place(&mut buf);
    let scale = TAU.sqrt().recip() * dx * sign_half(n);
    for (k, v) in buf.iter_mut().enumerate() {
        let s = if k % 2 == 0 { scale } else { -scale };
        *v *= s;
    }
    buf
}

/// Centered inverse transform; `dxi` is the spacing of the input (dual) grid.
pub fn inverse_values(values: &[Complex64], dxi: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values
        .iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
        .collect();
    ifft_in_place(&mut buf);
    let scale = TAU.sqrt().recip() * dxi * sign_half(n);
    for (j, v) in buf.iter_mut().enumerate() {
        let s = if j % 2 == 0 { scale } else { -scale };
        *v *= s;
    }
    buf
}

/// Unitary Fourier transform of a signal; forward lands on the dual grid.
pub fn fourier(f: &Signal, direction: Direction) -> Signal {
    let g = *f.grid();
    match direction {
        Direction::Forward => {
            let vals = forward_values(f.values(), g.spacing());
            Signal::new(g.dual(), vals).expect("transform preserves finiteness")
        }
        Direction::Inverse => {
            let vals = inverse_values(f.values(), g.spacing());
            Signal::new(g.dual(), vals).expect("transform preserves finiteness")
        }
    }
}

/// Samples of the trigonometric interpolant of `values` on the grid shifted
/// by `s`: output[j] = p(x_j + s), where p is the band-limited interpolant
/// (Nyquist bin treated symmetrically, i.e. as a cosine).
///
/// Zero-padding the spectrum by any factor and sampling the padded fine grid
/// at the same points yields bit-for-bit these values, so the result does not
/// depend on an oversampling factor.
pub fn shifted_samples(values: &[Complex64], dx: f64, s: f64) -> Vec<Complex64> {
    let mut spec = values.to_vec();
    fft_in_place(&mut spec);
    shifted_samples_from_spectrum(values, &spec, dx, s)
}

/// As [`shifted_samples`] with the unnormalized spectrum already at hand.
pub fn shifted_samples_from_spectrum(
    values: &[Complex64],
    spec: &[Complex64],
    dx: f64,
    s: f64,
) -> Vec<Complex64> {
    let n = values.len();
    let steps = s / dx;
    let rounded = steps.round();
    if (steps - rounded).abs() < 1e-12 * (1.0 + rounded.abs()) {
        // Integer shift: circular rotation, exact.
        let r = (rounded as i64).rem_euclid(n as i64) as usize;
        return (0..n).map(|j| values[(j + r) % n]).collect();
    }
    let mut buf = spec.to_vec();
    apply_shift_phase(&mut buf, dx, s);
    ifft_in_place(&mut buf);
    let inv_n = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= inv_n;
    }
    buf
}

/// Multiply an unnormalized spectrum by the shift phase `e^{i omega s}` with
/// the cosine rule at the Nyquist bin.
pub fn apply_shift_phase(spec: &mut [Complex64], dx: f64, s: f64) {
    let n = spec.len();
    let base = TAU / (n as f64 * dx);
    for (k, v) in spec.iter_mut().enumerate() {
        if n % 2 == 0 && k == n / 2 {
            let omega = base * (n as f64 / 2.0);
            *v *= (omega * s).cos();
        } else {
            let ks = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            let omega = base * ks;
            *v *= Complex64::from_polar(1.0, omega * s);
        }
    }
}

/// Direct evaluation of the trigonometric interpolant at an arbitrary point.
/// Same interpolant as [`shifted_samples`]; O(N) per point.
pub fn eval_trig(values: &[Complex64], grid: &Grid, x: f64) -> Complex64 {
    let mut spec = values.to_vec();
    fft_in_place(&mut spec);
    eval_trig_spectrum(&spec, grid, x)
}

/// As [`eval_trig`] but from a precomputed unnormalized spectrum.
pub fn eval_trig_spectrum(spec: &[Complex64], grid: &Grid, x: f64) -> Complex64 {
    let n = spec.len();
    let base = TAU / (n as f64 * grid.spacing());
    let rel = x - grid.origin();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in spec.iter().enumerate() {
        if n % 2 == 0 && k == n / 2 {
            let omega = base * (n as f64 / 2.0);
            acc += c * (omega * rel).cos();
        } else {
            let ks = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            acc += c * Complex64::from_polar(1.0, base * ks * rel);
        }
    }
    acc / n as f64
}

/// Parity flip f(x) -> f(-x) as the index map j -> (N - j) mod N.
pub fn parity(f: &Signal) -> Signal {
    let n = f.len();
    let vals: Vec<Complex64> = (0..n).map(|j| f.values()[(n - j) % n]).collect();
    Signal::new(*f.grid(), vals).expect("parity preserves finiteness")
}

/// 2-D centered forward transform of a phase-space array (both axes).
/// Output lives on the Fourier-dual phase grid (eta dual to x, y dual to xi).
pub fn forward2(a: &PhaseSpaceArray) -> PhaseSpaceArray {
    let g = *a.grid();
    let (nx, nxi) = (g.x.len(), g.xi.len());
    let mut out = PhaseSpaceArray::zeros(g.dual());
    // xi axis: rows are contiguous.
    for ix in 0..nx {
        let row = forward_values(a.row(ix), g.xi.spacing());
        out.row_mut(ix).copy_from_slice(&row);
    }
    // x axis: columns.
    let mut col = vec![Complex64::new(0.0, 0.0); nx];
    for ik in 0..nxi {
        for ix in 0..nx {
            col[ix] = out.at(ix, ik);
        }
        let tr = forward_values(&col, g.x.spacing());
        for ix in 0..nx {
            *out.at_mut(ix, ik) = tr[ix];
        }
    }
    out
}

/// 2-D centered inverse transform, the exact inverse of [`forward2`].
pub fn inverse2(a: &PhaseSpaceArray) -> PhaseSpaceArray {
    let g = *a.grid();
    let (nx, nxi) = (g.x.len(), g.xi.len());
    let mut out = PhaseSpaceArray::zeros(g.dual());
    for ix in 0..nx {
        let row = inverse_values(a.row(ix), g.xi.spacing());
        out.row_mut(ix).copy_from_slice(&row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); nx];
    for ik in 0..nxi {
        for ix in 0..nx {
            col[ix] = out.at(ix, ik);
        }
        let tr = inverse_values(&col, g.x.spacing());
        for ix in 0..nx {
            *out.at_mut(ix, ik) = tr[ix];
        }
    }
    out
}

/// Spectral application of a Fourier multiplier m(eta, y) to a symbol array:
/// inverse2( m .* forward2(a) ).
pub fn apply_fourier_multiplier(
    a: &PhaseSpaceArray,
    mut m: impl FnMut(f64, f64) -> Complex64,
) -> PhaseSpaceArray {
    let mut spec = forward2(a);
    let dg = *spec.grid();
    for ie in 0..dg.x.len() {
        let eta = dg.x.point(ie);
        for iy in 0..dg.xi.len() {
            let y = dg.xi.point(iy);
            *spec.at_mut(ie, iy) *= m(eta, y);
        }
    }
    inverse2(&spec)
}

/// Validate a signal grid pair for binary operations.
pub fn require_same_grid(f: &Signal, g: &Signal) -> Result<()> {
    if !f.grid().approx_eq(g.grid()) {
        return Err(Error::GridMismatch(format!(
            "signals on different grids ({}x{:.6e} vs {}x{:.6e})",
            f.len(),
            f.grid().spacing(),
            g.len(),
            g.grid().spacing()
        )));
    }
    Ok(())
}

/// Dual phase grid point check used by quantize: xi axis must be the dual of
/// the x axis.
pub fn require_signal_phase_grid(g: &PhaseGrid) -> Result<()> {
    if !g.xi.approx_eq(&g.x.dual()) {
        return Err(Error::GridMismatch(
            "phase grid frequency axis is not the dual of the position axis".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use approx::assert_abs_diff_eq;

    // O(N^2) direct oracle for the centered forward sum.
    fn forward_direct(values: &[Complex64], dx: f64) -> Vec<Complex64> {
        let n = values.len();
        let g = Grid::centered(n, dx).unwrap();
        let d = g.dual();
        (0..n)
            .map(|k| {
                let xi = d.point(k);
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, v) in values.iter().enumerate() {
                    let x = g.point(j);
                    acc += v * Complex64::from_polar(1.0, -x * xi);
                }
                acc * dx / TAU.sqrt()
            })
            .collect()
    }

    fn gaussian_signal(n: usize, dx: f64) -> Signal {
        let g = Grid::centered(n, dx).unwrap();
        Signal::from_fn(g, |x| {
            Complex64::new((-0.5 * x * x).exp() / std::f64::consts::PI.powf(0.25), 0.0)
        })
    }

    #[test]
    fn fast_forward_matches_direct_sum() {
        let g = Grid::centered(32, 0.43).unwrap();
        let f = Signal::from_fn(g, |x| Complex64::new((x * 0.9).sin(), (0.3 * x).cos() * 0.2));
        let fast = forward_values(f.values(), g.spacing());
        let slow = forward_direct(f.values(), g.spacing());
        for (a, b) in fast.iter().zip(slow.iter()) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn gaussian_is_fixed_point() {
        // e^{-x^2/2}/pi^{1/4} is self-dual under this unitary convention.
        let f = gaussian_signal(256, 0.125);
        let fhat = fourier(&f, Direction::Forward);
        let mut dev = 0.0f64;
        for (k, v) in fhat.values().iter().enumerate() {
            let xi = fhat.grid().point(k);
            let expect = (-0.5 * xi * xi).exp() / std::f64::consts::PI.powf(0.25);
            dev = dev.max((v - Complex64::new(expect, 0.0)).norm());
        }
        assert!(dev <= 1e-12, "max deviation {dev:.3e}");
    }

    #[test]
    fn round_trip_and_unitarity() {
        let g = Grid::centered(128, 0.21).unwrap();
        let f = Signal::from_fn(g, |x| {
            Complex64::new((-0.2 * x * x).exp() * (1.1 * x).cos(), (-0.1 * x * x).exp() * x)
        });
        let back = fourier(&fourier(&f, Direction::Forward), Direction::Inverse);
        let num: f64 = f
            .values()
            .iter()
            .zip(back.values().iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!(num <= 1e-12 * den);

        let nf = fourier(&f, Direction::Forward).norm_l2();
        assert!((nf - f.norm_l2()).abs() <= 1e-12 * f.norm_l2());
    }

    #[test]
    fn double_transform_is_parity() {
        let g = Grid::centered(64, 0.3).unwrap();
        let f = Signal::from_fn(g, |x| Complex64::new((-0.4 * x * x).exp() * (x + 0.3), 0.1 * x.sin()));
        let ff = fourier(&fourier(&f, Direction::Forward), Direction::Forward);
        let flip = parity(&f);
        let mut dev = 0.0f64;
        for (a, b) in ff.values().iter().zip(flip.values().iter()) {
            dev = dev.max((a - b).norm());
        }
        assert!(dev <= 1e-10, "parity deviation {dev:.3e}");
    }

    #[test]
    fn shifted_samples_match_direct_interpolant() {
        let g = Grid::centered(32, 0.37).unwrap();
        let f = Signal::from_fn(g, |x| Complex64::new((-0.3 * x * x).exp(), (0.7 * x).sin() * 0.4));
        for &s in &[0.0, 0.37, 0.123, -0.91, 3.7 * 0.37] {
            let fast = shifted_samples(f.values(), g.spacing(), s);
            for j in (0..32).step_by(5) {
                let x = g.point(j) + s;
                let slow = eval_trig(f.values(), &g, x);
                assert!((fast[j] - slow).norm() <= 1e-11, "s={s} j={j}");
            }
        }
    }

    #[test]
    fn integer_shift_is_rotation() {
        let g = Grid::centered(16, 0.5).unwrap();
        let f = Signal::from_fn(g, |x| Complex64::new(x, -x * x));
        let sh = shifted_samples(f.values(), g.spacing(), 3.0 * 0.5);
        for j in 0..16 {
            assert_eq!(sh[j], f.values()[(j + 3) % 16]);
        }
    }

    #[test]
    fn forward2_inverse2_round_trip() {
        let pg = PhaseGrid::for_signal(Grid::centered(16, 0.5).unwrap());
        let a = PhaseSpaceArray::from_fn(pg, |x, xi| Complex64::new((-0.2 * (x * x + xi * xi)).exp(), 0.1 * x * xi));
        let b = inverse2(&forward2(&a));
        let mut dev = 0.0f64;
        for (u, v) in a.values().iter().zip(b.values().iter()) {
            dev = dev.max((u - v).norm());
        }
        assert!(dev <= 1e-12, "round-trip deviation {dev:.3e}");
        assert!(b.grid().approx_eq(a.grid()));
    }
}
