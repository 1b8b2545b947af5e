//! Elementary generators: sinc, Hermite functions, Gaussians, and the seeded
//! band-limited random signals/symbols used by the self-check and test
//! suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fourier::inverse2;
use crate::grid::{Grid, PhaseGrid, PhaseSpaceArray, Signal};

/// sinc(t) = sin(t)/t with the removable singularity filled in; a Taylor
/// series is used for |t| < 1e-4 to avoid cancellation.
pub fn sinc(t: f64) -> f64 {
    let u = t.abs(); // sinc is even; evaluate on |t| so the symmetry is exact
    if u < 1e-4 {
        let t2 = u * u;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        u.sin() / u
    }
}

/// n-th Hermite function, L2-normalized on the continuum, sampled on `grid`.
///
/// Generated by the stable three-term recurrence on normalized functions:
/// h_0 = pi^{-1/4} e^{-x^2/2}, h_n = x sqrt(2/n) h_{n-1} - sqrt((n-1)/n) h_{n-2}.
pub fn hermite(n: usize, grid: &Grid) -> Result<Signal> {
    if n > 20 {
        return Err(Error::InvalidParameter(format!(
            "hermite order {n} > 20; use a finer, wider grid and lower orders"
        )));
    }
    let tail = hermite_tail_outside(n, grid.half_width());
    if tail > 1e-10 {
        return Err(Error::GridResolution(format!(
            "hermite order {n} has tail mass {tail:.3e} > 1e-10 outside the grid"
        )));
    }
    let values = grid.points().map(|x| Complex64::new(hermite_value(n, x), 0.0)).collect();
    Signal::new(*grid, values)
}

/// Pointwise value of the normalized Hermite function.
pub fn hermite_value(n: usize, x: f64) -> f64 {
    let h0 = (-0.5 * x * x).exp() / std::f64::consts::PI.powf(0.25);
    if n == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = x * (2.0f64).sqrt() * h0;
    for m in 2..=n {
        let next = x * (2.0 / m as f64).sqrt() * cur - ((m as f64 - 1.0) / m as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// L2 mass of h_n outside [-half_width, half_width], estimated by quadrature
/// on an extension interval.
fn hermite_tail_outside(n: usize, half_width: f64) -> f64 {
    let steps = 4096;
    let span = 16.0;
    let h = span / steps as f64;
    let mut acc = 0.0;
    for i in 0..steps {
        let x = half_width + (i as f64 + 0.5) * h;
        let v = hermite_value(n, x);
        acc += v * v * h;
    }
    2.0 * acc
}

/// L2-normalized Gaussian of standard deviation `sigma` centered at `x0`,
/// modulated by `e^{i omega x}`.
pub fn gaussian(grid: &Grid, sigma: f64, x0: f64, omega: f64) -> Signal {
    let norm = 1.0 / (std::f64::consts::PI * sigma * sigma).powf(0.25);
    Signal::from_fn(*grid, |x| {
        let u = (x - x0) / sigma;
        Complex64::from_polar(norm * (-0.5 * u * u).exp(), omega * x)
    })
}

/// Two-tone Gaussian test signal e^{-x^2/(2 sigma^2)} (e^{i w1 x} + e^{i w2 x}).
pub fn tone_pair(grid: &Grid, omega1: f64, omega2: f64, sigma: f64) -> Signal {
    Signal::from_fn(*grid, |x| {
        let env = (-x * x / (2.0 * sigma * sigma)).exp();
        (Complex64::from_polar(1.0, omega1 * x) + Complex64::from_polar(1.0, omega2 * x)) * env
    })
}

/// Seeded random signal whose spectrum is confined to |xi| <= band.
pub fn random_band_limited_signal(grid: &Grid, band: f64, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.len();
    let dual = grid.dual();
    let mut spec = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        if dual.point(k).abs() <= band {
            spec[k] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let vals = crate::fourier::inverse_values(&spec, dual.spacing());
    Signal::new(*grid, vals).expect("finite by construction")
}

/// Seeded random symbol whose 2-D spectrum is confined to the box
/// |eta| <= eta_c, |y| <= y_c. With `real` the symbol is real-valued
/// (Hermitian-symmetrized spectrum).
pub fn random_band_limited_symbol(
    grid: &PhaseGrid,
    eta_c: f64,
    y_c: f64,
    seed: u64,
    real: bool,
) -> PhaseSpaceArray {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dual = grid.dual();
    let mut spec = PhaseSpaceArray::zeros(dual);
    for ie in 0..dual.x.len() {
        let eta = dual.x.point(ie);
        for iy in 0..dual.xi.len() {
            let y = dual.xi.point(iy);
            if eta.abs() <= eta_c && y.abs() <= y_c {
                *spec.at_mut(ie, iy) =
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
    }
    let mut a = inverse2(&spec);
    if real {
        for v in a.values_mut() {
            *v = Complex64::new(v.re, 0.0);
        }
    }
    a
}

/// Gaussian bump symbol e^{-(x^2 + xi^2)/(2 sigma^2)}.
pub fn gaussian_bump_symbol(grid: &PhaseGrid, sigma: f64) -> PhaseSpaceArray {
    PhaseSpaceArray::from_fn(*grid, |x, xi| {
        Complex64::new((-(x * x + xi * xi) / (2.0 * sigma * sigma)).exp(), 0.0)
    })
}
