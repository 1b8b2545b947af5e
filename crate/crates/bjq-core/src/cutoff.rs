//! Smooth cutoffs for symbols of polynomial growth. Periodization of an
//! unbounded symbol is meaningless, so polynomial symbols are multiplied by
//! a separable cutoff chi(x) chi(xi) before discretization; accuracy claims
//! hold on the grid interior.
//!
//! Two families:
//!  - `Gaussian`: exp(-u^2 / (2 sigma^2)) per axis (the CLI default,
//!    sigma = quarter of the axis half-width);
//!  - `FlatTop`: exactly 1 on |u| <= flat, exactly 0 for |u| >= zero, with a
//!    C-infinity smoothstep flank. The flat plateau keeps the symbol
//!    untouched where test states live while still killing wrap-around.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{PhaseGrid, PhaseSpaceArray};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// No cutoff.
    None,
    /// Per-axis Gaussian with the given standard deviations.
    Gaussian { sigma_x: f64, sigma_xi: f64 },
    /// Per-axis flat-top: 1 on |u| <= flat, 0 beyond zero, smooth in between.
    FlatTop { flat_x: f64, zero_x: f64, flat_xi: f64, zero_xi: f64 },
}

impl Cutoff {
    /// Spec default: Gaussian with sigma = quarter of each axis half-width.
    pub fn default_gaussian(grid: &PhaseGrid) -> Cutoff {
        Cutoff::Gaussian {
            sigma_x: grid.x.half_width() / 4.0,
            sigma_xi: grid.xi.half_width() / 4.0,
        }
    }

    /// Roomy flat-top used for polynomial symbols in tests and the CLI:
    /// plateau over the central 40% of each half-axis, support ending just
    /// inside the boundary. Wide flanks keep the spectral tails far below
    /// the tolerances of the conversion and monomial cross-checks.
    pub fn standard_poly(grid: &PhaseGrid) -> Cutoff {
        Cutoff::flat_top_fractional(grid, 0.40, 0.98).expect("valid fractions")
    }

    /// Flat-top sized relative to the axis half-widths.
    pub fn flat_top_fractional(grid: &PhaseGrid, flat_frac: f64, zero_frac: f64) -> Result<Cutoff> {
        let c = Cutoff::FlatTop {
            flat_x: grid.x.half_width() * flat_frac,
            zero_x: grid.x.half_width() * zero_frac,
            flat_xi: grid.xi.half_width() * flat_frac,
            zero_xi: grid.xi.half_width() * zero_frac,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn flat_top(flat: f64, zero: f64) -> Result<Cutoff> {
        let c = Cutoff::FlatTop { flat_x: flat, zero_x: zero, flat_xi: flat, zero_xi: zero };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Cutoff::FlatTop { flat_x, zero_x, flat_xi, zero_xi } => {
                if !(flat_x > 0.0 && zero_x > flat_x && flat_xi > 0.0 && zero_xi > flat_xi) {
                    return Err(Error::InvalidParameter(
                        "flat-top cutoff requires 0 < flat < zero on both axes".into(),
                    ));
                }
                Ok(())
            }
            Cutoff::Gaussian { sigma_x, sigma_xi } => {
                if !(sigma_x > 0.0 && sigma_xi > 0.0) {
                    return Err(Error::InvalidParameter("cutoff sigma must be positive".into()));
                }
                Ok(())
            }
            Cutoff::None => Ok(()),
        }
    }

    pub fn weight_x(&self, x: f64) -> f64 {
        match *self {
            Cutoff::None => 1.0,
            Cutoff::Gaussian { sigma_x, .. } => gauss(x, sigma_x),
            Cutoff::FlatTop { flat_x, zero_x, .. } => flat_top(x, flat_x, zero_x),
        }
    }

    pub fn weight_xi(&self, xi: f64) -> f64 {
        match *self {
            Cutoff::None => 1.0,
            Cutoff::Gaussian { sigma_xi, .. } => gauss(xi, sigma_xi),
            Cutoff::FlatTop { flat_xi, zero_xi, .. } => flat_top(xi, flat_xi, zero_xi),
        }
    }

    pub fn weight(&self, x: f64, xi: f64) -> f64 {
        self.weight_x(x) * self.weight_xi(xi)
    }
}

fn gauss(u: f64, sigma: f64) -> f64 {
    (-0.5 * (u / sigma).powi(2)).exp()
}

/// C-infinity step: 1 for u <= flat, 0 for u >= zero.
fn flat_top(u: f64, flat: f64, zero: f64) -> f64 {
    let t = (u.abs() - flat) / (zero - flat);
    smoothstep(t)
}

fn smoothstep(t: f64) -> f64 {
    // f(v) = e^{-1/v} for v > 0; step = f(1-t) / (f(t) + f(1-t))
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let f = |v: f64| (-1.0 / v).exp();
        f(1.0 - t) / (f(t) + f(1.0 - t))
    }
}

/// Sample the monomial symbol x^m xi^l times the cutoff on a phase grid.
pub fn monomial_symbol(grid: &PhaseGrid, m: u32, l: u32, cutoff: &Cutoff) -> PhaseSpaceArray {
    PhaseSpaceArray::from_fn(*grid, |x, xi| {
        Complex64::new(x.powi(m as i32) * xi.powi(l as i32) * cutoff.weight(x, xi), 0.0)
    })
}

/// Multiply an existing symbol array by the cutoff.
pub fn apply_cutoff(a: &PhaseSpaceArray, cutoff: &Cutoff) -> PhaseSpaceArray {
    let mut out = a.clone();
    let grid = *a.grid();
    for ix in 0..grid.x.len() {
        let wx = cutoff.weight_x(grid.x.point(ix));
        for ik in 0..grid.xi.len() {
            *out.at_mut(ix, ik) *= wx * cutoff.weight_xi(grid.xi.point(ik));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_top_plateau_and_support() {
        let c = Cutoff::flat_top(5.0, 11.0).unwrap();
        assert_eq!(c.weight_x(0.0), 1.0);
        assert_eq!(c.weight_x(4.999), 1.0);
        assert_eq!(c.weight_x(-5.0), 1.0);
        assert_eq!(c.weight_x(11.0), 0.0);
        assert_eq!(c.weight_x(14.0), 0.0);
        let mid = c.weight_x(8.0);
        assert!(mid > 0.0 && mid < 1.0);
        // monotone on the flank
        assert!(c.weight_x(7.0) > c.weight_x(9.0));
    }

    #[test]
    fn smoothstep_is_smooth_at_ends() {
        // numerically tiny derivatives approaching the endpoints
        let d = (smoothstep(1e-3) - smoothstep(0.0)).abs();
        assert!(d < 1e-10);
        let d = (smoothstep(1.0) - smoothstep(1.0 - 1e-3)).abs();
        assert!(d < 1e-10);
    }

    #[test]
    fn rejects_bad_flat_top() {
        assert!(Cutoff::flat_top(5.0, 5.0).is_err());
        assert!(Cutoff::flat_top(-1.0, 5.0).is_err());
    }
}
