//! Ghost-frequency demonstration: a two-tone Gaussian packet is analyzed
//! with the spectrogram, the Wigner distribution, and the Born-Jordan
//! distribution, and the interference (ghost) mid-frequency peak is compared
//! across the three.

use bjq_core::error::{Error, Result};
use bjq_core::grid::{Grid, PhaseSpaceArray};
use bjq_core::synth::{gaussian, tone_pair};
use bjq_core::transforms::{apply_bj_multiplier, stft, wigner_tau};

pub struct GhostReport {
    pub spectrogram: PhaseSpaceArray,
    pub wigner: PhaseSpaceArray,
    pub born_jordan: PhaseSpaceArray,
    /// cross-term-to-auto-term peak ratio of the Wigner distribution
    pub rho_wigner: f64,
    /// same ratio for the Born-Jordan distribution
    pub rho_bj: f64,
}

impl GhostReport {
    pub fn suppression(&self) -> f64 {
        self.rho_bj / self.rho_wigner
    }
}

/// Peak magnitude of `w` over the box |x| <= hw, |xi - center| <= hw.
fn box_peak(w: &PhaseSpaceArray, center: f64, hw: f64) -> f64 {
    let g = w.grid();
    let mut peak = 0.0f64;
    for ix in 0..g.x.len() {
        if g.x.point(ix).abs() > hw {
            continue;
        }
        for ik in 0..g.xi.len() {
            if (g.xi.point(ik) - center).abs() > hw {
                continue;
            }
            peak = peak.max(w.at(ix, ik).norm());
        }
    }
    peak
}

/// Build the two-tone signal f(x) = e^{-x^2/(2 sigma^2)}(e^{i w1 x} + e^{i w2 x})
/// and measure the ghost-peak ratios. The Born-Jordan distribution is the
/// sinc-multiplier convolution of the Wigner distribution (the quadrature
/// construction agrees to the cross-construction tolerance).
pub fn ghost_demo(omega1: f64, omega2: f64, sigma: f64, n: usize, dx: f64) -> Result<GhostReport> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter("sigma must be positive".into()));
    }
    if (omega2 - omega1).abs() * sigma < 4.0 {
        return Err(Error::InvalidParameter(format!(
            "tones not resolvable: |omega2 - omega1| * sigma = {} < 4",
            (omega2 - omega1).abs() * sigma
        )));
    }
    let grid = Grid::centered(n, dx)?;
    let xi_half = grid.dual().half_width();
    let needed = omega1.abs().max(omega2.abs()) + 4.0 / sigma;
    if xi_half < needed {
        return Err(Error::InvalidParameter(format!(
            "frequency range {xi_half:.2} cannot hold the tones (need {needed:.2}); decrease dx"
        )));
    }
    let f = tone_pair(&grid, omega1, omega2, sigma);
    let window = gaussian(&grid, sigma, 0.0, 0.0);
    let mut spectrogram = stft(&f, &window)?;
    for v in spectrogram.values_mut() {
        *v = num_complex::Complex64::new(v.norm_sqr(), 0.0);
    }
    let wigner = wigner_tau(&f, &f, 0.5, 8)?;
    let born_jordan = apply_bj_multiplier(&wigner);

    let mid = 0.5 * (omega1 + omega2);
    let hw = 3.0 / sigma;
    let rho = |w: &PhaseSpaceArray| box_peak(w, mid, hw) / box_peak(w, omega1, hw);
    let rho_wigner = rho(&wigner);
    let rho_bj = rho(&born_jordan);
    Ok(GhostReport { spectrogram, wigner, born_jordan, rho_wigner, rho_bj })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unresolvable_tones() {
        assert!(ghost_demo(1.0, 1.5, 2.0, 256, 0.125).is_err());
        assert!(ghost_demo(6.0, 6.0, 2.0, 256, 0.125).is_err());
    }

    #[test]
    fn ghost_is_suppressed() {
        let rep = ghost_demo(-6.0, 6.0, 2.0, 512, 0.0625).unwrap();
        // Wigner cross term sits at twice the auto-term height
        assert!((rep.rho_wigner - 2.0).abs() <= 0.25, "rho_W = {}", rep.rho_wigner);
        // locked acceptance bound
        assert!(rep.suppression() <= 0.25, "rho_BJ/rho_W = {}", rep.suppression());
    }
}
