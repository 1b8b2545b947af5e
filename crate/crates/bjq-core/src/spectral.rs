//! Singular values, Schatten-von Neumann norms, minimal eigenvalues for
//! lower-bound checks, and compactness diagnostics.
//!
//! Operator matrices carry the dx quadrature weight, which on a uniform grid
//! makes the matrix similar to the continuum operator through the isometry
//! f -> sqrt(dx) f; the symmetric dx^{1/2} . dx^{-1/2} weighting is therefore
//! the identity and matrix singular values approximate continuum ones
//! directly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantize::{hermiticity_defect, OperatorMatrix, MAX_OPERATOR_SIZE};

/// Nonincreasing singular values of an operator matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn leading(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

impl SingularSpectrum {
    /// Wrap raw values, sorting nonincreasing and validating nonnegativity.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "singular values must be finite and nonnegative".into(),
            ));
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        Ok(SingularSpectrum { values })
    }
}

/// Plain matrix SVD of a phase-space array's values (no operator semantics).
pub fn array_singular_values(a: &crate::grid::PhaseSpaceArray) -> Result<SingularSpectrum> {
    let m = DMatrix::from_fn(a.nx(), a.nxi(), |i, j| a.at(i, j));
    let svd = m.svd(false, false);
    SingularSpectrum::from_values(svd.singular_values.iter().copied().collect())
}

/// Full SVD of the operator; deterministic for a fixed build.
pub fn singular_values(m: &OperatorMatrix) -> Result<SingularSpectrum> {
    if m.len() > MAX_OPERATOR_SIZE {
        return Err(Error::InvalidParameter(format!(
            "operator size {} exceeds the {MAX_OPERATOR_SIZE} limit",
            m.len()
        )));
    }
    let svd = m.matrix().clone().svd(false, false);
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    Ok(SingularSpectrum { values })
}

/// l^p norm of the singular values; p = infinity gives the largest.
pub fn schatten_norm(s: &SingularSpectrum, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("Schatten order p = {p} < 1 rejected")));
    }
    if s.values.is_empty() {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(s.leading());
    }
    let top = s.leading();
    if top == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = s.values.iter().map(|v| (v / top).powf(p)).sum();
    Ok(top * sum.powf(1.0 / p))
}

/// Smallest eigenvalue of the Hermitian part (M + M*)/2; refuses operators
/// whose hermiticity defect exceeds 1e-8.
pub fn min_eigenvalue_hermitian(m: &OperatorMatrix) -> Result<f64> {
    let defect = hermiticity_defect(m);
    if defect > 1e-8 {
        return Err(Error::NotHermitian { defect, limit: 1e-8 });
    }
    let h = (m.matrix() + m.matrix().adjoint()).map(|v| v * Complex64::new(0.5, 0.0));
    let eig = nalgebra::SymmetricEigen::new(h);
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Where the spectrum drops below 10%, 1%, 0.1% of the leading value, plus
/// the relative tail mass beyond each drop.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// (threshold fraction, first index below it or len if never, tail mass fraction)
    pub drops: Vec<(f64, usize, f64)>,
}

pub fn singular_decay_report(s: &SingularSpectrum) -> DecayReport {
    let top = s.leading();
    let total: f64 = s.values.iter().sum();
    let mut drops = Vec::new();
    for frac in [0.1, 0.01, 0.001] {
        let idx = s
            .values
            .iter()
            .position(|&v| v < frac * top)
            .unwrap_or(s.values.len());
        let tail: f64 = s.values[idx.min(s.values.len())..].iter().sum();
        drops.push((frac, idx, if total > 0.0 { tail / total } else { 0.0 }));
    }
    DecayReport { drops }
}

/// Largest singular value (operator norm proxy used by the cross-checks).
pub fn operator_norm(m: &OperatorMatrix) -> Result<f64> {
    Ok(singular_values(m)?.leading())
}

/// Build an operator matrix holding an arbitrary dense matrix on a grid
/// (used by diagnostics and tests).
pub fn operator_from_matrix(grid: crate::grid::Grid, m: DMatrix<Complex64>) -> Result<OperatorMatrix> {
    OperatorMatrix::new(grid, m)
}
