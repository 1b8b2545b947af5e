//! Discretized pseudo-differential operators: the Shubin t-family Op_t(a),
//! Weyl and Kohn-Nirenberg as special cases, and Born-Jordan as the
//! quadrature average over t in [0, 1]; Born-Jordan -> Weyl symbol
//! conversion by three cross-validating routes; the Born-Jordan monomial
//! composition rule; duality and self-adjointness diagnostics.
//!
//! Matrix contract: (Op f)(x_j) ~= sum_m M[j][m] f(x_m), with the y-quadrature
//! weight dy = dx folded into M:
//!
//! ```text
//! M[j][m] = dx (2 pi)^{-1} dxi sum_k a((1-t) x_j + t x_m, xi_k)
//!           e^{i (x_j - x_m) xi_k}
//! ```
//!
//! The off-grid first argument is the trigonometric interpolant of `a` along
//! its x axis. The assembly exploits two structural facts: the k-sum depends
//! on the difference d = j - m only through d mod N, and for fixed d the
//! evaluation points (1-t) x_j + t x_m = x_m + (1-t) d dx form a uniformly
//! shifted grid, so one spectral shift per difference assembles a full
//! anti-diagonal. For t in {0, 1} the shift is an exact circular rotation and
//! no interpolation occurs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{
    apply_fourier_multiplier, fft_in_place, ifft_in_place, require_signal_phase_grid,
    shifted_samples_from_spectrum,
};
use crate::grid::{Grid, PhaseSpaceArray, Signal, TAU};
use crate::quadrature::QuadratureRule;
use crate::synth::sinc;
use crate::transforms::apply_bj_multiplier;

pub const MAX_OPERATOR_SIZE: usize = 512;

/// Dense discretized operator on sampled L2, quadrature weight folded in.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    grid: Grid,
    values: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(grid: Grid, values: DMatrix<Complex64>) -> Result<Self> {
        if values.nrows() != grid.len() || values.ncols() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "operator shape {}x{} does not match grid size {}",
                values.nrows(),
                values.ncols(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("operator entry".into()));
        }
        Ok(OperatorMatrix { grid, values })
    }

    pub fn identity(grid: Grid) -> Self {
        OperatorMatrix { grid, values: DMatrix::identity(grid.len(), grid.len()) }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Apply to a signal on the same grid.
    pub fn apply(&self, f: &Signal) -> Result<Signal> {
        if !f.grid().approx_eq(&self.grid) {
            return Err(Error::GridMismatch("operator and signal grids differ".into()));
        }
        let v = nalgebra::DVector::from_column_slice(f.values());
        let out = &self.values * v;
        Signal::new(self.grid, out.iter().copied().collect())
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix { grid: self.grid, values: self.values.adjoint() }
    }

    pub fn scaled(&self, c: Complex64) -> OperatorMatrix {
        OperatorMatrix { grid: self.grid, values: self.values.map(|v| v * c) }
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if !other.grid.approx_eq(&self.grid) {
            return Err(Error::GridMismatch("operator grids differ".into()));
        }
        Ok(OperatorMatrix { grid: self.grid, values: &self.values + &other.values })
    }

    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if !other.grid.approx_eq(&self.grid) {
            return Err(Error::GridMismatch("operator grids differ".into()));
        }
        Ok(OperatorMatrix { grid: self.grid, values: &self.values * &other.values })
    }
}

/// Quantization scheme; weyl == shubin(1/2) and kohn_nirenberg == shubin(0).
#[derive(Debug, Clone, PartialEq)]
pub enum SchemeSpec {
    Shubin(f64),
    Weyl,
    KohnNirenberg,
    BornJordan(QuadratureRule),
}

impl SchemeSpec {
    /// (t, weight) pairs realizing the scheme.
    fn nodes(&self) -> Result<Vec<(f64, f64)>> {
        match self {
            SchemeSpec::Shubin(t) => {
                if !t.is_finite() {
                    return Err(Error::InvalidParameter("shubin parameter must be finite".into()));
                }
                Ok(vec![(*t, 1.0)])
            }
            SchemeSpec::Weyl => Ok(vec![(0.5, 1.0)]),
            SchemeSpec::KohnNirenberg => Ok(vec![(0.0, 1.0)]),
            SchemeSpec::BornJordan(q) => Ok(q.iter().collect()),
        }
    }
}

/// Difference-column transform of a symbol: B[i][r] = sum_k a(x_i, xi_k)
/// e^{i r dx xi_k}, together with the x-axis spectra of its columns.
struct SymbolColumns {
    n: usize,
    dx: f64,
    /// column values, indexed [r][i]
    cols: Vec<Vec<Complex64>>,
    /// unnormalized x-spectra of the columns, indexed [r]
    specs: Vec<Vec<Complex64>>,
}

fn symbol_columns(a: &PhaseSpaceArray) -> SymbolColumns {
    let n = a.nx();
    let dx = a.grid().x.spacing();
    // row-wise unnormalized inverse DFT with the centered-phase sign flip
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut buf = a.row(i).to_vec();
            ifft_in_place(&mut buf);
            for (r, v) in buf.iter_mut().enumerate() {
                if r % 2 == 1 {
                    *v = -*v;
                }
            }
            buf
        })
        .collect();
    let mut cols = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in rows.iter().enumerate() {
        for r in 0..n {
            cols[r][i] = row[r];
        }
    }
    let specs: Vec<Vec<Complex64>> = cols
        .par_iter()
        .map(|col| {
            let mut s = col.clone();
            fft_in_place(&mut s);
            s
        })
        .collect();
    SymbolColumns { n, dx, cols, specs }
}

impl SymbolColumns {
    /// Interpolated column r at the grid shifted by (1 - t) * lag, averaged
    /// over the scheme nodes. The lag is the centered (nearest-image)
    /// difference value r dx or (r - N) dx; the ambiguous Nyquist residue
    /// r = N/2 is split symmetrically over +-(N/2) dx, which keeps real
    /// symbols Hermitian and matches the even sinc multiplier.
    fn shifted_column(&self, r: usize, nodes: &[(f64, f64)]) -> Vec<Complex64> {
        let n = self.n;
        let lags: &[(f64, f64)] = &lag_images(r, n, self.dx);
        if nodes.len() == 1 && lags.len() == 1 {
            let (t, w) = nodes[0];
            let s = (1.0 - t) * lags[0].0;
            let mut out = shifted_samples_from_spectrum(&self.cols[r], &self.specs[r], self.dx, s);
            if w != 1.0 {
                for v in out.iter_mut() {
                    *v *= w;
                }
            }
            return out;
        }
        // sum the shift phases over nodes (and lag images) first, then one
        // inverse FFT for the whole anti-diagonal
        let base = TAU / (n as f64 * self.dx);
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, b) in buf.iter_mut().enumerate() {
            let mut phase_sum = Complex64::new(0.0, 0.0);
            if k == n / 2 {
                let omega = base * (n as f64 / 2.0);
                for &(lag, lw) in lags {
                    for &(t, w) in nodes {
                        phase_sum += Complex64::new(lw * w * (omega * (1.0 - t) * lag).cos(), 0.0);
                    }
                }
            } else {
                let ks = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                let omega = base * ks;
                for &(lag, lw) in lags {
                    for &(t, w) in nodes {
                        phase_sum += Complex64::from_polar(lw * w, omega * (1.0 - t) * lag);
                    }
                }
            }
            *b = self.specs[r][k] * phase_sum;
        }
        ifft_in_place(&mut buf);
        let inv_n = 1.0 / n as f64;
        for v in buf.iter_mut() {
            *v *= inv_n;
        }
        buf
    }
}

/// Centered lag value(s) for a difference residue r, with the Nyquist
/// residue split over both images.
fn lag_images(r: usize, n: usize, dx: f64) -> Vec<(f64, f64)> {
    if r < n / 2 {
        vec![(r as f64 * dx, 1.0)]
    } else if r > n / 2 {
        vec![((r as f64 - n as f64) * dx, 1.0)]
    } else {
        let l = (n / 2) as f64 * dx;
        vec![(l, 0.5), (-l, 0.5)]
    }
}

/// Discretize Op_t(a) / Op^w(a) / Op_BJ(a) as a dense matrix.
pub fn quantize(a: &PhaseSpaceArray, scheme: &SchemeSpec, oversample: usize) -> Result<OperatorMatrix> {
    require_signal_phase_grid(a.grid())?;
    if oversample < 1 {
        return Err(Error::InvalidParameter("oversample must be >= 1".into()));
    }
    let n = a.nx();
    if a.nxi() != n {
        return Err(Error::GridMismatch("symbol phase grid must be square".into()));
    }
    if n > MAX_OPERATOR_SIZE {
        return Err(Error::InvalidParameter(format!(
            "operator size {n} exceeds the {MAX_OPERATOR_SIZE} limit"
        )));
    }
    let nodes = scheme.nodes()?;
    let grid = a.grid().x;
    let columns = symbol_columns(a);

    // one shifted column per difference residue r = (j - m) mod N
    let diags: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|r| columns.shifted_column(r, &nodes))
        .collect();

    let inv_n = Complex64::new(1.0 / n as f64, 0.0);
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (r, col) in diags.iter().enumerate() {
        for mm in 0..n {
            let j = (mm + r) % n;
            m[(j, mm)] = col[mm] * inv_n;
        }
    }
    OperatorMatrix::new(grid, m)
}

/// Symbol conversion method for [`bj_to_weyl`].
#[derive(Debug, Clone, PartialEq)]
pub enum ConversionMethod {
    /// Spectral convolution with the sinc(eta y / 2) multiplier.
    Multiplier,
    /// Quadrature average of the t-symbol flow e^{i (t - 1/2) eta y}.
    Quadrature(QuadratureRule),
    /// Partial sum of the asymptotic expansion with 2j < N terms.
    Expansion(usize),
}

/// Weyl symbol b with Op_BJ(a) = Op^w(b), by the chosen route.
pub fn bj_to_weyl(a: &PhaseSpaceArray, method: &ConversionMethod) -> Result<PhaseSpaceArray> {
    match method {
        ConversionMethod::Multiplier => Ok(apply_bj_multiplier(a)),
        ConversionMethod::Quadrature(q) => Ok(apply_fourier_multiplier(a, |eta, y| {
            q.iter()
                .map(|(t, w)| Complex64::from_polar(w, (t - 0.5) * eta * y))
                .sum()
        })),
        ConversionMethod::Expansion(n) => {
            let n = *n;
            if n == 0 {
                return Err(Error::InvalidParameter("expansion order must be positive".into()));
            }
            if n > 12 {
                return Err(Error::InvalidParameter(format!(
                    "expansion order {n} > 12 rejected (spectral differentiation noise)"
                )));
            }
            Ok(apply_fourier_multiplier(a, |eta, y| {
                Complex64::new(expansion_multiplier(eta * y, n), 0.0)
            }))
        }
    }
}

/// Partial sum sum_{2j<N} (-1)^j s^{2j} / (4^j (2j+1)!) of the sinc(s/2)
/// series; the spectral realization of the expansion terms.
pub fn expansion_multiplier(s: f64, n: usize) -> f64 {
    let mut acc = 0.0;
    let mut j = 0usize;
    while 2 * j < n {
        acc += expansion_term(s, j);
        j += 1;
    }
    acc
}

/// Single term (-1)^j s^{2j} / (4^j (2j+1)!).
pub fn expansion_term(s: f64, j: usize) -> f64 {
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    let mut fact = 1.0f64;
    for k in 2..=(2 * j + 1) {
        fact *= k as f64;
    }
    sign * s.powi(2 * j as i32) / (4.0f64.powi(j as i32) * fact)
}

/// Born-Jordan quantization of the monomial x^m xi^l by the composition rule
/// (1/(l+1)) sum_{k=0}^{l} D^{l-k} X^m D^k, with X multiplication by x and
/// D = -i d/dx the spectral differentiation matrix.
pub fn monomial_bj_operator(m: u32, l: u32, grid: &Grid) -> Result<OperatorMatrix> {
    if m + l > 6 {
        return Err(Error::InvalidParameter(format!(
            "monomial degree m + l = {} exceeds the grid-resolution bound 6",
            m + l
        )));
    }
    let n = grid.len();
    if n > MAX_OPERATOR_SIZE {
        return Err(Error::InvalidParameter(format!(
            "operator size {n} exceeds the {MAX_OPERATOR_SIZE} limit"
        )));
    }
    let x_pow = DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            Complex64::new(grid.point(j).powi(m as i32), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let d = spectral_derivative_matrix(grid);
    // powers of D up to l
    let mut d_pows: Vec<DMatrix<Complex64>> = Vec::with_capacity(l as usize + 1);
    d_pows.push(DMatrix::identity(n, n));
    for _ in 1..=l {
        let next = d_pows.last().unwrap() * &d;
        d_pows.push(next);
    }
    let mut acc = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for k in 0..=l as usize {
        acc += &d_pows[l as usize - k] * &x_pow * &d_pows[k];
    }
    let scale = Complex64::new(1.0 / (l as f64 + 1.0), 0.0);
    OperatorMatrix::new(*grid, acc.map(|v| v * scale))
}

/// Spectral differentiation matrix D = -i d/dx = F^{-1} (mult by xi) F,
/// identical to the Weyl quantization of the symbol a(x, xi) = xi.
pub fn spectral_derivative_matrix(grid: &Grid) -> DMatrix<Complex64> {
    let n = grid.len();
    let dual = grid.dual();
    // T1[r] = sum_k xi_k e^{i r dx xi_k} via the sign-flipped inverse DFT
    let mut t1: Vec<Complex64> = (0..n).map(|k| Complex64::new(dual.point(k), 0.0)).collect();
    ifft_in_place(&mut t1);
    for (r, v) in t1.iter_mut().enumerate() {
        if r % 2 == 1 {
            *v = -*v;
        }
    }
    let inv_n = 1.0 / n as f64;
    DMatrix::from_fn(n, n, |j, p| {
        let r = (j as i64 - p as i64).rem_euclid(n as i64) as usize;
        t1[r] * inv_n
    })
}

/// |  (Op_tau(a) f, g)  -  (2 pi)^{-1/2} (a, W_tau(g, f))  | with both inner
/// products discrete Riemann sums (conjugation on the second slot).
pub fn duality_residual(a: &PhaseSpaceArray, tau: f64, f: &Signal, g: &Signal) -> Result<f64> {
    let op = quantize(a, &SchemeSpec::Shubin(tau), 8)?;
    let lhs = op.apply(f)?.inner(g);
    let w = crate::transforms::wigner_tau(g, f, tau, 8)?;
    let rhs = a.inner(&w) / TAU.sqrt();
    Ok((lhs - rhs).norm())
}

/// Relative Frobenius defect ||M - M*|| / max(||M||, eps).
pub fn hermiticity_defect(m: &OperatorMatrix) -> f64 {
    let diff = (m.matrix() - m.matrix().adjoint())
        .iter()
        .map(|v| v.norm_sqr())
        .sum::<f64>()
        .sqrt();
    diff / m.frobenius().max(1e-300)
}

/// Convenience: the Born-Jordan Fourier multiplier value at a point (used by
/// validation tests of the conversion contract).
pub fn bj_symbol_multiplier(eta: f64, y: f64) -> f64 {
    sinc(0.5 * eta * y)
}
