//! Discrete Hörmander-class machinery for diagonal split metrics on the
//! phase plane: seminorms |a|_k^g, class norms ||a||^g_{m,N}, the Planck
//! function h_g, the Shubin / S^r_{rho,delta} / SG presets, and the
//! expansion-remainder order verification.
//!
//! A diagonal metric g_X(y, eta) = y^2/phi(X)^2 + eta^2/psi(X)^2 is split by
//! construction (the type admits no off-diagonal terms) and has
//! h_g = 1/(phi psi).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{apply_fourier_multiplier, fft_in_place};
use crate::grid::{interior_range, PhaseGrid, PhaseSpaceArray};
use crate::quantize::{bj_to_weyl, ConversionMethod};

/// Diagonal split Riemannian metric sampled on a phase grid.
#[derive(Debug, Clone)]
pub struct Metric {
    grid: PhaseGrid,
    phi: Vec<f64>,
    psi: Vec<f64>,
}

impl Metric {
    pub fn new(grid: PhaseGrid, phi: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        let n = grid.x.len() * grid.xi.len();
        if phi.len() != n || psi.len() != n {
            return Err(Error::InvalidGrid("metric fields do not match the grid".into()));
        }
        if phi.iter().chain(psi.iter()).any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::InvalidParameter("metric scales must be positive".into()));
        }
        Ok(Metric { grid, phi, psi })
    }

    pub fn from_fn(
        grid: PhaseGrid,
        mut phi: impl FnMut(f64, f64) -> f64,
        mut psi: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut pv = Vec::with_capacity(grid.x.len() * grid.xi.len());
        let mut sv = Vec::with_capacity(pv.capacity());
        for ix in 0..grid.x.len() {
            let x = grid.x.point(ix);
            for ik in 0..grid.xi.len() {
                let xi = grid.xi.point(ik);
                pv.push(phi(x, xi));
                sv.push(psi(x, xi));
            }
        }
        Metric::new(grid, pv, sv)
    }

    pub fn euclidean(grid: PhaseGrid) -> Metric {
        let n = grid.x.len() * grid.xi.len();
        Metric { grid, phi: vec![1.0; n], psi: vec![1.0; n] }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    #[inline]
    pub fn phi(&self, ix: usize, ik: usize) -> f64 {
        self.phi[ix * self.grid.xi.len() + ik]
    }

    #[inline]
    pub fn psi(&self, ix: usize, ik: usize) -> f64 {
        self.psi[ix * self.grid.xi.len() + ik]
    }

    /// g_X(Y) for Y = (y, eta).
    pub fn eval(&self, ix: usize, ik: usize, y: f64, eta: f64) -> f64 {
        let p = self.phi(ix, ik);
        let s = self.psi(ix, ik);
        (y / p).powi(2) + (eta / s).powi(2)
    }
}

/// Positive weight m on phase space.
#[derive(Debug, Clone)]
pub struct WeightM {
    grid: PhaseGrid,
    values: Vec<f64>,
}

impl WeightM {
    pub fn from_fn(grid: PhaseGrid, mut m: impl FnMut(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.x.len() * grid.xi.len());
        for ix in 0..grid.x.len() {
            let x = grid.x.point(ix);
            for ik in 0..grid.xi.len() {
                values.push(m(x, grid.xi.point(ik)));
            }
        }
        if values.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::InvalidParameter("weight must be positive and finite".into()));
        }
        Ok(WeightM { grid, values })
    }

    #[inline]
    pub fn at(&self, ix: usize, ik: usize) -> f64 {
        self.values[ix * self.grid.xi.len() + ik]
    }
}

/// Standard metric presets; <u> = (1 + |u|^2)^{1/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricPreset {
    /// phi = psi = <(x, xi)>^rho, 0 < rho <= 1
    Shubin { rho: f64 },
    /// phi = <xi>^{-delta}, psi = <xi>^{rho}, 0 <= delta <= rho <= 1
    Hormander { rho: f64, delta: f64 },
    /// phi = <x>, psi = <xi>
    Sg,
}

impl MetricPreset {
    pub fn metric(&self, grid: PhaseGrid) -> Result<Metric> {
        match *self {
            MetricPreset::Shubin { rho } => {
                if !(rho > 0.0 && rho <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "shubin preset requires 0 < rho <= 1, got {rho}"
                    )));
                }
                Metric::from_fn(
                    grid,
                    |x, xi| bracket2(x, xi).powf(rho),
                    |x, xi| bracket2(x, xi).powf(rho),
                )
            }
            MetricPreset::Hormander { rho, delta } => {
                if !(0.0 <= delta && delta <= rho && rho <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "hormander preset requires 0 <= delta <= rho <= 1, got ({rho}, {delta})"
                    )));
                }
                Metric::from_fn(
                    grid,
                    move |_, xi| bracket(xi).powf(-delta),
                    move |_, xi| bracket(xi).powf(rho),
                )
            }
            MetricPreset::Sg => Metric::from_fn(grid, |x, _| bracket(x), |_, xi| bracket(xi)),
        }
    }

    /// Closed-form Planck function of the preset at a phase point.
    pub fn planck_closed_form(&self, x: f64, xi: f64) -> f64 {
        match *self {
            MetricPreset::Shubin { rho } => bracket2(x, xi).powf(-2.0 * rho),
            MetricPreset::Hormander { rho, delta } => bracket(xi).powf(delta - rho),
            MetricPreset::Sg => 1.0 / (bracket(x) * bracket(xi)),
        }
    }
}

fn bracket(u: f64) -> f64 {
    (1.0 + u * u).sqrt()
}

fn bracket2(x: f64, xi: f64) -> f64 {
    (1.0 + x * x + xi * xi).sqrt()
}

/// Planck function h_g = 1/(phi psi) at a grid point.
pub fn planck(metric: &Metric, ix: usize, ik: usize) -> f64 {
    1.0 / (metric.phi(ix, ik) * metric.psi(ix, ik))
}

/// Maximum of h_g over the grid.
pub fn planck_max(metric: &Metric) -> f64 {
    let mut m = 0.0f64;
    for ix in 0..metric.grid.x.len() {
        for ik in 0..metric.grid.xi.len() {
            m = m.max(planck(metric, ix, ik));
        }
    }
    m
}

/// Seminorm field |a|_k^g and its maximum over the grid interior.
#[derive(Debug, Clone)]
pub struct SeminormField {
    grid: PhaseGrid,
    pub field: Vec<f64>,
    pub max_interior: f64,
}

impl SeminormField {
    #[inline]
    pub fn at(&self, ix: usize, ik: usize) -> f64 {
        self.field[ix * self.grid.xi.len() + ik]
    }
}

/// |a|_k^g(X): sup over sampled g_X-unit directions Y (repeated direction
/// Y_1 = ... = Y_k = Y) of the k-th directional derivative
/// sum_i binom(k,i) y^i eta^{k-i} d_x^i d_xi^{k-i} a(X), derivatives spectral.
pub fn seminorm_k(a: &PhaseSpaceArray, metric: &Metric, k: usize, dirs: usize) -> Result<SeminormField> {
    if k > 6 {
        return Err(Error::InvalidParameter(format!("seminorm order {k} > 6")));
    }
    if !a.grid().approx_eq(metric.grid()) {
        return Err(Error::GridMismatch("symbol and metric on different grids".into()));
    }
    let grid = *a.grid();
    let derivs = mixed_derivatives(a, k);
    let binom: Vec<f64> = (0..=k).map(|i| binomial(k, i)).collect();

    let nxi = grid.xi.len();
    let field: Vec<f64> = (0..grid.x.len() * nxi)
        .into_par_iter()
        .map(|lin| {
            let ix = lin / nxi;
            let ik = lin % nxi;
            let p = metric.phi(ix, ik);
            let s = metric.psi(ix, ik);
            let mut sup = 0.0f64;
            for t in 0..dirs {
                let theta = std::f64::consts::TAU * t as f64 / dirs as f64;
                let y = p * theta.cos();
                let eta = s * theta.sin();
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..=k {
                    acc += binom[i] * y.powi(i as i32) * eta.powi((k - i) as i32)
                        * derivs[i].values()[lin];
                }
                sup = sup.max(acc.norm());
            }
            sup
        })
        .collect();

    let (xlo, xhi) = interior_range(grid.x.len(), 0.5);
    let (klo, khi) = interior_range(nxi, 0.5);
    let mut max_interior = 0.0f64;
    for ix in xlo..xhi {
        for ik in klo..khi {
            max_interior = max_interior.max(field[ix * nxi + ik]);
        }
    }
    Ok(SeminormField { grid, field, max_interior })
}

/// d_x^i d_xi^{k-i} a for i = 0..=k, computed spectrally.
fn mixed_derivatives(a: &PhaseSpaceArray, k: usize) -> Vec<PhaseSpaceArray> {
    (0..=k)
        .map(|i| {
            if k == 0 {
                a.clone()
            } else {
                apply_fourier_multiplier(a, |eta, y| {
                    // F[d_x a] = i eta a^, F[d_xi a] = i y a^
                    Complex64::new(0.0, 1.0).powu(k as u32)
                        * eta.powi(i as i32)
                        * y.powi((k - i) as i32)
                })
            }
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Class norm ||a||^g_{m,N} = sum_{k=0}^{N} sup_X |a|_k^g(X)/m(X), suprema
/// over the grid interior.
pub fn class_norm(
    a: &PhaseSpaceArray,
    metric: &Metric,
    m: &WeightM,
    n_max: usize,
    dirs: usize,
) -> Result<f64> {
    if n_max > 6 {
        return Err(Error::InvalidParameter(format!("class norm order {n_max} > 6")));
    }
    let grid = *a.grid();
    let nxi = grid.xi.len();
    let (xlo, xhi) = interior_range(grid.x.len(), 0.5);
    let (klo, khi) = interior_range(nxi, 0.5);
    let mut total = 0.0f64;
    for k in 0..=n_max {
        let f = seminorm_k(a, metric, k, dirs)?;
        let mut sup = 0.0f64;
        for ix in xlo..xhi {
            for ik in klo..khi {
                sup = sup.max(f.field[ix * nxi + ik] / m.at(ix, ik));
            }
        }
        total += sup;
    }
    Ok(total)
}

/// Per-lambda remainder norms and the fitted log-log slope.
#[derive(Debug, Clone)]
pub struct RemainderReport {
    /// (lambda, remainder sup-norm over the interior)
    pub entries: Vec<(f64, f64)>,
    /// least-squares slope of log r against log lambda; None when the
    /// remainders sit at the noise floor (degenerate case)
    pub slope: Option<f64>,
    pub degenerate: bool,
}

/// Scaling verification of the expansion remainder: for each lambda form
/// a_lambda(X) = a(X/lambda), compute
/// r = || bj_to_weyl(a_l, multiplier) - bj_to_weyl(a_l, expansion(N)) ||_inf
/// over the interior, and fit the slope of log r vs log lambda. For the
/// first omitted term j = N/2 the slope is -2N.
pub fn remainder_order(
    a: &PhaseSpaceArray,
    lambdas: &[f64],
    n: usize,
) -> Result<RemainderReport> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "remainder order requires even positive N, got {n}"
        )));
    }
    if lambdas.len() < 2 || lambdas.iter().any(|&l| !(l >= 2.0)) {
        return Err(Error::InvalidParameter(
            "need at least two scale factors, all >= 2".into(),
        ));
    }
    let scale = a.norm_inf();
    let mut entries = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let zoomed = zoom(a, lambda)?;
        let b_mult = bj_to_weyl(&zoomed, &ConversionMethod::Multiplier)?;
        let b_exp = bj_to_weyl(&zoomed, &ConversionMethod::Expansion(n))?;
        let diff = b_mult.add(&b_exp.scaled(Complex64::new(-1.0, 0.0)))?;
        entries.push((lambda, diff.norm_inf_interior(0.5)));
    }
    let degenerate = entries.iter().all(|&(_, r)| r <= 1e-12 * scale);
    let slope = if degenerate {
        None
    } else {
        let pts: Vec<(f64, f64)> = entries.iter().map(|&(l, r)| (l.ln(), r.max(1e-300).ln())).collect();
        Some(least_squares_slope(&pts))
    };
    Ok(RemainderReport { entries, slope, degenerate })
}

/// a(X/lambda) by separable trigonometric interpolation; errors out when the
/// dilated symbol no longer fits the grid.
pub fn zoom(a: &PhaseSpaceArray, lambda: f64) -> Result<PhaseSpaceArray> {
    let grid = *a.grid();
    let nx = grid.x.len();
    let nxi = grid.xi.len();

    // pass 1: interpolate along x at x_j / lambda for every xi column
    let ex = eval_matrix(nx, grid.x.spacing(), lambda);
    let mut mid = PhaseSpaceArray::zeros(grid);
    let cols: Vec<Vec<Complex64>> = (0..nxi)
        .into_par_iter()
        .map(|ik| {
            let mut spec: Vec<Complex64> = (0..nx).map(|ix| a.at(ix, ik)).collect();
            fft_in_place(&mut spec);
            (0..nx)
                .map(|j| {
                    let row = &ex[j * nx..(j + 1) * nx];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (e, s) in row.iter().zip(spec.iter()) {
                        acc += e * s;
                    }
                    acc / nx as f64
                })
                .collect()
        })
        .collect();
    for (ik, col) in cols.iter().enumerate() {
        for ix in 0..nx {
            *mid.at_mut(ix, ik) = col[ix];
        }
    }

    // pass 2: interpolate along xi at xi_k / lambda for every x row
    let exi = eval_matrix(nxi, grid.xi.spacing(), lambda);
    let rows: Vec<Vec<Complex64>> = (0..nx)
        .into_par_iter()
        .map(|ix| {
            let mut spec: Vec<Complex64> = mid.row(ix).to_vec();
            fft_in_place(&mut spec);
            (0..nxi)
                .map(|k| {
                    let row = &exi[k * nxi..(k + 1) * nxi];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (e, s) in row.iter().zip(spec.iter()) {
                        acc += e * s;
                    }
                    acc / nxi as f64
                })
                .collect()
        })
        .collect();
    let mut out = PhaseSpaceArray::zeros(grid);
    for (ix, row) in rows.iter().enumerate() {
        out.row_mut(ix).copy_from_slice(row);
    }

    // resolution check: dilation must not push new mass onto the grid edge
    // (symbols that already live on the edge, like polynomials, only shrink
    // there under contraction of the argument and are fine)
    let edge_of = |arr: &PhaseSpaceArray| {
        let mut edge = 0.0f64;
        for ix in 0..nx {
            edge = edge.max(arr.at(ix, 0).norm()).max(arr.at(ix, nxi - 1).norm());
        }
        for ik in 0..nxi {
            edge = edge.max(arr.at(0, ik).norm()).max(arr.at(nx - 1, ik).norm());
        }
        edge
    };
    let edge_out = edge_of(&out);
    let edge_in = edge_of(a);
    if edge_out > 1e-6 * out.norm_inf().max(1e-300) && edge_out > 4.0 * edge_in {
        return Err(Error::GridResolution(format!(
            "dilated symbol reaches the grid edge (relative magnitude {:.3e})",
            edge_out / out.norm_inf()
        )));
    }
    Ok(out)
}

/// Phase matrix E[j][bin] = e^{i omega_bin (x_j/lambda - origin)} with the
/// cosine rule at the Nyquist bin; evaluation of a length-n interpolant at
/// the contracted points is E times the spectrum, divided by n.
fn eval_matrix(n: usize, dx: f64, lambda: f64) -> Vec<Complex64> {
    let grid = crate::grid::Grid::centered(n, dx).expect("valid grid");
    let base = std::f64::consts::TAU / (n as f64 * dx);
    let mut e = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let rel = grid.point(j) / lambda - grid.origin();
        for k in 0..n {
            e[j * n + k] = if k == n / 2 {
                Complex64::new((base * (n as f64 / 2.0) * rel).cos(), 0.0)
            } else {
                let ks = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
                Complex64::from_polar(1.0, base * ks * rel)
            };
        }
    }
    e
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
