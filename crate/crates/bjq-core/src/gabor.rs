//! Gabor frame analysis/synthesis on the discretized phase plane and the
//! weighted mixed-norm evaluation behind desk-scale modulation-space norms.
//!
//! The symbol domain is a square self-dual phase grid (dx = dxi =
//! sqrt(2 pi / N)) so that the lattice Lambda_eps = eps Z^2 is commensurate
//! with both the grid and its Fourier dual. Coefficients are samples of the
//! 2-D windowed transform
//!
//!   c(j, k) = dA sum_X a(X) conj(Psi0(X - j)) e^{-i <X, rho(k)>},
//!
//! with rho(x, xi) = (xi, x), normalized so that c(0,0) = ||Psi0||_2^2 when
//! a = Psi0. Synthesis is the plain sum over lattice atoms built from the
//! canonical dual window (frame-operator inverse of Psi0, conjugate-gradient
//! to 1e-12).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::forward2;
use crate::grid::{Grid, PhaseGrid, PhaseSpaceArray, TAU};

/// Polynomial weight omega_0(eta, y) = (1 + |eta|^2 + |y|^2)^{s/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub s: f64,
}

impl WeightSpec {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidParameter("weight order must be finite".into()));
        }
        Ok(WeightSpec { s })
    }

    pub fn omega0(&self, eta: f64, y: f64) -> f64 {
        (1.0 + eta * eta + y * y).powf(self.s / 2.0)
    }
}

/// Gabor coefficient array over the position lattice (j) and modulation
/// lattice (k), each a 2-D lattice with `pos_count` / `mod_count` points per
/// axis.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborCoefficients {
    values: Vec<Complex64>,
    pos_count: usize,
    mod_count: usize,
    /// lattice coordinate values per axis (positions)
    pos_values: Vec<f64>,
    /// lattice coordinate values per axis (modulations)
    mod_values: Vec<f64>,
}

impl GaborCoefficients {
    pub fn zeros_like(sys: &GaborSystem) -> Self {
        let pc = sys.pos_count;
        let mc = sys.mod_count;
        GaborCoefficients {
            values: vec![Complex64::new(0.0, 0.0); pc * pc * mc * mc],
            pos_count: pc,
            mod_count: mc,
            pos_values: sys.pos_values.clone(),
            mod_values: sys.mod_values.clone(),
        }
    }

    #[inline]
    fn idx(&self, jx: usize, jxi: usize, kx: usize, kxi: usize) -> usize {
        ((jx * self.pos_count + jxi) * self.mod_count + kx) * self.mod_count + kxi
    }

    #[inline]
    pub fn at(&self, jx: usize, jxi: usize, kx: usize, kxi: usize) -> Complex64 {
        self.values[self.idx(jx, jxi, kx, kxi)]
    }

    #[inline]
    pub fn at_mut(&mut self, jx: usize, jxi: usize, kx: usize, kxi: usize) -> &mut Complex64 {
        let i = self.idx(jx, jxi, kx, kxi);
        &mut self.values[i]
    }

    pub fn pos_count(&self) -> usize {
        self.pos_count
    }

    pub fn mod_count(&self) -> usize {
        self.mod_count
    }

    pub fn pos_values(&self) -> &[f64] {
        &self.pos_values
    }

    pub fn mod_values(&self) -> &[f64] {
        &self.mod_values
    }

    /// Lattice axis index of the origin (coordinate value 0).
    pub fn origin_pos(&self) -> usize {
        self.pos_values.iter().position(|&v| v == 0.0).expect("centered lattice")
    }

    pub fn origin_mod(&self) -> usize {
        self.mod_values.iter().position(|&v| v == 0.0).expect("centered lattice")
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Gabor frame system on a square self-dual phase grid.
#[derive(Debug, Clone)]
pub struct GaborSystem {
    base: PhaseGrid,
    /// lattice step in grid indices, common to both axes
    step: usize,
    eps: f64,
    window: PhaseSpaceArray,
    dual_window: PhaseSpaceArray,
    pos_count: usize,
    mod_count: usize,
    pos_values: Vec<f64>,
    mod_values: Vec<f64>,
    frame_bounds: (f64, f64),
}

impl GaborSystem {
    /// Square self-dual phase grid with n points per axis (n a power of two
    /// with integer square root).
    pub fn square_grid(n: usize) -> Result<PhaseGrid> {
        let dx = (TAU / n as f64).sqrt();
        let g = Grid::centered(n, dx)?;
        Ok(PhaseGrid::new(g, g))
    }

    /// Default system: redundancy 4 (eps = half the critical lattice step
    /// sqrt(2 pi)) with an L2-normalized Gaussian window of unit width.
    pub fn standard(n: usize) -> Result<GaborSystem> {
        let base = Self::square_grid(n)?;
        let root = (n as f64).sqrt().round() as usize;
        if root * root != n || root % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "standard Gabor system needs n with an even integer square root, got {n}"
            )));
        }
        let eps = (root / 2) as f64 * base.x.spacing();
        let window = gaussian_window(&base, 1.0);
        GaborSystem::new(base, eps, window)
    }

    /// Build a system, validating lattice commensurability and frame health,
    /// and computing the canonical dual window.
    pub fn new(base: PhaseGrid, eps: f64, window: PhaseSpaceArray) -> Result<GaborSystem> {
        if !window.grid().approx_eq(&base) {
            return Err(Error::GridMismatch("window not sampled on the system grid".into()));
        }
        if window.values().iter().all(|v| v.norm_sqr() == 0.0) {
            return Err(Error::ZeroWindow);
        }
        let n = base.x.len();
        if base.xi.len() != n {
            return Err(Error::InvalidGrid("Gabor base grid must be square".into()));
        }
        let step = commensurate_step(eps, base.x.spacing())?;
        // modulation lattice must also land on dual-grid points
        let dual_dx = base.x.dual().spacing();
        commensurate_step(eps, dual_dx)?;
        commensurate_step(eps, base.xi.spacing())?;
        commensurate_step(eps, base.xi.dual().spacing())?;
        if n % step != 0 {
            return Err(Error::InvalidParameter(format!(
                "lattice step {step} does not divide the grid size {n}"
            )));
        }
        let count = n / step;
        if count < 4 {
            return Err(Error::InvalidParameter(format!(
                "lattice has {count} points per axis; need at least 4"
            )));
        }
        let pos_values: Vec<f64> = (0..count).map(|i| base.x.point(i * step)).collect();
        let mod_values = pos_values.clone();

        let mut sys = GaborSystem {
            base,
            step,
            eps,
            dual_window: window.clone(),
            window,
            pos_count: count,
            mod_count: count,
            pos_values,
            mod_values,
            frame_bounds: (0.0, 0.0),
        };
        // canonical dual: S^{-1} Psi0 by conjugate gradients
        let dual = sys.solve_frame(&sys.window, 1e-12, 800)?;
        sys.dual_window = dual;
        let (a, b) = sys.compute_frame_bounds()?;
        if !(a > 0.0) || b / a >= 1e6 {
            return Err(Error::FrameIllConditioned { cond: b / a });
        }
        sys.frame_bounds = (a, b);
        Ok(sys)
    }

    pub fn base(&self) -> &PhaseGrid {
        &self.base
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn window(&self) -> &PhaseSpaceArray {
        &self.window
    }

    pub fn dual_window(&self) -> &PhaseSpaceArray {
        &self.dual_window
    }

    /// Frame bounds (A, B) of  A ||a||^2 <= sum |c|^2 <= B ||a||^2.
    pub fn frame_bounds(&self) -> (f64, f64) {
        self.frame_bounds
    }

    fn analyze_with(&self, a: &PhaseSpaceArray, window: &PhaseSpaceArray) -> GaborCoefficients {
        let n = self.base.x.len();
        let step = self.step;
        let pc = self.pos_count;
        let mc = self.mod_count;
        // dual-grid indices of the sampled modulation frequencies rho(k)
        let dual_eta = self.base.x.dual();
        let dual_y = self.base.xi.dual();
        let eta_idx: Vec<usize> =
            self.mod_values.iter().map(|&v| index_of(&dual_eta, v)).collect();
        let y_idx: Vec<usize> = self.mod_values.iter().map(|&v| index_of(&dual_y, v)).collect();

        let blocks: Vec<Vec<Complex64>> = (0..pc * pc)
            .into_par_iter()
            .map(|jl| {
                let jx = jl / pc;
                let jxi = jl % pc;
                let sx = jx * step;
                let sxi = jxi * step;
                // a(X) conj(Psi0(X - j)), window shifted circularly; the
                // lattice value pos_values[jx] sits at grid index jx*step +
                // n/2 relative to the origin index n/2, i.e. an index shift
                // of jx*step - 0 from the centered window... window sample
                // for X index (ix, ik) is at index (ix - shift) mod n where
                // shift makes the window centered at the lattice point.
                let shift_x = (sx + n - n / 2) % n; // lattice point index = sx, center at n/2
                let shift_xi = (sxi + n - n / 2) % n;
                let mut prod = PhaseSpaceArray::zeros(self.base);
                for ix in 0..n {
                    let wx = (ix + n - shift_x) % n;
                    for ik in 0..n {
                        let wxi = (ik + n - shift_xi) % n;
                        *prod.at_mut(ix, ik) = a.at(ix, ik) * window.at(wx, wxi).conj();
                    }
                }
                let v = forward2(&prod);
                let mut block = vec![Complex64::new(0.0, 0.0); mc * mc];
                for kx in 0..mc {
                    for kxi in 0..mc {
                        // rho(k) = (k_xi, k_x)
                        block[kx * mc + kxi] = v.at(eta_idx[kxi], y_idx[kx]) * TAU;
                    }
                }
                block
            })
            .collect();

        let mut c = GaborCoefficients {
            values: vec![Complex64::new(0.0, 0.0); pc * pc * mc * mc],
            pos_count: pc,
            mod_count: mc,
            pos_values: self.pos_values.clone(),
            mod_values: self.mod_values.clone(),
        };
        for (jl, block) in blocks.into_iter().enumerate() {
            let jx = jl / pc;
            let jxi = jl % pc;
            for kx in 0..mc {
                for kxi in 0..mc {
                    *c.at_mut(jx, jxi, kx, kxi) = block[kx * mc + kxi];
                }
            }
        }
        c
    }

    fn synthesize_with(&self, c: &GaborCoefficients, window: &PhaseSpaceArray) -> PhaseSpaceArray {
        let n = self.base.x.len();
        let step = self.step;
        let pc = self.pos_count;
        let mc = self.mod_count;
        // phase tables e^{i x_a k_xi} and e^{i xi_b k_x}
        let tx: Vec<Complex64> = (0..n * mc)
            .map(|i| {
                let a = i / mc;
                let k = i % mc;
                Complex64::from_polar(1.0, self.base.x.point(a) * self.mod_values[k])
            })
            .collect();
        let txi: Vec<Complex64> = (0..n * mc)
            .map(|i| {
                let b = i / mc;
                let k = i % mc;
                Complex64::from_polar(1.0, self.base.xi.point(b) * self.mod_values[k])
            })
            .collect();

        let partials: Vec<PhaseSpaceArray> = (0..pc * pc)
            .into_par_iter()
            .map(|jl| {
                let jx = jl / pc;
                let jxi = jl % pc;
                // inner[kxi][b] = sum_kx c(j, kx, kxi) e^{i xi_b k_x}
                let mut inner = vec![Complex64::new(0.0, 0.0); mc * n];
                for kxi in 0..mc {
                    for b in 0..n {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for kx in 0..mc {
                            acc += c.at(jx, jxi, kx, kxi) * txi[b * mc + kx];
                        }
                        inner[kxi * n + b] = acc;
                    }
                }
                // m_j(a, b) = sum_kxi e^{i x_a k_xi} inner[kxi][b]
                let sx = jx * step;
                let sxi = jxi * step;
                let shift_x = (sx + n - n / 2) % n;
                let shift_xi = (sxi + n - n / 2) % n;
                let mut part = PhaseSpaceArray::zeros(self.base);
                for a_ix in 0..n {
                    let wx = (a_ix + n - shift_x) % n;
                    for b in 0..n {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for kxi in 0..mc {
                            acc += tx[a_ix * mc + kxi] * inner[kxi * n + b];
                        }
                        let wxi = (b + n - shift_xi) % n;
                        *part.at_mut(a_ix, b) += acc * window.at(wx, wxi);
                    }
                }
                part
            })
            .collect();

        let mut out = PhaseSpaceArray::zeros(self.base);
        for part in partials {
            for (o, p) in out.values_mut().iter_mut().zip(part.values()) {
                *o += p;
            }
        }
        out
    }

    /// Frame operator S = synth_Psi0(analyze_Psi0(.)).
    fn frame_apply(&self, a: &PhaseSpaceArray) -> PhaseSpaceArray {
        let c = self.analyze_with(a, &self.window);
        self.synthesize_with(&c, &self.window)
    }

    /// Conjugate-gradient solve S x = b to relative residual `tol`.
    fn solve_frame(&self, b: &PhaseSpaceArray, tol: f64, max_iter: usize) -> Result<PhaseSpaceArray> {
        let mut x = PhaseSpaceArray::zeros(self.base);
        let mut r = b.clone();
        let mut p = r.clone();
        let mut rs = r.inner(&r).re;
        let rs0 = rs.max(1e-300);
        for _ in 0..max_iter {
            if (rs / rs0).sqrt() <= tol {
                return Ok(x);
            }
            let ap = self.frame_apply(&p);
            let alpha = rs / p.inner(&ap).re;
            for i in 0..x.values().len() {
                x.values_mut()[i] += alpha * p.values()[i];
                r.values_mut()[i] -= alpha * ap.values()[i];
            }
            let rs_new = r.inner(&r).re;
            let beta = rs_new / rs;
            for i in 0..p.values().len() {
                let pv = p.values()[i];
                p.values_mut()[i] = r.values()[i] + beta * pv;
            }
            rs = rs_new;
        }
        if (rs / rs0).sqrt() <= tol {
            Ok(x)
        } else {
            Err(Error::FrameIllConditioned { cond: f64::NAN })
        }
    }

    /// Extremal Rayleigh quotients of sum |c|^2 / ||a||^2 from one Lanczos
    /// pass with a deterministic start vector.
    fn compute_frame_bounds(&self) -> Result<(f64, f64)> {
        let start = deterministic_start(&self.base);
        let (alphas, betas, _) = self.lanczos(&start, 48);
        let eig = tridiag_eigen(&alphas, &betas);
        let a = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let b = eig.eigenvalues.iter().copied().fold(0.0f64, f64::max);
        Ok((a, b))
    }

    /// Lanczos tridiagonalization of the frame operator with full
    /// reorthogonalization; returns (alphas, betas, basis).
    fn lanczos(&self, b: &PhaseSpaceArray, m: usize) -> (Vec<f64>, Vec<f64>, Vec<PhaseSpaceArray>) {
        let nb = b.norm_l2();
        let mut qs: Vec<PhaseSpaceArray> = Vec::with_capacity(m);
        qs.push(b.scaled(Complex64::new(1.0 / nb, 0.0)));
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        for i in 0..m {
            let mut w = self.frame_apply(&qs[i]);
            if i > 0 {
                let beta = betas[i - 1];
                for (wv, qv) in w.values_mut().iter_mut().zip(qs[i - 1].values()) {
                    *wv -= beta * qv;
                }
            }
            let alpha = w.inner(&qs[i]).re;
            alphas.push(alpha);
            for (wv, qv) in w.values_mut().iter_mut().zip(qs[i].values()) {
                *wv -= alpha * qv;
            }
            for q in qs.iter() {
                let coef = w.inner(q);
                for (wv, qv) in w.values_mut().iter_mut().zip(q.values()) {
                    *wv -= coef * qv;
                }
            }
            let beta = w.norm_l2();
            if beta < 1e-13 || i + 1 == m {
                break;
            }
            betas.push(beta);
            qs.push(w.scaled(Complex64::new(1.0 / beta, 0.0)));
        }
        (alphas, betas, qs)
    }

    /// Canonical tight window S^{-1/2} Psi0 via a Lanczos approximation of
    /// the inverse square root (analysis with it satisfies Parseval).
    pub fn tight_window(&self) -> Result<PhaseSpaceArray> {
        let nb = self.window.norm_l2();
        let (alphas, betas, qs) = self.lanczos(&self.window.clone(), 64);
        let k = alphas.len();
        let eig = tridiag_eigen(&alphas, &betas);
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::FrameIllConditioned { cond: f64::NAN });
        }
        // f(T) e1 with f = lambda^{-1/2}
        let mut fe1 = vec![0.0f64; k];
        for (i, f) in fe1.iter_mut().enumerate() {
            let mut acc = 0.0;
            for l in 0..k {
                acc += eig.eigenvectors[(i, l)] * eig.eigenvalues[l].powf(-0.5)
                    * eig.eigenvectors[(0, l)];
            }
            *f = acc;
        }
        let mut out = PhaseSpaceArray::zeros(self.base);
        for (i, q) in qs.iter().enumerate().take(k) {
            let coef = Complex64::new(nb * fe1[i], 0.0);
            for (o, qv) in out.values_mut().iter_mut().zip(q.values()) {
                *o += coef * qv;
            }
        }
        Ok(out)
    }
}

fn tridiag_eigen(alphas: &[f64], betas: &[f64]) -> nalgebra::SymmetricEigen<f64, nalgebra::Dyn> {
    let k = alphas.len();
    let mut t = DMatrix::from_element(k, k, 0.0f64);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    nalgebra::SymmetricEigen::new(t)
}

/// L2-normalized 2-D Gaussian window of width sigma on a phase grid.
pub fn gaussian_window(grid: &PhaseGrid, sigma: f64) -> PhaseSpaceArray {
    let norm = 1.0 / (std::f64::consts::PI * sigma * sigma).sqrt();
    PhaseSpaceArray::from_fn(*grid, |x, xi| {
        Complex64::new(norm * (-(x * x + xi * xi) / (2.0 * sigma * sigma)).exp(), 0.0)
    })
}

fn commensurate_step(eps: f64, dx: f64) -> Result<usize> {
    let ratio = eps / dx;
    let step = ratio.round();
    if !(eps > 0.0) || step < 1.0 || (ratio - step).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "lattice step {eps} is incommensurate with grid spacing {dx}"
        )));
    }
    Ok(step as usize)
}

fn index_of(grid: &Grid, value: f64) -> usize {
    let idx = ((value - grid.origin()) / grid.spacing()).round();
    debug_assert!(
        (value - (grid.origin() + idx * grid.spacing())).abs() <= 1e-6 * grid.spacing(),
        "value off-grid"
    );
    (idx as i64).rem_euclid(grid.len() as i64) as usize
}

fn deterministic_start(grid: &PhaseGrid) -> PhaseSpaceArray {
    // fixed pseudo-random pattern, seedless and platform-stable
    let mut state = 0x9e3779b97f4a7c15u64;
    PhaseSpaceArray::from_fn(*grid, |_, _| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let re = ((state >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let im = ((state >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
        Complex64::new(re, im)
    })
}

/// Analysis coefficients c(j, k) = (V_{Psi0} a)(j, rho(k)).
pub fn gabor_analyze(a: &PhaseSpaceArray, sys: &GaborSystem) -> Result<GaborCoefficients> {
    if !a.grid().approx_eq(sys.base()) {
        return Err(Error::GridMismatch("symbol not on the Gabor system grid".into()));
    }
    Ok(sys.analyze_with(a, sys.window()))
}

/// Synthesis sum_{j,k} c(j,k) Psi(X - j) e^{i <X, rho(k)>} with the canonical
/// dual window.
pub fn gabor_synthesize(c: &GaborCoefficients, sys: &GaborSystem) -> Result<PhaseSpaceArray> {
    if c.pos_count != sys.pos_count || c.mod_count != sys.mod_count {
        return Err(Error::GridMismatch("coefficient lattice does not match the system".into()));
    }
    Ok(sys.synthesize_with(c, sys.dual_window()))
}

/// Weighted mixed norm ( sum_k ( sum_j |c(j,k) w(rho(k))|^p )^{q/p} )^{1/q};
/// inner index j (translations), outer index k (modulations); sup for
/// infinite exponents; 0 < q < 1 computed as stated (quasi-norm).
pub fn mixed_norm(c: &GaborCoefficients, p: f64, q: f64, w: &WeightSpec) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("mixed norm requires p >= 1, got {p}")));
    }
    if !(q > 0.0) {
        return Err(Error::InvalidParameter(format!("mixed norm requires q > 0, got {q}")));
    }
    let mc = c.mod_count;
    let pc = c.pos_count;
    let mut outer: Vec<f64> = Vec::with_capacity(mc * mc);
    for kx in 0..mc {
        for kxi in 0..mc {
            // rho(k) = (k_xi, k_x)
            let weight = w.omega0(c.mod_values[kxi], c.mod_values[kx]);
            let mut inner_sum = 0.0f64;
            let mut inner_sup = 0.0f64;
            for jx in 0..pc {
                for jxi in 0..pc {
                    let m = c.at(jx, jxi, kx, kxi).norm() * weight;
                    if p.is_infinite() {
                        inner_sup = inner_sup.max(m);
                    } else {
                        inner_sum += m.powf(p);
                    }
                }
            }
            outer.push(if p.is_infinite() { inner_sup } else { inner_sum.powf(1.0 / p) });
        }
    }
    if q.is_infinite() {
        return Ok(outer.iter().copied().fold(0.0, f64::max));
    }
    Ok(outer.iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q))
}

/// Modulation-space norm of a symbol through its Gabor coefficients.
pub fn modulation_norm(
    a: &PhaseSpaceArray,
    p: f64,
    q: f64,
    w: &WeightSpec,
    sys: &GaborSystem,
) -> Result<f64> {
    let c = gabor_analyze(a, sys)?;
    mixed_norm(&c, p, q, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use once_cell::sync::Lazy;

    // the standard system is expensive to build; share one across tests
    static SYS: Lazy<GaborSystem> = Lazy::new(|| GaborSystem::standard(64).unwrap());

    fn random_symbol(seed: u64) -> PhaseSpaceArray {
        crate::synth::random_band_limited_symbol(SYS.base(), 2.5, 2.5, seed, false)
    }

    #[test]
    fn analyze_zero_is_zero() {
        let c = gabor_analyze(&PhaseSpaceArray::zeros(*SYS.base()), &SYS).unwrap();
        assert!(c.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn window_autocorrelation_peaks_at_origin() {
        let c = gabor_analyze(SYS.window(), &SYS).unwrap();
        let j0 = c.origin_pos();
        let k0 = c.origin_mod();
        let peak = c.at(j0, j0, k0, k0);
        let expect = {
            let w = SYS.window();
            let da = SYS.base().x.spacing() * SYS.base().xi.spacing();
            w.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * da
        };
        assert!(
            (peak.norm() - expect).abs() <= 1e-10 * expect,
            "|c(0,0)| = {} vs ||Psi||^2 = {expect}",
            peak.norm()
        );
        // and it is the maximum over the lattice
        let max = c.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(max <= peak.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn coefficients_covariant_under_lattice_shift() {
        // shifting the symbol by one lattice vector translates |c|
        let a = random_symbol(3);
        let n = SYS.base().x.len();
        let s = SYS.step();
        let mut shifted = PhaseSpaceArray::zeros(*SYS.base());
        for ix in 0..n {
            for ik in 0..n {
                *shifted.at_mut(ix, ik) = a.at((ix + n - s) % n, ik);
            }
        }
        let ca = gabor_analyze(&a, &SYS).unwrap();
        let cs = gabor_analyze(&shifted, &SYS).unwrap();
        let pc = ca.pos_count();
        let mc = ca.mod_count();
        let mut dev = 0.0f64;
        for jx in 0..pc {
            for jxi in 0..pc {
                for kx in 0..mc {
                    for kxi in 0..mc {
                        let u = cs.at((jx + 1) % pc, jxi, kx, kxi).norm();
                        let v = ca.at(jx, jxi, kx, kxi).norm();
                        dev = dev.max((u - v).abs());
                    }
                }
            }
        }
        let scale = ca.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(dev <= 1e-9 * scale, "covariance deviation {dev:.3e} (scale {scale:.3e})");
    }

    #[test]
    fn frame_reconstruction() {
        for seed in [1u64, 7, 21] {
            let a = random_symbol(seed);
            let c = gabor_analyze(&a, &SYS).unwrap();
            let b = gabor_synthesize(&c, &SYS).unwrap();
            let mut num = 0.0f64;
            let mut den = 0.0f64;
            for (u, v) in a.values().iter().zip(b.values()) {
                num += (u - v).norm_sqr();
                den += u.norm_sqr();
            }
            let rel = (num / den).sqrt();
            assert!(rel <= 1e-8, "seed {seed}: reconstruction error {rel:.3e}");
        }
    }

    #[test]
    fn zero_coefficients_synthesize_to_zero() {
        let c = GaborCoefficients::zeros_like(&SYS);
        let b = gabor_synthesize(&c, &SYS).unwrap();
        assert_eq!(b.norm_inf(), 0.0);
    }

    #[test]
    fn single_coefficient_synthesizes_one_atom() {
        let mut c = GaborCoefficients::zeros_like(&SYS);
        *c.at_mut(2, 3, 1, 4) = Complex64::new(1.0, 0.0);
        let b = gabor_synthesize(&c, &SYS).unwrap();
        let expect = SYS.dual_window().norm_l2();
        assert!((b.norm_l2() - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn frame_bounds_healthy() {
        let (a, b) = SYS.frame_bounds();
        assert!(a > 0.0 && b > a, "frame bounds ({a}, {b})");
        assert!(b / a < 1e3, "condition {b}/{a}");
        // bounds actually bracket sum |c|^2 / ||a||^2 on random symbols
        for seed in [5u64, 9] {
            let x = random_symbol(seed);
            let c = gabor_analyze(&x, &SYS).unwrap();
            let q = c.frobenius().powi(2) / x.norm_l2().powi(2);
            assert!(q >= a * (1.0 - 1e-6) && q <= b * (1.0 + 1e-6), "quotient {q} vs ({a},{b})");
        }
    }

    #[test]
    fn mixed_norm_single_coefficient() {
        let mut c = GaborCoefficients::zeros_like(&SYS);
        let z = Complex64::new(0.3, -1.1);
        *c.at_mut(1, 2, 3, 4) = z;
        let w = WeightSpec::new(1.5).unwrap();
        let expect = z.norm() * w.omega0(c.mod_values()[4], c.mod_values()[3]);
        for (p, q) in [(1.0, 1.0), (2.0, 2.0), (4.0, 0.5), (f64::INFINITY, 2.0), (2.0, f64::INFINITY)] {
            let v = mixed_norm(&c, p, q, &w).unwrap();
            assert!((v - expect).abs() <= 1e-12 * expect, "(p,q)=({p},{q}): {v} vs {expect}");
        }
    }

    #[test]
    fn mixed_norm_two_two_is_frobenius() {
        let a = random_symbol(12);
        let c = gabor_analyze(&a, &SYS).unwrap();
        let w = WeightSpec::new(0.0).unwrap();
        let v = mixed_norm(&c, 2.0, 2.0, &w).unwrap();
        assert!((v - c.frobenius()).abs() <= 1e-10 * v);
    }

    #[test]
    fn mixed_norm_monotone_in_exponents() {
        let a = random_symbol(13);
        let c = gabor_analyze(&a, &SYS).unwrap();
        let w = WeightSpec::new(0.0).unwrap();
        let v11 = mixed_norm(&c, 1.0, 1.0, &w).unwrap();
        let v22 = mixed_norm(&c, 2.0, 2.0, &w).unwrap();
        let vinf = mixed_norm(&c, f64::INFINITY, f64::INFINITY, &w).unwrap();
        assert!(v11 >= v22 && v22 >= vinf, "{v11} >= {v22} >= {vinf}");
    }

    #[test]
    fn mixed_norm_rejects_small_p_and_q() {
        let c = GaborCoefficients::zeros_like(&SYS);
        let w = WeightSpec::new(0.0).unwrap();
        assert!(mixed_norm(&c, 0.5, 1.0, &w).is_err());
        assert!(mixed_norm(&c, 1.0, 0.0, &w).is_err());
    }

    #[test]
    fn modulation_norm_trivials() {
        let w = WeightSpec::new(0.0).unwrap();
        let z = modulation_norm(&PhaseSpaceArray::zeros(*SYS.base()), 2.0, 2.0, &w, &SYS).unwrap();
        assert_eq!(z, 0.0);
        // absolute homogeneity
        let a = random_symbol(17);
        let la = a.scaled(Complex64::new(-2.5, 0.0));
        let na = modulation_norm(&a, 3.0, 1.5, &w, &SYS).unwrap();
        let nla = modulation_norm(&la, 3.0, 1.5, &w, &SYS).unwrap();
        assert!((nla - 2.5 * na).abs() <= 1e-12 * nla);
    }

    #[test]
    fn window_robustness_within_factor_ten() {
        let w = WeightSpec::new(0.0).unwrap();
        let wide = GaborSystem::new(*SYS.base(), SYS.eps(), gaussian_window(SYS.base(), 1.6)).unwrap();
        for seed in [2u64, 8, 15] {
            let a = random_symbol(seed);
            let n1 = modulation_norm(&a, 2.0, 1.0, &w, &SYS).unwrap();
            let n2 = modulation_norm(&a, 2.0, 1.0, &w, &wide).unwrap();
            let ratio = n1 / n2;
            assert!((0.1..=10.0).contains(&ratio), "seed {seed}: ratio {ratio}");
        }
    }

    #[test]
    fn tight_window_gives_parseval_coefficients() {
        let tight = SYS.tight_window().unwrap();
        let tight_sys = GaborSystem::new(*SYS.base(), SYS.eps(), tight).unwrap();
        let w = WeightSpec::new(0.0).unwrap();
        let mut ratios = Vec::new();
        for seed in [4u64, 11, 23, 42] {
            let a = random_symbol(seed);
            let n = modulation_norm(&a, 2.0, 2.0, &w, &tight_sys).unwrap();
            ratios.push(n / a.norm_l2());
        }
        let (lo, hi) = ratios
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
        assert!(hi - lo <= 1e-6 * hi, "Parseval ratios spread: {ratios:?}");
    }

    #[test]
    fn rejects_incommensurate_lattice() {
        let base = GaborSystem::square_grid(64).unwrap();
        let w = gaussian_window(&base, 1.0);
        assert!(GaborSystem::new(base, 0.37, w.clone()).is_err());
        // step that does not divide n
        let eps = 3.0 * base.x.spacing();
        assert!(GaborSystem::new(base, eps, w).is_err());
    }
}
