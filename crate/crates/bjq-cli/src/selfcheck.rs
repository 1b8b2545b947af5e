//! Self-check suite: runs the library's cross-validation invariants on
//! fixed grids and prints one pass/fail line per check.

use num_complex::Complex64;

use bjq_core::cutoff::{monomial_symbol, Cutoff};
use bjq_core::fourier::{fourier, parity, Direction};
use bjq_core::gabor::{gabor_analyze, gabor_synthesize, modulation_norm, GaborSystem, WeightSpec};
use bjq_core::grid::{Grid, PhaseGrid, PhaseSpaceArray, TAU};
use bjq_core::quadrature::QuadratureRule;
use bjq_core::quantize::{
    bj_to_weyl, hermiticity_defect, monomial_bj_operator, quantize, ConversionMethod, SchemeSpec,
};
use bjq_core::spectral::{min_eigenvalue_hermitian, schatten_norm, singular_values};
use bjq_core::symclass::{planck_max, MetricPreset};
use bjq_core::synth::{
    gaussian, hermite, random_band_limited_signal, random_band_limited_symbol, sinc,
};
use bjq_core::transforms::{apply_bj_multiplier, marginals, stft, wigner_bj, wigner_tau};

pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: &'static str, measured: f64, tolerance: f64) -> Check {
    Check { name, measured, tolerance, pass: measured <= tolerance && measured.is_finite() }
}

fn sig_grid() -> Grid {
    Grid::centered(256, 0.125).unwrap()
}

fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

/// Run the full invariant suite; returns the table of checks.
pub fn run() -> Vec<Check> {
    let mut out = Vec::new();
    let g = sig_grid();
    let quad33 = QuadratureRule::gauss_legendre(33).unwrap();

    // Fourier layer
    {
        let mut worst_rt = 0.0f64;
        let mut worst_uni = 0.0f64;
        for seed in 0..20u64 {
            let f = random_band_limited_signal(&g, 8.0, seed);
            let back = fourier(&fourier(&f, Direction::Forward), Direction::Inverse);
            let den = f.norm_l2();
            let num = f
                .values()
                .iter()
                .zip(back.values())
                .map(|(u, v)| (u - v).norm_sqr())
                .sum::<f64>()
                .sqrt()
                * g.spacing().sqrt();
            worst_rt = worst_rt.max(num / den);
            let nf = fourier(&f, Direction::Forward).norm_l2();
            worst_uni = worst_uni.max((nf - den).abs() / den);
        }
        out.push(check("fourier round-trip", worst_rt, 1e-12));
        out.push(check("fourier unitarity", worst_uni, 1e-12));

        let f = random_band_limited_signal(&g, 8.0, 33);
        let ff = fourier(&fourier(&f, Direction::Forward), Direction::Forward);
        out.push(check(
            "fourier squared = parity",
            max_dev(ff.values(), parity(&f).values()) / f.norm_inf(),
            1e-10,
        ));

        let h0 = hermite(0, &g).unwrap();
        let h0_hat = fourier(&h0, Direction::Forward);
        let mut worst = 0.0f64;
        for (k, v) in h0_hat.values().iter().enumerate() {
            let xi = h0_hat.grid().point(k);
            worst = worst.max((v - Complex64::new(bjq_core::synth::hermite_value(0, xi), 0.0)).norm());
        }
        out.push(check("gaussian fixed point", worst, 1e-12));

        let mut worst = 0.0f64;
        for m in 0..=5usize {
            for n in 0..=5usize {
                let ip = hermite(m, &g).unwrap().inner(&hermite(n, &g).unwrap());
                let expect = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((ip - Complex64::new(expect, 0.0)).norm());
            }
        }
        out.push(check("hermite orthonormality", worst, 1e-10));

        let mut worst = 0.0f64;
        for n in 0..=5usize {
            let h = hermite(n, &g).unwrap();
            let fh = fourier(&h, Direction::Forward);
            let eig = Complex64::new(0.0, -1.0).powu(n as u32);
            for (k, v) in fh.values().iter().enumerate() {
                let xi = fh.grid().point(k);
                worst = worst.max((v - eig * bjq_core::synth::hermite_value(n, xi)).norm());
            }
        }
        out.push(check("hermite fourier eigenfunctions", worst, 1e-10));

        let sinc_dev = (sinc(0.0) - 1.0)
            .abs()
            .max(sinc(std::f64::consts::PI).abs())
            .max((sinc(1e-6) - (1.0 - 1e-12 / 6.0)).abs() / (1.0 - 1e-12 / 6.0));
        out.push(check("sinc values", sinc_dev, 1e-15));
    }

    // Transforms layer
    {
        let f = random_band_limited_signal(&g, 6.0, 41);
        let w = gaussian(&g, 1.0, 0.0, 0.0);
        let v = stft(&f, &w).unwrap();
        out.push(check(
            "stft parseval",
            (v.norm_l2() - f.norm_l2() * w.norm_l2()).abs() / (f.norm_l2() * w.norm_l2()),
            1e-10,
        ));

        let mut worst = 0.0f64;
        for (n, tau) in [(0usize, 0.5), (1, 0.3)] {
            let h = hermite(n, &g).unwrap();
            let wt = wigner_tau(&h, &h, tau, 8).unwrap();
            let (pos, _) = marginals(&wt);
            let den = h.values().iter().map(|v| v.norm_sqr()).fold(0.0, f64::max) * TAU.sqrt();
            for (j, p) in pos.values().iter().enumerate() {
                let expect = TAU.sqrt() * h.values()[j].norm_sqr();
                worst = worst.max((p - Complex64::new(expect, 0.0)).norm() / den);
            }
        }
        out.push(check("wigner marginals", worst, 1e-8));

        let f2 = hermite(2, &g).unwrap();
        let f3 = hermite(3, &g).unwrap();
        let a = wigner_tau(&f2, &f3, 0.3, 8).unwrap();
        let b = wigner_tau(&f3, &f2, 0.7, 8).unwrap();
        let conj_dev = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(u, v)| (u - v.conj()).norm())
            .fold(0.0, f64::max);
        out.push(check("wigner hermitian symmetry", conj_dev, 1e-10));

        let wb = wigner_bj(&f2, &f2, &quad33, 8).unwrap();
        let imax = wb.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        out.push(check("born-jordan realness", imax / wb.norm_inf(), 1e-10));

        let (pos, _) = marginals(&wb);
        let den = f2.values().iter().map(|v| v.norm_sqr()).fold(0.0, f64::max) * TAU.sqrt();
        let mut worst = 0.0f64;
        for (j, p) in pos.values().iter().enumerate() {
            let expect = TAU.sqrt() * f2.values()[j].norm_sqr();
            worst = worst.max((p - Complex64::new(expect, 0.0)).norm() / den);
        }
        out.push(check("born-jordan marginal", worst, 1e-6));

        let mut worst = 0.0f64;
        for (i, j) in [(0usize, 0usize), (1, 3), (5, 2)] {
            let u = hermite(i, &g).unwrap();
            let v = hermite(j, &g).unwrap();
            let lhs = wigner_bj(&u, &v, &quad33, 8).unwrap();
            let rhs = apply_bj_multiplier(&wigner_tau(&u, &v, 0.5, 8).unwrap());
            worst = worst.max(max_dev(lhs.values(), rhs.values()) / lhs.norm_inf());
        }
        out.push(check("cross-construction agreement", worst, 1e-6));

        let w66 = wigner_bj(&f2, &f2, &QuadratureRule::gauss_legendre(66).unwrap(), 8).unwrap();
        let w33 = wigner_bj(&f2, &f2, &quad33, 8).unwrap();
        out.push(check(
            "quadrature convergence",
            max_dev(w33.values(), w66.values()),
            1e-10,
        ));

        // multiplier validation: quadrature average of the phase flow equals
        // sinc(s/2), and the expansion terms match the sinc Taylor series
        let mut worst = 0.0f64;
        for i in 0..=60 {
            let s = -30.0 + i as f64;
            let avg: Complex64 = quad33
                .iter()
                .map(|(t, wt)| Complex64::from_polar(wt, (t - 0.5) * s))
                .sum();
            worst = worst.max((avg - Complex64::new(sinc(s / 2.0), 0.0)).norm());
        }
        out.push(check("multiplier vs quadrature average", worst, 1e-12));

        let mut worst = 0.0f64;
        let mut fact = 1.0f64; // (2j+1)!
        for j in 0..=4u32 {
            if j > 0 {
                fact *= (2 * j) as f64 * (2 * j + 1) as f64;
            }
            let expect = (-1.0f64).powi(j as i32) / (4.0f64.powi(j as i32) * fact);
            let term = bjq_core::quantize::expansion_term(1.0, j as usize);
            worst = worst.max((term - expect).abs());
        }
        out.push(check("multiplier taylor coefficients", worst, 1e-14));
    }

    // Quantization layer
    {
        let pg = PhaseGrid::for_signal(g);
        let ones = PhaseSpaceArray::from_fn(pg, |_, _| Complex64::new(1.0, 0.0));
        let id = quantize(&ones, &SchemeSpec::BornJordan(quad33.clone()), 8).unwrap();
        let mut worst = 0.0f64;
        for j in 0..id.len() {
            for k in 0..id.len() {
                let expect = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((id.matrix()[(j, k)] - Complex64::new(expect, 0.0)).norm());
            }
        }
        out.push(check("unit symbol quantizes to identity", worst, 1e-10));

        let a = random_band_limited_symbol(&pg, 3.0, 3.0, 50, false);
        let m1 = quantize(&a, &SchemeSpec::Weyl, 8).unwrap();
        let m2 = quantize(&a, &SchemeSpec::Shubin(0.5), 8).unwrap();
        let bitwise = if m1.matrix() == m2.matrix() { 0.0 } else { 1.0 };
        out.push(check("weyl equals shubin(1/2) bitwise", bitwise, 0.0));

        let mut worst = 0.0f64;
        for seed in 0..2u64 {
            let a = random_band_limited_symbol(&pg, 3.0, 3.0, 60 + seed, false);
            let f = hermite((seed as usize) % 3, &g).unwrap();
            let gg = hermite((seed as usize + 1) % 3, &g).unwrap();
            let bound = a.norm_l2() * f.norm_l2() * gg.norm_l2();
            for tau in [0.0, 0.3, 0.5, 1.0] {
                let r = bjq_core::quantize::duality_residual(&a, tau, &f, &gg).unwrap();
                worst = worst.max(r / bound);
            }
        }
        out.push(check("operator-distribution duality", worst, 1e-8));

        let a_real = random_band_limited_symbol(&pg, 3.0, 3.0, 70, true);
        let bj = quantize(&a_real, &SchemeSpec::BornJordan(quad33.clone()), 8).unwrap();
        let wy = quantize(&a_real, &SchemeSpec::Weyl, 8).unwrap();
        out.push(check(
            "self-adjointness (bj, weyl)",
            hermiticity_defect(&bj).max(hermiticity_defect(&wy)),
            1e-10,
        ));
        let kn = quantize(&a_real, &SchemeSpec::KohnNirenberg, 8).unwrap();
        // negative control: defect must be large
        let kn_defect = hermiticity_defect(&kn);
        out.push(Check {
            name: "kohn-nirenberg control (defect > 1e-3)",
            measured: kn_defect,
            tolerance: 1e-3,
            pass: kn_defect > 1e-3,
        });

        let mut worst = 0.0f64;
        for seed in 0..3u64 {
            let a = random_band_limited_symbol(&pg, 3.0, 3.0, 80 + seed, false);
            let lhs = quantize(&a, &SchemeSpec::BornJordan(quad33.clone()), 8).unwrap();
            let b = bj_to_weyl(&a, &ConversionMethod::Multiplier).unwrap();
            let rhs = quantize(&b, &SchemeSpec::Weyl, 8).unwrap();
            let num = lhs.add(&rhs.scaled(Complex64::new(-1.0, 0.0))).unwrap().frobenius();
            worst = worst.max(num / lhs.frobenius());
        }
        out.push(check("three-way construction agreement", worst, 1e-6));

        let osc = PhaseSpaceArray::from_fn(pg, |x, xi| Complex64::new(x * x + xi * xi, 0.0));
        let m = quantize(&osc, &SchemeSpec::BornJordan(quad33.clone()), 8).unwrap();
        let s = singular_values(&m).unwrap();
        let mut worst = 0.0f64;
        for (i, &v) in s.values()[s.len() - 10..].iter().enumerate() {
            worst = worst.max((v - (19.0 - 2.0 * i as f64)).abs());
        }
        out.push(check("harmonic oscillator levels", worst, 1e-5));
        let lo = min_eigenvalue_hermitian(&m).unwrap();
        out.push(check("harmonic oscillator ground level", (lo - 1.0).abs(), 1e-6));

        let b = random_band_limited_symbol(&pg, 3.0, 3.0, 90, false);
        let mw = quantize(&b, &SchemeSpec::Weyl, 8).unwrap();
        let hs = schatten_norm(&singular_values(&mw).unwrap(), 2.0).unwrap();
        let expect = b.norm_l2() / TAU.sqrt();
        out.push(check("hilbert-schmidt identity", (hs - expect).abs() / expect, 1e-3));

        let cut = Cutoff::standard_poly(&pg);
        let a22 = monomial_symbol(&pg, 2, 2, &cut);
        let b22 = apply_bj_multiplier(&a22);
        let mut worst = 0.0f64;
        for ix in 0..256 {
            let x = pg.x.point(ix);
            if x.abs() > 1.0 {
                continue;
            }
            for ik in 0..256 {
                let xi = pg.xi.point(ik);
                if xi.abs() > 1.0 {
                    continue;
                }
                let expect = x * x * xi * xi - 1.0 / 6.0;
                worst = worst.max((b22.at(ix, ik) - Complex64::new(expect, 0.0)).norm());
            }
        }
        out.push(check("closed-form conversion", worst, 1e-4));

        let a11 = monomial_symbol(&pg, 1, 1, &cut);
        let mw = quantize(&a11, &SchemeSpec::Weyl, 8).unwrap();
        let mono = monomial_bj_operator(1, 1, &g).unwrap();
        let (lo_i, hi_i) = bjq_core::grid::interior_range(g.len(), 0.5);
        let mut worst = 0.0f64;
        for n in 0..=5usize {
            let h = hermite(n, &g).unwrap();
            let u = mono.apply(&h).unwrap();
            let v = mw.apply(&h).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for j in lo_i..hi_i {
                num += (u.values()[j] - v.values()[j]).norm_sqr();
                den += u.values()[j].norm_sqr();
            }
            worst = worst.max((num / den).sqrt());
        }
        out.push(check("monomial rule (m=l=1)", worst, 1e-8));
    }

    // Gabor layer
    {
        let sys = GaborSystem::standard(64).unwrap();
        let mut worst = 0.0f64;
        for seed in 0..3u64 {
            let a = random_band_limited_symbol(sys.base(), 2.5, 2.5, 100 + seed, false);
            let c = gabor_analyze(&a, &sys).unwrap();
            let back = gabor_synthesize(&c, &sys).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for (u, v) in a.values().iter().zip(back.values()) {
                num += (u - v).norm_sqr();
                den += u.norm_sqr();
            }
            worst = worst.max((num / den).sqrt());
        }
        out.push(check("frame reconstruction", worst, 1e-8));

        let (fa, fb) = sys.frame_bounds();
        out.push(check("frame condition B/A", fb / fa, 1e3));

        let w0 = WeightSpec::new(0.0).unwrap();
        let a = random_band_limited_symbol(sys.base(), 2.5, 2.5, 110, false);
        let n1 = modulation_norm(&a, 2.0, 2.0, &w0, &sys).unwrap();
        let n2 = modulation_norm(&a.scaled(Complex64::new(3.0, 0.0)), 2.0, 2.0, &w0, &sys).unwrap();
        out.push(check(
            "modulation norm homogeneity",
            (n2 - 3.0 * n1).abs() / n2,
            1e-12,
        ));
    }

    // Symbol-class layer
    {
        let pg = PhaseGrid::for_signal(g);
        let mut worst = 0.0f64;
        for preset in [
            MetricPreset::Shubin { rho: 0.7 },
            MetricPreset::Hormander { rho: 0.8, delta: 0.3 },
            MetricPreset::Sg,
        ] {
            let m = preset.metric(pg).unwrap();
            for (ix, ik) in [(128usize, 128usize), (40, 200)] {
                let x = pg.x.point(ix);
                let xi = pg.xi.point(ik);
                let h = bjq_core::symclass::planck(&m, ix, ik);
                worst = worst.max((h - preset.planck_closed_form(x, xi)).abs() / h);
            }
        }
        out.push(check("planck closed forms", worst, 1e-12));

        let mut worst = 0.0f64;
        for preset in [
            MetricPreset::Shubin { rho: 1.0 },
            MetricPreset::Hormander { rho: 0.9, delta: 0.4 },
            MetricPreset::Sg,
        ] {
            worst = worst.max(planck_max(&preset.metric(pg).unwrap()));
        }
        out.push(check("uncertainty h_g <= 1 for presets", worst, 1.0 + 1e-12));
    }

    out
}

/// Print the table; true iff every check passed.
pub fn print_table(checks: &[Check]) -> bool {
    let mut all = true;
    println!("self-check: {} invariants", checks.len());
    for (i, c) in checks.iter().enumerate() {
        let status = if c.pass { "pass" } else { "FAIL" };
        println!(
            "[{:2}/{}] {:<42} {:<4} ({:.3e} vs {:.1e})",
            i + 1,
            checks.len(),
            c.name,
            status,
            c.measured,
            c.tolerance
        );
        all &= c.pass;
    }
    println!("result: {}", if all { "all checks passed" } else { "FAILURES present" });
    all
}
