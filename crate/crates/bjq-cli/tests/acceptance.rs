//! Acceptance suite: every release gate runs here, one pass/fail line per
//! criterion (run with `cargo test -p bjq-cli --test acceptance -- --nocapture`
//! to see the table).

use std::time::Instant;

use num_complex::Complex64;

use bjq_core::cutoff::{monomial_symbol, Cutoff};
use bjq_core::gabor::{gabor_synthesize, modulation_norm, GaborCoefficients, GaborSystem, WeightSpec};
use bjq_core::grid::{interior_range, Grid, PhaseGrid, PhaseSpaceArray, TAU};
use bjq_core::quadrature::QuadratureRule;
use bjq_core::quantize::{
    bj_to_weyl, duality_residual, hermiticity_defect, monomial_bj_operator, quantize,
    ConversionMethod, SchemeSpec,
};
use bjq_core::spectral::{
    min_eigenvalue_hermitian, operator_norm, schatten_norm, singular_values,
};
use bjq_core::synth::{hermite, random_band_limited_symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, detail: String, pass: bool) {
    println!(
        "CRITERION-{id:02} {name}: {} ({detail})",
        if pass { "pass" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

fn gl33() -> QuadratureRule {
    QuadratureRule::gauss_legendre(33).unwrap()
}

#[test]
fn criterion_01_three_way_agreement() {
    let start = Instant::now();
    let g = Grid::centered(128, 0.25).unwrap();
    let pg = PhaseGrid::for_signal(g);
    let quad = gl33();
    let mut worst = 0.0f64;
    for seed in 0..10u64 {
        let a = random_band_limited_symbol(&pg, 3.0, 3.0, 1000 + seed, false);
        let bj = quantize(&a, &SchemeSpec::BornJordan(quad.clone()), 8).unwrap();
        let b = bj_to_weyl(&a, &ConversionMethod::Multiplier).unwrap();
        let w = quantize(&b, &SchemeSpec::Weyl, 8).unwrap();
        let diff = bj.add(&w.scaled(Complex64::new(-1.0, 0.0))).unwrap();
        let rel = operator_norm(&diff).unwrap() / operator_norm(&bj).unwrap();
        worst = worst.max(rel);
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "three-way Born-Jordan agreement",
        format!("max relative operator-norm discrepancy {worst:.3e} <= 1e-6, {elapsed:.1}s < 30s"),
        worst <= 1e-6 && elapsed < 30.0,
    );
}

#[test]
fn criterion_02_monomial_rule() {
    let g = Grid::centered(256, 0.125).unwrap();
    let pg = PhaseGrid::for_signal(g);
    let cut = Cutoff::standard_poly(&pg);
    let quad = gl33();
    let (lo, hi) = interior_range(g.len(), 0.5);
    let mut worst = 0.0f64;
    for (m, l) in [(1u32, 1u32), (2, 1), (1, 2), (2, 2)] {
        let a = monomial_symbol(&pg, m, l, &cut);
        let mq = quantize(&a, &SchemeSpec::BornJordan(quad.clone()), 8).unwrap();
        let mono = monomial_bj_operator(m, l, &g).unwrap();
        for n in 0..=5 {
            let h = hermite(n, &g).unwrap();
            let u = mono.apply(&h).unwrap();
            let v = mq.apply(&h).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for j in lo..hi {
                num += (u.values()[j] - v.values()[j]).norm_sqr();
                den += u.values()[j].norm_sqr();
            }
            worst = worst.max((num / den).sqrt());
        }
    }
    report(
        2,
        "monomial quantization rule",
        format!("max relative action error {worst:.3e} <= 1e-4"),
        worst <= 1e-4,
    );
}

#[test]
fn criterion_03_self_adjointness() {
    let g = Grid::centered(128, 0.25).unwrap();
    let pg = PhaseGrid::for_signal(g);
    let quad = gl33();
    let mut worst = 0.0f64;
    let mut kn_max = 0.0f64;
    for seed in 0..10u64 {
        let a = random_band_limited_symbol(&pg, 3.0, 3.0, 2000 + seed, true);
        let bj = quantize(&a, &SchemeSpec::BornJordan(quad.clone()), 8).unwrap();
        let w = quantize(&a, &SchemeSpec::Weyl, 8).unwrap();
        worst = worst.max(hermiticity_defect(&bj)).max(hermiticity_defect(&w));
        let kn = quantize(&a, &SchemeSpec::KohnNirenberg, 8).unwrap();
        kn_max = kn_max.max(hermiticity_defect(&kn));
    }
    report(
        3,
        "self-adjointness with negative control",
        format!("max bj/weyl defect {worst:.3e} <= 1e-10; kohn-nirenberg control {kn_max:.3e} > 1e-3"),
        worst <= 1e-10 && kn_max > 1e-3,
    );
}

#[test]
fn criterion_04_duality() {
    let g = Grid::centered(128, 0.25).unwrap();
    let pg = PhaseGrid::for_signal(g);
    let mut worst = 0.0f64;
    for seed in 0..5u64 {
        let a = random_band_limited_symbol(&pg, 3.0, 3.0, 3000 + seed, false);
        for i in 0..=3usize {
            for j in 0..=3usize {
                let f = hermite(i, &g).unwrap();
                let gg = hermite(j, &g).unwrap();
                let bound = a.norm_l2() * f.norm_l2() * gg.norm_l2();
                for tau in [0.0, 0.3, 0.5, 1.0] {
                    let r = duality_residual(&a, tau, &f, &gg).unwrap();
                    worst = worst.max(r / bound);
                }
            }
        }
    }
    report(
        4,
        "operator-distribution duality",
        format!("max scaled residual {worst:.3e} <= 1e-8"),
        worst <= 1e-8,
    );
}

#[test]
fn criterion_05_expansion_order() {
    let start = Instant::now();
    let pg = PhaseGrid::for_signal(Grid::centered(512, 0.11).unwrap());
    let a = bjq_core::synth::gaussian_bump_symbol(&pg, 0.5);
    let lams = [2.0, 4.0, 8.0];
    let rep2 = bjq_core::symclass::remainder_order(&a, &lams, 2).unwrap();
    let rep4 = bjq_core::symclass::remainder_order(&a, &lams, 4).unwrap();
    let s2 = rep2.slope.unwrap();
    let s4 = rep4.slope.unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        "expansion remainder order",
        format!("slopes {s2:.3} (-4 +- 0.5), {s4:.3} (-8 +- 0.7), {elapsed:.1}s < 60s"),
        (s2 + 4.0).abs() <= 0.5 && (s4 + 8.0).abs() <= 0.7 && elapsed < 60.0,
    );
}

#[test]
fn criterion_06_closed_form_conversion() {
    let g = Grid::centered(256, 0.125).unwrap();
    let pg = PhaseGrid::for_signal(g);
    let a = monomial_symbol(&pg, 2, 2, &Cutoff::standard_poly(&pg));
    let b_mult = bj_to_weyl(&a, &ConversionMethod::Multiplier).unwrap();
    let b_quad = bj_to_weyl(&a, &ConversionMethod::Quadrature(gl33())).unwrap();
    let b_exp = bj_to_weyl(&a, &ConversionMethod::Expansion(4)).unwrap();
    let mut closed = 0.0f64;
    let mut mutual = 0.0f64;
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
            closed = closed.max((b_mult.at(ix, ik) - Complex64::new(expect, 0.0)).norm());
            for (u, v) in [(&b_mult, &b_quad), (&b_mult, &b_exp), (&b_quad, &b_exp)] {
                mutual = mutual.max((u.at(ix, ik) - v.at(ix, ik)).norm());
            }
        }
    }
    report(
        6,
        "closed-form conversion x^2 xi^2 -> x^2 xi^2 - 1/6",
        format!("near-origin deviation {closed:.3e} <= 1e-4, mutual {mutual:.3e} <= 1e-8"),
        closed <= 1e-4 && mutual <= 1e-8,
    );
}

#[test]
fn criterion_07_harmonic_oscillator_spectrum() {
    let g = Grid::centered(256, 0.125).unwrap();
    let pg = PhaseGrid::for_signal(g);
    let a = PhaseSpaceArray::from_fn(pg, |x, xi| Complex64::new(x * x + xi * xi, 0.0));
    let m = quantize(&a, &SchemeSpec::BornJordan(gl33()), 8).unwrap();
    let h = (m.matrix() + m.matrix().adjoint()).map(|v| v * Complex64::new(0.5, 0.0));
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut levels: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut worst = 0.0f64;
    for (n, &v) in levels[..10].iter().enumerate() {
        worst = worst.max((v - (2.0 * n as f64 + 1.0)).abs());
    }
    report(
        7,
        "harmonic oscillator spectrum {1,3,...,19}",
        format!("max level deviation {worst:.3e} <= 1e-6"),
        worst <= 1e-6,
    );
}

#[test]
fn criterion_08_hilbert_schmidt_identity() {
    let g = Grid::centered(128, 0.25).unwrap();
    let pg = PhaseGrid::for_signal(g);
    let mut worst = 0.0f64;
    for seed in 0..5u64 {
        let b = random_band_limited_symbol(&pg, 3.0, 3.0, 4000 + seed, false);
        let m = quantize(&b, &SchemeSpec::Weyl, 8).unwrap();
        let hs = schatten_norm(&singular_values(&m).unwrap(), 2.0).unwrap();
        let expect = b.norm_l2() / TAU.sqrt();
        worst = worst.max((hs - expect).abs() / expect);
    }
    report(
        8,
        "Hilbert-Schmidt identity",
        format!("max relative deviation {worst:.3e} <= 1e-3"),
        worst <= 1e-3,
    );
}

#[test]
fn criterion_09_schatten_modulation_uniformity() {
    // 20 random symbols built from Gabor coefficients with decaying
    // modulation content; for each (p, q) with q <= min(p, p') the ratio
    // family schatten / modulation norm must be uniform within a factor 50.
    let sys = GaborSystem::standard(64).unwrap();
    let quad = gl33();
    let w0 = WeightSpec::new(0.0).unwrap();
    let mut symbols = Vec::new();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + seed);
        let mut c = GaborCoefficients::zeros_like(&sys);
        let pc = c.pos_count();
        let mc = c.mod_count();
        let o_pos = c.origin_pos();
        let o_mod = c.origin_mod();
        // per-symbol decay rate in the modulation index
        let rate = 0.4 + 0.15 * (seed % 5) as f64;
        for jx in 0..pc {
            for jxi in 0..pc {
                for kx in 0..mc {
                    for kxi in 0..mc {
                        let dj = ((jx as f64 - o_pos as f64).abs()
                            + (jxi as f64 - o_pos as f64).abs())
                            * 0.35;
                        let dk = ((kx as f64 - o_mod as f64).abs()
                            + (kxi as f64 - o_mod as f64).abs())
                            * rate;
                        let env = (-(dj + dk)).exp();
                        *c.at_mut(jx, jxi, kx, kxi) = Complex64::new(
                            rng.gen_range(-1.0..1.0) * env,
                            rng.gen_range(-1.0..1.0) * env,
                        );
                    }
                }
            }
        }
        symbols.push(gabor_synthesize(&c, &sys).unwrap());
    }
    let mut detail = String::new();
    let mut ok = true;
    for (p, q) in [(2.0, 2.0), (2.0, 1.0), (4.0, 2.0), (f64::INFINITY, 1.0)] {
        let mut ratios = Vec::new();
        for a in &symbols {
            let m = quantize(a, &SchemeSpec::BornJordan(quad.clone()), 8).unwrap();
            let sch = schatten_norm(&singular_values(&m).unwrap(), p).unwrap();
            let modn = modulation_norm(a, p, q, &w0, &sys).unwrap();
            ratios.push(sch / modn);
        }
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0f64, f64::max);
        let spread = hi / lo;
        detail.push_str(&format!("(p={p},q={q}): {spread:.2}; "));
        ok &= spread <= 50.0;
    }
    report(9, "Schatten-modulation ratio uniformity", format!("{detail}all <= 50"), ok);
}

#[test]
fn criterion_10_gaarding_lower_bound() {
    let cut = Cutoff::Gaussian { sigma_x: 4.0, sigma_xi: 3.0 };
    let quad = gl33();
    let mut vals = Vec::new();
    for (n, dx) in [(128usize, 0.25), (256, 0.125)] {
        let pg = PhaseGrid::for_signal(Grid::centered(n, dx).unwrap());
        let a = monomial_symbol(&pg, 2, 2, &cut);
        let m = quantize(&a, &SchemeSpec::BornJordan(quad.clone()), 8).unwrap();
        vals.push(min_eigenvalue_hermitian(&m).unwrap());
    }
    let drift = ((vals[0] - vals[1]) / vals[1]).abs();
    report(
        10,
        "Gaarding lower bound",
        format!("min eigenvalues {:.5}/{:.5} >= -1, drift {:.2}% <= 5%", vals[0], vals[1], drift * 100.0),
        vals.iter().all(|&v| v >= -1.0) && drift <= 0.05,
    );
}

#[test]
fn criterion_11_ghost_suppression() {
    // drive the CLI so the arrays are emitted for inspection
    let dir = std::env::temp_dir().join("bjq_acceptance_ghost");
    std::fs::create_dir_all(&dir).unwrap();
    let prefix = dir.join("ghost");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_bjq"))
        .args([
            "ghost-demo",
            "--omega1",
            "-6",
            "--omega2",
            "6",
            "--sigma",
            "2",
            "--n",
            "512",
            "--out-prefix",
            prefix.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "ghost-demo failed: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let get = |key: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(key))
            .and_then(|l| l.split(',').nth(1))
            .and_then(|v| v.parse().ok())
            .unwrap_or(f64::NAN)
    };
    let rho_w = get("rho_wigner");
    let suppression = get("suppression");
    let arrays_exist = ["_spectrogram.psf", "_wigner.psf", "_bj.psf"].iter().all(|s| {
        dir.join(format!("ghost{s}")).exists()
    });
    report(
        11,
        "ghost-frequency suppression",
        format!("rho_W {rho_w:.3} (close to 2), rho_BJ/rho_W {suppression:.4} <= 0.25, arrays emitted {arrays_exist}"),
        (rho_w - 2.0).abs() <= 0.5 && suppression <= 0.25 && arrays_exist,
    );
}

#[test]
fn criterion_12_selfcheck_suite() {
    let start = Instant::now();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_bjq"))
        .arg("selfcheck")
        .output()
        .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let text = String::from_utf8_lossy(&out.stdout);
    let has = |name: &str| text.lines().any(|l| l.contains(name) && l.contains("pass"));
    let core_four = has("wigner marginals")
        && has("born-jordan realness")
        && has("fourier unitarity")
        && has("frame reconstruction");
    report(
        12,
        "self-check invariant suite",
        format!(
            "exit {:?}, marginals/realness/unitarity/reconstruction reported pass, {elapsed:.1}s < 120s",
            out.status.code()
        ),
        out.status.success() && core_four && elapsed < 120.0,
    );
}
