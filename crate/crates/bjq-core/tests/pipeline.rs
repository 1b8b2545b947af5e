//! Cross-module integration: signal -> distribution -> operator -> spectrum,
//! with the file formats in the middle, behaves like one coherent calculus.

use num_complex::Complex64;

use bjq_core::grid::{Grid, PhaseGrid, TAU};
use bjq_core::io;
use bjq_core::quadrature::QuadratureRule;
use bjq_core::quantize::{quantize, SchemeSpec};
use bjq_core::spectral::{schatten_norm, singular_values};
use bjq_core::synth::{hermite, random_band_limited_signal};
use bjq_core::transforms::{marginals, wigner_bj, wigner_tau};

#[test]
fn wigner_of_state_traces_to_energy() {
    // trace(Op^w(W(f,f))) relates to ||f||^2: quantizing the Wigner
    // distribution of a state gives (2 pi)^{-1/2} times the rank-one
    // projector onto it, so its largest singular value is
    // (2 pi)^{-1/2} ||f||^2 and the rest vanish.
    let g = Grid::centered(128, 0.25).unwrap();
    let f = hermite(2, &g).unwrap();
    let w = wigner_tau(&f, &f, 0.5, 8).unwrap();
    let m = quantize(&w, &SchemeSpec::Weyl, 8).unwrap();
    let s = singular_values(&m).unwrap();
    let expect = 1.0 / TAU.sqrt();
    assert!(
        (s.leading() - expect).abs() <= 1e-8,
        "leading singular value {} vs {}",
        s.leading(),
        expect
    );
    assert!(s.values()[1] <= 1e-8, "second singular value {}", s.values()[1]);
    // trace-class norm of the projector equals its operator norm
    let p1 = schatten_norm(&s, 1.0).unwrap();
    assert!((p1 - expect).abs() <= 1e-6, "trace norm {p1}");
}

#[test]
fn file_formats_survive_the_full_pipeline() {
    let g = Grid::centered(64, 0.25).unwrap();
    let f = random_band_limited_signal(&g, 4.0, 99);

    // signal CSV round trip feeding a transform
    let f2 = io::read_signal_csv(io::write_signal_csv(&f).as_bytes()).unwrap();
    let quad = QuadratureRule::gauss_legendre(17).unwrap();
    let w = wigner_bj(&f2, &f2, &quad, 8).unwrap();

    // PSF round trip feeding quantization, bit-exactly
    let w2 = io::read_psf(&io::write_psf(&w)).unwrap();
    assert_eq!(w.values(), w2.values());
    let m = quantize(&w2, &SchemeSpec::Weyl, 8).unwrap();

    // OPM round trip preserving the spectrum bit-exactly
    let m2 = io::read_opm(&io::write_opm(&m)).unwrap();
    assert_eq!(m.matrix(), m2.matrix());
    let s1 = singular_values(&m).unwrap();
    let s2 = singular_values(&m2).unwrap();
    assert_eq!(s1.values(), s2.values());
}

#[test]
fn born_jordan_distribution_pairs_with_born_jordan_operator() {
    // <Op_BJ(a) f, g> = (2 pi)^{-1/2} <a, W_BJ(g, f)> ties the transforms
    // and quantize modules together through the quadrature average.
    let g = Grid::centered(128, 0.25).unwrap();
    let pg = PhaseGrid::for_signal(g);
    let quad = QuadratureRule::gauss_legendre(33).unwrap();
    let a = bjq_core::synth::random_band_limited_symbol(&pg, 3.0, 3.0, 7, false);
    let f = hermite(1, &g).unwrap();
    let gg = hermite(3, &g).unwrap();

    let op = quantize(&a, &SchemeSpec::BornJordan(quad.clone()), 8).unwrap();
    let lhs = op.apply(&f).unwrap().inner(&gg);
    let w = wigner_bj(&gg, &f, &quad, 8).unwrap();
    let rhs = a.inner(&w) / TAU.sqrt();
    let bound = a.norm_l2() * f.norm_l2() * gg.norm_l2();
    assert!(
        (lhs - rhs).norm() <= 1e-8 * bound,
        "duality residual {:.3e} vs bound {bound:.3e}",
        (lhs - rhs).norm()
    );
}

#[test]
fn marginals_integrate_to_energy() {
    let g = Grid::centered(128, 0.25).unwrap();
    let f = hermite(4, &g).unwrap();
    let w = wigner_tau(&f, &f, 0.5, 8).unwrap();
    let (pos, freq) = marginals(&w);
    // integrating the position marginal recovers (2 pi)^{1/2} ||f||^2
    let total: Complex64 =
        pos.values().iter().sum::<Complex64>() * Complex64::new(g.spacing(), 0.0);
    assert!((total.re - TAU.sqrt()).abs() <= 1e-8 && total.im.abs() <= 1e-10);
    let total_f: Complex64 = freq.values().iter().sum::<Complex64>()
        * Complex64::new(freq.grid().spacing(), 0.0);
    assert!((total_f.re - TAU.sqrt()).abs() <= 1e-8);
}
