//! bjq: Born-Jordan quantization toolkit.
//!
//! Exit codes: 0 success, 2 usage/validation error, 3 numeric failure.

mod ghost;
mod selfcheck;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bjq_core::error::Error;
use bjq_core::gabor::{gabor_analyze, mixed_norm, GaborSystem, WeightSpec};
use bjq_core::grid::{PhaseGrid, PhaseSpaceArray, Signal};
use bjq_core::io;
use bjq_core::quadrature::QuadratureRule;
use bjq_core::quantize::{bj_to_weyl, quantize, ConversionMethod, SchemeSpec};
use bjq_core::spectral::{schatten_norm, singular_values, SingularSpectrum};
use bjq_core::symclass::{class_norm, remainder_order, seminorm_k, Metric, MetricPreset, WeightM};
use bjq_core::synth::gaussian;
use bjq_core::transforms::{stft, wigner_bj, wigner_tau};

#[derive(Parser)]
#[command(name = "bjq", version, about = "Born-Jordan quantization numerics", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time-frequency transforms of a signal (STFT, tau-Wigner, Born-Jordan)
    Transform(TransformArgs),
    /// Discretize a symbol into an operator matrix
    Quantize(QuantizeArgs),
    /// Apply an operator matrix to a signal
    Apply(ApplyArgs),
    /// Convert a Born-Jordan symbol to its Weyl symbol
    Convert(ConvertArgs),
    /// Singular spectrum and Schatten norms of an operator
    Schatten(SchattenArgs),
    /// Gabor-coefficient modulation-space norm of a symbol
    GaborNorm(GaborNormArgs),
    /// Hörmander-class seminorms and class norms of a symbol
    Seminorm(SeminormArgs),
    /// Expansion-remainder scaling order verification
    RemainderOrder(RemainderArgs),
    /// Two-tone ghost-frequency suppression demonstration
    GhostDemo(GhostArgs),
    /// Run the invariant self-check suite
    Selfcheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    Stft,
    Wigner,
    Bj,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, value_enum)]
    kind: TransformKind,
    /// input signal CSV (x,re,im)
    #[arg(long)]
    input: PathBuf,
    /// window signal CSV for the STFT (default: unit-width Gaussian)
    #[arg(long)]
    window: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    /// Gauss-Legendre node count for the Born-Jordan average
    #[arg(long, default_value_t = 33)]
    nodes: usize,
    #[arg(long, default_value_t = 8)]
    oversample: usize,
    /// output PSF1 file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeKind {
    Bj,
    Weyl,
    Kn,
    Shubin,
}

#[derive(Args)]
struct QuantizeArgs {
    #[arg(long, value_enum, default_value = "bj")]
    scheme: SchemeKind,
    /// Shubin parameter t (with --scheme shubin)
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long, default_value_t = 33)]
    nodes: usize,
    #[arg(long, default_value_t = 8)]
    oversample: usize,
    /// input symbol (PSF1)
    #[arg(long)]
    symbol: PathBuf,
    /// output operator (OPM1)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ApplyArgs {
    /// operator file (OPM1)
    #[arg(long)]
    operator: PathBuf,
    /// input signal CSV
    #[arg(long)]
    input: PathBuf,
    /// output signal CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodKind {
    Multiplier,
    Quadrature,
    Expansion,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long, value_enum, default_value = "multiplier")]
    method: MethodKind,
    #[arg(long, default_value_t = 33)]
    nodes: usize,
    /// partial-sum order for --method expansion
    #[arg(long, default_value_t = 6)]
    terms: usize,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SchattenArgs {
    /// operator (OPM1) or phase-space array (PSF1) treated as a matrix
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// optional spectrum CSV dump (index,sigma)
    #[arg(long)]
    spectrum: Option<PathBuf>,
}

#[derive(Args)]
struct GaborNormArgs {
    /// input symbol (PSF1) on a square self-dual grid
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    /// polynomial weight order s of (1 + |eta|^2 + |y|^2)^{s/2}
    #[arg(long, default_value_t = 0.0)]
    s: f64,
    /// optional coefficient CSV dump
    #[arg(long)]
    coeffs: Option<PathBuf>,
}

#[derive(Args)]
struct SeminormArgs {
    #[arg(long)]
    input: PathBuf,
    /// metric: euclidean | shubin:RHO | hormander:RHO,DELTA | sg
    #[arg(long, default_value = "euclidean")]
    metric: String,
    /// seminorm order k
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// direction samples on the unit circle
    #[arg(long, default_value_t = 64)]
    dirs: usize,
    /// also print the class norm summed to this order
    #[arg(long)]
    class_n: Option<usize>,
    /// weight m = <X>^power for the class norm
    #[arg(long, default_value_t = 0.0)]
    weight_power: f64,
}

#[derive(Args)]
struct RemainderArgs {
    #[arg(long)]
    input: PathBuf,
    /// even expansion order N
    #[arg(long, default_value_t = 2)]
    order: usize,
    /// comma-separated scale factors, all >= 2
    #[arg(long, default_value = "2,4,8", value_delimiter = ',')]
    lambdas: Vec<f64>,
    /// optional report CSV (lambda,remainder)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GhostArgs {
    #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
    omega1: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    omega2: f64,
    #[arg(long, default_value_t = 2.0)]
    sigma: f64,
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 0.0625)]
    dx: f64,
    /// prefix for the emitted arrays and metrics
    #[arg(long, default_value = "ghost")]
    out_prefix: String,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NonFinite(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// BJQ_THREADS caps kernel parallelism; unset leaves the rayon default.
fn configure_threads() {
    if let Ok(v) = std::env::var("BJQ_THREADS") {
        if let Ok(k) = v.trim().parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Transform(a) => cmd_transform(a),
        Command::Quantize(a) => cmd_quantize(a),
        Command::Apply(a) => cmd_apply(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Schatten(a) => cmd_schatten(a),
        Command::GaborNorm(a) => cmd_gabor_norm(a),
        Command::Seminorm(a) => cmd_seminorm(a),
        Command::RemainderOrder(a) => cmd_remainder(a),
        Command::GhostDemo(a) => cmd_ghost(a),
        Command::Selfcheck => cmd_selfcheck(),
    }
}

fn read_signal(path: &Path) -> Result<Signal, Error> {
    let data = std::fs::read(path)?;
    io::read_signal_csv(&data)
}

fn read_symbol(path: &Path) -> Result<PhaseSpaceArray, Error> {
    let data = std::fs::read(path)?;
    io::read_psf(&data)
}

fn ensure_finite_array(a: &PhaseSpaceArray) -> Result<(), Error> {
    if a.values().iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite("output array".into()));
    }
    Ok(())
}

fn cmd_transform(a: TransformArgs) -> Result<(), Error> {
    let f = read_signal(&a.input)?;
    let out = match a.kind {
        TransformKind::Stft => {
            let w = match &a.window {
                Some(p) => read_signal(p)?,
                None => gaussian(f.grid(), 1.0, 0.0, 0.0),
            };
            stft(&f, &w)?
        }
        TransformKind::Wigner => wigner_tau(&f, &f, a.tau, a.oversample)?,
        TransformKind::Bj => {
            let quad = QuadratureRule::gauss_legendre(a.nodes)?;
            wigner_bj(&f, &f, &quad, a.oversample)?
        }
    };
    ensure_finite_array(&out)?;
    std::fs::write(&a.out, io::write_psf(&out))?;
    let kind = match a.kind {
        TransformKind::Stft => "stft",
        TransformKind::Wigner => "wigner",
        TransformKind::Bj => "bj",
    };
    println!(
        "# transform kind={kind} n={} dx={:.6e} tau={} nodes={} oversample={}",
        f.len(),
        f.grid().spacing(),
        a.tau,
        a.nodes,
        a.oversample
    );
    println!("wrote {}", a.out.display());
    Ok(())
}

fn cmd_quantize(a: QuantizeArgs) -> Result<(), Error> {
    let sym = read_symbol(&a.symbol)?;
    let scheme = match a.scheme {
        SchemeKind::Bj => SchemeSpec::BornJordan(QuadratureRule::gauss_legendre(a.nodes)?),
        SchemeKind::Weyl => SchemeSpec::Weyl,
        SchemeKind::Kn => SchemeSpec::KohnNirenberg,
        SchemeKind::Shubin => SchemeSpec::Shubin(a.tau),
    };
    let m = quantize(&sym, &scheme, a.oversample)?;
    std::fs::write(&a.out, io::write_opm(&m))?;
    println!(
        "# quantize n={} dx={:.6e} nodes={} oversample={}",
        m.len(),
        m.grid().spacing(),
        a.nodes,
        a.oversample
    );
    println!("wrote {}", a.out.display());
    Ok(())
}

fn cmd_apply(a: ApplyArgs) -> Result<(), Error> {
    let data = std::fs::read(&a.operator)?;
    let m = io::read_opm(&data)?;
    let f = read_signal(&a.input)?;
    let g = m.apply(&f)?;
    std::fs::write(&a.out, io::write_signal_csv(&g))?;
    println!("wrote {}", a.out.display());
    Ok(())
}

fn cmd_convert(a: ConvertArgs) -> Result<(), Error> {
    let sym = read_symbol(&a.input)?;
    let method = match a.method {
        MethodKind::Multiplier => ConversionMethod::Multiplier,
        MethodKind::Quadrature => {
            ConversionMethod::Quadrature(QuadratureRule::gauss_legendre(a.nodes)?)
        }
        MethodKind::Expansion => ConversionMethod::Expansion(a.terms),
    };
    let b = bj_to_weyl(&sym, &method)?;
    ensure_finite_array(&b)?;
    std::fs::write(&a.out, io::write_psf(&b))?;
    println!("wrote {}", a.out.display());
    Ok(())
}

fn cmd_schatten(a: SchattenArgs) -> Result<(), Error> {
    let data = std::fs::read(&a.input)?;
    let s: SingularSpectrum = if data.len() >= 4 && &data[..4] == io::OPM_MAGIC {
        singular_values(&io::read_opm(&data)?)?
    } else {
        // PSF1 arrays are treated as plain matrices
        bjq_core::spectral::array_singular_values(&io::read_psf(&data)?)?
    };
    let norm = schatten_norm(&s, a.p)?;
    if let Some(path) = &a.spectrum {
        std::fs::write(path, io::write_spectrum_csv(&s))?;
    }
    println!("# schatten p={} count={}", a.p, s.len());
    println!("{:.16e}", norm);
    Ok(())
}

fn cmd_gabor_norm(a: GaborNormArgs) -> Result<(), Error> {
    let sym = read_symbol(&a.input)?;
    let n = sym.nx();
    if sym.nxi() != n {
        return Err(Error::InvalidParameter("gabor-norm needs a square array".into()));
    }
    let expect = GaborSystem::square_grid(n)?;
    if !sym.grid().approx_eq(&expect) {
        return Err(Error::InvalidParameter(format!(
            "gabor-norm needs the self-dual square grid (dx = dxi = {:.6e} for n = {n})",
            expect.x.spacing()
        )));
    }
    let sys = GaborSystem::standard(n)?;
    let c = gabor_analyze(&sym, &sys)?;
    let w = WeightSpec::new(a.s)?;
    let norm = mixed_norm(&c, a.p, a.q, &w)?;
    if let Some(path) = &a.coeffs {
        std::fs::write(path, io::write_coefficients_csv(&c))?;
    }
    println!(
        "# gabor-norm n={n} eps={:.6e} redundancy=4 p={} q={} s={}",
        sys.eps(),
        a.p,
        a.q,
        a.s
    );
    println!("{:.16e}", norm);
    Ok(())
}

fn parse_metric(spec: &str, grid: PhaseGrid) -> Result<Metric, Error> {
    let lower = spec.to_ascii_lowercase();
    if lower == "euclidean" {
        return Ok(Metric::euclidean(grid));
    }
    if lower == "sg" {
        return MetricPreset::Sg.metric(grid);
    }
    if let Some(rest) = lower.strip_prefix("shubin:") {
        let rho: f64 = rest.parse().map_err(|_| {
            Error::InvalidParameter(format!("cannot parse shubin parameter '{rest}'"))
        })?;
        return MetricPreset::Shubin { rho }.metric(grid);
    }
    if let Some(rest) = lower.strip_prefix("hormander:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidParameter(
                "hormander metric needs rho,delta".into(),
            ));
        }
        let rho: f64 = parts[0].parse().map_err(|_| {
            Error::InvalidParameter(format!("cannot parse rho '{}'", parts[0]))
        })?;
        let delta: f64 = parts[1].parse().map_err(|_| {
            Error::InvalidParameter(format!("cannot parse delta '{}'", parts[1]))
        })?;
        return MetricPreset::Hormander { rho, delta }.metric(grid);
    }
    Err(Error::InvalidParameter(format!(
        "unknown metric '{spec}' (euclidean | shubin:RHO | hormander:RHO,DELTA | sg)"
    )))
}

fn cmd_seminorm(a: SeminormArgs) -> Result<(), Error> {
    let sym = read_symbol(&a.input)?;
    let metric = parse_metric(&a.metric, *sym.grid())?;
    let f = seminorm_k(&sym, &metric, a.k, a.dirs)?;
    println!(
        "# seminorm metric={} k={} dirs={} interior=50%",
        a.metric, a.k, a.dirs
    );
    println!("seminorm_max {:.16e}", f.max_interior);
    if let Some(nmax) = a.class_n {
        let s = a.weight_power;
        let w = WeightM::from_fn(*sym.grid(), |x, xi| {
            (1.0 + x * x + xi * xi).powf(s / 2.0)
        })?;
        let cn = class_norm(&sym, &metric, &w, nmax, a.dirs)?;
        println!("class_norm_N{} {:.16e}", nmax, cn);
    }
    Ok(())
}

fn cmd_remainder(a: RemainderArgs) -> Result<(), Error> {
    let sym = read_symbol(&a.input)?;
    let rep = remainder_order(&sym, &a.lambdas, a.order)?;
    let mut csv = format!(
        "# remainder-order order={} lambdas={:?} interior=50%\nlambda,remainder\n",
        a.order, a.lambdas
    );
    for (l, r) in &rep.entries {
        csv.push_str(&format!("{l},{r:.16e}\n"));
    }
    match rep.slope {
        Some(s) => csv.push_str(&format!("# slope,{s:.6}\n")),
        None => csv.push_str("# slope,degenerate\n"),
    }
    if let Some(path) = &a.out {
        std::fs::write(path, &csv)?;
    }
    print!("{csv}");
    Ok(())
}

fn cmd_ghost(a: GhostArgs) -> Result<(), Error> {
    let rep = ghost::ghost_demo(a.omega1, a.omega2, a.sigma, a.n, a.dx)?;
    let prefix = &a.out_prefix;
    std::fs::write(format!("{prefix}_spectrogram.psf"), io::write_psf(&rep.spectrogram))?;
    std::fs::write(format!("{prefix}_wigner.psf"), io::write_psf(&rep.wigner))?;
    std::fs::write(format!("{prefix}_bj.psf"), io::write_psf(&rep.born_jordan))?;
    let metrics = format!(
        "# ghost-demo omega1={} omega2={} sigma={} n={} dx={} oversample=8\nmetric,value\nrho_wigner,{:.16e}\nrho_bj,{:.16e}\nsuppression,{:.16e}\n",
        a.omega1,
        a.omega2,
        a.sigma,
        a.n,
        a.dx,
        rep.rho_wigner,
        rep.rho_bj,
        rep.suppression()
    );
    std::fs::write(format!("{prefix}_metrics.csv"), &metrics)?;
    print!("{metrics}");
    println!(
        "wrote {prefix}_spectrogram.psf, {prefix}_wigner.psf, {prefix}_bj.psf, {prefix}_metrics.csv"
    );
    Ok(())
}

fn cmd_selfcheck() -> Result<(), Error> {
    println!("# selfcheck defaults: n=256 dx=0.125 nodes=33 oversample=8 cutoff=flat-top(0.40,0.98)");
    let checks = selfcheck::run();
    if selfcheck::print_table(&checks) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("self-check failures".into()))
    }
}
