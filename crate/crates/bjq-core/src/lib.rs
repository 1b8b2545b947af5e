//! Numerics for Born-Jordan quantization and its relatives: tau-Wigner and
//! Born-Jordan time-frequency distributions, discretized Shubin/Weyl/
//! Born-Jordan pseudo-differential operators, symbol conversion between the
//! Born-Jordan and Weyl calculi, Gabor frame analysis with mixed-norm
//! modulation-space diagnostics, Hörmander-class seminorms for split metrics,
//! and Schatten/spectral diagnostics. Dimension is fixed to d = 1 (phase
//! space R^2); all operations are pure and safe to call concurrently.

pub mod cutoff;
pub mod error;
pub mod fourier;
pub mod gabor;
pub mod grid;
pub mod io;
pub mod quadrature;
pub mod quantize;
pub mod spectral;
pub mod symclass;
pub mod synth;
pub mod transforms;

pub use error::{Error, Result};
pub use grid::{Grid, PhaseGrid, PhaseSpaceArray, Signal};
pub use quadrature::QuadratureRule;
