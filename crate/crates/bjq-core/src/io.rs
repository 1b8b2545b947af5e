//! File formats: the PSF1 phase-space binary, the OPM1 operator binary,
//! signal CSV, and the CSV report writers.
//!
//! Binary layouts (all little-endian):
//!
//! ```text
//! PSF1: magic `PSF1` | u32 Nx | u32 Nxi | f64 x0 | f64 dx | f64 xi0
//!       | f64 dxi | Nx*Nxi complex values as (re, im) f64 pairs,
//!       x-major row order
//! OPM1: magic `OPM1` | u32 N | f64 x0 | f64 dx | N*N complex f64 pairs,
//!       row-major
//! ```
//!
//! Parsers validate magic, header sanity, truncation, and value finiteness,
//! reporting the byte offset of the first problem; they never panic on
//! malformed input (fuzzed).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, PhaseGrid, PhaseSpaceArray, Signal};
use crate::quantize::OperatorMatrix;
use crate::spectral::SingularSpectrum;
use crate::gabor::GaborCoefficients;

pub const PSF_MAGIC: &[u8; 4] = b"PSF1";
pub const OPM_MAGIC: &[u8; 4] = b"OPM1";

/// Largest accepted axis length when parsing untrusted headers.
const MAX_AXIS: u32 = 1 << 16;

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(data: &'a [u8]) -> Self {
        Cursor { data, pos: 0 }
    }

    fn need(&self, len: usize, what: &str) -> Result<()> {
        if self.pos + len > self.data.len() {
            return Err(Error::Format {
                offset: self.data.len(),
                message: format!(
                    "truncated: need {len} bytes for {what} at offset {}, file has {}",
                    self.pos,
                    self.data.len()
                ),
            });
        }
        Ok(())
    }

    fn magic(&mut self, expect: &[u8; 4]) -> Result<()> {
        self.need(4, "magic")?;
        let got = &self.data[self.pos..self.pos + 4];
        if got != expect {
            return Err(Error::Format {
                offset: self.pos,
                message: format!("bad magic {:?}, expected {:?}", got, expect),
            });
        }
        self.pos += 4;
        Ok(())
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        self.need(4, what)?;
        let v = u32::from_le_bytes(self.data[self.pos..self.pos + 4].try_into().unwrap());
        self.pos += 4;
        Ok(v)
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        self.need(8, what)?;
        let v = f64::from_le_bytes(self.data[self.pos..self.pos + 8].try_into().unwrap());
        self.pos += 8;
        Ok(v)
    }

    fn finite_f64(&mut self, what: &str) -> Result<f64> {
        let at = self.pos;
        let v = self.f64(what)?;
        if !v.is_finite() {
            return Err(Error::Format { offset: at, message: format!("non-finite {what}") });
        }
        Ok(v)
    }
}

fn parse_axis(n: u32, dx: f64, x0: f64, offset_n: usize, what: &str) -> Result<Grid> {
    if n < 8 || n > MAX_AXIS || n % 2 != 0 {
        return Err(Error::Format {
            offset: offset_n,
            message: format!("{what} axis length {n} invalid (need even, 8..={MAX_AXIS})"),
        });
    }
    if !(dx.is_finite() && dx > 0.0) {
        return Err(Error::Format {
            offset: offset_n,
            message: format!("{what} axis spacing {dx} invalid"),
        });
    }
    let grid = Grid::centered(n as usize, dx)
        .map_err(|e| Error::Format { offset: offset_n, message: e.to_string() })?;
    if (x0 - grid.origin()).abs() > 1e-9 * (grid.half_width() + 1.0) {
        return Err(Error::Format {
            offset: offset_n,
            message: format!(
                "{what} axis origin {x0} is not centered (expected {})",
                grid.origin()
            ),
        });
    }
    Ok(grid)
}

/// Serialize a phase-space array in the PSF1 layout.
pub fn write_psf(a: &PhaseSpaceArray) -> Vec<u8> {
    let g = a.grid();
    let mut out = Vec::with_capacity(44 + 16 * a.values().len());
    out.extend_from_slice(PSF_MAGIC);
    out.extend_from_slice(&(g.x.len() as u32).to_le_bytes());
    out.extend_from_slice(&(g.xi.len() as u32).to_le_bytes());
    out.extend_from_slice(&g.x.origin().to_le_bytes());
    out.extend_from_slice(&g.x.spacing().to_le_bytes());
    out.extend_from_slice(&g.xi.origin().to_le_bytes());
    out.extend_from_slice(&g.xi.spacing().to_le_bytes());
    for v in a.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

/// Parse a PSF1 phase-space array, reporting byte offsets on malformed data.
pub fn read_psf(data: &[u8]) -> Result<PhaseSpaceArray> {
    let mut c = Cursor::new(data);
    c.magic(PSF_MAGIC)?;
    let off_nx = c.pos;
    let nx = c.u32("Nx")?;
    let off_nxi = c.pos;
    let nxi = c.u32("Nxi")?;
    let x0 = c.finite_f64("x0")?;
    let dx = c.finite_f64("dx")?;
    let xi0 = c.finite_f64("xi0")?;
    let dxi = c.finite_f64("dxi")?;
    let gx = parse_axis(nx, dx, x0, off_nx, "position")?;
    let gxi = parse_axis(nxi, dxi, xi0, off_nxi, "frequency")?;
    let count = (nx as usize) * (nxi as usize);
    c.need(16 * count, "sample data")?;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let re = c.finite_f64("sample re")?;
        let im = c.finite_f64("sample im")?;
        values.push(Complex64::new(re, im));
    }
    if c.pos != data.len() {
        return Err(Error::Format {
            offset: c.pos,
            message: format!("{} trailing bytes after payload", data.len() - c.pos),
        });
    }
    PhaseSpaceArray::new(PhaseGrid::new(gx, gxi), values)
}

/// Serialize an operator matrix in the OPM1 layout (row-major).
pub fn write_opm(m: &OperatorMatrix) -> Vec<u8> {
    let n = m.len();
    let mut out = Vec::with_capacity(24 + 16 * n * n);
    out.extend_from_slice(OPM_MAGIC);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&m.grid().origin().to_le_bytes());
    out.extend_from_slice(&m.grid().spacing().to_le_bytes());
    for j in 0..n {
        for k in 0..n {
            let v = m.matrix()[(j, k)];
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    out
}

/// Parse an OPM1 operator matrix.
pub fn read_opm(data: &[u8]) -> Result<OperatorMatrix> {
    let mut c = Cursor::new(data);
    c.magic(OPM_MAGIC)?;
    let off_n = c.pos;
    let n = c.u32("N")?;
    let x0 = c.finite_f64("x0")?;
    let dx = c.finite_f64("dx")?;
    if n > 4096 {
        return Err(Error::Format {
            offset: off_n,
            message: format!("operator size {n} too large"),
        });
    }
    let grid = parse_axis(n, dx, x0, off_n, "operator")?;
    let count = (n as usize) * (n as usize);
    c.need(16 * count, "matrix data")?;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let re = c.finite_f64("entry re")?;
        let im = c.finite_f64("entry im")?;
        values.push(Complex64::new(re, im));
    }
    if c.pos != data.len() {
        return Err(Error::Format {
            offset: c.pos,
            message: format!("{} trailing bytes after payload", data.len() - c.pos),
        });
    }
    let m = nalgebra::DMatrix::from_row_iterator(n as usize, n as usize, values);
    OperatorMatrix::new(grid, m)
}

/// Signal CSV: header `x,re,im`, one row per sample, 17 significant digits.
pub fn write_signal_csv(f: &Signal) -> String {
    let mut out = String::from("x,re,im\n");
    for (j, v) in f.values().iter().enumerate() {
        let x = f.grid().point(j);
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", x, v.re, v.im));
    }
    out
}

/// Parse a signal CSV, reconstructing and validating the centered grid.
pub fn read_signal_csv(data: &[u8]) -> Result<Signal> {
    let text = std::str::from_utf8(data).map_err(|e| Error::Format {
        offset: e.valid_up_to(),
        message: "file is not valid UTF-8".into(),
    })?;
    let mut xs: Vec<f64> = Vec::new();
    let mut values: Vec<Complex64> = Vec::new();
    let mut offset = 0usize;
    let mut saw_header = false;
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let row = line.trim_end_matches(['\n', '\r']);
        if row.is_empty() {
            continue;
        }
        if !saw_header {
            if row != "x,re,im" {
                return Err(Error::Format {
                    offset: line_start,
                    message: format!("expected header 'x,re,im', got '{row}'"),
                });
            }
            saw_header = true;
            continue;
        }
        let mut fields = row.split(',');
        let mut next = |what: &str| -> Result<f64> {
            let field = fields.next().ok_or_else(|| Error::Format {
                offset: line_start,
                message: format!("missing {what} column"),
            })?;
            let v: f64 = field.trim().parse().map_err(|_| Error::Format {
                offset: line_start,
                message: format!("cannot parse {what} value '{field}'"),
            })?;
            if !v.is_finite() {
                return Err(Error::Format {
                    offset: line_start,
                    message: format!("non-finite {what} value"),
                });
            }
            Ok(v)
        };
        let x = next("x")?;
        let re = next("re")?;
        let im = next("im")?;
        if fields.next().is_some() {
            return Err(Error::Format {
                offset: line_start,
                message: "too many columns".into(),
            });
        }
        xs.push(x);
        values.push(Complex64::new(re, im));
    }
    if !saw_header {
        return Err(Error::Format { offset: 0, message: "empty file".into() });
    }
    let n = xs.len();
    if n < 8 || n % 2 != 0 {
        return Err(Error::Format {
            offset: 0,
            message: format!("need an even number >= 8 of samples, got {n}"),
        });
    }
    let dx = (xs[n - 1] - xs[0]) / (n as f64 - 1.0);
    if !(dx.is_finite() && dx > 0.0) {
        return Err(Error::Format { offset: 0, message: "x column is not increasing".into() });
    }
    for (j, &x) in xs.iter().enumerate() {
        let expect = xs[0] + j as f64 * dx;
        if (x - expect).abs() > 1e-9 * (1.0 + expect.abs()) {
            return Err(Error::Format {
                offset: 0,
                message: format!("x column is not uniformly spaced at row {j}"),
            });
        }
    }
    let grid = Grid::centered(n, dx).map_err(|e| Error::Format { offset: 0, message: e.to_string() })?;
    if (xs[0] - grid.origin()).abs() > 1e-9 * (grid.half_width() + 1.0) {
        return Err(Error::Format {
            offset: 0,
            message: format!("grid is not centered: first x {} vs expected {}", xs[0], grid.origin()),
        });
    }
    Signal::new(grid, values)
}

/// Spectrum CSV: `index,sigma`.
pub fn write_spectrum_csv(s: &SingularSpectrum) -> String {
    let mut out = String::from("index,sigma\n");
    for (i, v) in s.values().iter().enumerate() {
        out.push_str(&format!("{i},{:.16e}\n", v));
    }
    out
}

/// Gabor coefficient CSV: `jx,jxi,kx,kxi,re,im`.
pub fn write_coefficients_csv(c: &GaborCoefficients) -> String {
    let mut out = String::from("jx,jxi,kx,kxi,re,im\n");
    for jx in 0..c.pos_count() {
        for jxi in 0..c.pos_count() {
            for kx in 0..c.mod_count() {
                for kxi in 0..c.mod_count() {
                    let v = c.at(jx, jxi, kx, kxi);
                    out.push_str(&format!(
                        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                        c.pos_values()[jx],
                        c.pos_values()[jxi],
                        c.mod_values()[kx],
                        c.mod_values()[kxi],
                        v.re,
                        v.im
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::SchemeSpec;
    use crate::synth::random_band_limited_symbol;

    fn sample_array() -> PhaseSpaceArray {
        let pg = PhaseGrid::for_signal(Grid::centered(16, 0.5).unwrap());
        random_band_limited_symbol(&pg, 2.0, 2.0, 4, false)
    }

    #[test]
    fn psf_round_trip_is_bit_exact() {
        let a = sample_array();
        let bytes = write_psf(&a);
        let b = read_psf(&bytes).unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(a.grid().x.len(), b.grid().x.len());
        assert_eq!(write_psf(&b), bytes);
    }

    #[test]
    fn psf_rejects_malformed() {
        let a = sample_array();
        let bytes = write_psf(&a);
        // bad magic
        let mut bad = bytes.clone();
        bad[0] = b'X';
        match read_psf(&bad) {
            Err(Error::Format { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected format error, got {other:?}"),
        }
        // truncation
        let err = read_psf(&bytes[..bytes.len() - 7]).unwrap_err();
        assert!(matches!(err, Error::Format { .. }), "{err}");
        // non-finite payload
        let mut nan = bytes.clone();
        let off = 44;
        nan[off..off + 8].copy_from_slice(&f64::NAN.to_le_bytes());
        match read_psf(&nan) {
            Err(Error::Format { offset, .. }) => assert_eq!(offset, off),
            other => panic!("expected format error, got {other:?}"),
        }
        // trailing garbage
        let mut long = bytes.clone();
        long.push(0);
        assert!(read_psf(&long).is_err());
        // absurd header
        let mut huge = bytes.clone();
        huge[4..8].copy_from_slice(&u32::MAX.to_le_bytes());
        assert!(read_psf(&huge).is_err());
    }

    #[test]
    fn opm_round_trip_is_bit_exact() {
        let pg = PhaseGrid::for_signal(Grid::centered(16, 0.5).unwrap());
        let a = random_band_limited_symbol(&pg, 2.0, 2.0, 9, true);
        let m = crate::quantize::quantize(&a, &SchemeSpec::Weyl, 8).unwrap();
        let bytes = write_opm(&m);
        let back = read_opm(&bytes).unwrap();
        assert_eq!(m.matrix(), back.matrix());
        assert_eq!(write_opm(&back), bytes);
    }

    #[test]
    fn signal_csv_round_trip() {
        let g = Grid::centered(32, 0.37).unwrap();
        let f = crate::synth::random_band_limited_signal(&g, 3.0, 8);
        let text = write_signal_csv(&f);
        let back = read_signal_csv(text.as_bytes()).unwrap();
        assert_eq!(back.len(), f.len());
        for (u, v) in f.values().iter().zip(back.values()) {
            assert!((u - v).norm() <= 1e-15 * u.norm().max(1.0));
        }
    }

    #[test]
    fn signal_csv_rejects_malformed() {
        assert!(read_signal_csv(b"").is_err());
        assert!(read_signal_csv(b"wrong,header\n").is_err());
        assert!(read_signal_csv(b"x,re,im\n1,2\n").is_err());
        assert!(read_signal_csv(b"x,re,im\n1,2,zzz\n").is_err());
        // non-uniform grid
        let bad = "x,re,im\n-2,0,0\n-1,0,0\n0,0,0\n0.5,0,0\n1,0,0\n2,0,0\n3,0,0\n4,0,0\n";
        assert!(read_signal_csv(bad.as_bytes()).is_err());
        // not centered
        let off = write_signal_csv(
            &Signal::from_fn(Grid::centered(8, 1.0).unwrap(), |x| Complex64::new(x, 0.0)),
        )
        .replace("-4.", "-9.");
        assert!(read_signal_csv(off.as_bytes()).is_err());
    }
}
