//! Output formatting and file writing.

use std::io::Write as _;
use std::path::Path;

use crate::error::{QpmError, Result};

/// Fixed float formatting for every emitted file: 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write `content` to `path`, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|source| QpmError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| QpmError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Column order and units of every tabular output.
pub const SCHEMA: &str = "\
Floats are written with 17 significant digits ({:.16e}), '.' decimal, '\\n' line endings.
Lengths in um, mismatches in um^-1, x = l*dk/2 dimensionless, G in units of chi0*um.

spectrum (csv): dk,x,y,re_g,im_g,abs_g
  dk     wave-vector mismatch [um^-1]
  x      dimensionless mismatch l*dk/2
  y      normalized spectral function Y_{M,N} (real, |y| <= 1)
  re_g   real part of the effective coupling G = L*chi0*exp(-i*alpha)*Y [chi0*um]
  im_g   imaginary part of G [chi0*um]
  abs_g  |G| [chi0*um]

joint (csv, row-major in x1): x1,x2,h
  x1,x2  dimensionless mismatches of the two processes
  h      joint function (MN)^2 * Y(x1) * Y(x2)

design (csv): rank,l,n,m,score,x1,x1_peak,residual1,x2,x2_peak,residual2
  rank       1-based position after sorting by score, then N, M, l
  l          domain length [um]; n domains per block; m blocks
  score      max residual in units of the matched peak FWHM (in x)
  x1,x2      targets l*dk1/2 and l*dk2/2
  x*_peak    refined peak positions the targets were matched to
  residual*  |x - x_peak|

verify (json): spec, dk_range, seed, passed, checks[name, tolerance,
  max_deviation, samples, passed, skipped (reason, only when skipped),
  worst[dk, deviation]]
";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.0, -1.5, std::f64::consts::PI, 1e-300, 6.02e23] {
            let s = fmt_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let err = write_output(Some(Path::new("/nonexistent-dir/x.csv")), "a").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
