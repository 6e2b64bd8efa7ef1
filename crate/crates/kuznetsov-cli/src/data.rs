//! Spectral data ingestion.
//!
//! One record per line:
//!
//! ```text
//! kind t d omega_p omega_q A_re A_im [omega_p omega_q A_re A_im ...]
//! ```
//!
//! `kind` is `principal` or `complementary`, `t` is the spectral parameter
//! (decimal), `d` the integer angular frequency (0 for complementary
//! records). Each following group of four fields is one Fourier
//! coefficient: the dual-lattice point as two rationals over the integral
//! basis, then the real and imaginary parts of the coefficient. Everything
//! after `#` is a comment; blank lines are skipped.

use crate::parse::parse_rational;
use kuznetsov::rings::{DualPoint, QuadField};
use kuznetsov::specfun::kernel::SpectralParameter;
use kuznetsov::traceformula::SpectralDatum;
use num_complex::Complex64;
use std::path::Path;

pub fn parse_spectral_file(path: &Path, field: QuadField) -> Result<Vec<SpectralDatum>, String> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| format!("{origin}: {e}"))?;
    parse_spectral_text(&text, field, &origin)
}

pub fn parse_spectral_text(
    text: &str,
    field: QuadField,
    origin: &str,
) -> Result<Vec<SpectralDatum>, String> {
    let mut data = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let lineno = index + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let at = |msg: String| format!("{origin}:{lineno}: {msg}");
        if fields.len() < 3 {
            return Err(at(format!("expected at least 'kind t d', got {} fields", fields.len())));
        }
        let t: f64 = fields[1]
            .parse()
            .map_err(|_| at(format!("bad spectral parameter t '{}'", fields[1])))?;
        let d: i32 = fields[2]
            .parse()
            .map_err(|_| at(format!("bad angular frequency d '{}'", fields[2])))?;
        let p = match fields[0] {
            "principal" => SpectralParameter::Principal { t, d },
            "complementary" => {
                if d != 0 {
                    return Err(at("complementary records take d = 0".to_string()));
                }
                SpectralParameter::Complementary { t }
            }
            other => return Err(at(format!("unknown kind '{other}'"))),
        };
        p.validate().map_err(|e| at(format!("{e}")))?;
        let rest = &fields[3..];
        if rest.len() % 4 != 0 {
            return Err(at(format!(
                "coefficient groups are 'omega_p omega_q A_re A_im'; {} trailing fields",
                rest.len() % 4
            )));
        }
        let mut coefficients = Vec::with_capacity(rest.len() / 4);
        for group in rest.chunks_exact(4) {
            let wp = parse_rational(group[0]).map_err(|e| at(e))?;
            let wq = parse_rational(group[1]).map_err(|e| at(e))?;
            let omega = DualPoint::new(wp, wq, field)
                .map_err(|e| at(format!("omega {},{}: {e}", group[0], group[1])))?;
            let re: f64 =
                group[2].parse().map_err(|_| at(format!("bad coefficient '{}'", group[2])))?;
            let im: f64 =
                group[3].parse().map_err(|_| at(format!("bad coefficient '{}'", group[3])))?;
            coefficients.push((omega, Complex64::new(re, im)));
        }
        data.push(SpectralDatum {
            p,
            coefficients,
            provenance: format!("{origin}:{lineno}"),
        });
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> QuadField {
        QuadField::new(1).unwrap()
    }

    #[test]
    fn records_comments_and_groups() {
        let text = "\
# catalogue header
principal 2.5 0 1/2 0 1.25 -0.5 1/2 1/2 0.1 0.2

complementary 0.25 0 1/2 0 1 0  # inline note
";
        let data = parse_spectral_text(text, field(), "mem").unwrap();
        assert_eq!(data.len(), 2);
        assert_eq!(data[0].coefficients.len(), 2);
        assert_eq!(data[0].provenance, "mem:2");
        let w = DualPoint::new(
            num_rational::Ratio::new(1, 2),
            num_rational::Ratio::new(0, 1),
            field(),
        )
        .unwrap();
        assert_eq!(data[0].coefficient(w), Some(Complex64::new(1.25, -0.5)));
        assert!(matches!(data[1].p, SpectralParameter::Complementary { t } if t == 0.25));
    }

    #[test]
    fn malformed_lines_name_the_position() {
        let field = field();
        let err = parse_spectral_text("principal 1.0 0 1/2 0 1", field, "f").unwrap_err();
        assert!(err.contains("f:1"), "{err}");
        let err = parse_spectral_text("principal x 0", field, "f").unwrap_err();
        assert!(err.contains("bad spectral parameter"), "{err}");
        let err = parse_spectral_text("complementary 0.25 1 1/2 0 1 0", field, "f").unwrap_err();
        assert!(err.contains("d = 0"), "{err}");
        let err = parse_spectral_text("complementary 0.75 0", field, "f").unwrap_err();
        assert!(err.contains("unitary dual"), "{err}");
        let err = parse_spectral_text("principal 1.0 0 1/3 0 1 0", field, "f").unwrap_err();
        assert!(err.contains("dual lattice"), "{err}");
        let err = parse_spectral_text("residual 1.0 0", field, "f").unwrap_err();
        assert!(err.contains("unknown kind"), "{err}");
    }
}
