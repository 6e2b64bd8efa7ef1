//! Flag-value parsers: rationals as `p/q`, pairs as `p/q,r/s`, and complex
//! numbers as `re,im`. Errors are plain strings; the caller prepends the
//! flag name.

use kuznetsov::rings::{DualPoint, QuadField};
use num_complex::Complex64;
use num_rational::Ratio;

pub fn parse_rational(text: &str) -> Result<Ratio<i64>, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let p: i64 = num
        .parse()
        .map_err(|_| format!("expected an integer numerator, got '{num}'"))?;
    let q: i64 = match den {
        Some(d) => d
            .parse()
            .map_err(|_| format!("expected an integer denominator, got '{d}'"))?,
        None => 1,
    };
    if q == 0 {
        return Err(format!("zero denominator in '{text}'"));
    }
    Ok(Ratio::new(p, q))
}

pub fn parse_rational_pair(text: &str) -> Result<(Ratio<i64>, Ratio<i64>), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated rationals, got '{text}'"))?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

/// A dual-lattice point from its `p/q,r/s` coordinates over the integral
/// basis {1, w_D}; membership in the dual lattice is checked.
pub fn parse_dual_point(text: &str, field: QuadField) -> Result<DualPoint, String> {
    let (p, q) = parse_rational_pair(text)?;
    DualPoint::new(p, q, field).map_err(|e| format!("'{text}': {e}"))
}

/// `re,im` or a bare `re` with zero imaginary part.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let mut parts = text.splitn(2, ',');
    let re_text = parts.next().unwrap_or("").trim();
    let re: f64 = re_text
        .parse()
        .map_err(|_| format!("expected a real number, got '{re_text}'"))?;
    let im: f64 = match parts.next() {
        Some(im_text) => {
            let im_text = im_text.trim();
            im_text
                .parse()
                .map_err(|_| format!("expected a real number, got '{im_text}'"))?
        }
        None => 0.0,
    };
    if !(re.is_finite() && im.is_finite()) {
        return Err(format!("'{text}' is not finite"));
    }
    Ok(Complex64::new(re, im))
}

pub fn lookup_field(d: u32) -> Result<QuadField, String> {
    QuadField::new(d).map_err(|_| format!("unsupported field {d}; pick one of 1, 2, 3, 7, 11"))
}

/// Renders a rational in the same `p` or `p/q` syntax the parsers accept.
pub fn format_ratio(r: Ratio<i64>) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_dual_point(w: DualPoint) -> String {
    format!("{},{}", format_ratio(w.p()), format_ratio(w.q()))
}
