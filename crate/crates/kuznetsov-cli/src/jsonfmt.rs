//! Deterministic output rendering.
//!
//! JSON is the canonical format: pretty-printed with keys in sorted order
//! (the serde_json map is a BTreeMap) and every float written with 17
//! significant digits, so a document's bytes depend only on the numbers in
//! it. CSV is a flat projection of the same rows with identical float
//! formatting.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use serde_json::Value;
use std::io;

/// `{:.16e}` carries 1 + 16 significant digits, enough to round-trip any
/// f64 and identical across platforms.
fn write_float<W: ?Sized + io::Write>(writer: &mut W, value: f64) -> io::Result<()> {
    write!(writer, "{value:.16e}")
}

struct CanonicalFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for CanonicalFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write_float(writer, value)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

pub fn to_canonical_json(value: &Value) -> String {
    let mut buf = Vec::new();
    let fmt = CanonicalFormatter { inner: PrettyFormatter::new() };
    let mut ser = Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser).expect("serializing an in-memory value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("json output is utf-8")
}

/// A float as a JSON value; non-finite floats have no JSON representation
/// and become null.
pub fn fnum(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn cnum(z: Complex64) -> Value {
    serde_json::json!({ "re": fnum(z.re), "im": fnum(z.im) })
}

/// One CSV cell; floats render exactly as in JSON.
#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Float(f64),
    Int(i64),
    UInt(u64),
    Flag(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => quote_csv(s),
            Cell::Float(x) => {
                if x.is_finite() {
                    format!("{x:.16e}")
                } else if x.is_nan() {
                    "nan".to_string()
                } else if *x > 0.0 {
                    "inf".to_string()
                } else {
                    "-inf".to_string()
                }
            }
            Cell::Int(n) => n.to_string(),
            Cell::UInt(n) => n.to_string(),
            Cell::Flag(b) => b.to_string(),
        }
    }
}

fn quote_csv(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_carry_seventeen_digits_and_round_trip() {
        let doc = json!({ "x": 0.1, "n": 7, "z": cnum(Complex64::new(-2.0, 1e-300)) });
        let text = to_canonical_json(&doc);
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"n\": 7"), "{text}");
        assert!(text.contains("-2.0000000000000000e0"), "{text}");
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), 0.1);
        assert_eq!(back["z"]["im"].as_f64().unwrap(), 1e-300);
    }

    #[test]
    fn keys_are_sorted_and_non_finite_is_null() {
        let doc = json!({ "b": 1, "a": fnum(f64::INFINITY) });
        let text = to_canonical_json(&doc);
        let a = text.find("\"a\"").unwrap();
        let b = text.find("\"b\"").unwrap();
        assert!(a < b, "{text}");
        assert!(text.contains("\"a\": null"), "{text}");
    }

    #[test]
    fn csv_rows_and_quoting() {
        let rows = vec![
            vec![Cell::Text("1+1w".into()), Cell::Float(0.5), Cell::UInt(3)],
            vec![Cell::Text("a,b".into()), Cell::Float(f64::INFINITY), Cell::UInt(0)],
        ];
        let text = to_csv(&["c", "v", "n"], &rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "c,v,n");
        assert_eq!(lines[1], "1+1w,5.0000000000000000e-1,3");
        assert_eq!(lines[2], "\"a,b\",inf,0");
    }
}
