//! Text renderings shared by the command-line front end: CSV and compact
//! JSON for matrices and scalars, JSON for decisions and reports.
//!
//! Exact rationals print as `p/q` (JSON strings). Floats print with 17
//! significant digits and trailing zeros kept, so "1.0000000000000000"
//! means exactly 1 to double precision.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, ExactMatrix};
use crate::numeric::FloatMatrix;

/// CSV output is refused above this many matrix entries.
pub const MAX_CSV_ENTRIES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// 17 significant digits with trailing zeros, in fixed notation for
/// decimal exponents −4..=16 and scientific notation otherwise.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.16e}", v.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if v.is_sign_negative() && v != 0.0 { "-" } else { "" };
    let body = if v == 0.0 {
        format!("0.{}", "0".repeat(16))
    } else if (0..17).contains(&exp) {
        let (int, frac) = digits.split_at(exp as usize + 1);
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else if (-4..0).contains(&exp) {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let esign = if exp < 0 { '-' } else { '+' };
        format!("{}.{}e{}{:02}", &digits[..1], &digits[1..], esign, exp.abs())
    };
    format!("{sign}{body}")
}

/// Entries of an emitted matrix, exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Exact(ExactMatrix),
    Float(FloatMatrix),
}

impl Entries {
    pub fn rows(&self) -> usize {
        match self {
            Entries::Exact(m) => m.rows(),
            Entries::Float(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Entries::Exact(m) => m.cols(),
            Entries::Float(m) => m.cols(),
        }
    }

    fn is_exact(&self) -> bool {
        matches!(self, Entries::Exact(_))
    }

    fn cell(&self, i: usize, j: usize) -> String {
        match self {
            Entries::Exact(m) => format_rational(&m[(i, j)]),
            Entries::Float(m) => format_float(m[(i, j)]),
        }
    }

    fn json_cell(&self, i: usize, j: usize) -> String {
        match self {
            Entries::Exact(m) => format!("\"{}\"", format_rational(&m[(i, j)])),
            Entries::Float(m) => format_float(m[(i, j)]),
        }
    }
}

/// A matrix with the metadata describing where it came from. `header` keys
/// are emitted in order, followed by `exact` and `entries`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub header: Vec<(String, Value)>,
    pub entries: Entries,
}

impl MatrixDocument {
    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        let total = self.entries.rows() * self.entries.cols();
        if total > MAX_CSV_ENTRIES {
            return Err(Error::TooLarge {
                cells: total as u128,
                limit: MAX_CSV_ENTRIES as u128,
            });
        }
        for i in 0..self.entries.rows() {
            let row: Vec<String> = (0..self.entries.cols()).map(|j| self.entries.cell(i, j)).collect();
            writeln!(w, "{}", row.join(",")).map_err(io_error)?;
        }
        Ok(())
    }

    /// Compact JSON written row by row, so large matrices never exist as
    /// one string.
    pub fn write_json(&self, w: &mut impl Write) -> Result<()> {
        let mut emit = || -> io::Result<()> {
            write!(w, "{{\"kind\":\"matrix\"")?;
            for (k, v) in &self.header {
                write!(w, ",{}:{}", Value::String(k.clone()), v)?;
            }
            write!(w, ",\"exact\":{},\"entries\":[", self.entries.is_exact())?;
            for i in 0..self.entries.rows() {
                if i > 0 {
                    write!(w, ",")?;
                }
                write!(w, "[")?;
                for j in 0..self.entries.cols() {
                    if j > 0 {
                        write!(w, ",")?;
                    }
                    write!(w, "{}", self.entries.json_cell(i, j))?;
                }
                write!(w, "]")?;
            }
            writeln!(w, "]}}")
        };
        emit().map_err(io_error)
    }

    pub fn to_json_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::InvalidSpec(format!("matrix document: {what}"));
        let value: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let obj = value.as_object().ok_or_else(|| bad("not an object"))?;
        if obj.get("kind") != Some(&Value::String("matrix".into())) {
            return Err(bad("kind is not matrix"));
        }
        let exact = obj.get("exact").and_then(Value::as_bool).ok_or_else(|| bad("missing exact"))?;
        let rows = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing entries"))?;
        let entries = if exact {
            let rows = rows
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad("row is not an array"))?
                        .iter()
                        .map(|c| parse_rational(c.as_str().ok_or_else(|| bad("exact entry is not a string"))?))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Entries::Exact(ExactMatrix::from_rows(rows)?)
        } else {
            let rows = rows
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad("row is not an array"))?
                        .iter()
                        .map(|c| c.as_f64().ok_or_else(|| bad("float entry is not a number")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Entries::Float(FloatMatrix::from_rows(&rows)?)
        };
        let header = obj
            .iter()
            .filter(|(k, _)| !matches!(k.as_str(), "kind" | "exact" | "entries"))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(MatrixDocument { header, entries })
    }
}

/// A single value: an exact rational or a float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(crate::exact::Rational),
    Float(f64),
}

impl Scalar {
    pub fn render(&self) -> String {
        match self {
            Scalar::Exact(q) => format_rational(q),
            Scalar::Float(v) => format_float(*v),
        }
    }

    pub fn write(&self, header: &[(String, Value)], format: Format, w: &mut impl Write) -> Result<()> {
        let out = match format {
            Format::Csv => writeln!(w, "{}", self.render()),
            Format::Json => {
                let value = match self {
                    Scalar::Exact(_) => Value::String(self.render()).to_string(),
                    Scalar::Float(_) => self.render(),
                };
                let mut line = String::from("{\"kind\":\"scalar\"");
                for (k, v) in header {
                    line.push_str(&format!(",{}:{}", Value::String(k.clone()), v));
                }
                let exact = matches!(self, Scalar::Exact(_));
                writeln!(w, "{line},\"exact\":{exact},\"value\":{value}}}")
            }
        };
        out.map_err(io_error)
    }
}

/// Serialises any document as one line of compact JSON.
pub fn write_json_line<T: Serialize>(doc: &T, w: &mut impl Write) -> Result<()> {
    let text = serde_json::to_string(doc).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    writeln!(w, "{text}").map_err(io_error)
}

fn io_error(e: io::Error) -> Error {
    Error::InvalidSpec(format!("write failed: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn float_rendering() {
        assert_eq!(format_float(1.0), "1.0000000000000000");
        assert_eq!(format_float(-1.0), "-1.0000000000000000");
        assert_eq!(format_float(0.0), "0.0000000000000000");
        assert_eq!(format_float(-0.0), "0.0000000000000000");
        assert_eq!(format_float(0.5), "0.50000000000000000");
        assert_eq!(format_float(123.25), "123.25000000000000");
        assert_eq!(format_float(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_float(2.0e-7), "1.9999999999999999e-07");
        assert_eq!(format_float(2.5e20), "2.5000000000000000e+20");
        assert_eq!(format_float(0.001), "0.0010000000000000000");
        for v in [0.1, 1.0 / 3.0, -2.0f64.sqrt(), 6.02e23, 1e-300] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn matrix_round_trip() {
        let exact = MatrixDocument {
            header: vec![("topology".into(), Value::from("open")), ("n".into(), Value::from(2))],
            entries: Entries::Exact(ExactMatrix::from_rows(vec![vec![rat(0, 1), rat(-1, 2)], vec![rat(3, 1), rat(0, 1)]]).unwrap()),
        };
        let text = exact.to_json_string();
        assert_eq!(
            text,
            "{\"kind\":\"matrix\",\"topology\":\"open\",\"n\":2,\"exact\":true,\"entries\":[[\"0\",\"-1/2\"],[\"3\",\"0\"]]}\n"
        );
        assert_eq!(MatrixDocument::from_json(&text).unwrap().to_json_string(), text);

        let float = MatrixDocument {
            header: vec![("n".into(), Value::from(2))],
            entries: Entries::Float(FloatMatrix::from_rows(&[vec![0.1, -1e-9], vec![1.0 / 3.0, 0.0]]).unwrap()),
        };
        let text = float.to_json_string();
        let back = MatrixDocument::from_json(&text).unwrap();
        assert_eq!(back, float);
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn csv_rendering_and_guard() {
        let doc = MatrixDocument {
            header: vec![],
            entries: Entries::Exact(ExactMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]])),
        };
        let mut buf = Vec::new();
        doc.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0,1,0\n1,0,1\n0,1,0\n");
        let big = MatrixDocument {
            header: vec![],
            entries: Entries::Float(FloatMatrix::zeros(1001, 1000)),
        };
        assert!(matches!(big.write_csv(&mut Vec::new()), Err(Error::TooLarge { .. })));
    }
}
