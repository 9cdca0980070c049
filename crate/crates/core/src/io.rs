//! File formats for matrices and operator specifications.
//!
//! * Matrix JSON: `{"rows":N,"cols":N,"entries":[[re,im],...]}`, row-major.
//! * Matrix CSV: one matrix row per line, cells like `1.5-2j`.
//! * Operator JSON: `{"kind":"diagonal","values":[[re,im],...]}`, also
//!   `shift`, `backshift`, `weighted_shift` (`"weights"`), and `dense`
//!   (with the matrix JSON fields inline). An optional `"label"` is kept.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix, C64};
use crate::operator::{OperatorKind, OperatorSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let data = j.entries.iter().map(|&[re, im]| c64(re, im)).collect();
        ComplexMatrix::from_vec(j.rows, j.cols, data)
    }
}

pub fn pairs(values: &[C64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(values: &[[f64; 2]]) -> Vec<C64> {
    values.iter().map(|&[re, im]| c64(re, im)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum OperatorJson {
    Dense {
        #[serde(flatten)]
        matrix: MatrixJson,
        #[serde(default)]
        label: Option<String>,
    },
    Diagonal {
        values: Vec<[f64; 2]>,
        #[serde(default)]
        label: Option<String>,
    },
    Shift {
        #[serde(default)]
        label: Option<String>,
    },
    #[serde(alias = "back_shift")]
    Backshift {
        #[serde(default)]
        label: Option<String>,
    },
    WeightedShift {
        weights: Vec<[f64; 2]>,
        #[serde(default)]
        label: Option<String>,
    },
}

pub fn operator_from_json(text: &str) -> Result<OperatorSpec> {
    let parsed: OperatorJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("operator JSON: {e}")))?;
    let (spec, label) = match parsed {
        OperatorJson::Dense { matrix, label } => (OperatorSpec::dense(matrix.try_into()?)?, label),
        OperatorJson::Diagonal { values, label } => (OperatorSpec::diagonal(from_pairs(&values))?, label),
        OperatorJson::Shift { label } => (OperatorSpec::shift(), label),
        OperatorJson::Backshift { label } => (OperatorSpec::back_shift(), label),
        OperatorJson::WeightedShift { weights, label } => (OperatorSpec::weighted_shift(from_pairs(&weights))?, label),
    };
    Ok(match label {
        Some(l) => spec.with_label(l),
        None => spec,
    })
}

pub fn operator_to_json(spec: &OperatorSpec) -> Result<String> {
    let label = Some(spec.label.clone());
    let j = match &spec.kind {
        OperatorKind::Dense(m) => OperatorJson::Dense {
            matrix: m.into(),
            label,
        },
        OperatorKind::Diagonal(v) => OperatorJson::Diagonal {
            values: pairs(v),
            label,
        },
        OperatorKind::Shift => OperatorJson::Shift { label },
        OperatorKind::BackShift => OperatorJson::Backshift { label },
        OperatorKind::WeightedShift(w) => OperatorJson::WeightedShift {
            weights: pairs(w),
            label,
        },
    };
    serde_json::to_string(&j).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let j: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    j.try_into()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("plain data serializes")
}

/// Parses `re`, `imj`, or `re±imj` (`i` is accepted in place of `j`).
pub fn parse_complex(cell: &str) -> Result<C64> {
    let s: String = cell.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("bad complex number {cell:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['j', 'i']) else {
        return s.parse::<f64>().map(|re| c64(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let parse_im = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(c64(re, parse_im(&body[k..])?))
        }
        None => Ok(c64(0.0, parse_im(body)?)),
    }
}

pub fn format_complex(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}j", z.re, -z.im)
    } else {
        format!("{}+{}j", z.re, z.im)
    }
}

pub fn matrix_from_csv(text: &str) -> Result<ComplexMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("matrix CSV: {e}")))?;
        rows.push(record.iter().map(parse_complex).collect::<Result<Vec<_>>>()?);
    }
    ComplexMatrix::from_rows(&rows)
}

pub fn matrix_to_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let cells: Vec<String> = m.row(i).iter().map(|&z| format_complex(z)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Loads an operator from a `.csv` matrix, a matrix JSON, or an operator JSON.
pub fn load_operator(path: &Path) -> Result<OperatorSpec> {
    let text = std::fs::read_to_string(path)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        return Ok(OperatorSpec::dense(matrix_from_csv(&text)?)?.with_label(label));
    }
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if value.get("kind").is_some() {
        let spec = operator_from_json(&text)?;
        if value.get("label").is_some() {
            Ok(spec)
        } else {
            Ok(spec.with_label(label))
        }
    } else {
        Ok(OperatorSpec::dense(matrix_from_json(&text)?)?.with_label(label))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_cells() {
        assert_eq!(parse_complex("1.5").unwrap(), c64(1.5, 0.0));
        assert_eq!(parse_complex("1+2j").unwrap(), c64(1.0, 2.0));
        assert_eq!(parse_complex(" -0.5 - 1e-3j ").unwrap(), c64(-0.5, -1e-3));
        assert_eq!(parse_complex("2j").unwrap(), c64(0.0, 2.0));
        assert_eq!(parse_complex("-j").unwrap(), c64(0.0, -1.0));
        assert_eq!(parse_complex("1e-2+3e+1i").unwrap(), c64(0.01, 30.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn csv_and_json_agree() {
        let m = matrix_from_csv("1+0j, 0-1j\n2, 3.5j\n").unwrap();
        assert_eq!(m[(0, 1)], c64(0.0, -1.0));
        assert_eq!(m[(1, 1)], c64(0.0, 3.5));
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(back, m);
        assert_eq!(matrix_from_csv(&matrix_to_csv(&m)).unwrap(), m);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matrix_from_json(r#"{"rows":2,"cols":2,"entries":[[1,0]]}"#).is_err());
        assert!(matrix_from_csv("1,2\n3\n").is_err());
        assert!(operator_from_json(r#"{"kind":"bogus"}"#).is_err());
    }

    #[test]
    fn operator_specs_parse() {
        let d = operator_from_json(r#"{"kind":"diagonal","values":[[1,0],[0,2]]}"#).unwrap();
        assert_eq!(d.kind, OperatorKind::Diagonal(vec![c64(1.0, 0.0), c64(0.0, 2.0)]));
        let s = operator_from_json(r#"{"kind":"shift","label":"S"}"#).unwrap();
        assert_eq!(s.kind, OperatorKind::Shift);
        let m = operator_from_json(r#"{"kind":"dense","rows":1,"cols":1,"entries":[[4,0]]}"#).unwrap();
        assert_eq!(m.materialize(1).unwrap()[(0, 0)], c64(4.0, 0.0));
        let round = operator_from_json(&operator_to_json(&d).unwrap()).unwrap();
        assert_eq!(round, d);
    }
}
