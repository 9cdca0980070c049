use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use symtensor::basis::{slots_of, TensorBasis};
use symtensor::error::Result;
use symtensor::io::{format_complex, MatrixJson};
use symtensor::matrix::{ComplexMatrix, C64};
use symtensor::product::{Flavor, ProductRequest};
use symtensor::spectral::{SpectrumMethod, SpectrumReport};
use symtensor::theorems::{VerifyReport, VERSION};

use crate::{usage, Failure};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Serialize)]
pub struct ProductOutput {
    version: &'static str,
    product: String,
    flavor: Flavor,
    trunc: usize,
    /// Index tuple labelling each basis vector, in row/column order.
    basis: Vec<Vec<usize>>,
    matrix: MatrixJson,
    #[serde(skip)]
    dense: ComplexMatrix,
}

fn symbol(flavor: Flavor) -> &'static str {
    match flavor {
        Flavor::Symmetric => " ⊙ ",
        Flavor::Antisymmetric => " ∧ ",
        Flavor::FullAveraged => " ⊗avg ",
    }
}

pub fn describe(request: &ProductRequest) -> String {
    let labels: Vec<&str> = request.operators.iter().map(|op| op.label.as_str()).collect();
    format!("{}, N = {}", labels.join(symbol(request.flavor)), request.trunc)
}

impl ProductOutput {
    pub fn new(request: &ProductRequest, matrix: ComplexMatrix) -> Result<Self> {
        let (d, n) = (request.trunc, request.operators.len());
        let basis = match request.flavor {
            Flavor::Symmetric => TensorBasis::symmetric(d, n)?
                .indices()
                .iter()
                .map(|i| i.entries().to_vec())
                .collect(),
            Flavor::Antisymmetric => TensorBasis::antisymmetric(d, n)?
                .indices()
                .iter()
                .map(|i| i.entries().to_vec())
                .collect(),
            Flavor::FullAveraged => (0..matrix.rows()).map(|f| slots_of(f, d, n)).collect(),
        };
        Ok(Self {
            version: VERSION,
            product: describe(request),
            flavor: request.flavor,
            trunc: d,
            basis,
            matrix: MatrixJson::from(&matrix),
            dense: matrix,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct SpectrumOutput {
    version: &'static str,
    operator: String,
    eigenvalues: Vec<C64>,
    method: SpectrumMethod,
    max_residual: f64,
    tolerance: f64,
    /// Largest disagreement with an independent computation, when one was made.
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<f64>,
}

impl SpectrumOutput {
    pub fn new(operator: String, report: SpectrumReport, cross_check: Option<f64>) -> Self {
        Self {
            version: VERSION,
            operator,
            eigenvalues: report.eigenvalues,
            method: report.method,
            max_residual: report.max_residual,
            tolerance: report.tolerance,
            cross_check,
        }
    }
}

fn label(index: &[usize]) -> String {
    let parts: Vec<String> = index.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn emit(text: &str, path: Option<&Path>) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| usage(format!("stdout: {e}")))
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report data serializes");
    s.push('\n');
    s
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn number(x: f64) -> String {
    format!("{x:e}")
}

impl Format {
    pub fn write_product(self, out: &ProductOutput, path: Option<&Path>) -> std::result::Result<(), Failure> {
        let m = &out.dense;
        let text = match self {
            Format::Json => json(out),
            Format::Csv => {
                let mut header = vec!["basis".to_string()];
                for b in &out.basis {
                    header.push(format!("{}_re", label(b)));
                    header.push(format!("{}_im", label(b)));
                }
                let rows: Vec<Vec<String>> = (0..m.rows())
                    .map(|i| {
                        let mut row = vec![label(&out.basis[i])];
                        for z in m.row(i) {
                            row.push(z.re.to_string());
                            row.push(z.im.to_string());
                        }
                        row
                    })
                    .collect();
                csv_text(&header, &rows)
            }
            Format::Pretty => {
                let mut s = format!("{} ({}x{})\n", out.product, m.rows(), m.cols());
                for i in 0..m.rows() {
                    let cells: Vec<String> = m.row(i).iter().map(|&z| format!("{:>14}", pretty_complex(z))).collect();
                    let _ = writeln!(s, "{:>10}  {}", label(&out.basis[i]), cells.join(" "));
                }
                s
            }
        };
        emit(&text, path)
    }

    pub fn write_spectrum(self, out: &SpectrumOutput, path: Option<&Path>) -> std::result::Result<(), Failure> {
        let text = match self {
            Format::Json => json(out),
            Format::Csv => {
                let rows: Vec<Vec<String>> = out
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(i, z)| vec![i.to_string(), z.re.to_string(), z.im.to_string()])
                    .collect();
                csv_text(&["index".into(), "re".into(), "im".into()], &rows)
            }
            Format::Pretty => {
                let mut s = format!(
                    "{}: {} eigenvalues, max residual {:.2e}",
                    out.operator,
                    out.eigenvalues.len(),
                    out.max_residual
                );
                if let Some(c) = out.cross_check {
                    let _ = write!(s, ", cross-check {c:.2e}");
                }
                s.push('\n');
                for z in &out.eigenvalues {
                    let _ = writeln!(s, "  {}", pretty_complex(*z));
                }
                s
            }
        };
        emit(&text, path)
    }

    pub fn write_reports(
        self,
        reports: &[VerifyReport],
        as_list: bool,
        path: Option<&Path>,
    ) -> std::result::Result<(), Failure> {
        let text = match self {
            Format::Json if as_list => json(reports),
            Format::Json => json(&reports[0]),
            Format::Csv => {
                let header: Vec<String> = [
                    "suite",
                    "asserted",
                    "passed",
                    "trials",
                    "checks",
                    "failures",
                    "worst_margin",
                    "seed",
                    "tolerance",
                    "version",
                ]
                .iter()
                .map(|s| s.to_string())
                .collect();
                let rows: Vec<Vec<String>> = reports
                    .iter()
                    .map(|r| {
                        vec![
                            r.suite.clone(),
                            r.asserted.to_string(),
                            r.passed().to_string(),
                            r.trials.to_string(),
                            r.checks.to_string(),
                            r.failures.to_string(),
                            number(r.worst_margin),
                            r.seed.to_string(),
                            number(r.tolerance),
                            r.version.clone(),
                        ]
                    })
                    .collect();
                csv_text(&header, &rows)
            }
            Format::Pretty => {
                let mut s = String::new();
                for r in reports {
                    let status = match (r.passed(), r.asserted) {
                        (true, _) => "PASS",
                        (false, true) => "FAIL",
                        (false, false) => "FAIL (proven parts)",
                    };
                    let _ = writeln!(
                        s,
                        "{status} {}: {} [{} trials, {} checks, {} failures, worst margin {:.3e}, seed {}, tol {:e}]",
                        r.suite, r.statement, r.trials, r.checks, r.failures, r.worst_margin, r.seed, r.tolerance
                    );
                    for (k, v) in &r.observed {
                        let _ = writeln!(s, "    {k}: {v:.6e}");
                    }
                    for w in &r.witnesses {
                        let _ = writeln!(
                            s,
                            "    witness trial {} {}: margin {:.3e} ({})",
                            w.trial, w.check, w.margin, w.input
                        );
                    }
                }
                s
            }
        };
        emit(&text, path)
    }
}

fn pretty_complex(z: C64) -> String {
    let round = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    let z = C64::new(round(z.re), round(z.im));
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format_complex(C64::new((z.re * 1e6).round() / 1e6, (z.im * 1e6).round() / 1e6))
    }
}
