mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symtensor::error::Error;
use symtensor::io::{load_operator, parse_complex};
use symtensor::matrix::{ComplexMatrix, C64};
use symtensor::operator::{OperatorKind, OperatorSpec};
use symtensor::product::{sym_product, Flavor, ProductRequest};
use symtensor::spectral::{general_eigen, hermitian_eigen, match_multisets, multi_diag_sym_spectrum, SpectrumReport};
use symtensor::theorems::{
    conjecture_sampler, find_suite, shift_block_spectra, suites, Conjecture, SuiteConfig, VerifyReport,
};

use output::{Format, ProductOutput, SpectrumOutput};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "symtensor",
    version,
    about = "Symmetric and antisymmetric tensor products of operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Matrix of A_1 ⊙ ... ⊙ A_n (or ∧) in the orthonormal basis.
    Product(ProductArgs),
    /// Eigenvalues of a product, of the shift blocks, or of a product of diagonals.
    Spectrum(SpectrumArgs),
    /// Run a verification suite, or `all`.
    Verify(VerifyArgs),
    /// Sample one of the open lower-bound problems.
    Explore(ExploreArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Sym,
    Asym,
    Full,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Sym => Flavor::Symmetric,
            FlavorArg::Asym => Flavor::Antisymmetric,
            FlavorArg::Full => Flavor::FullAveraged,
        }
    }
}

#[derive(Args, Debug)]
struct ProductArgs {
    #[arg(long, value_enum, default_value_t = FlavorArg::Sym)]
    flavor: FlavorArg,
    /// Operator files: matrix CSV, matrix JSON or operator JSON.
    #[arg(required = true, num_args = 2..)]
    inputs: Vec<PathBuf>,
    /// Truncation size; defaults to the size of the dense inputs.
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpArg {
    /// S ⊙ S* on total degrees 0..=K.
    ShiftSymAdjoint,
    /// S ∧ S* on total degrees 1..=K.
    ShiftAsymAdjoint,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long, value_enum, conflicts_with_all = ["diag", "inputs"])]
    op: Option<OpArg>,
    #[arg(long = "K", default_value_t = 20)]
    k: usize,
    /// Comma-separated diagonal entries; repeat once per factor.
    #[arg(long, conflicts_with = "inputs")]
    diag: Vec<String>,
    #[arg(long, value_enum, default_value_t = FlavorArg::Sym)]
    flavor: FlavorArg,
    inputs: Vec<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite id, or `all`.
    #[arg(long)]
    suite: String,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ExploreArgs {
    #[arg(long)]
    conjecture: String,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeGuard { .. } => EXIT_RESOURCE,
            Error::NoConvergence { .. } | Error::ResidualExceeded { .. } | Error::NonHermitian { .. } => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Product(a) => product(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Verify(a) => verify(a),
        Command::Explore(a) => explore(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<OperatorSpec>, Failure> {
    paths
        .iter()
        .map(|p| load_operator(p).map_err(|e| usage(format!("{}: {e}", p.display()))))
        .collect()
}

fn resolve_dim(ops: &[OperatorSpec], dim: Option<usize>) -> Result<usize, Failure> {
    let dense = ops.iter().find_map(|op| match &op.kind {
        OperatorKind::Dense(m) => Some(m.rows()),
        _ => None,
    });
    dim.or(dense)
        .ok_or_else(|| usage("--dim is required when no input is a dense matrix"))
}

fn product(a: ProductArgs) -> Outcome {
    let ops = load_all(&a.inputs)?;
    let dim = resolve_dim(&ops, a.dim)?;
    let request = ProductRequest::new(ops, a.flavor.into(), dim)?;
    let matrix = request.evaluate()?;
    let out = ProductOutput::new(&request, matrix)?;
    a.out.format.write_product(&out, a.out.output.as_deref())?;
    Ok(0)
}

fn parse_diag(list: &str) -> Result<Vec<C64>, Failure> {
    list.split(',')
        .map(|c| parse_complex(c).map_err(Failure::from))
        .collect()
}

fn spectrum(a: SpectrumArgs) -> Outcome {
    let out = if let Some(op) = a.op {
        let blocks = shift_block_spectra(a.k)?;
        let (label, report) = match op {
            OpArg::ShiftSymAdjoint => ("S ⊙ S*", blocks.sym.clone()),
            OpArg::ShiftAsymAdjoint => ("S ∧ S*", blocks.asym.clone()),
        };
        let deviation = blocks
            .max_block_deviation
            .max(blocks.max_spectrum_deviation)
            .max(blocks.max_closed_form_deviation);
        SpectrumOutput::new(format!("{label}, degrees <= {}", a.k), report, Some(deviation))
    } else if !a.diag.is_empty() {
        if a.diag.len() < 2 {
            return Err(usage("--diag must be given at least twice"));
        }
        let specs = a.diag.iter().map(|d| parse_diag(d)).collect::<Result<Vec<_>, _>>()?;
        let n = specs[0].len();
        if specs.iter().any(|s| s.len() != n) {
            return Err(usage("all --diag lists must have the same length"));
        }
        let formula = multi_diag_sym_spectrum(&specs, n)?;
        let mats: Vec<ComplexMatrix> = specs.iter().map(|s| ComplexMatrix::from_diag(s)).collect();
        let dense = general_eigen(&sym_product(&mats)?, a.tol)?;
        let deviation = match_multisets(&dense.eigenvalues, &formula, a.tol).ok_or_else(|| Failure {
            code: EXIT_FAIL,
            message: "dense and closed-form spectra disagree".into(),
        })?;
        let report = SpectrumReport {
            eigenvalues: formula,
            ..SpectrumReport::closed_form(Vec::new())
        };
        SpectrumOutput::new(
            format!("⊙ of {} diagonal operators, N = {n}", specs.len()),
            report,
            Some(deviation),
        )
    } else {
        if a.inputs.len() < 2 {
            return Err(usage("give --op, --diag twice, or at least two operator files"));
        }
        let ops = load_all(&a.inputs)?;
        let dim = resolve_dim(&ops, a.dim)?;
        let request = ProductRequest::new(ops, a.flavor.into(), dim)?;
        let m = request.evaluate()?;
        let report = if m.hermitian_defect() <= 1e-14 * m.frobenius_norm().max(1.0) {
            hermitian_eigen(&m, a.tol)?
        } else {
            general_eigen(&m, a.tol)?
        };
        SpectrumOutput::new(output::describe(&request), report, None)
    };
    a.out.format.write_spectrum(&out, a.out.output.as_deref())?;
    Ok(0)
}

fn verify(a: VerifyArgs) -> Outcome {
    let cfg = SuiteConfig {
        trials: a.trials,
        seed: a.seed,
        tol: a.tol,
        k: a.k,
        dim: a.dim,
    };
    let selected: Vec<_> = if a.suite == "all" {
        suites().iter().collect()
    } else {
        let suite = find_suite(&a.suite).ok_or_else(|| {
            let ids: Vec<&str> = suites().iter().map(|s| s.id).collect();
            usage(format!("unknown suite {:?}; known: all, {}", a.suite, ids.join(", ")))
        })?;
        vec![suite]
    };
    let reports: Vec<VerifyReport> = selected.iter().map(|s| s.run(&cfg)).collect::<Result<_, _>>()?;
    a.out
        .format
        .write_reports(&reports, a.suite == "all", a.out.output.as_deref())?;
    Ok(if reports.iter().all(VerifyReport::passed) {
        0
    } else {
        EXIT_FAIL
    })
}

fn explore(a: ExploreArgs) -> Outcome {
    let kind: Conjecture = a.conjecture.parse()?;
    let report = conjecture_sampler(kind, a.n, a.dim, a.trials, a.seed, a.tol)?;
    a.out
        .format
        .write_reports(std::slice::from_ref(&report), false, a.out.output.as_deref())?;
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}
