//! Lower bounds `‖x_1 ⊙ ... ⊙ x_n‖ ≥ ∏‖x_i‖ / sqrt(n!)` and their operator analogue.
//! Proven for `n ≤ 3`; sampled without assertion for `n = 4, 5`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::registry::Ctx;
use super::{oracles, random_trials, sample, scale, ReportHeader, Trial, VerifyReport};
use crate::basis::{sym_dimension, sym_tensor_of_vectors};
use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::{vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::product::sym_product;
use crate::spectral::{hermitian_decompose, operator_norm};

const MAX_FACTORS: usize = 5;
const OPERATOR_PROBES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conjecture {
    VectorLowerBound,
    OperatorLowerBound,
}

impl Conjecture {
    pub fn id(self) -> &'static str {
        match self {
            Conjecture::VectorLowerBound => "vector-lower-bound",
            Conjecture::OperatorLowerBound => "operator-lower-bound",
        }
    }
}

impl std::str::FromStr for Conjecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vector-lower-bound" => Ok(Conjecture::VectorLowerBound),
            "operator-lower-bound" => Ok(Conjecture::OperatorLowerBound),
            _ => Err(Error::InvalidArgument(format!(
                "unknown conjecture {s:?}; expected vector-lower-bound or operator-lower-bound"
            ))),
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `‖x_1 ⊙ ... ⊙ x_n‖ / ∏‖x_i‖`; `None` if some `x_i = 0`.
pub fn simple_tensor_ratio(vs: &[Vec<C64>]) -> Result<Option<f64>> {
    let denom: f64 = vs.iter().map(|v| vec_norm(v)).product();
    let coords = sym_tensor_of_vectors(vs)?;
    if denom == 0.0 {
        return Ok(None);
    }
    Ok(Some(vec_norm(&coords) / denom))
}

fn unit(d: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d];
    v[i] = ONE;
    v
}

fn vector_trial(vs: &[Vec<C64>], tol: f64, asserted: bool, mut trial: Trial) -> Result<Trial> {
    let n = vs.len();
    let floor = 1.0 / factorial(n).sqrt();
    let ratio = simple_tensor_ratio(vs)?.ok_or_else(|| Error::InvalidArgument("zero vector".into()))?;
    let scale_sq = vs.iter().map(|v| vec_norm(v).powi(2)).product::<f64>();
    let permanent = oracles::simple_tensor_norm_sq(vs) / scale_sq;
    trial
        .check_le("upper bound", ratio, 1.0 + tol)
        .check_le(
            "agrees with the permanent formula",
            (ratio * ratio - permanent).abs(),
            tol,
        )
        .min("min ratio", ratio)
        .max("max ratio", ratio);
    if asserted {
        trial.check_le("lower bound 1/sqrt(n!)", floor, ratio + tol);
    } else {
        trial.flag("ratio below 1/sqrt(n!)", ratio + tol - floor);
    }
    Ok(trial)
}

/// Unit vectors maximizing `∏‖A_i x‖` among right singular vectors and random probes.
fn best_probe(ops: &[ComplexMatrix], rng: &mut impl Rng) -> Result<f64> {
    let d = ops[0].cols();
    let mut probes: Vec<Vec<C64>> = (0..OPERATOR_PROBES).map(|_| sample::unit_vector(rng, d)).collect();
    for a in ops {
        let eig = hermitian_decompose(&a.adjoint().matmul(a)?, 1e-10)?;
        probes.push(eig.vectors.column(d - 1));
    }
    let mut best: f64 = 0.0;
    for x in &probes {
        let nx = vec_norm(x);
        let mut prod = 1.0;
        for a in ops {
            prod *= vec_norm(&a.matvec(x)?) / nx;
        }
        best = best.max(prod);
    }
    Ok(best)
}

fn operator_trial(
    ops: &[ComplexMatrix],
    rng: &mut impl Rng,
    tol: f64,
    asserted: bool,
    mut trial: Trial,
) -> Result<Trial> {
    let n = ops.len();
    let floor = 1.0 / factorial(n).sqrt();
    let norm = operator_norm(&sym_product(ops)?, 1e-12)?.value;
    let sup = best_probe(ops, rng)?;
    let upper: f64 = ops
        .iter()
        .map(|a| operator_norm(a, 1e-12).map(|r| r.value))
        .product::<Result<f64>>()?;
    let s = tol * scale(upper);
    trial.check_le("upper bound", norm, upper + s).min(
        "min |A_1 ⊙ ... ⊙ A_n| / sup prod |A_i x|",
        if sup > 0.0 { norm / sup } else { f64::INFINITY },
    );
    if asserted {
        trial.check_le("lower bound sup prod |A_i x| / sqrt(n!)", sup * floor, norm + s);
    } else {
        trial.flag("below sup prod |A_i x| / sqrt(n!)", norm + s - sup * floor);
    }
    Ok(trial)
}

fn check_size(kind: Conjecture, n: usize, d: usize) -> Result<()> {
    if !(2..=MAX_FACTORS).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "n must lie in 2..={MAX_FACTORS}, got {n}"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    match kind {
        Conjecture::VectorLowerBound => {
            sym_dimension(d, n)?;
        }
        Conjecture::OperatorLowerBound => {
            limits::check_tensor_dim(d, n)?;
            let dim = sym_dimension(d, n)?;
            limits::check_dense(dim, dim)?;
        }
    }
    Ok(())
}

fn witnesses(kind: Conjecture, n: usize, tol: f64, asserted: bool) -> Vec<Result<Trial>> {
    let floor = 1.0 / factorial(n).sqrt();
    let orthonormal: Vec<Vec<C64>> = (0..n).map(|i| unit(n, i)).collect();
    let equal: Vec<Vec<C64>> = vec![unit(n, 0); n];
    match kind {
        Conjecture::VectorLowerBound => {
            let sharp = (|| {
                let mut trial = Trial::new("witness: orthonormal vectors");
                let ratio = simple_tensor_ratio(&orthonormal)?.unwrap_or(0.0);
                trial.max("orthonormal ratio", ratio);
                if asserted {
                    trial.check_le("ratio is 1/sqrt(n!)", (ratio - floor).abs(), tol);
                } else {
                    trial.flag("ratio is 1/sqrt(n!)", tol - (ratio - floor).abs());
                }
                Ok(trial)
            })();
            let top = (|| {
                let mut trial = Trial::new("witness: equal unit vectors");
                let ratio = simple_tensor_ratio(&equal)?.unwrap_or(0.0);
                trial.check_le("ratio is 1", (ratio - 1.0).abs(), tol);
                Ok(trial)
            })();
            vec![sharp, top]
        }
        Conjecture::OperatorLowerBound => {
            // Rank-one operators x ↦ <x, e_0> e_i reach the floor at x = e_0.
            let ops: Vec<ComplexMatrix> = (0..n)
                .map(|i| ComplexMatrix::from_fn(n, n, |r, c| if r == i && c == 0 { ONE } else { ZERO }))
                .collect();
            let sharp = (|| {
                let mut trial = Trial::new("witness: x ↦ <x, e_0> e_i");
                let norm = operator_norm(&sym_product(&ops)?, 1e-12)?.value;
                trial.max("rank-one norm", norm);
                if asserted {
                    trial.check_le("norm is 1/sqrt(n!)", (norm - floor).abs(), tol);
                } else {
                    trial.flag("norm is 1/sqrt(n!)", tol - (norm - floor).abs());
                }
                Ok(trial)
            })();
            let identity = (|| {
                let mut trial = Trial::new("witness: identities");
                let ids = vec![ComplexMatrix::identity(n); n];
                let norm = operator_norm(&sym_product(&ids)?, 1e-12)?.value;
                trial.check_le("norm is 1", (norm - 1.0).abs(), tol);
                Ok(trial)
            })();
            vec![sharp, identity]
        }
    }
}

fn sampler_outcomes(kind: Conjecture, n: usize, d: usize, trials: usize, seed: u64, tol: f64) -> Vec<Result<Trial>> {
    let asserted = n <= 3;
    let mut out = witnesses(kind, n, tol, asserted);
    out.extend(random_trials(seed, trials, |t, rng| {
        let what = Trial::random(seed, t, format!("n={n} d={d}"));
        match kind {
            Conjecture::VectorLowerBound => {
                let vs: Vec<Vec<C64>> = (0..n).map(|_| sample::vector(rng, d)).collect();
                vector_trial(&vs, tol, asserted, what)
            }
            Conjecture::OperatorLowerBound => {
                let ops: Vec<ComplexMatrix> = (0..n).map(|_| sample::square(rng, d)).collect();
                operator_trial(&ops, rng, tol, asserted, what)
            }
        }
    }));
    out
}

/// Samples the lower bound for `n` vectors (or operators) on `C^d`. Asserted for
/// `n ≤ 3`; for `n ≥ 4` the report is exploratory and candidates are flagged as witnesses.
pub fn conjecture_sampler(
    kind: Conjecture,
    n: usize,
    d: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<VerifyReport> {
    check_size(kind, n, d)?;
    let statement = match kind {
        Conjecture::VectorLowerBound => format!("|x_1 ⊙ ... ⊙ x_{n}| >= |x_1|...|x_{n}| / sqrt({n}!)"),
        Conjecture::OperatorLowerBound => format!("|A_1 ⊙ ... ⊙ A_{n}| >= sup |A_1 x|...|A_{n} x| / sqrt({n}!)"),
    };
    let mut header = ReportHeader::new(kind.id(), &statement, seed, tol);
    if n > 3 {
        header = header.exploratory();
    }
    Ok(header.finish(sampler_outcomes(kind, n, d, trials, seed, tol)))
}

pub(crate) fn three_vectors(ctx: &Ctx) -> Result<VerifyReport> {
    let d = ctx.dim.unwrap_or(4);
    check_size(Conjecture::VectorLowerBound, 3, d)?;
    Ok(ctx.header.clone().finish(sampler_outcomes(
        Conjecture::VectorLowerBound,
        3,
        d,
        ctx.trials,
        ctx.seed,
        ctx.tol,
    )))
}

pub(crate) fn three_operators(ctx: &Ctx) -> Result<VerifyReport> {
    let d = ctx.dim.unwrap_or(3);
    check_size(Conjecture::OperatorLowerBound, 3, d)?;
    Ok(ctx.header.clone().finish(sampler_outcomes(
        Conjecture::OperatorLowerBound,
        3,
        d,
        ctx.trials,
        ctx.seed,
        ctx.tol,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for k in [Conjecture::VectorLowerBound, Conjecture::OperatorLowerBound] {
            assert_eq!(k.id().parse::<Conjecture>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.id()));
        }
        assert!("other".parse::<Conjecture>().is_err());
    }

    #[test]
    fn orthonormal_ratios() {
        for n in 2..=5 {
            let vs: Vec<Vec<C64>> = (0..n).map(|i| unit(n, i)).collect();
            let r = simple_tensor_ratio(&vs).unwrap().unwrap();
            assert!((r - 1.0 / factorial(n).sqrt()).abs() < 1e-14, "n={n}");
        }
        assert_eq!(simple_tensor_ratio(&[unit(2, 0), vec![ZERO; 2]]).unwrap(), None);
    }

    #[test]
    fn proven_cases_pass() {
        let r = conjecture_sampler(Conjecture::VectorLowerBound, 3, 3, 300, 1, 1e-12).unwrap();
        assert!(r.asserted && r.passed(), "{r:?}");
        let r = conjecture_sampler(Conjecture::OperatorLowerBound, 3, 2, 30, 1, 1e-10).unwrap();
        assert!(r.asserted && r.passed(), "{r:?}");
    }

    #[test]
    fn open_cases_are_exploratory() {
        let r = conjecture_sampler(Conjecture::VectorLowerBound, 4, 3, 200, 2, 1e-12).unwrap();
        assert!(!r.asserted);
        assert!((r.observed["orthonormal ratio"] - 1.0 / 24f64.sqrt()).abs() < 1e-14);
        assert!(r.observed["min ratio"] >= 1.0 / 24f64.sqrt() - 1e-12);
    }

    #[test]
    fn size_guards() {
        assert!(conjecture_sampler(Conjecture::VectorLowerBound, 6, 2, 1, 0, 1e-12).is_err());
        assert!(conjecture_sampler(Conjecture::VectorLowerBound, 1, 2, 1, 0, 1e-12).is_err());
        assert!(conjecture_sampler(Conjecture::OperatorLowerBound, 5, 0, 1, 0, 1e-12).is_err());
    }
}
