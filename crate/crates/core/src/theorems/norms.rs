use rand::Rng;

use super::registry::Ctx;
use super::sample;
use super::{random_trials, scale, ReportHeader, Trial, VerifyReport};
use crate::error::{Error, Result};
use crate::matrix::{vec_norm, ComplexMatrix, C64, ZERO};
use crate::product::{asym_product, sym_product};
use crate::spectral::{gelfand_estimate, hermitian_decompose, operator_norm, spectral_radius};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(operator_norm(m, 1e-13)?.value)
}

/// A unit vector at which `‖Ax‖ = ‖A‖`.
fn top_right_singular_vector(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let eig = hermitian_decompose(&a.adjoint().matmul(a)?, 1e-10)?;
    Ok(eig.vectors.column(a.cols() - 1))
}

fn normalized(v: &[C64]) -> Vec<C64> {
    let n = vec_norm(v);
    v.iter().map(|z| z / n).collect()
}

/// `‖Ax‖ ‖Bx‖ / √2` for a unit `x`.
fn vector_lower_bound(a: &ComplexMatrix, b: &ComplexMatrix, x: &[C64]) -> Result<f64> {
    Ok(vec_norm(&a.matvec(x)?) * vec_norm(&b.matvec(x)?) * FRAC_1_SQRT_2)
}

fn witness_pair() -> (ComplexMatrix, ComplexMatrix) {
    (
        ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]),
        ComplexMatrix::from_real(&[&[0.0, 0.0], &[1.0, 0.0]]),
    )
}

fn sampled_lower_bound_trial(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rng: &mut impl Rng,
    samples: usize,
    tol: f64,
    mut trial: Trial,
) -> Result<Trial> {
    let d = a.cols();
    let target = norm(&sym_product(&[a, b])?)?;
    let mut candidates = vec![top_right_singular_vector(a)?, top_right_singular_vector(b)?];
    candidates.extend((0..samples).map(|_| sample::unit_vector(rng, d)));
    let mut sup: f64 = 0.0;
    for x in &candidates {
        sup = sup.max(vector_lower_bound(a, b, x)?);
    }
    let s = scale(norm(a)? * norm(b)?);
    trial
        .check_le("sup |Ax||Bx|/sqrt2 <= |A ⊙ B|", sup, target + tol * s)
        .min("min |A ⊙ B| / sampled sup", target / sup.max(f64::MIN_POSITIVE));
    Ok(trial)
}

/// Samples unit vectors `x` and checks `‖Ax‖‖Bx‖/√2 ≤ ‖A ⊙ B‖`; the witness pair
/// with `x = e_0` must attain equality at `1/√2`.
pub fn verify_norm_lower_2(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<VerifyReport> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(
            "expected square matrices of equal size".into(),
        ));
    }
    let header = ReportHeader::new("thm-5.1a", "sup_x |Ax||Bx|/sqrt2 <= |A ⊙ B|", seed, tol);
    let mut outcomes = vec![witness_equality(tol)];
    outcomes.extend(random_trials(seed, trials, |t, rng| {
        sampled_lower_bound_trial(a, b, rng, 1, tol, Trial::random(seed, t, "unit vector"))
    }));
    Ok(header.finish(outcomes))
}

fn witness_equality(tol: f64) -> Result<Trial> {
    let (a, b) = witness_pair();
    let mut trial = Trial::new("witness: A = e0 e0*, B = e1 e0*, x = e0");
    let target = norm(&sym_product(&[&a, &b])?)?;
    let bound = vector_lower_bound(&a, &b, &[C64::new(1.0, 0.0), ZERO])?;
    trial.check_le("equality", (target - bound).abs(), tol).check_le(
        "value 1/sqrt2",
        (target - FRAC_1_SQRT_2).abs(),
        tol,
    );
    Ok(trial)
}

pub(crate) fn norm_lower_bound(ctx: &Ctx) -> Result<VerifyReport> {
    let d = ctx.dim.unwrap_or(4);
    let identity = (|| {
        let mut trial = Trial::new("witness: A = B = I");
        let id = ComplexMatrix::identity(d);
        let target = norm(&sym_product(&[&id, &id])?)?;
        trial.check_le("1/sqrt2 <= |I ⊙ I| = 1", FRAC_1_SQRT_2, target);
        trial.check_le("|I ⊙ I| = 1", (target - 1.0).abs(), ctx.tol);
        Ok(trial)
    })();
    let random = ctx.random(|t, rng| {
        let a = sample::square(rng, d);
        let b = sample::square(rng, d);
        sampled_lower_bound_trial(&a, &b, rng, 16, ctx.tol, Trial::random(ctx.seed, t, format!("d={d}")))
    });
    Ok(ctx.finish(vec![witness_equality(ctx.tol), identity], random))
}

/// Checks `‖A ⊙ B‖ > 0` together with the lower bound from a vector on which both
/// act nontrivially, or from `x = (u+v)/‖u+v‖` when `Bu = 0` and `Av = 0`.
pub fn verify_nonzero_product(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<VerifyReport> {
    let header = ReportHeader::new("thm-5.1b", "A ⊙ B is nonzero whenever A and B are", 0, tol);
    Ok(header.finish(vec![nonzero_trial(a, b, tol, Trial::new("given pair"))]))
}

fn nonzero_trial(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64, mut trial: Trial) -> Result<Trial> {
    if a.max_abs() == 0.0 || b.max_abs() == 0.0 {
        return Err(Error::InvalidArgument("both operators must be nonzero".into()));
    }
    let target = norm(&sym_product(&[a, b])?)?;
    let u = top_right_singular_vector(a)?;
    let v = top_right_singular_vector(b)?;
    let sum: Vec<C64> = u.iter().zip(&v).map(|(x, y)| x + y).collect();
    let mut lower: f64 = 0.0;
    for x in [u.clone(), v.clone(), normalized(&sum)] {
        lower = lower.max(vector_lower_bound(a, b, &x)?);
    }
    trial
        .check("|A ⊙ B| > 0", target)
        .check("recipe lower bound > 0", lower)
        .check_le("recipe lower bound <= |A ⊙ B|", lower, target + tol * scale(target))
        .min("min |A ⊙ B|", target);
    Ok(trial)
}

pub(crate) fn nonzero_product(ctx: &Ctx) -> Result<VerifyReport> {
    let tol = ctx.tol;
    let mut fixed = Vec::new();
    fixed.push((|| {
        let p = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let q = ComplexMatrix::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let mut trial = nonzero_trial(&p, &q, tol, Trial::new("witness: e0 e0*, e1 e1*"))?;
        trial.check_le("value 1/2", (norm(&sym_product(&[&p, &q])?)? - 0.5).abs(), tol);
        Ok(trial)
    })());
    fixed.push((|| {
        let mut trial = Trial::new("witness: rank-one projection P in C^3");
        let mut p = ComplexMatrix::zeros(3, 3);
        p[(1, 1)] = C64::new(1.0, 0.0);
        for n in 2..=3 {
            let power = norm(&sym_product(&vec![p.clone(); n])?)?;
            trial.check_le("|P^⊙n| = |P|^n", (power - 1.0).abs(), tol);
            trial.check_le("P^∧n = 0", asym_product(&vec![p.clone(); n])?.max_abs(), tol);
        }
        Ok(trial)
    })());
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(2..=5);
        let rank = rng.random_range(1..d);
        let u = sample::unitary(rng, d);
        let p = sample::projection(&u, 0..rank);
        let q = sample::projection(&u, rank..d);
        // Adversarial: B kills ran P, A kills ker P.
        let a = sample::square(rng, d).matmul(&p)?;
        let b = sample::square(rng, d).matmul(&q)?;
        let mut trial = nonzero_trial(
            &a,
            &b,
            tol,
            Trial::random(ctx.seed, t, format!("d={d} split rank={rank}")),
        )?;
        let g = sample::square(rng, d);
        let x = top_right_singular_vector(&g)?;
        let rank_one = ComplexMatrix::from_fn(d, d, |i, j| x[i] * x[j].conj());
        let power = norm(&sym_product(&[&rank_one, &rank_one])?)?;
        trial.check_le("rank one |A ⊙ A| = |A|^2", (power - 1.0).abs(), tol);
        Ok(trial)
    });
    Ok(ctx.finish(fixed, random))
}

pub(crate) fn spectral_radius_law(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(1..=5);
        let n = rng.random_range(2..=3);
        let a = sample::square(rng, d);
        let mut trial = Trial::random(ctx.seed, t, format!("d={d} n={n}"));
        let power = sym_product(&vec![a.clone(); n])?;
        let rho = spectral_radius(&a)?;
        let expected = rho.powi(n as i32);
        let got = spectral_radius(&power)?;
        trial.check_le(
            "radius law",
            (got - expected).abs(),
            ctx.tol * expected.max(f64::MIN_POSITIVE),
        );
        for k in [1u32, 4, 16] {
            trial.check_le(
                "Gelfand upper bound",
                got,
                gelfand_estimate(&power, k)? * (1.0 + ctx.tol),
            );
        }
        let k = 3;
        let lhs = norm(&power.pow(k)?)?;
        let rhs = norm(&a.pow(k)?)?.powi(n as i32);
        trial.check_le("|(A^⊙n)^k| = |A^k|^n", (lhs - rhs).abs(), ctx.tol * scale(rhs));
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Operators `W_i G_i` with `W_i` disjoint column blocks of a random unitary.
fn orthogonal_range_family(rng: &mut impl Rng, n: usize, d: usize) -> Result<Vec<ComplexMatrix>> {
    let u = sample::unitary(rng, d);
    let mut cuts: Vec<usize> = Vec::with_capacity(n + 1);
    cuts.push(0);
    for i in 1..n {
        let lo = cuts[i - 1] + 1;
        let hi = d - (n - i);
        cuts.push(rng.random_range(lo..=hi));
    }
    cuts.push(d);
    (0..n)
        .map(|i| {
            let w = sample::columns(&u, cuts[i]..cuts[i + 1]);
            w.matmul(&sample::matrix(rng, cuts[i + 1] - cuts[i], d))
        })
        .collect()
}

fn orthogonal_ranges_trial(n: usize, d: usize, rng: &mut impl Rng, tol: f64, mut trial: Trial) -> Result<Trial> {
    let family = orthogonal_range_family(rng, n, d)?;
    let mut overlap: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                overlap = overlap.max(family[i].adjoint().matmul(&family[j])?.max_abs());
            }
        }
    }
    let norms: Vec<f64> = family.iter().map(norm).collect::<Result<_>>()?;
    let prod: f64 = norms.iter().product();
    let got = norm(&sym_product(&family)?)?;
    trial
        .check_le("ranges orthogonal", overlap, tol * scale(prod))
        .check_le(
            "|⊙ A_i| <= prod |A_i| / sqrt(n!)",
            got,
            prod / factorial(n).sqrt() + tol * scale(prod),
        )
        .max("max |⊙ A_i| sqrt(n!) / prod |A_i|", got * factorial(n).sqrt() / prod);
    Ok(trial)
}

/// `A = W_1 X V_2^*`, `B = W_2 Y V_1^*` with orthogonal splittings of domain and range.
fn kernel_range_trial(d: usize, rng: &mut impl Rng, tol: f64, mut trial: Trial) -> Result<Trial> {
    let v = sample::unitary(rng, d);
    let w = sample::unitary(rng, d);
    let k = rng.random_range(1..d);
    let r = rng.random_range(1..d);
    let a = sample::columns(&w, 0..r)
        .matmul(&sample::matrix(rng, r, d - k))?
        .matmul(&sample::columns(&v, k..d).adjoint())?;
    let b = sample::columns(&w, r..d)
        .matmul(&sample::matrix(rng, d - r, k))?
        .matmul(&sample::columns(&v, 0..k).adjoint())?;
    let (na, nb) = (norm(&a)?, norm(&b)?);
    let s = scale(na * nb);
    let got = norm(&sym_product(&[&a, &b])?)?;
    trial
        .check_le("(ker B)^perp in ker A", a.matmul(&b.adjoint())?.max_abs(), tol * s)
        .check_le("ran B perp ran A", a.adjoint().matmul(&b)?.max_abs(), tol * s)
        .check_le("|A||B|/2 <= |A ⊙ B|", na * nb / 2.0, got + tol * s)
        .check_le("|A ⊙ B| <= |A||B|/sqrt2", got, na * nb * FRAC_1_SQRT_2 + tol * s)
        .min("min |A ⊙ B| / |A||B|", got / (na * nb))
        .max("max |A ⊙ B| / |A||B|", got / (na * nb));
    Ok(trial)
}

fn range_witnesses(tol: f64) -> Vec<Result<Trial>> {
    let lower = (|| {
        let mut trial = Trial::new("witness: A = diag(1,0), B = I - A");
        let a = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let b = ComplexMatrix::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]);
        trial.check_le("|A ⊙ B| = 1/2", (norm(&sym_product(&[&a, &b])?)? - 0.5).abs(), tol);
        Ok(trial)
    })();
    let upper = (|| {
        let mut trial = Trial::new("witness: A = e0 e0*, B = e1 e0*");
        let (a, b) = witness_pair();
        trial.check_le("ranges orthogonal", a.adjoint().matmul(&b)?.max_abs(), tol);
        trial.check_le(
            "|A ⊙ B| = 1/sqrt2",
            (norm(&sym_product(&[&a, &b])?)? - FRAC_1_SQRT_2).abs(),
            tol,
        );
        Ok(trial)
    })();
    vec![lower, upper]
}

/// Random families with orthogonal ranges in `C^6`; for `n = 2` also pairs under the
/// kernel-range hypotheses, checked against both two-sided bounds.
pub fn verify_orthogonal_ranges(n: usize, trials: usize, seed: u64, tol: f64) -> Result<VerifyReport> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "orthogonal ranges needs n in 2..=3, got {n}"
        )));
    }
    let header = ReportHeader::new(
        "thm-5.2",
        "orthogonal ranges bound and the two-sided kernel-range bounds",
        seed,
        tol,
    );
    let mut outcomes = range_witnesses(tol);
    outcomes.extend(random_trials(seed, trials, |t, rng| {
        let trial = orthogonal_ranges_trial(n, 6, rng, tol, Trial::random(seed, t, format!("n={n} d=6")))?;
        if n == 2 {
            kernel_range_trial(6, rng, tol, trial)
        } else {
            Ok(trial)
        }
    }));
    Ok(header.finish(outcomes))
}

pub(crate) fn orthogonal_ranges(ctx: &Ctx) -> Result<VerifyReport> {
    let d = ctx.dim.unwrap_or(6).max(3);
    let random = ctx.random(|t, rng| {
        let n = 2 + t % 2;
        let trial = orthogonal_ranges_trial(n, d, rng, ctx.tol, Trial::random(ctx.seed, t, format!("n={n} d={d}")))?;
        kernel_range_trial(d, rng, ctx.tol, trial)
    });
    Ok(ctx.finish(range_witnesses(ctx.tol), random))
}
