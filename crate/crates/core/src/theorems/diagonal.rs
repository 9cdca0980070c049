use rand::Rng;

use super::registry::Ctx;
use super::sample;
use super::{random_trials, scale, ReportHeader, Trial, VerifyReport};
use crate::error::Result;
use crate::matrix::{ComplexMatrix, C64};
use crate::product::sym_product;
use crate::spectral::{diag_sym_spectrum, general_decompose, match_multisets, multi_diag_sym_spectrum, operator_norm};

fn sup(values: &[C64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Random diagonal entries, sometimes real with mixed signs to push towards the lower bound.
fn diagonal_entries(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    if rng.random_bool(0.3) {
        (0..n).map(|_| C64::new(rng.random_range(-1.0..=1.0), 0.0)).collect()
    } else {
        sample::diagonal_values(rng, n)
    }
}

fn max_diagonal_deviation(m: &ComplexMatrix, values: &[C64]) -> f64 {
    let off = (0..m.rows())
        .flat_map(|i| (0..m.cols()).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)].norm())
        .fold(0.0, f64::max);
    let diag = m
        .diagonal()
        .iter()
        .zip(values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    off.max(diag)
}

pub(crate) fn diagonal_spectrum(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let n = rng.random_range(1..=ctx.dim.unwrap_or(12).max(1));
        let lambda = sample::diagonal_values(rng, n);
        let mu = sample::diagonal_values(rng, n);
        let mut trial = Trial::random(ctx.seed, t, format!("N={n}"));
        let product = sym_product(&[ComplexMatrix::from_diag(&lambda), ComplexMatrix::from_diag(&mu)])?;
        let expected = diag_sym_spectrum(&lambda, &mu, n)?;
        let tol = ctx.tol * scale(sup(&lambda) * sup(&mu));
        let got = general_decompose(&product)?.values;
        trial
            .check_le(
                "diagonal in the symmetric basis",
                max_diagonal_deviation(&product, &expected),
                tol,
            )
            .check(
                "spectrum",
                match_multisets(&got, &expected, tol).map_or(-1.0, |d| tol - d),
            );
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

pub(crate) fn multi_diagonal_spectrum(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let n = rng.random_range(2..=3);
        let size = rng.random_range(1..=ctx.dim.unwrap_or(8).max(1));
        let specs: Vec<Vec<C64>> = (0..n).map(|_| sample::diagonal_values(rng, size)).collect();
        let mut trial = Trial::random(ctx.seed, t, format!("n={n} N={size}"));
        let factors: Vec<ComplexMatrix> = specs.iter().map(|s| ComplexMatrix::from_diag(s)).collect();
        let product = sym_product(&factors)?;
        let expected = multi_diag_sym_spectrum(&specs, size)?;
        let tol = ctx.tol * scale(specs.iter().map(|s| sup(s)).product());
        let got = general_decompose(&product)?.values;
        trial
            .check_le(
                "diagonal in the symmetric basis",
                max_diagonal_deviation(&product, &expected),
                tol,
            )
            .check(
                "spectrum",
                match_multisets(&got, &expected, tol).map_or(-1.0, |d| tol - d),
            );
        if n == 2 {
            let pair = diag_sym_spectrum(&specs[0], &specs[1], size)?;
            let diff = pair
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            trial.check_le("agrees with the two-factor formula", diff, tol);
        }
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

fn diag_norm_trial(lambda: &[C64], mu: &[C64], tol: f64, mut trial: Trial) -> Result<(Trial, f64)> {
    let product = sym_product(&[ComplexMatrix::from_diag(lambda), ComplexMatrix::from_diag(mu)])?;
    let got = operator_norm(&product, 1e-13)?.value;
    let bound = sup(lambda) * sup(mu);
    let s = tol * scale(bound);
    let lower = (std::f64::consts::SQRT_2 - 1.0) * bound;
    trial
        .check_le("(sqrt2 - 1)|L||M| <= |L ⊙ M|", lower, got + s)
        .check_le("|L ⊙ M| <= |L||M|", got, bound + s);
    if bound > 0.0 {
        trial.min("min |L ⊙ M| / |L||M|", got / bound);
    }
    Ok((trial, got))
}

fn diag_witnesses(tol: f64) -> Vec<Result<Trial>> {
    let r = std::f64::consts::SQRT_2 - 1.0;
    let lower = (|| {
        let l = [C64::new(1.0, 0.0), C64::new(r, 0.0)];
        let m = [C64::new(-r, 0.0), C64::new(1.0, 0.0)];
        let (mut trial, got) = diag_norm_trial(
            &l,
            &m,
            tol,
            Trial::new("witness: L = diag(1, sqrt2-1), M = diag(1-sqrt2, 1)"),
        )?;
        trial.check_le("|L ⊙ M| = sqrt2 - 1", (got - r).abs(), tol);
        Ok(trial)
    })();
    let upper = (|| {
        let one = [C64::new(1.0, 0.0); 3];
        let (mut trial, got) = diag_norm_trial(&one, &one, tol, Trial::new("witness: L = M = I"))?;
        trial.check_le("|I ⊙ I| = 1", (got - 1.0).abs(), tol);
        Ok(trial)
    })();
    vec![lower, upper]
}

/// Random diagonal pairs with up to 16 entries against `(√2−1)‖L‖‖M‖ ≤ ‖L ⊙ M‖ ≤ ‖L‖‖M‖`,
/// plus both sharpness witnesses.
pub fn verify_diag_norm_bound(trials: usize, seed: u64, tol: f64) -> Result<VerifyReport> {
    let header = ReportHeader::new(
        "prop-7.1",
        "(sqrt2 - 1)|L||M| <= |L ⊙ M| <= |L||M| for diagonal L and M",
        seed,
        tol,
    );
    let mut outcomes = diag_witnesses(tol);
    outcomes.extend(random_trials(seed, trials, |t, rng| {
        diag_norm_random(seed, t, rng, 16, tol)
    }));
    Ok(header.finish(outcomes))
}

fn diag_norm_random(seed: u64, t: usize, rng: &mut impl Rng, max_n: usize, tol: f64) -> Result<Trial> {
    let n = rng.random_range(1..=max_n);
    let lambda = diagonal_entries(rng, n);
    let mu = diagonal_entries(rng, n);
    Ok(diag_norm_trial(&lambda, &mu, tol, Trial::random(seed, t, format!("N={n}")))?.0)
}

pub(crate) fn diagonal_norm(ctx: &Ctx) -> Result<VerifyReport> {
    let max_n = ctx.dim.unwrap_or(16).max(1);
    let random = ctx.random(|t, rng| diag_norm_random(ctx.seed, t, rng, max_n, ctx.tol));
    Ok(ctx.finish(diag_witnesses(ctx.tol), random))
}
