use rand::Rng;

use super::oracles::{half_sums, pair_products, product_spectrum};
use super::registry::Ctx;
use super::sample;
use super::{scale, Trial, VerifyReport};
use crate::error::Result;
use crate::matrix::{ComplexMatrix, C64};
use crate::operator::kron;
use crate::product::{asym_product, averaged_tensor, block_decompose, sym_product};
use crate::spectral::{contains_multiset, general_decompose, match_multisets};

fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    Ok(general_decompose(m)?.values)
}

fn radius(values: &[C64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Margin of a multiset comparison: `tol - distance`, or -1 when no matching exists.
fn matched(distance: Option<f64>, tol: f64) -> f64 {
    distance.map_or(-1.0, |d| tol - d)
}

pub(crate) fn brown_pearcy(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let da = rng.random_range(1..=5);
        let db = rng.random_range(1..=5);
        let a = sample::square(rng, da);
        let b = sample::square(rng, db);
        let mut trial = Trial::random(ctx.seed, t, format!("sizes {da} and {db}"));
        let (ea, eb) = (eigenvalues(&a)?, eigenvalues(&b)?);
        let expected = product_spectrum(&ea, &eb);
        let got = eigenvalues(&kron(&[&a, &b])?)?;
        let tol = ctx.tol * scale(radius(&ea) * radius(&eb));
        trial.check(
            "σ(A ⊗ B) = σ(A)σ(B)",
            matched(match_multisets(&got, &expected, tol), tol),
        );
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

pub(crate) fn spectrum_union(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(2..=4);
        let a = sample::square(rng, d);
        let b = sample::square(rng, d);
        let mut trial = Trial::random(ctx.seed, t, format!("d={d}"));
        let avg = averaged_tensor(&[&a, &b])?;
        let whole = eigenvalues(&avg)?;
        let mut parts = eigenvalues(&sym_product(&[&a, &b])?)?;
        parts.extend(eigenvalues(&asym_product(&[&a, &b])?)?);
        let tol = ctx.tol * scale(radius(&whole));
        let blocks = block_decompose(&a, &b)?;
        trial
            .check("union of spectra", matched(match_multisets(&whole, &parts, tol), tol))
            .check_le(
                "off-diagonal blocks vanish",
                blocks.residual,
                ctx.tol * scale(avg.max_abs()),
            );
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

pub(crate) fn finite_spectrum(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(1..=4);
        let normal = rng.random_bool(0.5);
        let a = if normal {
            sample::normal_with(&sample::unitary(rng, d), &sample::diagonal_values(rng, d))
        } else {
            sample::square(rng, d)
        };
        let mut trial = Trial::random(ctx.seed, t, format!("d={d} normal={normal}"));
        let lambda = eigenvalues(&a)?;
        let id = ComplexMatrix::identity(d);
        let shifted = eigenvalues(&sym_product(&[&a, &id])?)?;
        let squared = eigenvalues(&sym_product(&[&a, &a])?)?;
        let r = radius(&lambda);
        let (tol_sum, tol_prod) = (ctx.tol * scale(r), ctx.tol * scale(r * r));
        let sums = half_sums(&lambda);
        let prods = pair_products(&lambda);
        trial
            .check(
                "σ(A ⊙ I) in (σ+σ)/2",
                matched(contains_multiset(&sums, &shifted, tol_sum), tol_sum),
            )
            .check(
                "σ(A ⊙ A) in σσ",
                matched(contains_multiset(&prods, &squared, tol_prod), tol_prod),
            );
        if normal {
            trial
                .check(
                    "σ(A ⊙ I) = (σ+σ)/2",
                    matched(match_multisets(&sums, &shifted, tol_sum), tol_sum),
                )
                .check(
                    "σ(A ⊙ A) = σσ",
                    matched(match_multisets(&prods, &squared, tol_prod), tol_prod),
                );
        }
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}
