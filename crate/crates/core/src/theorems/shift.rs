use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::registry::Ctx;
use super::{Trial, VerifyReport};
use crate::basis::{EmbeddedVector, MultiIndex, Symmetry, TensorBasis};
use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix, C64};
use crate::operator::OperatorSpec;
use crate::product::{project, restrict_to_indices, sym_product};
use crate::spectral::{
    build_ak, build_bk, build_ck, hermitian_eigen, match_multisets, sorted_real, spec_ak, spec_bk, spec_ck,
    SpectrumReport,
};

pub const MAX_SHIFT_DEGREE: usize = 200;

/// Closed-form spectra of `S ⊙ S*` and `S ∧ S*` through degree `K`, with the
/// deviations found when each block is rebuilt from the tensor action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftBlockSpectra {
    pub k_max: usize,
    pub sym: SpectrumReport,
    pub asym: SpectrumReport,
    /// Largest entrywise gap between a restricted block and `A_k`, `B_k` or `C_k`.
    pub max_block_deviation: f64,
    /// Largest gap between numerical eigenvalues of a restricted block and its cosine formula.
    pub max_spectrum_deviation: f64,
    /// Largest gap between numerical eigenvalues of the tridiagonal matrices and their cosine formula.
    pub max_closed_form_deviation: f64,
    /// Largest matching distance in `σ(A_k) = σ(B_k) ⊎ σ(C_k)`; infinite if some matching fails.
    pub max_union_deviation: f64,
}

struct Block {
    block_dev: f64,
    spectrum_dev: f64,
    closed_dev: f64,
    union_dev: f64,
    sym: Vec<f64>,
    asym: Vec<f64>,
}

fn sorted_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    let report = hermitian_eigen(m, 1e-10)?;
    Ok(sorted_real(report.real_parts()))
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn as_complex(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| c64(x, 0.0)).collect()
}

fn shift_pair(n: usize) -> Result<[ComplexMatrix; 2]> {
    Ok([
        OperatorSpec::shift().materialize(n)?,
        OperatorSpec::back_shift().materialize(n)?,
    ])
}

/// `(S ⊗ S* + S* ⊗ S)/2` on the monomials `e_{k-i} ⊗ e_i`, `i = 0..=k`.
fn full_degree_block(factors: &[ComplexMatrix; 2], k: usize) -> Result<ComplexMatrix> {
    let vecs: Vec<EmbeddedVector> = (0..=k)
        .map(|i| EmbeddedVector {
            terms: vec![(vec![k - i, i], 1.0)],
        })
        .collect();
    let [s, s_adj] = factors;
    let forward = project(&[s, s_adj], &vecs, &vecs)?;
    let backward = project(&[s_adj, s], &vecs, &vecs)?;
    Ok((&forward + &backward).scale_real(0.5))
}

fn degree_indices(k: usize, symmetry: Symmetry) -> Result<Vec<MultiIndex>> {
    match symmetry {
        Symmetry::Symmetric => (0..=k / 2).map(|i| MultiIndex::symmetric(vec![i, k - i])).collect(),
        Symmetry::Antisymmetric => (0..k.div_ceil(2))
            .map(|i| MultiIndex::antisymmetric(vec![i, k - i]))
            .collect(),
    }
}

fn block(k: usize) -> Result<Block> {
    // Indices of degree k stay below k + 1, so the compression at k + 1 is exact on these blocks.
    let factors = shift_pair(k + 1)?;
    let sym_block = restrict_to_indices(&factors, &degree_indices(k, Symmetry::Symmetric)?, Symmetry::Symmetric)?;
    let full = full_degree_block(&factors, k)?;
    let bk = build_bk(k);
    let ak = build_ak(k);
    let sym_spec = sorted_real(spec_bk(k));
    let full_spec = sorted_real(spec_ak(k));
    let mut block_dev = sym_block.max_abs_diff(&bk).max(full.max_abs_diff(&ak));
    let mut spectrum_dev =
        max_gap(&sorted_eigenvalues(&sym_block)?, &sym_spec).max(max_gap(&sorted_eigenvalues(&full)?, &full_spec));
    let mut closed_dev =
        max_gap(&sorted_eigenvalues(&bk)?, &sym_spec).max(max_gap(&sorted_eigenvalues(&ak)?, &full_spec));
    let mut asym_spec = Vec::new();
    if k >= 1 {
        let asym_block = restrict_to_indices(
            &factors,
            &degree_indices(k, Symmetry::Antisymmetric)?,
            Symmetry::Antisymmetric,
        )?;
        let ck = build_ck(k)?;
        asym_spec = sorted_real(spec_ck(k)?);
        block_dev = block_dev.max(asym_block.max_abs_diff(&ck));
        spectrum_dev = spectrum_dev.max(max_gap(&sorted_eigenvalues(&asym_block)?, &asym_spec));
        closed_dev = closed_dev.max(max_gap(&sorted_eigenvalues(&ck)?, &asym_spec));
    }
    let mut parts = as_complex(&sym_spec);
    parts.extend(as_complex(&asym_spec));
    let union_dev = match_multisets(&as_complex(&full_spec), &parts, 1e-12).unwrap_or(f64::INFINITY);
    Ok(Block {
        block_dev,
        spectrum_dev,
        closed_dev,
        union_dev,
        sym: sym_spec,
        asym: asym_spec,
    })
}

/// Spectra of `S ⊙ S*` and `S ∧ S*` on total degrees `0..=K`, cross-checked block by
/// block against the exact restriction of `(S ⊗ S* + S* ⊗ S)/2`.
pub fn shift_block_spectra(k_max: usize) -> Result<ShiftBlockSpectra> {
    if k_max > MAX_SHIFT_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degree {k_max} exceeds the limit {MAX_SHIFT_DEGREE}"
        )));
    }
    let blocks: Vec<Block> = (0..=k_max).into_par_iter().map(block).collect::<Result<_>>()?;
    let fold = |f: fn(&Block) -> f64| blocks.iter().map(f).fold(0.0, f64::max);
    let sym: Vec<f64> = blocks.iter().flat_map(|b| b.sym.iter().copied()).collect();
    let asym: Vec<f64> = blocks.iter().flat_map(|b| b.asym.iter().copied()).collect();
    Ok(ShiftBlockSpectra {
        k_max,
        sym: SpectrumReport::closed_form(sym),
        asym: SpectrumReport::closed_form(asym),
        max_block_deviation: fold(|b| b.block_dev),
        max_spectrum_deviation: fold(|b| b.spectrum_dev),
        max_closed_form_deviation: fold(|b| b.closed_dev),
        max_union_deviation: fold(|b| b.union_dev),
    })
}

/// Largest gap between consecutive points of `{-1, 1} ∪ values` inside `[-1, 1]`.
pub fn mesh_gap(values: &[f64]) -> f64 {
    let mut pts: Vec<f64> = values.iter().copied().filter(|x| x.abs() <= 1.0).collect();
    pts.push(-1.0);
    pts.push(1.0);
    pts.sort_by(f64::total_cmp);
    pts.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Whether the compression of `S ⊙ S*` to indices below `n` has no entries between
/// different total degrees; returns the largest such entry.
fn cross_degree_leak(n: usize) -> Result<f64> {
    let factors = shift_pair(n)?;
    let product = sym_product(&factors)?;
    let basis = TensorBasis::symmetric(n, 2)?;
    let degrees: Vec<usize> = basis.indices().iter().map(MultiIndex::total).collect();
    let mut leak: f64 = 0.0;
    for i in 0..product.rows() {
        for j in 0..product.cols() {
            if degrees[i] != degrees[j] {
                leak = leak.max(product[(i, j)].norm());
            }
        }
    }
    Ok(leak)
}

pub(crate) fn shift_blocks(ctx: &Ctx) -> Result<VerifyReport> {
    let k = ctx.k.unwrap_or(40);
    let tol = ctx.tol;
    let mut trial = Trial::new(format!("K={k}"));
    let spectra = shift_block_spectra(k)?;
    let mut all = spectra.sym.real_parts();
    all.extend(spectra.asym.real_parts());
    let largest = all.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let gap = mesh_gap(&all);
    let gap_bound = std::f64::consts::PI / (k as f64 + 2.0);
    trial
        .check_le(
            "restricted blocks equal the tridiagonal matrices",
            spectra.max_block_deviation,
            tol,
        )
        .check_le(
            "restricted block spectra equal the cosine formulas",
            spectra.max_spectrum_deviation,
            tol,
        )
        .check_le(
            "tridiagonal spectra equal the cosine formulas",
            spectra.max_closed_form_deviation,
            tol,
        )
        .check_le("σ(A_k) = σ(B_k) ⊎ σ(C_k)", spectra.max_union_deviation, tol)
        .check_le("eigenvalues bounded by 1", largest, 1.0)
        .check_le("mesh gap at most pi/(K+2)", gap, gap_bound + tol)
        .max("mesh gap", gap)
        .max("largest |eigenvalue|", largest)
        .max("symmetric eigenvalue count", spectra.sym.eigenvalues.len() as f64)
        .max("antisymmetric eigenvalue count", spectra.asym.eigenvalues.len() as f64);
    let n = k.min(40) + 1;
    trial.check_le("degree subspaces invariant", cross_degree_leak(n)?, 0.0);
    Ok(ctx.finish(vec![Ok(trial)], Vec::new()))
}
