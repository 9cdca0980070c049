//! Tridiagonal blocks of `½(S ⊗ S^* + S^* ⊗ S)` on the degree-k monomials and their spectra.

use std::f64::consts::PI;

use crate::basis::{enumerate_sym_indices, Permutation};
use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::{c64, ComplexMatrix, C64};

fn tridiagonal(size: usize, last_diag: f64, last_off: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(size, size);
    for i in 0..size.saturating_sub(1) {
        let v = if i + 2 == size { last_off } else { 0.5 };
        m[(i, i + 1)] = c64(v, 0.0);
        m[(i + 1, i)] = c64(v, 0.0);
    }
    if size > 0 {
        m[(size - 1, size - 1)] = c64(last_diag, 0.0);
    }
    m
}

/// `(k+1) x (k+1)`, zero diagonal, `½` off the diagonal; `A_0 = [0]`.
pub fn build_ak(k: usize) -> ComplexMatrix {
    tridiagonal(k + 1, 0.0, 0.5)
}

/// Restriction to the symmetric part of degree `k`; `B_0 = [0]`, `B_1 = [½]`.
pub fn build_bk(k: usize) -> ComplexMatrix {
    if k == 0 {
        return ComplexMatrix::zeros(1, 1);
    }
    let size = k / 2 + 1;
    if k % 2 == 1 {
        tridiagonal(size, 0.5, 0.5)
    } else {
        tridiagonal(size, 0.0, 0.5f64.sqrt())
    }
}

/// Restriction to the antisymmetric part of degree `k >= 1`; `C_1 = [−½]`, `C_2 = [0]`.
pub fn build_ck(k: usize) -> Result<ComplexMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("C_k needs k >= 1".into()));
    }
    let corner = if k % 2 == 1 { -0.5 } else { 0.0 };
    Ok(tridiagonal(k.div_ceil(2), corner, 0.5))
}

/// `cos(mπ/(k+2))`; all three spectra are drawn from this one grid.
pub fn shift_cos(m: usize, k: usize) -> f64 {
    (m as f64 * PI / (k + 2) as f64).cos()
}

pub fn spec_ak(k: usize) -> Vec<f64> {
    (1..=k + 1).map(|j| shift_cos(j, k)).collect()
}

pub fn spec_bk(k: usize) -> Vec<f64> {
    (1..=(k + 2) / 2).map(|j| shift_cos(2 * j - 1, k)).collect()
}

pub fn spec_ck(k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidArgument("C_k needs k >= 1".into()));
    }
    Ok((1..=k.div_ceil(2)).map(|j| shift_cos(2 * j, k)).collect())
}

/// `{(λ_i μ_j + λ_j μ_i)/2 : i ≤ j < N}`, in lexicographic `(i, j)` order.
pub fn diag_sym_spectrum(lambda: &[C64], mu: &[C64], n: usize) -> Result<Vec<C64>> {
    if lambda.len() < n || mu.len() < n {
        return Err(Error::InvalidArgument(format!(
            "need {n} diagonal values, got {} and {}",
            lambda.len(),
            mu.len()
        )));
    }
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push((lambda[i] * mu[j] + lambda[j] * mu[i]) * 0.5);
        }
    }
    Ok(out)
}

/// `{(1/n!) Σ_π ∏_k λ^{(π(k))}_{i_k} : i_1 ≤ ... ≤ i_n}` over the symmetric index order.
pub fn multi_diag_sym_spectrum(specs: &[Vec<C64>], n_trunc: usize) -> Result<Vec<C64>> {
    let n = specs.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no diagonal sequences".into()));
    }
    limits::check_degree(n)?;
    if let Some(short) = specs.iter().find(|s| s.len() < n_trunc) {
        return Err(Error::InvalidArgument(format!(
            "need {n_trunc} diagonal values, got {}",
            short.len()
        )));
    }
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let weight = 1.0 / perms.len() as f64;
    Ok(enumerate_sym_indices(n_trunc, n)?
        .iter()
        .map(|idx| {
            let sum: C64 = perms
                .iter()
                .map(|p| {
                    idx.entries()
                        .iter()
                        .enumerate()
                        .map(|(k, &i)| specs[p.apply(k)][i])
                        .product::<C64>()
                })
                .sum();
            sum * weight
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{hermitian_eigen, match_multisets};

    fn reals(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| c64(x, 0.0)).collect()
    }

    #[test]
    fn small_blocks() {
        assert_eq!(build_ak(0), ComplexMatrix::zeros(1, 1));
        assert_eq!(build_bk(0), ComplexMatrix::zeros(1, 1));
        assert_eq!(build_bk(1), ComplexMatrix::from_real(&[&[0.5]]));
        assert_eq!(build_ck(1).unwrap(), ComplexMatrix::from_real(&[&[-0.5]]));
        assert_eq!(build_ck(2).unwrap(), ComplexMatrix::from_real(&[&[0.0]]));
        let h = 0.5f64.sqrt();
        assert_eq!(build_bk(2), ComplexMatrix::from_real(&[&[0.0, h], &[h, 0.0]]));
        assert_eq!(build_bk(3), ComplexMatrix::from_real(&[&[0.0, 0.5], &[0.5, 0.5]]));
        assert!(build_ck(0).is_err());
    }

    #[test]
    fn small_spectra() {
        let a1 = spec_ak(1);
        assert!((a1[0] - 0.5).abs() < 1e-15 && (a1[1] + 0.5).abs() < 1e-15);
        assert!((spec_ck(1).unwrap()[0] + 0.5).abs() < 1e-15);
        assert_eq!(spec_bk(0), vec![shift_cos(1, 0)]);
        assert!(spec_bk(0)[0].abs() < 1e-16);
    }

    #[test]
    fn sizes() {
        for k in 1..30 {
            assert_eq!(spec_ak(k).len(), k + 1);
            assert_eq!(spec_bk(k).len(), (k + 2) / 2);
            assert_eq!(spec_ck(k).unwrap().len(), k.div_ceil(2));
            assert_eq!(build_bk(k).rows(), spec_bk(k).len());
            assert_eq!(build_ck(k).unwrap().rows(), spec_ck(k).unwrap().len());
        }
    }

    #[test]
    fn blocks_match_formulas() {
        for k in 0..20 {
            let ev = hermitian_eigen(&build_bk(k), 1e-12).unwrap();
            assert!(
                match_multisets(&ev.eigenvalues, &reals(&spec_bk(k)), 1e-12).is_some(),
                "B_{k}"
            );
            let ev = hermitian_eigen(&build_ak(k), 1e-12).unwrap();
            assert!(
                match_multisets(&ev.eigenvalues, &reals(&spec_ak(k)), 1e-12).is_some(),
                "A_{k}"
            );
        }
        for k in 1..20 {
            let ev = hermitian_eigen(&build_ck(k).unwrap(), 1e-12).unwrap();
            let f = reals(&spec_ck(k).unwrap());
            assert!(match_multisets(&ev.eigenvalues, &f, 1e-12).is_some(), "C_{k}");
        }
    }

    #[test]
    fn diag_spectra_small() {
        let s = diag_sym_spectrum(&reals(&[1.0, 2.0]), &reals(&[3.0, 4.0]), 2).unwrap();
        assert_eq!(s, reals(&[3.0, 5.0, 8.0]));
        let ones = reals(&[1.0; 4]);
        assert!(diag_sym_spectrum(&ones, &ones, 4)
            .unwrap()
            .iter()
            .all(|z| *z == c64(1.0, 0.0)));
        assert!(diag_sym_spectrum(&ones, &ones, 5).is_err());
    }

    #[test]
    fn multi_reduces_to_pair() {
        let l = vec![c64(1.0, 0.5), c64(-2.0, 0.0), c64(0.25, 1.0)];
        let m = vec![c64(0.0, 1.0), c64(3.0, -1.0), c64(1.0, 1.0)];
        let pair = diag_sym_spectrum(&l, &m, 3).unwrap();
        let multi = multi_diag_sym_spectrum(&[l, m], 3).unwrap();
        for (a, b) in pair.iter().zip(&multi) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn equal_sequences_give_monomials() {
        let l = reals(&[2.0, 3.0]);
        let s = multi_diag_sym_spectrum(&[l.clone(), l.clone(), l], 2).unwrap();
        assert_eq!(s, reals(&[8.0, 12.0, 18.0, 27.0]));
    }
}
