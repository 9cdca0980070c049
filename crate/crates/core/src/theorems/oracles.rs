//! Closed forms used as independent references, never as the code under test.

use crate::basis::Permutation;
use crate::error::{Error, Result};
use crate::matrix::{inner, ComplexMatrix, C64};

/// `A ⊙ B` for 2×2 inputs in the basis `e1⊙e1, √2 e1⊙e2, e2⊙e2`, entry by entry.
pub fn sym_product_2x2(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::DimensionMismatch("expected 2x2 matrices".into()));
        }
    }
    let (a11, a12, a21, a22) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let (b11, b12, b21, b22) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_rows(&[
        vec![a11 * b11, (a11 * b12 + b11 * a12) * r, a12 * b12],
        vec![
            (a11 * b21 + b11 * a21) * r,
            (a11 * b22 + b11 * a22 + a12 * b21 + b12 * a21) * 0.5,
            (a12 * b22 + b12 * a22) * r,
        ],
        vec![a21 * b21, (a21 * b22 + b21 * a22) * r, a22 * b22],
    ])
}

/// `½(A⊗B + B⊗A)` for 2×2 inputs in the basis `e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2`.
pub fn averaged_2x2(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::DimensionMismatch("expected 2x2 matrices".into()));
        }
    }
    let (a11, a12, a21, a22) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let (b11, b12, b21, b22) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
    let m = ComplexMatrix::from_rows(&[
        vec![
            a11 * b11 * 2.0,
            a11 * b12 + b11 * a12,
            a12 * b11 + b12 * a11,
            a12 * b12 * 2.0,
        ],
        vec![
            a11 * b21 + b11 * a21,
            a11 * b22 + b11 * a22,
            a12 * b21 + b12 * a21,
            a12 * b22 + b12 * a22,
        ],
        vec![
            a21 * b11 + b21 * a11,
            a21 * b12 + b21 * a12,
            a22 * b11 + b22 * a11,
            a22 * b12 + b22 * a12,
        ],
        vec![
            a21 * b21 * 2.0,
            a21 * b22 + b21 * a22,
            a22 * b21 + b22 * a21,
            a22 * b22 * 2.0,
        ],
    ])?;
    Ok(m.scale_real(0.5))
}

/// `A ⊙ A^*` for a 2×2 `A`, written out with conjugates.
pub fn sym_product_with_adjoint_2x2(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch("expected a 2x2 matrix".into()));
    }
    let (a11, a12, a21, a22) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let re = |z: C64| C64::new(z.re, 0.0);
    ComplexMatrix::from_rows(&[
        vec![
            re(a11 * a11.conj()),
            (a11 * a21.conj() + a11.conj() * a12) * r,
            a12 * a21.conj(),
        ],
        vec![
            (a11 * a12.conj() + a11.conj() * a21) * r,
            (a11 * a22.conj() + a11.conj() * a22 + a12 * a12.conj() + a21 * a21.conj()) * 0.5,
            (a12 * a22.conj() + a21.conj() * a22) * r,
        ],
        vec![
            a21 * a12.conj(),
            (a21 * a22.conj() + a12.conj() * a22) * r,
            re(a22 * a22.conj()),
        ],
    ])
}

/// `‖x_1 ⊙ ... ⊙ x_n‖² = perm(G) / n!` with `G_ij = <x_j, x_i>`.
pub fn simple_tensor_norm_sq(vs: &[Vec<C64>]) -> f64 {
    let n = vs.len();
    let gram: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| inner(&vs[j], &vs[i])).collect())
        .collect();
    let mut perm = C64::new(0.0, 0.0);
    let mut count = 0usize;
    for p in Permutation::all(n) {
        perm += (0..n).map(|i| gram[i][p.apply(i)]).product::<C64>();
        count += 1;
    }
    perm.re / count as f64
}

/// All products `α_i β_j`: the spectrum of `A ⊗ B` given those of `A` and `B`.
pub fn product_spectrum(alpha: &[C64], beta: &[C64]) -> Vec<C64> {
    alpha.iter().flat_map(|a| beta.iter().map(move |b| a * b)).collect()
}

/// `{(λ_i + λ_j)/2 : i ≤ j}`.
pub fn half_sums(lambda: &[C64]) -> Vec<C64> {
    pairs(lambda, |a, b| (a + b) * 0.5)
}

/// `{λ_i λ_j : i ≤ j}`.
pub fn pair_products(lambda: &[C64]) -> Vec<C64> {
    pairs(lambda, |a, b| a * b)
}

fn pairs(lambda: &[C64], f: impl Fn(C64, C64) -> C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(lambda.len() * (lambda.len() + 1) / 2);
    for i in 0..lambda.len() {
        for j in i..lambda.len() {
            out.push(f(lambda[i], lambda[j]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c64;

    #[test]
    fn adjoint_form_agrees_with_general_form() {
        let a = ComplexMatrix::from_rows(&[vec![c64(0.3, -1.0), c64(2.0, 0.5)], vec![c64(-0.7, 0.2), c64(1.1, 1.3)]])
            .unwrap();
        let general = sym_product_2x2(&a, &a.adjoint()).unwrap();
        let special = sym_product_with_adjoint_2x2(&a).unwrap();
        assert!(general.max_abs_diff(&special) < 1e-15);
        assert!(special.hermitian_defect() < 1e-15);
    }

    #[test]
    fn permanent_norm_of_orthonormal_triple() {
        let e = |i: usize| {
            let mut v = vec![c64(0.0, 0.0); 3];
            v[i] = c64(1.0, 0.0);
            v
        };
        let n2 = simple_tensor_norm_sq(&[e(0), e(1), e(2)]);
        assert!((n2 - 1.0 / 6.0).abs() < 1e-15);
        assert!((simple_tensor_norm_sq(&[e(0), e(0), e(0)]) - 1.0).abs() < 1e-15);
    }
}
