use serde::{Deserialize, Serialize};

use super::general::general_decompose;
use super::hermitian::hermitian_decompose;
use crate::error::{Error, Result};
use crate::matrix::{c64, vec_norm, ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    PowerIteration,
    SvdViaHermitian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub method: NormMethod,
    pub iterations: usize,
}

/// Largest singular value as `sqrt(λ_max(M^* M))`.
pub fn operator_norm(m: &ComplexMatrix, tol: f64) -> Result<NormReport> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(NormReport {
            value: 0.0,
            method: NormMethod::SvdViaHermitian,
            iterations: 0,
        });
    }
    let gram = m.adjoint().matmul(m)?;
    let eig = hermitian_decompose(&gram, tol.max(1e-12))?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    Ok(NormReport {
        value: top.sqrt(),
        method: NormMethod::SvdViaHermitian,
        iterations: eig.sweeps,
    })
}

/// Power iteration on `M^* M`, stopping when the estimate changes by less than `tol` relatively.
pub fn operator_norm_power(m: &ComplexMatrix, tol: f64, max_iter: usize) -> Result<NormReport> {
    let n = m.cols();
    if n == 0 || m.max_abs() == 0.0 {
        return Ok(NormReport {
            value: 0.0,
            method: NormMethod::PowerIteration,
            iterations: 0,
        });
    }
    let adj = m.adjoint();
    let mut x: Vec<C64> = (0..n)
        .map(|i| c64(1.0 + 0.5 * ((i * 5) % 7) as f64, 0.25 * (i % 3) as f64))
        .collect();
    let mut estimate = 0.0;
    for it in 1..=max_iter {
        let nx = vec_norm(&x);
        x.iter_mut().for_each(|z| *z /= nx);
        let y = m.matvec(&x)?;
        let value = vec_norm(&y);
        let z = adj.matvec(&y)?;
        if value == 0.0 {
            // started in the kernel; perturb deterministically
            x = (0..n).map(|i| c64(((i * 13 + it) % 17) as f64 - 8.0, 1.0)).collect();
            continue;
        }
        if (value - estimate).abs() <= tol * value {
            return Ok(NormReport {
                value,
                method: NormMethod::PowerIteration,
                iterations: it,
            });
        }
        estimate = value;
        x = z;
    }
    Err(Error::NoConvergence {
        method: "power iteration",
        iterations: max_iter,
    })
}

pub fn spectral_radius(m: &ComplexMatrix) -> Result<f64> {
    let eig = general_decompose(m)?;
    Ok(eig.values.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// `‖M^k‖^{1/k}`, an upper bound for the spectral radius.
pub fn gelfand_estimate(m: &ComplexMatrix, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("Gelfand estimate needs k >= 1".into()));
    }
    let p = m.pow(k)?;
    Ok(operator_norm(&p, 1e-10)?.value.powf(1.0 / k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_norm() {
        assert!((operator_norm(&ComplexMatrix::identity(4), 1e-12).unwrap().value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn norm_dominates_columns_and_power_agrees() {
        let m = ComplexMatrix::from_fn(5, 5, |i, j| {
            c64((i * 3 + j) as f64 % 4.0 - 1.5, (i + 2 * j) as f64 % 3.0)
        });
        let n = operator_norm(&m, 1e-12).unwrap().value;
        for j in 0..5 {
            assert!(vec_norm(&m.column(j)) <= n * (1.0 + 1e-14));
        }
        let p = operator_norm_power(&m, 1e-14, 10_000).unwrap();
        assert!((p.value - n).abs() < 1e-8 * n);
    }

    #[test]
    fn jordan_radius() {
        let j = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(spectral_radius(&j).unwrap(), 0.0);
        assert_eq!(gelfand_estimate(&j, 2).unwrap(), 0.0);
        assert!((gelfand_estimate(&j, 1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(3, 3), 1e-12).unwrap().value, 0.0);
        assert_eq!(
            operator_norm_power(&ComplexMatrix::zeros(3, 3), 1e-12, 10)
                .unwrap()
                .value,
            0.0
        );
    }
}
