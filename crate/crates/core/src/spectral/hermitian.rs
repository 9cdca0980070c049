//! Cyclic Jacobi for complex Hermitian matrices.

use super::{SpectrumMethod, SpectrumReport};
use crate::error::{Error, Result};
use crate::matrix::{c64, vec_norm, ComplexMatrix, C64};

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
    pub sweeps: usize,
    /// Largest `‖Mv − λv‖ / ‖M‖_F`.
    pub max_residual: f64,
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Full eigendecomposition; fails if `‖M − M^*‖_F > tol ‖M‖_F`.
pub fn hermitian_decompose(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let scale = m.frobenius_norm();
    let defect = m.hermitian_defect();
    if defect > tol * scale {
        return Err(Error::NonHermitian {
            defect,
            allowed: tol * scale,
        });
    }
    let mut a = (m + &m.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let mut sweeps = 0;
    while off_diagonal_norm(&a) > f64::EPSILON * scale {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                method: "hermitian jacobi",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let mut max_residual: f64 = 0.0;
    for (j, &lambda) in values.iter().enumerate() {
        let x = vectors.column(j);
        let mx = m.matvec(&x)?;
        let r: Vec<C64> = mx.iter().zip(&x).map(|(y, xi)| y - xi * lambda).collect();
        let denom = vec_norm(&x) * if scale > 0.0 { scale } else { 1.0 };
        max_residual = max_residual.max(vec_norm(&r) / denom);
    }
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
        max_residual,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // skip entries already negligible against the diagonal
    if r < 1e-18 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r; // e^{iφ}
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on coordinates (p, q)
    let jpp = c64(c, 0.0);
    let jpq = c64(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = c64(a[(p, p)].re, 0.0);
    a[(q, q)] = c64(a[(q, q)].re, 0.0);
}

/// Real eigenvalues, ascending, with a residual check against `tol`.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<SpectrumReport> {
    let eig = hermitian_decompose(m, tol)?;
    if eig.max_residual > tol {
        return Err(Error::ResidualExceeded {
            residual: eig.max_residual,
            allowed: tol,
        });
    }
    Ok(SpectrumReport {
        eigenvalues: eig.values.iter().map(|&x| c64(x, 0.0)).collect(),
        method: SpectrumMethod::HermitianJacobi,
        max_residual: eig.max_residual,
        tolerance: tol,
    })
}
