//! Dense complex eigenvalues: Householder reduction to Hessenberg form,
//! single-shift QR with Wilkinson shifts, and inverse iteration for eigenvectors.

use super::{SpectrumMethod, SpectrumReport};
use crate::error::{Error, Result};
use crate::matrix::{c64, vec_norm, ComplexMatrix, C64, ZERO};

pub const MAX_GENERAL_DIM: usize = 500;

#[derive(Debug, Clone)]
pub struct GeneralEigen {
    /// Sorted by `(re, im)`.
    pub values: Vec<C64>,
    /// Unit eigenvector for each value (columns).
    pub vectors: ComplexMatrix,
    /// Largest `‖Mv − λv‖ / (‖v‖ ‖M‖_F)`.
    pub max_residual: f64,
    pub iterations: usize,
}

/// `H = Q^* M Q` upper Hessenberg, returned with `Q`.
fn hessenberg(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = vec_norm(&x);
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            c64(1.0, 0.0)
        };
        let mut v = x;
        v[0] += phase * alpha;
        let vn = vec_norm(&v);
        if vn == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vn;
        }
        // H <- (I - 2vv^*) H on rows k+1..n
        for j in 0..n {
            let dot: C64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= v[i] * dot * 2.0;
            }
        }
        // H <- H (I - 2vv^*), Q <- Q (I - 2vv^*) on columns k+1..n
        for target in [&mut h, &mut q] {
            for i in 0..n {
                let dot: C64 = (0..v.len()).map(|j| target[(i, k + 1 + j)] * v[j]).sum();
                for j in 0..v.len() {
                    target[(i, k + 1 + j)] -= dot * v[j].conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of an upper Hessenberg matrix (destroys `h`).
fn hessenberg_qr(mut h: ComplexMatrix) -> Result<(Vec<C64>, usize)> {
    let n = h.rows();
    let hnorm = h.frobenius_norm();
    let cap = 100 * n.max(1);
    let mut values = vec![ZERO; n];
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n;
    while hi > 0 {
        let top = hi - 1;
        // locate the start of the unreduced trailing block
        let mut lo = top;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if scale == 0.0 {
                scale = hnorm;
            }
            if sub <= f64::EPSILON * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == top {
            values[top] = h[(top, top)];
            hi = top;
            since_deflation = 0;
            continue;
        }
        if total >= cap {
            return Err(Error::NoConvergence {
                method: "hessenberg qr",
                iterations: total,
            });
        }
        total += 1;
        since_deflation += 1;
        let mut mu = wilkinson_shift(
            h[(top - 1, top - 1)],
            h[(top - 1, top)],
            h[(top, top - 1)],
            h[(top, top)],
        );
        if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            mu = h[(top, top)] + c64(0.75 * h[(top, top - 1)].norm(), 0.5 * h[(top, top - 1)].norm());
        }
        for i in lo..=top {
            h[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(top - lo);
        for k in lo..top {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (alpha, beta) = if rho == 0.0 {
                (c64(1.0, 0.0), ZERO)
            } else {
                (x / rho, y / rho)
            };
            // G = [[conj α, conj β], [−β, α]]
            for j in k..=top {
                let u = h[(k, j)];
                let w = h[(k + 1, j)];
                h[(k, j)] = alpha.conj() * u + beta.conj() * w;
                h[(k + 1, j)] = -beta * u + alpha * w;
            }
            rots.push((alpha, beta));
        }
        for (off, &(alpha, beta)) in rots.iter().enumerate() {
            let k = lo + off;
            for i in lo..=(k + 1).min(top) {
                let u = h[(i, k)];
                let w = h[(i, k + 1)];
                h[(i, k)] = u * alpha + w * beta;
                h[(i, k + 1)] = -u * beta.conj() + w * alpha.conj();
            }
        }
        for i in lo..=top {
            h[(i, i)] += mu;
        }
    }
    Ok((values, total))
}

/// Solves `(H − σI) y = b` for upper Hessenberg `H` by LU with adjacent-row pivoting.
fn hessenberg_solve(h: &ComplexMatrix, sigma: C64, b: &[C64], floor: f64) -> Vec<C64> {
    let n = h.rows();
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] -= sigma;
    }
    let mut rhs = b.to_vec();
    for k in 0..n {
        if k + 1 < n && a[(k + 1, k)].norm() > a[(k, k)].norm() {
            for j in k..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(k + 1, j)];
                a[(k + 1, j)] = t;
            }
            rhs.swap(k, k + 1);
        }
        if a[(k, k)].norm() < floor {
            a[(k, k)] = c64(floor, 0.0);
        }
        if k + 1 < n {
            let f = a[(k + 1, k)] / a[(k, k)];
            if f != ZERO {
                for j in k..n {
                    let t = a[(k, j)];
                    a[(k + 1, j)] -= f * t;
                }
                let t = rhs[k];
                rhs[k + 1] -= f * t;
            }
        }
    }
    let mut y = vec![ZERO; n];
    for i in (0..n).rev() {
        let s: C64 = (i + 1..n).map(|j| a[(i, j)] * y[j]).sum();
        y[i] = (rhs[i] - s) / a[(i, i)];
    }
    y
}

fn normalize(v: &mut [C64]) -> bool {
    let nv = vec_norm(v);
    if !(nv.is_finite() && nv > 0.0) {
        return false;
    }
    for z in v.iter_mut() {
        *z /= nv;
    }
    true
}

fn residual(m: &ComplexMatrix, v: &[C64], lambda: C64) -> f64 {
    let mv = m.matvec(v).expect("square");
    let r: Vec<C64> = mv.iter().zip(v).map(|(a, b)| a - b * lambda).collect();
    vec_norm(&r) / vec_norm(v)
}

/// Eigenvalues and eigenvectors of a square matrix of dimension at most 500.
pub fn general_decompose(m: &ComplexMatrix) -> Result<GeneralEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n > MAX_GENERAL_DIM {
        return Err(Error::SizeGuard {
            what: "general eigensolver dimension",
            requested: n as u128,
            limit: MAX_GENERAL_DIM as u128,
        });
    }
    if !m.is_finite() {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let (h, q) = hessenberg(m);
    let (mut values, iterations) = hessenberg_qr(h.clone())?;
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let scale = m.frobenius_norm();
    let unit_scale = if scale > 0.0 { scale } else { 1.0 };
    let floor = f64::EPSILON * unit_scale;
    let mut vectors = ComplexMatrix::try_zeros(n, n)?;
    let mut max_residual: f64 = 0.0;
    for (col, &lambda) in values.iter().enumerate() {
        // start vector with no special alignment to the basis
        let mut y: Vec<C64> = (0..n)
            .map(|i| c64(1.0 + 0.37 * ((i * 7 + col * 3) % 11) as f64, 0.21 * (i % 5) as f64))
            .collect();
        normalize(&mut y);
        let mut best: Option<(f64, Vec<C64>)> = None;
        for _ in 0..3 {
            let mut next = hessenberg_solve(&h, lambda, &y, floor);
            if !normalize(&mut next) {
                break;
            }
            y = next;
            let v = q.matvec(&y)?;
            let r = residual(m, &v, lambda) / unit_scale;
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, v));
            }
        }
        let (r, v) = best.ok_or(Error::NoConvergence {
            method: "inverse iteration",
            iterations: 3,
        })?;
        max_residual = max_residual.max(r);
        for (i, z) in v.into_iter().enumerate() {
            vectors[(i, col)] = z;
        }
    }
    Ok(GeneralEigen {
        values,
        vectors,
        max_residual,
        iterations,
    })
}

/// Complex eigenvalue multiset; fails if some eigenpair residual exceeds `tol`.
pub fn general_eigen(m: &ComplexMatrix, tol: f64) -> Result<SpectrumReport> {
    let eig = general_decompose(m)?;
    if eig.max_residual > tol {
        return Err(Error::ResidualExceeded {
            residual: eig.max_residual,
            allowed: tol,
        });
    }
    Ok(SpectrumReport {
        eigenvalues: eig.values,
        method: SpectrumMethod::GeneralQr,
        max_residual: eig.max_residual,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random(n: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        ComplexMatrix::from_fn(n, n, |_, _| c64(next(), next()))
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    fn det(m: &ComplexMatrix) -> C64 {
        let n = m.rows();
        let mut a = m.clone();
        let mut d = c64(1.0, 0.0);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
                .unwrap();
            if p != k {
                for j in 0..n {
                    let t = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = t;
                }
                d = -d;
            }
            d *= a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
            }
        }
        d
    }

    #[test]
    fn nilpotent() {
        let m = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = general_eigen(&m, 1e-10).unwrap();
        assert!(r.eigenvalues.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn companion_of_z2_minus_1() {
        let m = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let r = general_eigen(&m, 1e-10).unwrap();
        assert!((r.eigenvalues[0] - c64(-1.0, 0.0)).norm() < 1e-14);
        assert!((r.eigenvalues[1] - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_has_complex_pair() {
        let m = ComplexMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let r = general_eigen(&m, 1e-10).unwrap();
        assert!((r.eigenvalues[0] - c64(0.0, -1.0)).norm() < 1e-14);
        assert!((r.eigenvalues[1] - c64(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn random_product_is_determinant() {
        for seed in 0..5 {
            let m = random(20, seed);
            let r = general_eigen(&m, 1e-10).unwrap();
            let prod: C64 = r.eigenvalues.iter().product();
            let d = det(&m);
            assert!((prod - d).norm() <= 1e-8 * d.norm(), "seed {seed}");
            let tr: C64 = r.eigenvalues.iter().sum();
            assert!((tr - m.trace()).norm() < 1e-10);
        }
    }

    #[test]
    fn jordan_blocks_and_repeats() {
        let mut j = ComplexMatrix::identity(6).scale_real(2.0);
        for i in 0..5 {
            j[(i, i + 1)] = c64(1.0, 0.0);
        }
        let r = general_eigen(&j, 1e-10).unwrap();
        assert!(r.eigenvalues.iter().all(|z| (z - c64(2.0, 0.0)).norm() < 1e-12));
        let r = general_eigen(&ComplexMatrix::identity(4), 1e-10).unwrap();
        assert!(r.eigenvalues.iter().all(|z| (z - c64(1.0, 0.0)).norm() == 0.0));
    }

    #[test]
    fn larger_random_matrix_converges() {
        let m = random(120, 99);
        let eig = general_decompose(&m).unwrap();
        assert!(eig.max_residual < 1e-12);
        assert!(eig.iterations <= 100 * 120);
    }

    #[test]
    fn oversized_rejected() {
        assert!(matches!(
            general_decompose(&ComplexMatrix::zeros(501, 501)),
            Err(Error::SizeGuard { .. })
        ));
    }
}
