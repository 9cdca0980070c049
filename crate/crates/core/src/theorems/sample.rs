//! Seeded random operators and vectors.
//!
//! Every trial draws from its own ChaCha8 stream selected by the trial index,
//! so a single trial can be replayed from `(seed, trial)` alone. Complex
//! normals have independent real and imaginary parts of variance ½.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{c64, inner, vec_norm, ComplexMatrix, C64, ZERO};

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn complex_normal(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn vector(rng: &mut impl Rng, d: usize) -> Vec<C64> {
    (0..d).map(|_| complex_normal(rng)).collect()
}

pub fn unit_vector(rng: &mut impl Rng, d: usize) -> Vec<C64> {
    loop {
        let v = vector(rng, d);
        let n = vec_norm(&v);
        if n > 1e-8 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn square(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    matrix(rng, d, d)
}

pub fn hermitian(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let g = square(rng, d);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Complex symmetric (`A = A^T`).
pub fn transpose_symmetric(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let g = square(rng, d);
    (&g + &g.transpose()).scale_real(0.5)
}

/// Haar unitary: Gram-Schmidt on a Gaussian matrix, columns orthonormalized in order.
pub fn unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    loop {
        let g = square(rng, d);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
        let mut ok = true;
        for j in 0..d {
            let mut v = g.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let p = inner(&v, q);
                    for (x, y) in v.iter_mut().zip(q) {
                        *x -= p * y;
                    }
                }
            }
            let n = vec_norm(&v);
            if n < 1e-8 {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
        if ok {
            return ComplexMatrix::from_fn(d, d, |i, j| cols[j][i]);
        }
    }
}

pub fn diagonal_values(rng: &mut impl Rng, d: usize) -> Vec<C64> {
    vector(rng, d)
}

/// `U diag(values) U^*`.
pub fn normal_with(u: &ComplexMatrix, values: &[C64]) -> ComplexMatrix {
    u.matmul(&ComplexMatrix::from_diag(values))
        .and_then(|m| m.matmul(&u.adjoint()))
        .expect("conforming sizes")
}

/// Columns `range` of `u` as a `d x |range|` matrix.
pub fn columns(u: &ComplexMatrix, range: std::ops::Range<usize>) -> ComplexMatrix {
    let cols: Vec<usize> = range.collect();
    let rows: Vec<usize> = (0..u.rows()).collect();
    u.select(&rows, &cols)
}

/// Orthogonal projection onto the span of columns `range` of the unitary `u`.
pub fn projection(u: &ComplexMatrix, range: std::ops::Range<usize>) -> ComplexMatrix {
    let w = columns(u, range);
    w.matmul(&w.adjoint()).expect("conforming sizes")
}

/// A uniformly chosen magnitude in `[lo, hi]` with a uniform phase.
pub fn annulus_value(rng: &mut impl Rng, lo: f64, hi: f64) -> C64 {
    let r = rng.random_range(lo..=hi);
    let t = rng.random_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, t)
}

pub fn zero_vector(d: usize) -> Vec<C64> {
    vec![ZERO; d]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = vector(&mut trial_rng(7, 3), 4);
        let b = vector(&mut trial_rng(7, 3), 4);
        let c = vector(&mut trial_rng(7, 4), 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = unitary(&mut trial_rng(1, 0), 6);
        let g = u.adjoint().matmul(&u).unwrap();
        assert!(g.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-13);
    }

    #[test]
    fn complex_normal_variance() {
        let mut rng = trial_rng(3, 0);
        let n = 20_000;
        let mean_sq: f64 = (0..n).map(|_| complex_normal(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean_sq - 1.0).abs() < 0.05);
    }

    #[test]
    fn projections_are_complementary() {
        let u = unitary(&mut trial_rng(2, 0), 5);
        let p = projection(&u, 0..2);
        let q = projection(&u, 2..5);
        assert!((&p + &q).max_abs_diff(&ComplexMatrix::identity(5)) < 1e-13);
        assert!(p.matmul(&q).unwrap().max_abs() < 1e-13);
    }
}
