//! Symmetric and antisymmetric tensor products of operators in orthonormal coordinates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{embedded_basis_vector, EmbeddedVector, MultiIndex, Permutation, Symmetry, TensorBasis};
use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::{c64, ComplexMatrix, C64, ZERO};
use crate::operator::{kron, OperatorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Symmetric,
    Antisymmetric,
    /// `S_n(A_1, ..., A_n)` on the full tensor power.
    FullAveraged,
}

/// A flat list of factors; nested products such as `(A ⊙ B) ⊙ C` are not expressible.
#[derive(Debug, Clone)]
pub struct ProductRequest {
    pub operators: Vec<OperatorSpec>,
    pub flavor: Flavor,
    pub trunc: usize,
}

impl ProductRequest {
    pub fn new(operators: Vec<OperatorSpec>, flavor: Flavor, trunc: usize) -> Result<Self> {
        if operators.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a product needs at least 2 factors, got {}",
                operators.len()
            )));
        }
        limits::check_degree(operators.len())?;
        Ok(Self {
            operators,
            flavor,
            trunc,
        })
    }

    pub fn materialize_factors(&self) -> Result<Vec<ComplexMatrix>> {
        self.operators.iter().map(|op| op.materialize(self.trunc)).collect()
    }

    pub fn evaluate(&self) -> Result<ComplexMatrix> {
        let factors = self.materialize_factors()?;
        match self.flavor {
            Flavor::Symmetric => sym_product(&factors),
            Flavor::Antisymmetric => asym_product(&factors),
            Flavor::FullAveraged => averaged_tensor(&factors),
        }
    }
}

fn check_factors<M: AsRef<ComplexMatrix>>(factors: &[M]) -> Result<usize> {
    let Some(first) = factors.first() else {
        return Err(Error::InvalidArgument("no factors".into()));
    };
    let d = first.as_ref().rows();
    for f in factors {
        let f = f.as_ref();
        if !f.is_square() || f.rows() != d {
            return Err(Error::DimensionMismatch(format!(
                "factors must be square of equal size {d}, got {}x{}",
                f.rows(),
                f.cols()
            )));
        }
    }
    if d == 0 {
        return Err(Error::InvalidArgument("empty factors".into()));
    }
    limits::check_degree(factors.len())?;
    Ok(d)
}

/// `(1/n!) Σ_π A_{π(1)} ⊗ ... ⊗ A_{π(n)}` as a dense `d^n x d^n` matrix.
pub fn averaged_tensor<M: AsRef<ComplexMatrix> + Sync>(factors: &[M]) -> Result<ComplexMatrix> {
    let d = check_factors(factors)?;
    let n = factors.len();
    let dim = limits::check_tensor_dim(d, n)?;
    limits::check_dense(dim, dim)?;
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let terms: Vec<ComplexMatrix> = perms
        .par_iter()
        .map(|p| {
            let ordered: Vec<&ComplexMatrix> = p.images().iter().map(|&k| factors[k].as_ref()).collect();
            kron(&ordered)
        })
        .collect::<Result<_>>()?;
    // fixed summation order keeps the result bit-reproducible
    let mut acc = ComplexMatrix::try_zeros(dim, dim)?;
    for t in &terms {
        acc = &acc + t;
    }
    Ok(acc.scale_real(1.0 / perms.len() as f64))
}

/// Matrix of `A_1 ⊗ ... ⊗ A_n` between embedded basis vectors: entry `(a, b)` is
/// `<(A_1 ⊗ ... ⊗ A_n) cols[b], rows[a]>`.
///
/// When `rows` and `cols` all lie in the symmetric subspace (or all in the
/// antisymmetric one) this equals the compression of the averaged tensor,
/// since that subspace absorbs every slot permutation up to a sign that cancels.
pub fn project<M: AsRef<ComplexMatrix> + Sync>(
    factors: &[M],
    rows: &[EmbeddedVector],
    cols: &[EmbeddedVector],
) -> Result<ComplexMatrix> {
    let d = check_factors(factors)?;
    let n = factors.len();
    for v in rows.iter().chain(cols) {
        for (slots, _) in &v.terms {
            if slots.len() != n || slots.iter().any(|&i| i >= d) {
                return Err(Error::DimensionMismatch(format!(
                    "slot tuple {slots:?} does not index a degree-{n} power of C^{d}"
                )));
            }
        }
    }
    limits::check_dense(rows.len(), cols.len())?;
    let mats: Vec<&ComplexMatrix> = factors.iter().map(AsRef::as_ref).collect();
    // Factors and terms are combined in a canonical order so that the result
    // does not depend on the order of the factor list, bit for bit.
    let entry = |r: &EmbeddedVector, c: &EmbeddedVector| -> C64 {
        let mut terms = Vec::with_capacity(r.terms.len() * c.terms.len());
        let mut values = Vec::with_capacity(n);
        for (rs, rc) in &r.terms {
            'term: for (cs, cc) in &c.terms {
                values.clear();
                for (k, m) in mats.iter().enumerate() {
                    let a = m[(rs[k], cs[k])];
                    if a == ZERO {
                        continue 'term;
                    }
                    values.push(a);
                }
                values.sort_by(canonical);
                let prod: C64 = values.iter().fold(c64(rc * cc, 0.0), |acc, v| acc * v);
                terms.push(prod);
            }
        }
        terms.sort_by(canonical);
        terms.into_iter().fold(ZERO, |acc, t| acc + t)
    };
    let data: Vec<C64> = rows
        .par_iter()
        .flat_map_iter(|r| cols.iter().map(move |c| entry(r, c)))
        .collect();
    ComplexMatrix::from_vec(rows.len(), cols.len(), data)
}

fn canonical(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn graded_product<M: AsRef<ComplexMatrix> + Sync>(factors: &[M], symmetry: Symmetry) -> Result<ComplexMatrix> {
    let d = check_factors(factors)?;
    let n = factors.len();
    limits::check_tensor_dim(d, n)?;
    let basis = TensorBasis::new(d, n, symmetry)?;
    let cols = basis.columns();
    project(factors, &cols, &cols)
}

/// `A_1 ⊙ ... ⊙ A_n` in the lexicographic symmetric basis.
pub fn sym_product<M: AsRef<ComplexMatrix> + Sync>(factors: &[M]) -> Result<ComplexMatrix> {
    graded_product(factors, Symmetry::Symmetric)
}

/// `A_1 ∧ ... ∧ A_n` in the lexicographic antisymmetric basis.
pub fn asym_product<M: AsRef<ComplexMatrix> + Sync>(factors: &[M]) -> Result<ComplexMatrix> {
    graded_product(factors, Symmetry::Antisymmetric)
}

/// `Q^* S_n(A_1, ..., A_n) Q` through dense matrices, with `Q` the embedding isometry.
pub fn product_via_embedding<M: AsRef<ComplexMatrix> + Sync>(
    factors: &[M],
    symmetry: Symmetry,
) -> Result<ComplexMatrix> {
    let d = check_factors(factors)?;
    let q = TensorBasis::new(d, factors.len(), symmetry)?.embedding()?;
    q.adjoint().matmul(&averaged_tensor(factors)?)?.matmul(&q)
}

/// Compression of `A_1 ⊗ ... ⊗ A_n` to the span of the given basis labels.
pub fn restrict_to_indices<M: AsRef<ComplexMatrix> + Sync>(
    factors: &[M],
    indices: &[MultiIndex],
    symmetry: Symmetry,
) -> Result<ComplexMatrix> {
    let vecs: Vec<EmbeddedVector> = indices.iter().map(|idx| embedded_basis_vector(idx, symmetry)).collect();
    project(factors, &vecs, &vecs)
}

#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub sym: ComplexMatrix,
    pub asym: ComplexMatrix,
    /// Frobenius norm of the off-diagonal block `Q_s^* M Q_a`, an upper bound for its operator norm.
    pub residual: f64,
}

/// Splits `½(A ⊗ B + B ⊗ A)` along `H ⊙ H ⊕ H ∧ H`.
pub fn block_decompose(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<BlockDecomposition> {
    let d = check_factors(&[a, b])?;
    let m = averaged_tensor(&[a, b])?;
    let qs = TensorBasis::symmetric(d, 2)?.embedding()?;
    let qa = TensorBasis::antisymmetric(d, 2)?.embedding()?;
    let sym = qs.adjoint().matmul(&m)?.matmul(&qs)?;
    let asym = qa.adjoint().matmul(&m)?.matmul(&qa)?;
    let off = qs.adjoint().matmul(&m)?.matmul(&qa)?;
    let off_t = qa.adjoint().matmul(&m)?.matmul(&qs)?;
    Ok(BlockDecomposition {
        sym,
        asym,
        residual: off.frobenius_norm().max(off_t.frobenius_norm()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{antisymmetrizer, symmetrizer};

    fn r(v: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real(v)
    }

    fn pseudo_random(d: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        ComplexMatrix::from_fn(d, d, |_, _| c64(next(), next()))
    }

    #[test]
    fn rank_one_pair_gives_single_entry() {
        let a = r(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let b = r(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let p = sym_product(&[&a, &b]).unwrap();
        let mut expected = ComplexMatrix::zeros(3, 3);
        expected[(1, 0)] = c64(0.5f64.sqrt(), 0.0);
        assert!(p.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn unitary_pair_example() {
        let a = ComplexMatrix::identity(2);
        let b = r(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let h = 0.5f64.sqrt();
        let expected = r(&[&[0.0, -h, 0.0], &[h, 0.0, -h], &[0.0, h, 0.0]]);
        assert!(sym_product(&[&a, &b]).unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn normal_noncommuting_example() {
        let a = ComplexMatrix::from_rows(&[vec![c64(1.0, 0.0), c64(0.0, 1.0)], vec![c64(0.0, 1.0), c64(1.0, 0.0)]])
            .unwrap();
        let b = r(&[&[1.0, -1.0], &[1.0, 1.0]]);
        let p = sym_product(&[&a, &b]).unwrap();
        let h = 0.5f64.sqrt();
        assert!((p[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((p[(0, 1)] - c64(-h, h)).norm() < 1e-15);
        assert!((p[(0, 2)] - c64(0.0, -1.0)).norm() < 1e-15);
        assert!((p[(1, 0)] - c64(h, h)).norm() < 1e-15);
        assert!((p[(2, 0)] - c64(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_products() {
        let i = ComplexMatrix::identity(3);
        let p = sym_product(&[&i, &i, &i]).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::identity(10)) < 1e-15);
        assert!(
            asym_product(&[&i, &i])
                .unwrap()
                .max_abs_diff(&ComplexMatrix::identity(3))
                < 1e-15
        );
    }

    #[test]
    fn averaged_of_equal_factors_is_kron() {
        let a = pseudo_random(3, 1);
        let avg = averaged_tensor(&[&a, &a]).unwrap();
        assert!(avg.max_abs_diff(&kron(&[&a, &a]).unwrap()) < 1e-15);
    }

    #[test]
    fn averaged_displayed_4x4() {
        let a = pseudo_random(2, 2);
        let b = pseudo_random(2, 3);
        let avg = averaged_tensor(&[&a, &b]).unwrap();
        let (a11, a12, a21, a22) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
        let (b11, b12, b21, b22) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
        let rows = [
            [
                2.0 * a11 * b11,
                a11 * b12 + b11 * a12,
                a12 * b11 + b12 * a11,
                2.0 * a12 * b12,
            ],
            [
                a11 * b21 + b11 * a21,
                a11 * b22 + b11 * a22,
                a12 * b21 + b12 * a21,
                a12 * b22 + b12 * a22,
            ],
            [
                a21 * b11 + b21 * a11,
                a21 * b12 + b21 * a12,
                a22 * b11 + b22 * a11,
                a22 * b12 + b22 * a12,
            ],
            [
                2.0 * a21 * b21,
                a21 * b22 + b21 * a22,
                a22 * b21 + b22 * a21,
                2.0 * a22 * b22,
            ],
        ];
        for (i, row) in rows.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                assert!((avg[(i, j)] - z * 0.5).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn averaged_commutes_with_symmetrizer() {
        let avg = averaged_tensor(&[pseudo_random(3, 4), pseudo_random(3, 5)]).unwrap();
        let s = symmetrizer(3, 2).unwrap();
        let lhs = s.matmul(&avg).unwrap();
        let rhs = avg.matmul(&s).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn sparse_route_matches_dense_route() {
        for (d, n, seed) in [(2, 2, 10), (3, 2, 11), (3, 3, 12), (2, 4, 13)] {
            let fs: Vec<ComplexMatrix> = (0..n).map(|k| pseudo_random(d, seed + k as u64)).collect();
            for sym in [Symmetry::Symmetric, Symmetry::Antisymmetric] {
                let dense = product_via_embedding(&fs, sym).unwrap();
                let sparse = match sym {
                    Symmetry::Symmetric => sym_product(&fs).unwrap(),
                    Symmetry::Antisymmetric => asym_product(&fs).unwrap(),
                };
                assert!(dense.max_abs_diff(&sparse) < 1e-13, "d={d} n={n} {sym:?}");
            }
        }
    }

    #[test]
    fn permutation_invariance_is_exact() {
        let a = pseudo_random(3, 20);
        let b = pseudo_random(3, 21);
        assert_eq!(sym_product(&[&a, &b]).unwrap(), sym_product(&[&b, &a]).unwrap());
        let c = pseudo_random(3, 22);
        assert_eq!(sym_product(&[&a, &b, &c]).unwrap(), sym_product(&[&c, &a, &b]).unwrap());
    }

    #[test]
    fn block_decomposition_of_identity() {
        let i = ComplexMatrix::identity(3);
        let blocks = block_decompose(&i, &i).unwrap();
        assert!(blocks.sym.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-15);
        assert!(blocks.asym.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        assert!(blocks.residual < 1e-15);
    }

    #[test]
    fn block_residual_vanishes() {
        let blocks = block_decompose(&pseudo_random(3, 30), &pseudo_random(3, 31)).unwrap();
        assert!(blocks.residual < 1e-13);
    }

    #[test]
    fn wedge_of_rank_one_projection_vanishes() {
        let p = r(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        assert_eq!(asym_product(&[&p, &p]).unwrap().max_abs(), 0.0);
        let anti = antisymmetrizer(3, 2).unwrap();
        assert!(anti.matmul(&kron(&[&p, &p]).unwrap()).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn request_validation() {
        let s = OperatorSpec::shift();
        assert!(ProductRequest::new(vec![s.clone()], Flavor::Symmetric, 3).is_err());
        assert!(ProductRequest::new(vec![s.clone(); 7], Flavor::Symmetric, 2).is_err());
        let req = ProductRequest::new(vec![s.clone(), s], Flavor::Symmetric, 3).unwrap();
        assert_eq!(req.evaluate().unwrap().rows(), 6);
        let bad = [ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(sym_product(&bad).is_err());
    }
}
