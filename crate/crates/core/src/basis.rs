//! Orthonormal bases of symmetric and antisymmetric tensor powers.
//!
//! The full tensor power of `C^d` is indexed by slot tuples `(i_1, ..., i_n)`
//! flattened with the first slot most significant, which is the same order in
//! which [`kron`](crate::operator::kron) lays out its factors. Symmetric basis
//! vectors are labeled by non-decreasing tuples, antisymmetric ones by strictly
//! increasing tuples, both listed lexicographically.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::{c64, ComplexMatrix, C64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

/// A sorted tuple of basis indices labeling one basis vector of a tensor power.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    entries: Vec<usize>,
}

impl MultiIndex {
    /// Non-decreasing tuple.
    pub fn symmetric(entries: Vec<usize>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(format!("{entries:?} is not non-decreasing")));
        }
        Ok(Self { entries })
    }

    /// Strictly increasing tuple.
    pub fn antisymmetric(entries: Vec<usize>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "{entries:?} is not strictly increasing"
            )));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    /// Sum of the entries (the monomial degree when indices are exponents).
    pub fn total(&self) -> usize {
        self.entries.iter().sum()
    }

    /// Multiplicities `m_l` of the distinct entries, in increasing entry order.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries
            .iter()
            .chunk_by(|&&e| e)
            .into_iter()
            .map(|(_, g)| g.count())
            .collect()
    }
}

fn check_shape(d: usize, n: usize) -> Result<()> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "tensor power needs d >= 1 and n >= 1 (got d={d}, n={n})"
        )));
    }
    Ok(())
}

fn count_guard(count: Option<u128>) -> Result<usize> {
    match count {
        Some(c) if c <= usize::MAX as u128 => Ok(c as usize),
        _ => Err(Error::SizeGuard {
            what: "basis size",
            requested: count.unwrap_or(u128::MAX),
            limit: usize::MAX as u128,
        }),
    }
}

pub fn sym_dimension(d: usize, n: usize) -> Result<usize> {
    count_guard(
        (d as u128 + n as u128)
            .checked_sub(1)
            .and_then(|t| limits::binomial(t, n as u128)),
    )
}

pub fn asym_dimension(d: usize, n: usize) -> Result<usize> {
    count_guard(limits::binomial(d as u128, n as u128))
}

/// All non-decreasing `n`-tuples over `0..d`, lexicographically.
pub fn enumerate_sym_indices(d: usize, n: usize) -> Result<Vec<MultiIndex>> {
    check_shape(d, n)?;
    let count = sym_dimension(d, n)?;
    limits::check_dense(count, 1)?;
    let out: Vec<MultiIndex> = (0..d)
        .combinations_with_replacement(n)
        .map(|entries| MultiIndex { entries })
        .collect();
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

/// All strictly increasing `n`-tuples over `0..d`; empty when `n > d`.
pub fn enumerate_asym_indices(d: usize, n: usize) -> Result<Vec<MultiIndex>> {
    check_shape(d, n)?;
    let count = asym_dimension(d, n)?;
    limits::check_dense(count, 1)?;
    Ok((0..d).combinations(n).map(|entries| MultiIndex { entries }).collect())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Norm of the simple symmetric tensor `e_{i_1} ⊙ ... ⊙ e_{i_n}`: `sqrt(∏ m_l! / n!)`.
pub fn multiindex_norm(idx: &MultiIndex) -> f64 {
    let num: f64 = idx.multiplicities().into_iter().map(factorial).product();
    (num / factorial(idx.degree())).sqrt()
}

/// A permutation of `0..n`, acting on tensors by moving factor `k` to slot `images[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// All `n!` permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(|images| Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    /// `(self ∘ other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            images: other.images.iter().map(|&k| self.images[k]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (k, &p) in self.images.iter().enumerate() {
            images[p] = k;
        }
        Permutation { images }
    }

    pub fn sign(&self) -> f64 {
        let inversions = (0..self.len())
            .tuple_combinations()
            .filter(|&(i, j)| self.images[i] > self.images[j])
            .count();
        if inversions % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Flat index of a slot tuple, first slot most significant.
pub fn flat_index(slots: &[usize], d: usize) -> usize {
    slots.iter().fold(0, |acc, &i| acc * d + i)
}

pub fn slots_of(mut flat: usize, d: usize, n: usize) -> Vec<usize> {
    let mut slots = vec![0; n];
    for s in slots.iter_mut().rev() {
        *s = flat % d;
        flat /= d;
    }
    slots
}

fn permute_slots(perm: &Permutation, slots: &[usize]) -> Vec<usize> {
    let mut out = vec![0; slots.len()];
    for (k, &i) in slots.iter().enumerate() {
        out[perm.apply(k)] = i;
    }
    out
}

/// The unitary realizing `perm` on `(C^d)^{⊗n}`.
///
/// Factor `k` of a simple tensor lands in slot `perm(k)`, so
/// `permutation_matrix(π ∘ τ) = permutation_matrix(π) · permutation_matrix(τ)`.
pub fn permutation_matrix(perm: &Permutation, d: usize) -> Result<ComplexMatrix> {
    let n = perm.len();
    check_shape(d, n)?;
    let dim = limits::check_tensor_dim(d, n)?;
    let mut m = ComplexMatrix::try_zeros(dim, dim)?;
    for col in 0..dim {
        let row = flat_index(&permute_slots(perm, &slots_of(col, d, n)), d);
        m[(row, col)] = c64(1.0, 0.0);
    }
    Ok(m)
}

fn projector(d: usize, n: usize, signed: bool) -> Result<ComplexMatrix> {
    check_shape(d, n)?;
    limits::check_degree(n)?;
    let dim = limits::check_tensor_dim(d, n)?;
    let mut m = ComplexMatrix::try_zeros(dim, dim)?;
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let weight = 1.0 / perms.len() as f64;
    for col in 0..dim {
        let slots = slots_of(col, d, n);
        for p in &perms {
            let row = flat_index(&permute_slots(p, &slots), d);
            let s = if signed { p.sign() } else { 1.0 };
            m[(row, col)] += c64(s * weight, 0.0);
        }
    }
    Ok(m)
}

/// `(1/n!) Σ_π π̂`, the orthogonal projection onto the symmetric subspace.
pub fn symmetrizer(d: usize, n: usize) -> Result<ComplexMatrix> {
    projector(d, n, false)
}

/// `(1/n!) Σ_π sgn(π) π̂`, the orthogonal projection onto the antisymmetric subspace.
pub fn antisymmetrizer(d: usize, n: usize) -> Result<ComplexMatrix> {
    projector(d, n, true)
}

/// A unit vector of the full tensor power with few nonzero coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedVector {
    /// `(slot tuple, coefficient)` pairs with distinct slot tuples.
    pub terms: Vec<(Vec<usize>, f64)>,
}

/// Lexicographic successor of `v` among its distinct rearrangements.
fn next_arrangement(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn arrangement_sign(arr: &[usize]) -> f64 {
    let inversions = (0..arr.len())
        .tuple_combinations()
        .filter(|&(i, j)| arr[i] > arr[j])
        .count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Normalized image of `e_{i_1} ⊗ ... ⊗ e_{i_n}` under the (anti)symmetrizer.
pub fn embedded_basis_vector(idx: &MultiIndex, symmetry: Symmetry) -> EmbeddedVector {
    let mut arr = idx.entries().to_vec();
    let mut terms = Vec::new();
    loop {
        terms.push((arr.clone(), 1.0));
        if !next_arrangement(&mut arr) {
            break;
        }
    }
    let coeff = match symmetry {
        Symmetry::Symmetric => multiindex_norm(idx),
        Symmetry::Antisymmetric => 1.0 / factorial(idx.degree()).sqrt(),
    };
    for (slots, c) in &mut terms {
        *c = match symmetry {
            Symmetry::Symmetric => coeff,
            Symmetry::Antisymmetric => coeff * arrangement_sign(slots),
        };
    }
    EmbeddedVector { terms }
}

/// Enumerated orthonormal basis of a symmetric or antisymmetric tensor power.
#[derive(Debug, Clone)]
pub struct TensorBasis {
    d: usize,
    n: usize,
    symmetry: Symmetry,
    indices: Vec<MultiIndex>,
    /// Norms of the simple tensors `e_{i_1} ⊙ ... ⊙ e_{i_n}` (resp. `∧`).
    norms: Vec<f64>,
    lookup: HashMap<MultiIndex, usize>,
}

impl TensorBasis {
    pub fn new(d: usize, n: usize, symmetry: Symmetry) -> Result<Self> {
        let indices = match symmetry {
            Symmetry::Symmetric => enumerate_sym_indices(d, n)?,
            Symmetry::Antisymmetric => enumerate_asym_indices(d, n)?,
        };
        let norms = indices
            .iter()
            .map(|idx| match symmetry {
                Symmetry::Symmetric => multiindex_norm(idx),
                Symmetry::Antisymmetric => 1.0 / factorial(n).sqrt(),
            })
            .collect();
        let lookup = indices.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(Self {
            d,
            n,
            symmetry,
            indices,
            norms,
            lookup,
        })
    }

    pub fn symmetric(d: usize, n: usize) -> Result<Self> {
        Self::new(d, n, Symmetry::Symmetric)
    }

    pub fn antisymmetric(d: usize, n: usize) -> Result<Self> {
        Self::new(d, n, Symmetry::Antisymmetric)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn position(&self, idx: &MultiIndex) -> Option<usize> {
        self.lookup.get(idx).copied()
    }

    /// Position of the basis vector labeled by the sorted version of `entries`.
    pub fn position_of(&self, entries: &[usize]) -> Option<usize> {
        let mut sorted = entries.to_vec();
        sorted.sort_unstable();
        self.lookup.get(&MultiIndex { entries: sorted }).copied()
    }

    pub fn columns(&self) -> Vec<EmbeddedVector> {
        self.indices
            .iter()
            .map(|idx| embedded_basis_vector(idx, self.symmetry))
            .collect()
    }

    /// Dense isometry `Q` whose columns are the basis vectors inside `(C^d)^{⊗n}`.
    pub fn embedding(&self) -> Result<ComplexMatrix> {
        let dim = limits::check_tensor_dim(self.d, self.n)?;
        let mut q = ComplexMatrix::try_zeros(dim, self.len())?;
        for (j, col) in self.columns().into_iter().enumerate() {
            for (slots, c) in col.terms {
                q[(flat_index(&slots, self.d), j)] = c64(c, 0.0);
            }
        }
        Ok(q)
    }
}

pub fn embed_sym(d: usize, n: usize) -> Result<ComplexMatrix> {
    TensorBasis::symmetric(d, n)?.embedding()
}

pub fn embed_asym(d: usize, n: usize) -> Result<ComplexMatrix> {
    TensorBasis::antisymmetric(d, n)?.embedding()
}

fn simple_tensor_coordinates(vs: &[Vec<C64>], symmetry: Symmetry) -> Result<Vec<C64>> {
    let n = vs.len();
    let d = vs.first().map_or(0, Vec::len);
    if vs.iter().any(|v| v.len() != d) {
        return Err(Error::DimensionMismatch("vectors of unequal length".into()));
    }
    let basis = TensorBasis::new(d, n, symmetry)?;
    // Q^* S_n = Q^*, so the coordinates are inner products against the raw product tensor.
    Ok(basis
        .columns()
        .into_iter()
        .map(|col| {
            col.terms
                .iter()
                .map(|(slots, c)| {
                    let prod: C64 = slots.iter().zip(vs).map(|(&i, v)| v[i]).product();
                    prod * *c
                })
                .sum()
        })
        .collect())
}

/// Coordinates of `v_1 ⊙ ... ⊙ v_n` in the symmetric orthonormal basis.
pub fn sym_tensor_of_vectors(vs: &[Vec<C64>]) -> Result<Vec<C64>> {
    simple_tensor_coordinates(vs, Symmetry::Symmetric)
}

/// Coordinates of `v_1 ∧ ... ∧ v_n` in the antisymmetric orthonormal basis.
pub fn wedge_of_vectors(vs: &[Vec<C64>]) -> Result<Vec<C64>> {
    simple_tensor_coordinates(vs, Symmetry::Antisymmetric)
}

/// `v_1 ⊗ ... ⊗ v_n` as a flat vector of length `d^n`.
pub fn product_tensor(vs: &[Vec<C64>]) -> Result<Vec<C64>> {
    let d = vs.first().map_or(0, Vec::len);
    let dim = limits::check_tensor_dim(d, vs.len())?;
    Ok((0..dim)
        .map(|flat| slots_of(flat, d, vs.len()).iter().zip(vs).map(|(&i, v)| v[i]).product())
        .collect())
}

/// Numerical rank from the eigenvalues of a Hermitian projector-like matrix: its trace.
pub fn projector_rank(p: &ComplexMatrix) -> usize {
    let t = p.trace();
    debug_assert!(t.im.abs() < 1e-9);
    t.re.round().max(0.0) as usize
}

pub(crate) fn unit(d: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d];
    v[i] = c64(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuples(v: &[MultiIndex]) -> Vec<Vec<usize>> {
        v.iter().map(|m| m.entries().to_vec()).collect()
    }

    #[test]
    fn sym_indices_small() {
        assert_eq!(
            tuples(&enumerate_sym_indices(2, 2).unwrap()),
            vec![vec![0, 0], vec![0, 1], vec![1, 1]]
        );
        assert_eq!(tuples(&enumerate_sym_indices(1, 5).unwrap()), vec![vec![0; 5]]);
    }

    #[test]
    fn sym_indices_count_matches_brute_force() {
        // keep only sorted tuples among all 4^3
        let brute = (0..64)
            .map(|f| slots_of(f, 4, 3))
            .filter(|s| s.windows(2).all(|w| w[0] <= w[1]))
            .count();
        assert_eq!(brute, 20);
        assert_eq!(enumerate_sym_indices(4, 3).unwrap().len(), 20);
    }

    #[test]
    fn asym_indices() {
        assert_eq!(
            tuples(&enumerate_asym_indices(3, 2).unwrap()),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert!(enumerate_asym_indices(2, 3).unwrap().is_empty());
        let brute = (0..125)
            .map(|f| slots_of(f, 5, 3))
            .filter(|s| s.windows(2).all(|w| w[0] < w[1]))
            .count();
        assert_eq!(brute, 10);
        assert_eq!(enumerate_asym_indices(5, 3).unwrap().len(), 10);
    }

    #[test]
    fn degenerate_shapes_rejected() {
        assert!(enumerate_sym_indices(0, 2).is_err());
        assert!(enumerate_asym_indices(3, 0).is_err());
    }

    #[test]
    fn huge_counts_rejected() {
        assert!(matches!(
            enumerate_sym_indices(usize::MAX, 40),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn multiindex_norms() {
        let n00 = MultiIndex::symmetric(vec![0, 0]).unwrap();
        let n01 = MultiIndex::symmetric(vec![0, 1]).unwrap();
        let n001 = MultiIndex::symmetric(vec![0, 0, 1]).unwrap();
        assert!((multiindex_norm(&n00) - 1.0).abs() < 1e-15);
        assert!((multiindex_norm(&n01) - 0.5f64.sqrt()).abs() < 1e-15);
        // 3 distinct arrangements of (0,0,1) out of 3! orderings
        let arrangements = Permutation::all(3)
            .map(|p| permute_slots(&p, &[0, 0, 1]))
            .unique()
            .count();
        assert_eq!(arrangements, 3);
        // S_3 e_{001} has weight 1/3 on each arrangement, so its squared norm is 3 * (1/3)^2
        let expected = (arrangements as f64 * (1.0 / arrangements as f64).powi(2)).sqrt();
        assert!((multiindex_norm(&n001) - expected).abs() < 1e-15);
        assert!((multiindex_norm(&n001) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn multiindex_validation() {
        assert!(MultiIndex::symmetric(vec![1, 0]).is_err());
        assert!(MultiIndex::antisymmetric(vec![1, 1]).is_err());
        assert_eq!(
            MultiIndex::symmetric(vec![0, 0, 2, 2, 2]).unwrap().multiplicities(),
            vec![2, 3]
        );
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert_eq!(Permutation::new(vec![1, 2, 0]).unwrap().sign(), 1.0);
        assert_eq!(Permutation::new(vec![1, 0, 2]).unwrap().sign(), -1.0);
    }

    #[test]
    fn identity_and_swap_matrices() {
        let id = permutation_matrix(&Permutation::identity(2), 3).unwrap();
        assert_eq!(id, ComplexMatrix::identity(9));
        let swap = permutation_matrix(&Permutation::new(vec![1, 0]).unwrap(), 2).unwrap();
        let expected = ComplexMatrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(swap, expected);
    }

    #[test]
    fn permutation_matrices_are_a_homomorphism() {
        let perms: Vec<_> = Permutation::all(3).collect();
        for p in &perms {
            for t in &perms {
                let lhs = permutation_matrix(&p.compose(t), 2).unwrap();
                let rhs = &permutation_matrix(p, 2).unwrap() * &permutation_matrix(t, 2).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn projector_ranks() {
        let s2 = symmetrizer(2, 2).unwrap();
        let swap = permutation_matrix(&Permutation::new(vec![1, 0]).unwrap(), 2).unwrap();
        let half_sum = (&ComplexMatrix::identity(4) + &swap).scale_real(0.5);
        assert!(s2.max_abs_diff(&half_sum) < 1e-15);
        assert_eq!(projector_rank(&s2), 3);
        assert_eq!(projector_rank(&antisymmetrizer(2, 2).unwrap()), 1);

        let s3 = symmetrizer(3, 3).unwrap();
        let a3 = antisymmetrizer(3, 3).unwrap();
        assert_eq!(projector_rank(&s3), 10);
        assert_eq!(projector_rank(&a3), 1);
        assert!((&s3 * &a3).max_abs() < 1e-15);
    }

    #[test]
    fn embedding_columns_small() {
        let q = embed_sym(2, 2).unwrap();
        let r = 0.5f64.sqrt();
        let expected = ComplexMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, r, 0.0], &[0.0, r, 0.0], &[0.0, 0.0, 1.0]]);
        assert!(q.max_abs_diff(&expected) < 1e-15);
        assert!((&q.adjoint() * &q).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn asym_embedding_reproduces_antisymmetrizer() {
        let q = embed_asym(3, 2).unwrap();
        let qq = &q * &q.adjoint();
        assert!(qq.max_abs_diff(&antisymmetrizer(3, 2).unwrap()) < 1e-14);
    }

    #[test]
    fn orthogonal_pair_tensor() {
        let c = sym_tensor_of_vectors(&[unit(2, 0), unit(2, 1)]).unwrap();
        let r = 0.5f64.sqrt();
        assert!((c[0]).norm() < 1e-15 && (c[2]).norm() < 1e-15);
        assert!((c[1] - c64(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn wedge_of_equal_vectors_vanishes() {
        let v = vec![c64(0.3, -1.0), c64(2.0, 0.5), c64(-0.7, 0.1)];
        let w = wedge_of_vectors(&[v.clone(), v]).unwrap();
        assert!(w.iter().all(|z| z.norm() < 1e-15));
    }
}
