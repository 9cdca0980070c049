//! Symbolic operators on `ℓ²` and their finite compressions.

use std::borrow::Borrow;

use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::{c64, ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    Dense(ComplexMatrix),
    /// `e_i ↦ μ_i e_i`
    Diagonal(Vec<C64>),
    /// Unilateral shift `e_i ↦ e_{i+1}`.
    Shift,
    /// Backward shift `e_i ↦ e_{i-1}`, `e_0 ↦ 0`.
    BackShift,
    /// `e_i ↦ α_i e_{i+1}`
    WeightedShift(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub label: String,
}

fn check_finite(values: &[C64]) -> Result<()> {
    match values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(i) => Err(Error::NonFinite { row: i, col: 0 }),
        None => Ok(()),
    }
}

impl OperatorSpec {
    pub fn dense(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "dense operator must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self {
            kind: OperatorKind::Dense(m),
            label: "dense".into(),
        })
    }

    pub fn diagonal(values: Vec<C64>) -> Result<Self> {
        check_finite(&values)?;
        Ok(Self {
            kind: OperatorKind::Diagonal(values),
            label: "diagonal".into(),
        })
    }

    pub fn shift() -> Self {
        Self {
            kind: OperatorKind::Shift,
            label: "S".into(),
        }
    }

    pub fn back_shift() -> Self {
        Self {
            kind: OperatorKind::BackShift,
            label: "S*".into(),
        }
    }

    pub fn weighted_shift(weights: Vec<C64>) -> Result<Self> {
        check_finite(&weights)?;
        Ok(Self {
            kind: OperatorKind::WeightedShift(weights),
            label: "weighted shift".into(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Compression `P_N T P_N` to the first `n` basis vectors.
    pub fn materialize(&self, n: usize) -> Result<ComplexMatrix> {
        materialize(self, n)
    }
}

fn need(values: &[C64], n: usize, what: &str) -> Result<()> {
    if values.len() < n {
        return Err(Error::InvalidArgument(format!(
            "{what} supplies {} values, truncation needs {n}",
            values.len()
        )));
    }
    Ok(())
}

pub fn materialize(spec: &OperatorSpec, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation size must be at least 1".into()));
    }
    let one = c64(1.0, 0.0);
    match &spec.kind {
        OperatorKind::Dense(m) => {
            if m.rows() != n {
                return Err(Error::DimensionMismatch(format!(
                    "dense operator is {}x{}, truncation requested {n}",
                    m.rows(),
                    m.cols()
                )));
            }
            Ok(m.clone())
        }
        OperatorKind::Diagonal(mu) => {
            need(mu, n, "diagonal")?;
            Ok(ComplexMatrix::from_diag(&mu[..n]))
        }
        OperatorKind::Shift => {
            let mut m = ComplexMatrix::try_zeros(n, n)?;
            for i in 0..n - 1 {
                m[(i + 1, i)] = one;
            }
            Ok(m)
        }
        OperatorKind::BackShift => {
            let mut m = ComplexMatrix::try_zeros(n, n)?;
            for i in 0..n - 1 {
                m[(i, i + 1)] = one;
            }
            Ok(m)
        }
        OperatorKind::WeightedShift(alpha) => {
            need(alpha, n, "weighted shift")?;
            let mut m = ComplexMatrix::try_zeros(n, n)?;
            for i in 0..n - 1 {
                m[(i + 1, i)] = alpha[i];
            }
            Ok(m)
        }
    }
}

/// Kronecker product in slot order: the first factor acts on the most significant slot.
pub fn kron<M: Borrow<ComplexMatrix>>(factors: &[M]) -> Result<ComplexMatrix> {
    let Some((first, rest)) = factors.split_first() else {
        return Err(Error::InvalidArgument("kron of an empty list".into()));
    };
    let mut acc = first.borrow().clone();
    for f in rest {
        let b = f.borrow();
        let rows = acc.rows() * b.rows();
        let cols = acc.cols() * b.cols();
        if rows as u128 > limits::max_tensor_dim() || cols as u128 > limits::max_tensor_dim() {
            return Err(Error::SizeGuard {
                what: "Kronecker product dimension",
                requested: rows.max(cols) as u128,
                limit: limits::max_tensor_dim(),
            });
        }
        let mut out = ComplexMatrix::try_zeros(rows, cols)?;
        for i in 0..acc.rows() {
            for j in 0..acc.cols() {
                let a = acc[(i, j)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for k in 0..b.rows() {
                    for l in 0..b.cols() {
                        out[(i * b.rows() + k, j * b.cols() + l)] = a * b[(k, l)];
                    }
                }
            }
        }
        acc = out;
    }
    Ok(acc)
}

/// Entrywise complex conjugation of coordinates in the standard basis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Conjugation;

impl Conjugation {
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        v.iter().map(|z| z.conj()).collect()
    }

    /// `C A^* C`, which for entrywise conjugation is the plain transpose of `A`.
    pub fn conjugate_operator(&self, a: &ComplexMatrix) -> ComplexMatrix {
        a.transpose()
    }

    /// Whether `A = C A^* C` up to `tol` relative to `max(1, |A|_max)`.
    pub fn is_symmetric_operator(&self, a: &ComplexMatrix, tol: f64) -> bool {
        a.max_abs_diff(&self.conjugate_operator(a)) <= tol * a.max_abs().max(1.0)
    }
}
