//! The shift and its adjoint against a diagonal operator `M = diag(μ_0, μ_1, ...)`.
//!
//! Coefficient arrays describe `v = 2 Σ_{i ≤ j} a_{i,j} e_i ⊙ e_j`; equations are
//! indexed by the coefficient of `e_k ⊙ e_ℓ`, `k ≤ ℓ`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::registry::Ctx;
use super::sample;
use super::{scale, ReportHeader, Trial, VerifyReport};
use crate::basis::{embedded_basis_vector, MultiIndex, Symmetry, TensorBasis};
use crate::error::{Error, Result};
use crate::matrix::{c64, vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::operator::OperatorSpec;
use crate::product::{project, sym_product};
use crate::spectral::{hermitian_decompose, operator_norm};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn sup(mu: &[C64]) -> f64 {
    mu.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Norm of `e_i ⊙ e_j`.
fn pair_norm(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        FRAC_1_SQRT_2
    }
}

/// Coefficients `a_{k,ℓ}`, `0 ≤ k ≤ ℓ ≤ K`, of a candidate kernel vector of `S ⊙ M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCoefficients {
    pub k_max: usize,
    /// `rows[k][ℓ - k] = a_{k,ℓ}`.
    pub rows: Vec<Vec<C64>>,
    /// `sqrt(‖M‖ / δ)`.
    pub c: f64,
    pub delta: f64,
    /// `Some(i)` when `μ_i = 0` and the vector is `e_i ⊙ e_i`.
    pub trivial: Option<usize>,
}

impl KernelCoefficients {
    fn zeros(k_max: usize) -> Self {
        Self {
            k_max,
            rows: (0..=k_max).map(|k| vec![ZERO; k_max + 1 - k]).collect(),
            c: 0.0,
            delta: 0.0,
            trivial: None,
        }
    }

    /// `a_{k,ℓ}` for `k ≤ ℓ ≤ K`, zero outside the stored range.
    pub fn get(&self, k: usize, l: usize) -> C64 {
        if k <= l && l <= self.k_max {
            self.rows[k][l - k]
        } else {
            ZERO
        }
    }

    fn set(&mut self, k: usize, l: usize, value: C64) {
        if l <= self.k_max {
            self.rows[k][l - k] = value;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|z| *z == ZERO)
    }

    /// Largest `|a_{k,k+2r}|² (k+r)³ / C²` over stored `k ≥ 1`; below 1 means the decay bound holds strictly.
    pub fn decay_ratio(&self) -> f64 {
        let c2 = self.c * self.c;
        let mut worst: f64 = 0.0;
        for k in 1..=self.k_max {
            for l in (k..=self.k_max).step_by(2) {
                let r = (l - k) / 2;
                worst = worst.max(self.get(k, l).norm_sqr() * ((k + r) as f64).powi(3) / c2);
            }
        }
        worst
    }

    /// Largest violation of the structural rules: zero first row, zero odd offsets from
    /// row 1 on, and `|a_{k,k}|², |a_{k-1,k+1}|² < (k+1)^{-3}`. Negative when all hold.
    pub fn structure_margin(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for l in 0..=self.k_max {
            worst = worst.max(self.get(0, l).norm());
        }
        for k in 1..=self.k_max {
            for l in (k + 1..=self.k_max).step_by(2) {
                worst = worst.max(self.get(k, l).norm());
            }
            let cap = 1.0 / ((k + 1) as f64).powi(3);
            worst = worst.max(self.get(k, k).norm_sqr() - cap);
            if k < self.k_max {
                worst = worst.max(self.get(k - 1, k + 1).norm_sqr() - cap);
            }
        }
        worst
    }
}

/// Builds the coefficient array in four steps: zero first row, zero odd offsets,
/// the pair `(2a_{k,k}, a_{k-1,k+1}) = t_k (−μ_{k+1}, μ_k)/‖(μ_k, μ_{k+1})‖` with
/// `t_k = c (k+1)^{-3/2}`, and `a_{k-1,k+1+2s} = −a_{k,k+2s} μ_k / μ_{k+1+2s}`.
pub fn kernel_vector_sm(mu: &[C64], k_max: usize, c: f64) -> Result<KernelCoefficients> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidArgument(format!("scale c must lie in (0, 1), got {c}")));
    }
    let prefix = &mu[..mu.len().min(k_max + 2)];
    if let Some(i) = prefix.iter().position(|z| *z == ZERO) {
        if i > k_max {
            return Err(Error::InvalidArgument(format!(
                "μ_{i} = 0 lies beyond the truncation degree {k_max}"
            )));
        }
        let mut out = KernelCoefficients::zeros(k_max);
        out.set(i, i, c64(0.5, 0.0));
        out.trivial = Some(i);
        return Ok(out);
    }
    if mu.len() < k_max + 2 {
        return Err(Error::InvalidArgument(format!(
            "need μ_0..μ_{} for truncation degree {k_max}, got {} values",
            k_max + 1,
            mu.len()
        )));
    }
    let mut out = KernelCoefficients::zeros(k_max);
    out.delta = prefix.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    out.c = (sup(mu) / out.delta).sqrt();
    for k in 2..=k_max {
        let t = c / ((k + 1) as f64).powf(1.5);
        let len = (mu[k].norm_sqr() + mu[k + 1].norm_sqr()).sqrt();
        out.set(k, k, -mu[k + 1] * (t / len) * 0.5);
        out.set(k - 1, k + 1, mu[k] * (t / len));
    }
    for m in (1..k_max).rev() {
        let mut r = 2;
        while m + 2 * r <= k_max {
            let l = m + 2 * r;
            let value = -out.get(m + 1, l - 1) * mu[m + 1] / mu[l];
            out.set(m, l, value);
            r += 1;
        }
    }
    Ok(out)
}

/// Coefficient of `e_k ⊙ e_ℓ` in `(S ⊙ M) v` from the case-by-case expansion.
fn kernel_equation(a: &KernelCoefficients, mu: &[C64], k: usize, l: usize) -> C64 {
    match (k, l) {
        (0, 0) => ZERO,
        (0, 1) => mu[0] * a.get(0, 0) * 2.0,
        (0, _) => mu[0] * a.get(0, l - 1),
        _ if k == l => mu[k] * a.get(k - 1, k),
        _ if l == k + 1 => mu[k] * a.get(k, k) * 2.0 + mu[k + 1] * a.get(k - 1, k + 1),
        _ => mu[k] * a.get(k, l - 1) + mu[l] * a.get(k - 1, l),
    }
}

/// Residual of every kernel equation with `ℓ ≤ K`, as `((k, ℓ), value)`.
pub fn kernel_equation_residuals(a: &KernelCoefficients, mu: &[C64]) -> Vec<((usize, usize), C64)> {
    let mut out = Vec::new();
    for l in 0..=a.k_max {
        for k in 0..=l {
            out.push(((k, l), kernel_equation(a, mu, k, l)));
        }
    }
    out.sort_by_key(|&(kl, _)| kl);
    out
}

/// The same coefficients from the matrix form `v ↦ (S X M + M X S^T)/2`, where `X`
/// is the symmetric coefficient matrix of `v` in the product basis.
fn kernel_image_via_matrices(a: &KernelCoefficients, mu: &[C64]) -> Result<Vec<((usize, usize), C64)>> {
    let n = a.k_max + 2;
    let mut x = ComplexMatrix::zeros(n, n);
    for i in 0..=a.k_max {
        for j in i..=a.k_max {
            if i == j {
                x[(i, i)] = a.get(i, i) * 2.0;
            } else {
                x[(i, j)] = a.get(i, j);
                x[(j, i)] = a.get(i, j);
            }
        }
    }
    let s = OperatorSpec::shift().materialize(n)?;
    // μ_{K+1} only reaches degree K + 1, which is not compared.
    let weights: Vec<C64> = (0..n).map(|i| mu.get(i).copied().unwrap_or(ZERO)).collect();
    let m = ComplexMatrix::from_diag(&weights);
    let y = (&s.matmul(&x)?.matmul(&m)? + &m.matmul(&x)?.matmul(&s.transpose())?).scale_real(0.5);
    let mut out = Vec::new();
    for k in 0..=a.k_max {
        for l in k..=a.k_max {
            out.push(((k, l), if k == l { y[(k, k)] } else { y[(k, l)] * 2.0 }));
        }
    }
    Ok(out)
}

/// The eigenvalue equations of `S ⊙ M` truncated at degree `K`, in unknowns `a_{k,ℓ}`.
#[derive(Debug, Clone)]
pub struct PointSpectrumSystem {
    pub k_max: usize,
    pub lambda: C64,
    /// `E[(k,ℓ),(i,j)]`: contribution of `a_{i,j}` to the coefficient of `e_k ⊙ e_ℓ` in
    /// `(S ⊙ M) v`; rows and columns in lexicographic `(k, ℓ)` order.
    pub coefficients: ComplexMatrix,
    /// Largest gap between `E` and the case-by-case expansion.
    pub expansion_deviation: f64,
    /// Largest entry of `E` on or above the diagonal.
    pub upper_part: f64,
    /// Forward-substitution solution of `(E − 2λ) a = 0`.
    pub solution: Vec<C64>,
}

fn expansion_matrix(mu: &[C64], n: usize) -> ComplexMatrix {
    let basis: Vec<(usize, usize)> = (0..n).flat_map(|k| (k..n).map(move |l| (k, l))).collect();
    let pos = |k: usize, l: usize| basis.iter().position(|&p| p == (k, l));
    let mut e = ComplexMatrix::zeros(basis.len(), basis.len());
    for (row, &(k, l)) in basis.iter().enumerate() {
        let mut add = |i: usize, j: usize, v: C64| {
            if let Some(col) = pos(i, j) {
                e[(row, col)] += v;
            }
        };
        match (k, l) {
            (0, 0) => {}
            (0, 1) => add(0, 0, mu[0] * 2.0),
            (0, _) => add(0, l - 1, mu[0]),
            _ if k == l => add(k - 1, k, mu[k]),
            _ if l == k + 1 => {
                add(k, k, mu[k] * 2.0);
                add(k - 1, k + 1, mu[k + 1]);
            }
            _ => {
                add(k, l - 1, mu[k]);
                add(k - 1, l, mu[l]);
            }
        }
    }
    e
}

/// Sets up `(S ⊙ M − λ) v = 0` on degrees `≤ K` from the compression of `S ⊙ M`.
pub fn point_spectrum_system(mu: &[C64], lambda: C64, k_max: usize) -> Result<PointSpectrumSystem> {
    let n = k_max + 1;
    if mu.len() < n {
        return Err(Error::InvalidArgument(format!(
            "need {n} diagonal values, got {}",
            mu.len()
        )));
    }
    let s = OperatorSpec::shift().materialize(n)?;
    let m = ComplexMatrix::from_diag(&mu[..n]);
    let t = sym_product(&[&s, &m])?;
    let basis = TensorBasis::symmetric(n, 2)?;
    let norms: Vec<f64> = basis
        .indices()
        .iter()
        .map(|idx| pair_norm(idx.entries()[0], idx.entries()[1]))
        .collect();
    let dim = basis.len();
    let e = ComplexMatrix::from_fn(dim, dim, |r, c| t[(r, c)] * (2.0 * norms[c] / norms[r]));
    let expansion_deviation = e.max_abs_diff(&expansion_matrix(mu, n));
    let mut upper_part: f64 = 0.0;
    for r in 0..dim {
        for c in r..dim {
            upper_part = upper_part.max(e[(r, c)].norm());
        }
    }
    // Row p reads E[p, <p] a_{<p} − 2λ a_p = 0.
    let pivot = -lambda * 2.0;
    let mut solution = vec![ZERO; dim];
    for p in 0..dim {
        let mut acc = ZERO;
        for q in 0..p {
            acc += e[(p, q)] * solution[q];
        }
        solution[p] = -acc / pivot;
    }
    Ok(PointSpectrumSystem {
        k_max,
        lambda,
        coefficients: e,
        expansion_deviation,
        upper_part,
        solution,
    })
}

fn point_spectrum_trial(mu: &[C64], lambda: C64, k_max: usize, tol: f64, mut trial: Trial) -> Result<Trial> {
    if lambda == ZERO {
        return Err(Error::InvalidArgument("λ must be nonzero".into()));
    }
    let sys = point_spectrum_system(mu, lambda, k_max)?;
    let largest = sys.solution.iter().map(|z| z.norm()).fold(0.0, f64::max);
    trial
        .check_le(
            "compression matches the expansion",
            sys.expansion_deviation,
            tol * scale(sup(mu)),
        )
        .check_le("system is triangular with pivot -2λ", sys.upper_part, 0.0)
        .check_le("all coefficients forced to zero", largest, 0.0)
        .min("min |pivot|", 2.0 * lambda.norm());
    Ok(trial)
}

/// Checks that `(S ⊙ M) v = λ v`, `λ ≠ 0`, admits only `v = 0` on degrees `≤ K`.
pub fn verify_point_spectrum_sm(mu: &[C64], lambda: C64, k_max: usize, tol: f64) -> Result<VerifyReport> {
    let header = ReportHeader::new(
        "thm-9.1c",
        "the eigenvalue equations of S ⊙ M force the zero solution for nonzero λ",
        0,
        tol,
    );
    Ok(header.finish(vec![point_spectrum_trial(
        mu,
        lambda,
        k_max,
        tol,
        Trial::new(format!("λ={lambda} K={k_max}")),
    )]))
}

/// `v = Σ_{j ≤ K} ρ^j e_0 ⊙ e_j`, `ρ = 2λ/μ_0`, with its eigen-residual for `S* ⊙ M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackshiftEigenvector {
    /// `ρ^j`, `j = 0..=K`.
    pub coefficients: Vec<C64>,
    /// `‖(S* ⊙ M) v − λ v‖ / ‖v‖`, computed.
    pub residual: f64,
    /// `|λ| |ρ|^K / (√2 ‖v‖)`, the exact value of the residual (0 for `K = 0` or `λ = 0`).
    pub exact_residual: f64,
    /// `|ρ|^K · 2‖M‖`.
    pub bound: f64,
    /// Floating-point slack allowed on top of `bound`.
    pub rounding: f64,
    pub norm: f64,
}

impl BackshiftEigenvector {
    pub fn within_bound(&self) -> bool {
        self.residual <= self.bound + self.rounding
    }
}

const ROUNDING_ULPS: f64 = 64.0;

pub fn backshift_eigenvector(mu: &[C64], lambda: C64, k_max: usize) -> Result<BackshiftEigenvector> {
    let n = k_max + 1;
    if mu.len() < n {
        return Err(Error::InvalidArgument(format!(
            "need {n} diagonal values, got {}",
            mu.len()
        )));
    }
    let mu0 = mu[0];
    let rho = if lambda == ZERO {
        ZERO
    } else if mu0 == ZERO || lambda.norm() >= mu0.norm() / 2.0 {
        return Err(Error::InvalidArgument(format!(
            "|λ| = {} is not below |μ_0|/2 = {}",
            lambda.norm(),
            mu0.norm() / 2.0
        )));
    } else {
        lambda * 2.0 / mu0
    };
    let mut coefficients = Vec::with_capacity(n);
    let mut p = ONE;
    for _ in 0..n {
        coefficients.push(p);
        p *= rho;
    }
    let basis = TensorBasis::symmetric(n, 2)?;
    let cols: Vec<_> = (0..n)
        .map(|j| embedded_basis_vector(&MultiIndex::symmetric(vec![0, j]).expect("sorted"), Symmetry::Symmetric))
        .collect();
    let s_adj = OperatorSpec::back_shift().materialize(n)?;
    let m = ComplexMatrix::from_diag(&mu[..n]);
    let t = project(&[&s_adj, &m], &basis.columns(), &cols)?;
    let x: Vec<C64> = coefficients
        .iter()
        .enumerate()
        .map(|(j, c)| c * pair_norm(0, j))
        .collect();
    let mut w = t.matvec(&x)?;
    for (j, xj) in x.iter().enumerate() {
        let row = basis.position_of(&[0, j]).expect("basis contains (0, j)");
        w[row] -= lambda * xj;
    }
    let norm = vec_norm(&x);
    let tail = rho.norm().powi(k_max as i32);
    let exact_residual = if k_max == 0 {
        0.0
    } else {
        lambda.norm() * tail * FRAC_1_SQRT_2 / norm
    };
    Ok(BackshiftEigenvector {
        coefficients,
        residual: vec_norm(&w) / norm,
        exact_residual,
        bound: tail * 2.0 * sup(mu),
        rounding: ROUNDING_ULPS * f64::EPSILON * sup(mu),
        norm,
    })
}

fn random_mu(rng: &mut impl Rng, len: usize, lo: f64) -> Vec<C64> {
    (0..len).map(|_| sample::annulus_value(rng, lo, 1.0)).collect()
}

/// `‖(S ⊙ M)_N‖` or `‖(S* ⊙ M)_N‖` on indices below `N`.
fn compressed_norm(mu: &[C64], adjoint: bool) -> Result<f64> {
    let n = mu.len();
    let s = if adjoint {
        OperatorSpec::back_shift()
    } else {
        OperatorSpec::shift()
    }
    .materialize(n)?;
    Ok(operator_norm(&sym_product(&[s, ComplexMatrix::from_diag(mu)])?, 1e-13)?.value)
}

fn norm_bound_trial(mu: &[C64], tol: f64, mut trial: Trial) -> Result<Trial> {
    let n = mu.len();
    let m = sup(mu);
    let s = tol * scale(m);
    let forward = compressed_norm(mu, false)?;
    let backward = compressed_norm(mu, true)?;
    // (S ⊙ M)(e_i ⊙ e_i) = μ_i e_i ⊙ e_{i+1} needs i + 1 < N; the adjoint needs i ≥ 1.
    let fwd_lower = sup(&mu[..n - 1]) * FRAC_1_SQRT_2;
    let bwd_lower = sup(&mu[1..]) * FRAC_1_SQRT_2;
    trial
        .check_le("|S ⊙ M| >= max|μ_i|/sqrt2", fwd_lower, forward + s)
        .check_le("|S ⊙ M| <= |M|", forward, m + s)
        .check_le("|S* ⊙ M| >= max|μ_i|/sqrt2", bwd_lower, backward + s)
        .check_le("|S* ⊙ M| <= |M|", backward, m + s);
    Ok(trial)
}

fn norm_witnesses(tol: f64) -> Vec<Result<Trial>> {
    let delta0 = |n: usize| -> Vec<C64> { (0..n).map(|i| if i == 0 { ONE } else { ZERO }).collect() };
    let lower = (|| {
        let mut trial = Trial::new("witness: M = diag(1, 0, 0, ...), N = 8");
        let mu = delta0(8);
        trial
            .check_le(
                "|S ⊙ M| = 1/sqrt2",
                (compressed_norm(&mu, false)? - FRAC_1_SQRT_2).abs(),
                tol,
            )
            .check_le(
                "|S* ⊙ M| = 1/sqrt2",
                (compressed_norm(&mu, true)? - FRAC_1_SQRT_2).abs(),
                tol,
            );
        Ok(trial)
    })();
    let upper = (|| {
        let mut trial = Trial::new("witness: M = I, compressions N = 4, 8, 16");
        let mut last = 0.0;
        for n in [4, 8, 16] {
            let v = compressed_norm(&vec![ONE; n], false)?;
            trial.check_le("compressions increase towards 1", last, v + tol);
            trial.check_le("compressions bounded by 1", v, 1.0 + tol);
            last = v;
        }
        trial.max("|(S ⊙ I)_16|", last);
        Ok(trial)
    })();
    vec![lower, upper]
}

pub(crate) fn shift_diagonal_norm(ctx: &Ctx) -> Result<VerifyReport> {
    let max_n = ctx.dim.unwrap_or(12).max(2);
    let random = ctx.random(|t, rng| {
        let n = rng.random_range(2..=max_n);
        let mu = sample::diagonal_values(rng, n);
        norm_bound_trial(&mu, ctx.tol, Trial::random(ctx.seed, t, format!("N={n}")))
    });
    Ok(ctx.finish(norm_witnesses(ctx.tol), random))
}

/// Smallest singular value of `S ⊙ I` from degree `k` to degree `k + 1` of the symmetric square.
fn graded_injectivity(k: usize) -> Result<f64> {
    let n = k + 2;
    let s = OperatorSpec::shift().materialize(n)?;
    let id = ComplexMatrix::identity(n);
    let vecs = |deg: usize| -> Vec<_> {
        (0..=deg / 2)
            .map(|i| {
                embedded_basis_vector(
                    &MultiIndex::symmetric(vec![i, deg - i]).expect("sorted"),
                    Symmetry::Symmetric,
                )
            })
            .collect()
    };
    let t = project(&[&s, &id], &vecs(k + 1), &vecs(k))?;
    let eig = hermitian_decompose(&t.adjoint().matmul(&t)?, 1e-10)?;
    Ok(eig.values.first().copied().unwrap_or(0.0).max(0.0).sqrt())
}

fn kernel_trial(mu: &[C64], k_max: usize, c: f64, tol: f64, mut trial: Trial) -> Result<Trial> {
    let a = kernel_vector_sm(mu, k_max, c)?;
    let residuals = kernel_equation_residuals(&a, mu);
    let dense = kernel_image_via_matrices(&a, mu)?;
    let route_gap = residuals
        .iter()
        .zip(&dense)
        .map(|((p, x), (q, y))| if p == q { (x - y).norm() } else { f64::INFINITY })
        .fold(0.0, f64::max);
    let row_one = residuals
        .iter()
        .filter(|((k, _), _)| *k == 1)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    let other = residuals
        .iter()
        .filter(|((k, _), _)| *k != 1)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    let worst = row_one.max(other);
    trial
        .check_le("interior kernel equations vanish", worst, tol)
        .check_true("coefficients not all zero", !a.is_zero())
        .check_le("expansion agrees with the matrix form", route_gap, tol * scale(sup(mu)))
        .max("max kernel residual, row k=1", row_one)
        .max("max kernel residual, rows k!=1", other);
    if a.trivial.is_none() {
        let ratio = a.decay_ratio();
        trial
            .check_le("step rules and pair bounds", a.structure_margin(), 0.0)
            .check("decay bound holds strictly", 1.0 - ratio - f64::EPSILON)
            .max("max decay ratio", ratio);
    }
    Ok(trial)
}

pub(crate) fn shift_diagonal_kernel(ctx: &Ctx) -> Result<VerifyReport> {
    let k_max = ctx.k.unwrap_or(60);
    let c = 0.5;
    let tol = ctx.tol;
    let mut fixed = vec![
        kernel_trial(&vec![ONE; 42], 40, c, tol, Trial::new("witness: μ_i = 1, K=40")),
        kernel_trial(
            &[ONE, c64(0.5, 0.0), ZERO, c64(0.3, 0.2)],
            3,
            c,
            tol,
            Trial::new("witness: μ_2 = 0, kernel vector e_2 ⊙ e_2"),
        ),
    ];
    fixed.push((|| {
        let mut trial = Trial::new("observation: S ⊙ I on degrees 0..=20");
        let smallest = (0..=20).map(graded_injectivity).collect::<Result<Vec<_>>>()?;
        trial.min(
            "min singular value of S ⊙ I between consecutive degrees",
            smallest.into_iter().fold(f64::INFINITY, f64::min),
        );
        Ok(trial)
    })());
    let random = ctx.random(|t, rng| {
        let mu = random_mu(rng, k_max + 2, 0.1);
        kernel_trial(
            &mu,
            k_max,
            c,
            tol,
            Trial::random(ctx.seed, t, format!("|μ_i| in [0.1, 1], K={k_max}")),
        )
    });
    Ok(ctx.finish(fixed, random))
}

pub(crate) fn shift_diagonal_point_spectrum(ctx: &Ctx) -> Result<VerifyReport> {
    let k_max = ctx.k.unwrap_or(30);
    let fixed = vec![
        point_spectrum_trial(
            &vec![ONE; k_max + 1],
            c64(0.3, 0.0),
            k_max,
            ctx.tol,
            Trial::new("witness: μ_i = 1, λ = 0.3"),
        ),
        point_spectrum_trial(
            &[ONE; 3],
            c64(1.0, 0.0),
            2,
            ctx.tol,
            Trial::new("witness: μ_i = 1, λ = 1, K=2"),
        ),
    ];
    let random = ctx.random(|t, rng| {
        let mu = random_mu(rng, k_max + 1, 0.1);
        let lambda = sample::complex_normal(rng);
        point_spectrum_trial(
            &mu,
            lambda,
            k_max,
            ctx.tol,
            Trial::random(ctx.seed, t, format!("K={k_max}")),
        )
    });
    Ok(ctx.finish(fixed, random))
}

fn backshift_trial(mu: &[C64], lambda: C64, k_max: usize, tol: f64, mut trial: Trial) -> Result<Trial> {
    let v = backshift_eigenvector(mu, lambda, k_max)?;
    trial
        .check_le("residual within the geometric tail", v.residual, v.bound + v.rounding)
        .check_le(
            "residual equals |λ||ρ|^K/(sqrt2 |v|)",
            (v.residual - v.exact_residual).abs(),
            v.rounding.max(tol * v.exact_residual),
        )
        .max("max residual", v.residual);
    Ok(trial)
}

pub(crate) fn backshift_diagonal(ctx: &Ctx) -> Result<VerifyReport> {
    let k_max = ctx.k.unwrap_or(60);
    let tol = ctx.tol;
    let mut fixed = vec![
        (|| {
            let mut trial = Trial::new("witness: λ = 0");
            let mu = vec![c64(0.7, -0.2); k_max + 1];
            let v = backshift_eigenvector(&mu, ZERO, k_max)?;
            trial.check_le("residual exactly 0", v.residual, 0.0);
            Ok(trial)
        })(),
        (|| {
            let mut trial = Trial::new("witness: μ_0 = 0, λ = 0");
            let mut mu = vec![ONE; k_max + 1];
            mu[0] = ZERO;
            trial.check_le(
                "residual exactly 0",
                backshift_eigenvector(&mu, ZERO, k_max)?.residual,
                0.0,
            );
            Ok(trial)
        })(),
        backshift_trial(
            &vec![ONE; k_max + 1],
            c64(0.25, 0.0),
            k_max,
            tol,
            Trial::new("witness: μ_0 = 1, λ = 0.25"),
        ),
        {
            let mut trial = Trial::new("witness: |λ| = |μ_0|/2 rejected");
            trial.check_true("rejected", backshift_eigenvector(&[ONE; 4], c64(0.5, 0.0), 3).is_err());
            // On the boundary circle the partial sums grow like sqrt(1 + K/2).
            let boundary = (1.0 + k_max as f64 / 2.0).sqrt();
            trial.max("partial-sum norm on |λ| = |μ_0|/2", boundary);
            Ok(trial)
        },
        norm_bound_trial(
            &random_mu(&mut sample::trial_rng(ctx.seed, usize::MAX), 10, 0.0),
            tol,
            Trial::new("norm bounds, N=10"),
        ),
    ];
    fixed.extend(norm_witnesses(tol));
    let random = ctx.random(|t, rng| {
        let mut mu = sample::vector(rng, k_max + 1);
        mu[0] = sample::annulus_value(rng, 0.1, 1.0);
        let ratio = rng.random_range(0.0..=0.45);
        let lambda = C64::from_polar(ratio * mu[0].norm(), rng.random_range(0.0..std::f64::consts::TAU));
        backshift_trial(
            &mu,
            lambda,
            k_max,
            tol,
            Trial::random(ctx.seed, t, format!("|λ|/|μ_0|={ratio:.3} K={k_max}")),
        )
    });
    Ok(ctx.finish(fixed, random))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize) -> Vec<C64> {
        vec![ONE; n]
    }

    #[test]
    fn equations_agree_with_matrix_form() {
        let mut rng = sample::trial_rng(5, 0);
        let mu = random_mu(&mut rng, 14, 0.1);
        let a = kernel_vector_sm(&mu, 12, 0.5).unwrap();
        let lhs = kernel_equation_residuals(&a, &mu);
        let rhs = kernel_image_via_matrices(&a, &mu).unwrap();
        for ((p, x), (q, y)) in lhs.iter().zip(&rhs) {
            assert_eq!(p, q);
            assert!((x - y).norm() < 1e-14, "{p:?}: {x} vs {y}");
        }
    }

    #[test]
    fn construction_leaves_only_row_one_unbalanced() {
        let mut rng = sample::trial_rng(9, 0);
        let mu = random_mu(&mut rng, 22, 0.1);
        let a = kernel_vector_sm(&mu, 20, 0.5).unwrap();
        assert!(a.structure_margin() <= 0.0);
        for ((k, l), r) in kernel_equation_residuals(&a, &mu) {
            if k == 1 && l >= 4 && l % 2 == 0 {
                let expected = mu[1] * a.get(1, l - 1);
                assert!((r - expected).norm() < 1e-15);
                assert!(r.norm() > 0.0);
            } else {
                assert!(r.norm() < 1e-15, "({k}, {l}): {r}");
            }
        }
    }

    #[test]
    fn zero_weight_gives_exact_kernel_vector() {
        let mu = [ONE, ZERO, ONE];
        let a = kernel_vector_sm(&mu, 1, 0.5).unwrap();
        assert_eq!(a.trivial, Some(1));
        assert!(kernel_equation_residuals(&a, &mu).iter().all(|(_, r)| *r == ZERO));
        assert!(kernel_image_via_matrices(&a, &[ONE, ZERO, ONE])
            .unwrap()
            .iter()
            .all(|(_, r)| *r == ZERO));
    }

    #[test]
    fn kernel_rejects_short_prefix_and_bad_scale() {
        assert!(kernel_vector_sm(&ones(5), 4, 0.5).is_err());
        assert!(kernel_vector_sm(&ones(6), 4, 1.0).is_err());
        assert!(kernel_vector_sm(&ones(6), 4, 0.5).is_ok());
    }

    #[test]
    fn constant_weights_meet_the_decay_bound() {
        let a = kernel_vector_sm(&ones(42), 40, 0.5).unwrap();
        assert!((a.c - 1.0).abs() < 1e-15);
        assert!(a.decay_ratio() < 1.0);
    }

    #[test]
    fn identity_shift_is_injective_on_each_degree() {
        for k in 0..=8 {
            assert!(graded_injectivity(k).unwrap() > 0.1);
        }
    }

    #[test]
    fn point_spectrum_system_is_triangular() {
        let sys = point_spectrum_system(&ones(8), c64(0.3, 0.0), 7).unwrap();
        assert!(sys.expansion_deviation < 1e-14);
        assert_eq!(sys.upper_part, 0.0);
        assert!(sys.solution.iter().all(|z| *z == ZERO));
    }

    #[test]
    fn backshift_residual_matches_closed_form() {
        let v = backshift_eigenvector(&ones(61), c64(0.25, 0.0), 60).unwrap();
        assert!(v.within_bound());
        let rho: f64 = 0.5;
        let norm = (1.0 + (1..=60).map(|j| rho.powi(2 * j) / 2.0).sum::<f64>()).sqrt();
        assert!((v.norm - norm).abs() < 1e-15);
        assert!(backshift_eigenvector(&ones(5), c64(0.5, 0.0), 4).is_err());
        let zero = backshift_eigenvector(&ones(5), ZERO, 4).unwrap();
        assert_eq!(zero.residual, 0.0);
    }

    #[test]
    fn witness_norms() {
        let mut mu = vec![ZERO; 6];
        mu[0] = ONE;
        assert!((compressed_norm(&mu, false).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((compressed_norm(&mu, true).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
    }
}
