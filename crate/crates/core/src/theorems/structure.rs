use rand::seq::SliceRandom;
use rand::Rng;

use super::oracles;
use super::registry::Ctx;
use super::sample;
use super::{scale, Trial, VerifyReport};
use crate::basis::{
    antisymmetrizer, asym_dimension, enumerate_sym_indices, permutation_matrix, sym_dimension, sym_tensor_of_vectors,
    symmetrizer, unit, Permutation, TensorBasis,
};
use crate::error::Result;
use crate::matrix::{c64, inner, vec_norm, ComplexMatrix, C64, ZERO};
use crate::operator::{kron, Conjugation};
use crate::product::{asym_product, averaged_tensor, sym_product};
use crate::spectral::{hermitian_decompose, operator_norm};

fn norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(operator_norm(m, 1e-13)?.value)
}

fn add_scaled(acc: &mut [C64], v: &[C64], s: C64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += s * x;
    }
}

/// Orthonormal basis of the span of `vs` (modified Gram-Schmidt, dropping dependent vectors).
pub(crate) fn orthonormalize(vs: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let p = inner(&w, q);
                add_scaled(&mut w, q, -p);
            }
        }
        let n = vec_norm(&w);
        if n > 1e-10 * vec_norm(v).max(1e-300) {
            out.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    out
}

fn columns_matrix(cols: &[Vec<C64>]) -> ComplexMatrix {
    let rows = cols.first().map_or(0, Vec::len);
    ComplexMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

pub(crate) fn square_summable(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(1..=8);
        let decay = rng.random_bool(0.5);
        let mut trial = Trial::random(ctx.seed, t, format!("d={d} decaying={decay}"));
        let mut v = vec![ZERO; sym_dimension(d, 2)?];
        let (mut total, mut exact) = (0.0, 0.0);
        for i in 0..d {
            for j in i..d {
                let mut a = sample::complex_normal(rng);
                if decay {
                    a /= ((i + j + 1) as f64).powi(2);
                }
                add_scaled(&mut v, &sym_tensor_of_vectors(&[unit(d, i), unit(d, j)])?, a);
                total += a.norm_sqr();
                exact += if i == j { a.norm_sqr() } else { a.norm_sqr() / 2.0 };
            }
        }
        let got = vec_norm(&v).powi(2);
        trial
            .check_le("norm bound", got, total + ctx.tol * scale(total))
            .check_le("norm identity", (got - exact).abs(), ctx.tol * scale(exact));
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

fn sym_pair_norm(u: &[C64], v: &[C64]) -> Result<f64> {
    Ok(vec_norm(&sym_tensor_of_vectors(&[u.to_vec(), v.to_vec()])?))
}

pub(crate) fn vector_bounds(ctx: &Ctx) -> Result<VerifyReport> {
    let tol = ctx.tol;
    let witness = |name: &str, u: Vec<C64>, v: Vec<C64>, expected: f64| -> Result<Trial> {
        let mut trial = Trial::new(format!("witness: {name}"));
        let got = sym_pair_norm(&u, &v)?;
        trial.check_le("sharpness", (got - expected).abs(), tol);
        Ok(trial)
    };
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let fixed = vec![
        witness("orthogonal unit vectors", unit(3, 0), unit(3, 2), r),
        witness("equal unit vectors", unit(3, 1), unit(3, 1), 1.0),
    ];
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(1..=8);
        let u = sample::vector(rng, d);
        let v = sample::vector(rng, d);
        let mut trial = Trial::random(ctx.seed, t, format!("d={d}"));
        let (nu, nv) = (vec_norm(&u), vec_norm(&v));
        let got = sym_pair_norm(&u, &v)?;
        let s = scale(nu * nv);
        let identity = ((nu * nv).powi(2) + inner(&u, &v).norm_sqr()) / 2.0;
        trial
            .check_le("lower bound", nu * nv * r, got + tol * s)
            .check_le("upper bound", got, nu * nv + tol * s)
            .check_le("norm identity", (got * got - identity).abs(), tol * s * s)
            .min("min ratio", got / (nu * nv))
            .max("max ratio", got / (nu * nv));
        Ok(trial)
    });
    Ok(ctx.finish(fixed, random))
}

fn random_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffled identity is a bijection")
}

pub(crate) fn permutation_operators(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let n = rng.random_range(2..=4);
        let d = rng.random_range(2..=3);
        let p = random_permutation(rng, n);
        let q = random_permutation(rng, n);
        let mut trial = Trial::random(
            ctx.seed,
            t,
            format!("n={n} d={d} p={:?} q={:?}", p.images(), q.images()),
        );
        let pm = permutation_matrix(&p, d)?;
        let qm = permutation_matrix(&q, d)?;
        let composed = permutation_matrix(&p.compose(&q), d)?;
        let dim = pm.rows();
        trial
            .check_le("homomorphism", composed.max_abs_diff(&pm.matmul(&qm)?), 0.0)
            .check_le(
                "unitary",
                pm.adjoint().matmul(&pm)?.max_abs_diff(&ComplexMatrix::identity(dim)),
                ctx.tol,
            )
            .check_le(
                "adjoint is inverse",
                pm.adjoint().max_abs_diff(&permutation_matrix(&p.inverse(), d)?),
                0.0,
            );
        // Action on a simple tensor moves factor k to slot p(k).
        let vs: Vec<Vec<C64>> = (0..n).map(|_| sample::vector(rng, d)).collect();
        let moved: Vec<Vec<C64>> = (0..n).map(|slot| vs[p.inverse().apply(slot)].clone()).collect();
        let lhs = pm.matvec(&crate::basis::product_tensor(&vs)?)?;
        let rhs = crate::basis::product_tensor(&moved)?;
        let diff = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        trial.check_le("action on simple tensors", diff, ctx.tol * scale(vec_norm(&rhs)));
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

pub(crate) fn tensor_projections(ctx: &Ctx) -> Result<VerifyReport> {
    let mut fixed = Vec::new();
    for d in 1..=4usize {
        for n in 1..=4usize {
            fixed.push((|| -> Result<Trial> {
                let mut trial = Trial::new(format!("d={d} n={n}"));
                let dim = d.pow(n as u32);
                for (p, rank, basis) in [
                    (symmetrizer(d, n)?, sym_dimension(d, n)?, TensorBasis::symmetric(d, n)?),
                    (
                        antisymmetrizer(d, n)?,
                        asym_dimension(d, n)?,
                        TensorBasis::antisymmetric(d, n)?,
                    ),
                ] {
                    trial
                        .check_le("idempotent", p.matmul(&p)?.max_abs_diff(&p), ctx.tol)
                        .check_le("selfadjoint", p.max_abs_diff(&p.adjoint()), ctx.tol)
                        .check_le("rank", (p.trace().re - rank as f64).abs(), ctx.tol * dim as f64);
                    if rank > 0 {
                        let q = basis.embedding()?;
                        trial
                            .check_le(
                                "basis is orthonormal",
                                q.adjoint().matmul(&q)?.max_abs_diff(&ComplexMatrix::identity(rank)),
                                ctx.tol,
                            )
                            .check_le("basis spans the range", p.matmul(&q)?.max_abs_diff(&q), ctx.tol);
                    }
                }
                if n >= 2 {
                    let cross = symmetrizer(d, n)?.matmul(&antisymmetrizer(d, n)?)?;
                    trial.check_le("ranges are orthogonal", cross.max_abs(), ctx.tol);
                }
                Ok(trial)
            })());
        }
    }
    Ok(ctx.finish(fixed, Vec::new()))
}

pub(crate) fn two_sum(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(1..=6);
        let mut trial = Trial::random(ctx.seed, t, format!("d={d}"));
        let s = symmetrizer(d, 2)?;
        let a = antisymmetrizer(d, 2)?;
        let id = ComplexMatrix::identity(d * d);
        trial
            .check_le("sum is identity", (&s + &a).max_abs_diff(&id), ctx.tol)
            .check_le("product vanishes", s.matmul(&a)?.max_abs(), ctx.tol);
        let x = sample::vector(rng, d * d);
        let xs = s.matvec(&x)?;
        let xa = a.matvec(&x)?;
        trial.check_le(
            "components orthogonal",
            inner(&xs, &xa).norm(),
            ctx.tol * scale(vec_norm(&x).powi(2)),
        );
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

pub(crate) fn basic_norm(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let n = rng.random_range(2..=3);
        let d = rng.random_range(2..=4);
        let mut trial = Trial::random(ctx.seed, t, format!("n={n} d={d}"));
        let factors: Vec<ComplexMatrix> = (0..n).map(|_| sample::square(rng, d)).collect();
        let bound: f64 = factors.iter().map(norm).product::<Result<f64>>()?;
        let got = norm(&sym_product(&factors)?)?;
        trial.check_le("product bound", got, bound * (1.0 + ctx.tol));
        let a = &factors[0];
        let power = norm(&sym_product(&vec![a.clone(); n])?)?;
        let expected = norm(a)?.powi(n as i32);
        trial.check_le("power norm", (power - expected).abs(), ctx.tol * scale(expected));
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

pub(crate) fn two_by_two(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let a = sample::square(rng, 2);
        let b = sample::square(rng, 2);
        let mut trial = Trial::random(ctx.seed, t, "2x2 pair");
        let got = sym_product(&[&a, &b])?;
        trial.check_le(
            "3x3 closed form",
            got.max_abs_diff(&oracles::sym_product_2x2(&a, &b)?),
            ctx.tol,
        );
        let avg = averaged_tensor(&[&a, &b])?;
        trial.check_le(
            "4x4 closed form",
            avg.max_abs_diff(&oracles::averaged_2x2(&a, &b)?),
            ctx.tol,
        );
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

pub(crate) fn product_rule(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(2..=4);
        let [a, b, c, e] = std::array::from_fn(|_| sample::square(rng, d));
        let mut trial = Trial::random(ctx.seed, t, format!("d={d}"));
        let lhs = sym_product(&[&a, &b])?.matmul(&sym_product(&[&c, &e])?)?;
        let rhs = (&sym_product(&[a.matmul(&c)?, b.matmul(&e)?])? + &sym_product(&[a.matmul(&e)?, b.matmul(&c)?])?)
            .scale_real(0.5);
        trial.check_le("product rule", lhs.max_abs_diff(&rhs), ctx.tol * scale(lhs.max_abs()));
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

pub(crate) fn common_invariant(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let n = rng.random_range(2..=3);
        let d = rng.random_range(3..=4);
        let m = rng.random_range(1..d);
        let mut trial = Trial::random(ctx.seed, t, format!("n={n} d={d} dim V={m}"));
        let u = sample::unitary(rng, d);
        // Block upper triangular in the basis of u: span of the first m columns is invariant.
        let factors: Vec<ComplexMatrix> = (0..n)
            .map(|_| {
                let mut g = sample::square(rng, d);
                for i in m..d {
                    for j in 0..m {
                        g[(i, j)] = ZERO;
                    }
                }
                u.matmul(&g)?.matmul(&u.adjoint())
            })
            .collect::<Result<_>>()?;
        let vs: Vec<Vec<C64>> = (0..m).map(|j| u.column(j)).collect();
        for a in &factors {
            let image: Vec<Vec<C64>> = vs.iter().map(|v| a.matvec(v)).collect::<Result<_>>()?;
            let basis = columns_matrix(&vs);
            let proj = basis.matmul(&basis.adjoint())?;
            let leak = image
                .iter()
                .map(|w| {
                    Ok(vec_norm(
                        &proj.matvec(w)?.iter().zip(w).map(|(p, x)| x - p).collect::<Vec<_>>(),
                    ))
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            trial.check_le("V invariant for each factor", leak, ctx.tol * scale(norm(a)?));
        }
        let tensors: Vec<Vec<C64>> = enumerate_sym_indices(m, n)?
            .iter()
            .map(|idx| {
                let picked: Vec<Vec<C64>> = idx.entries().iter().map(|&i| vs[i].clone()).collect();
                sym_tensor_of_vectors(&picked)
            })
            .collect::<Result<_>>()?;
        let w = columns_matrix(&orthonormalize(&tensors));
        trial.check_true("dimension of ⊙^n V", w.cols() == sym_dimension(m, n)?);
        let prod = sym_product(&factors)?;
        let image = prod.matmul(&w)?;
        let inside = w.matmul(&w.adjoint().matmul(&image)?)?;
        trial.check_le(
            "⊙^n V invariant",
            (&image - &inside).max_abs(),
            ctx.tol * scale(prod.max_abs()),
        );
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

pub(crate) fn adjoints(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let n = rng.random_range(2..=3);
        let d = rng.random_range(n..=4);
        let factors: Vec<ComplexMatrix> = (0..n).map(|_| sample::square(rng, d)).collect();
        let adj: Vec<ComplexMatrix> = factors.iter().map(ComplexMatrix::adjoint).collect();
        let mut trial = Trial::random(ctx.seed, t, format!("n={n} d={d}"));
        let s = sym_product(&factors)?;
        let a = asym_product(&factors)?;
        trial
            .check_le(
                "symmetric",
                s.adjoint().max_abs_diff(&sym_product(&adj)?),
                ctx.tol * scale(s.max_abs()),
            )
            .check_le(
                "antisymmetric",
                a.adjoint().max_abs_diff(&asym_product(&adj)?),
                ctx.tol * scale(a.max_abs()),
            );
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

fn unitary_defect(m: &ComplexMatrix) -> Result<f64> {
    let id = ComplexMatrix::identity(m.rows());
    Ok(m.adjoint()
        .matmul(m)?
        .max_abs_diff(&id)
        .max(m.matmul(&m.adjoint())?.max_abs_diff(&id)))
}

pub(crate) fn closure(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let n = rng.random_range(2..=3);
        let d = rng.random_range(2..=4);
        let mut trial = Trial::random(ctx.seed, t, format!("n={n} d={d}"));
        let herm: Vec<ComplexMatrix> = (0..n).map(|_| sample::hermitian(rng, d)).collect();
        let s = sym_product(&herm)?;
        trial.check_le("selfadjoint", s.hermitian_defect(), ctx.tol * scale(s.max_abs()));
        let u = sample::unitary(rng, d);
        let normals: Vec<ComplexMatrix> = (0..n)
            .map(|_| sample::normal_with(&u, &sample::diagonal_values(rng, d)))
            .collect();
        let s = sym_product(&normals)?;
        trial.check_le("commuting normals", s.normality_defect()?, ctx.tol);
        let w = sample::unitary(rng, d);
        trial.check_le("unitary power", unitary_defect(&sym_product(&vec![w; n])?)?, ctx.tol);
        let a = sample::square(rng, 2);
        let aa = sym_product(&[&a, &a.adjoint()])?;
        trial
            .check_le(
                "A ⊙ A* selfadjoint",
                aa.hermitian_defect(),
                ctx.tol * scale(aa.max_abs()),
            )
            .check_le(
                "A ⊙ A* closed form",
                aa.max_abs_diff(&oracles::sym_product_with_adjoint_2x2(&a)?),
                ctx.tol * scale(aa.max_abs()),
            );
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}

fn cm(rows: &[&[(f64, f64)]]) -> ComplexMatrix {
    ComplexMatrix::from_rows(
        &rows
            .iter()
            .map(|r| r.iter().map(|&(re, im)| c64(re, im)).collect())
            .collect::<Vec<_>>(),
    )
    .expect("rectangular literal")
}

pub(crate) fn gallery(ctx: &Ctx) -> Result<VerifyReport> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let normal_pair = || -> Result<Trial> {
        let mut trial = Trial::new("witness: normal noncommuting pair [[1,i],[i,1]], [[1,-1],[1,1]]");
        let a = cm(&[&[(1.0, 0.0), (0.0, 1.0)], &[(0.0, 1.0), (1.0, 0.0)]]);
        let b = cm(&[&[(1.0, 0.0), (-1.0, 0.0)], &[(1.0, 0.0), (1.0, 0.0)]]);
        let expected = cm(&[
            &[(1.0, 0.0), (-r, r), (0.0, -1.0)],
            &[(r, r), (1.0, 0.0), (-r, r)],
            &[(0.0, 1.0), (r, r), (1.0, 0.0)],
        ]);
        let got = sym_product(&[&a, &b])?;
        trial
            .check_le(
                "factors normal",
                a.normality_defect()?.max(b.normality_defect()?),
                ctx.tol,
            )
            .check_le("factors commute", 0.1, (&a.matmul(&b)? - &b.matmul(&a)?).max_abs())
            .check_le("displayed matrix", got.max_abs_diff(&expected), ctx.tol)
            .check_le("product not normal", 0.1, got.normality_defect()?)
            .max("normality defect of witness product", got.normality_defect()?);
        Ok(trial)
    };
    let unitary_pair = || -> Result<Trial> {
        let mut trial = Trial::new("witness: unitary pair I, [[0,-1],[1,0]]");
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let expected = ComplexMatrix::from_real(&[&[0.0, -r, 0.0], &[r, 0.0, -r], &[0.0, r, 0.0]]);
        let got = sym_product(&[&a, &b])?;
        let gram = got.adjoint().matmul(&got)?;
        let singular: Vec<f64> = hermitian_decompose(&gram, 1e-12)?
            .values
            .iter()
            .map(|x| x.max(0.0).sqrt())
            .collect();
        let off = singular.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
        trial
            .check_le("factors unitary", unitary_defect(&b)?, ctx.tol)
            .check_le("displayed matrix", got.max_abs_diff(&expected), ctx.tol)
            .check_le("singular value away from 1", 0.1, off)
            .max("largest |singular value - 1| of witness product", off);
        Ok(trial)
    };
    let fixed = vec![normal_pair(), unitary_pair()];
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(2..=4);
        let a = sample::hermitian(rng, d);
        let b = sample::hermitian(rng, d);
        let mut trial = Trial::random(ctx.seed, t, format!("selfadjoint noncommuting pair d={d}"));
        let s = sym_product(&[&a, &b])?;
        trial
            .check_le(
                "pair does not commute",
                1e-6,
                (&a.matmul(&b)? - &b.matmul(&a)?).max_abs(),
            )
            .check_le(
                "product selfadjoint",
                s.hermitian_defect(),
                ctx.tol * scale(s.max_abs()),
            );
        Ok(trial)
    });
    Ok(ctx.finish(fixed, random))
}

pub(crate) fn complementary_projections(ctx: &Ctx) -> Result<VerifyReport> {
    let check = |trial: &mut Trial, p: &ComplexMatrix, q: &ComplexMatrix, x: &[C64], y: &[C64]| -> Result<()> {
        let t = sym_product(&[p, q])?.scale_real(2.0);
        let id = ComplexMatrix::identity(t.rows());
        let xy = sym_tensor_of_vectors(&[x.to_vec(), y.to_vec()])?;
        let xx = sym_tensor_of_vectors(&[x.to_vec(), x.to_vec()])?;
        let txy = t.matvec(&xy)?;
        let fixed = txy.iter().zip(&xy).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        trial
            .check_le("idempotent", t.matmul(&t)?.max_abs_diff(&t), ctx.tol)
            .check_le("selfadjoint", t.hermitian_defect(), ctx.tol)
            .check_le("x ⊙ y fixed", fixed, ctx.tol)
            .check_le("x ⊙ x annihilated", vec_norm(&t.matvec(&xx)?), ctx.tol)
            .check_le("not zero", 1.0 - ctx.tol, norm(&t)?)
            .check_le("not identity", 1.0 - ctx.tol, norm(&(&id - &t))?);
        Ok(())
    };
    let fixed = vec![(|| {
        let mut trial = Trial::new("witness: P = e0 e0*, Q = e1 e1* in C^2");
        let p = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let q = ComplexMatrix::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]);
        check(&mut trial, &p, &q, &unit(2, 0), &unit(2, 1))?;
        trial.check_le(
            "norm of P ⊙ Q is 1/2",
            (norm(&sym_product(&[&p, &q])?)? - 0.5).abs(),
            ctx.tol,
        );
        Ok(trial)
    })()];
    let random = ctx.random(|t, rng| {
        let d = rng.random_range(2..=6);
        let rp = rng.random_range(1..d);
        let rq = rng.random_range(1..=d - rp);
        let mut trial = Trial::random(ctx.seed, t, format!("d={d} rank P={rp} rank Q={rq}"));
        let u = sample::unitary(rng, d);
        let p = sample::projection(&u, 0..rp);
        let q = sample::projection(&u, rp..rp + rq);
        check(&mut trial, &p, &q, &u.column(0), &u.column(rp))?;
        Ok(trial)
    });
    Ok(ctx.finish(fixed, random))
}

pub(crate) fn c_symmetric(ctx: &Ctx) -> Result<VerifyReport> {
    let random = ctx.random(|t, rng| {
        let n = rng.random_range(2..=3);
        let d = rng.random_range(2..=3);
        let factors: Vec<ComplexMatrix> = (0..n).map(|_| sample::transpose_symmetric(rng, d)).collect();
        let mut trial = Trial::random(ctx.seed, t, format!("n={n} d={d}"));
        let c = Conjugation;
        trial
            .check_true(
                "factors C-symmetric",
                factors.iter().all(|a| c.is_symmetric_operator(a, ctx.tol)),
            )
            .check_true(
                "tensor product C-symmetric",
                c.is_symmetric_operator(&kron(&factors)?, ctx.tol),
            )
            .check_true(
                "symmetric product C-symmetric",
                c.is_symmetric_operator(&sym_product(&factors)?, ctx.tol),
            );
        // The symmetric basis vectors are real, so the restricted conjugation is again
        // entrywise conjugation; confirm on a random vector.
        let basis = TensorBasis::symmetric(d, n)?;
        let q = basis.embedding()?;
        let x = sample::vector(rng, basis.len());
        let lifted = c.apply(&q.matvec(&x)?);
        let direct = q.matvec(&c.apply(&x))?;
        let diff = lifted
            .iter()
            .zip(&direct)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        trial.check_le("conjugation preserves the symmetric power", diff, ctx.tol);
        Ok(trial)
    });
    Ok(ctx.finish(Vec::new(), random))
}
