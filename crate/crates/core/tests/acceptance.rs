//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criterion 7 asks the kernel construction for `S ⊙ M` to satisfy every interior
//! equation; the construction leaves the row `k = 1` unbalanced, so that line is
//! expected to read FAIL. The process exits non-zero when any line differs from
//! its expectation, including an expected failure that starts passing.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::time::Instant;

use rand::Rng;
use symtensor::basis::TensorBasis;
use symtensor::matrix::{c64, ComplexMatrix, C64, ONE, ZERO};
use symtensor::operator::{kron, OperatorSpec};
use symtensor::product::sym_product;
use symtensor::spectral::{
    build_ak, build_bk, build_ck, contains_multiset, diag_sym_spectrum, gelfand_estimate, general_eigen,
    hermitian_eigen, match_multisets, multi_diag_sym_spectrum, operator_norm, spec_ak, spec_bk, spec_ck,
    spectral_radius,
};
use symtensor::theorems::{
    backshift_eigenvector, kernel_equation_residuals, kernel_vector_sm, oracles, run_suite, sample,
    verify_point_spectrum_sm, SuiteConfig,
};

const EXPECTED_FAILURES: &[usize] = &[7];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

type Check = Result<Outcome, Box<dyn std::error::Error>>;

fn norm(m: &ComplexMatrix) -> f64 {
    operator_norm(m, 1e-13).expect("norm").value
}

fn reals(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| c64(x, 0.0)).collect()
}

/// `Q` for the symmetric square of `C^2`: columns `e0⊗e0`, `(e0⊗e1 + e1⊗e0)/√2`, `e1⊗e1`.
fn q2() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, h, 0.0], &[0.0, h, 0.0], &[0.0, 0.0, 1.0]])
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let q = q2();
    let mut worst: f64 = 0.0;
    let mut rng = sample::trial_rng(1, 0);
    for _ in 0..10_000 {
        let a = sample::square(&mut rng, 2);
        let b = sample::square(&mut rng, 2);
        let got = sym_product(&[&a, &b])?;
        let avg = (&kron(&[&a, &b])? + &kron(&[&b, &a])?).scale_real(0.5);
        let dense = q.adjoint().matmul(&avg)?.matmul(&q)?;
        let display = oracles::sym_product_2x2(&a, &b)?;
        worst = worst.max(got.max_abs_diff(&dense)).max(got.max_abs_diff(&display));
    }
    let elapsed = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        worst <= 1e-12 && elapsed < 5.0,
        format!("max deviation {worst:.2e}, {elapsed:.2} s"),
    ))
}

fn criterion_2() -> Check {
    let e = |rows: &[&[f64]]| ComplexMatrix::from_real(rows);
    let thm51 = norm(&sym_product(&[
        e(&[&[1.0, 0.0], &[0.0, 0.0]]),
        e(&[&[0.0, 0.0], &[1.0, 0.0]]),
    ])?);
    let diag = norm(&sym_product(&[
        ComplexMatrix::from_diag(&reals(&[1.0, SQRT_2 - 1.0])),
        ComplexMatrix::from_diag(&reals(&[1.0 - SQRT_2, 1.0])),
    ])?);
    let thm52 = norm(&sym_product(&[
        e(&[&[1.0, 0.0], &[0.0, 0.0]]),
        e(&[&[0.0, 0.0], &[0.0, 1.0]]),
    ])?);
    let mut rng = sample::trial_rng(2, 0);
    let u = sample::unitary(&mut rng, 4);
    let p = sample::projection(&u, 0..2);
    let q = sample::projection(&u, 2..4);
    let t = sym_product(&[&p, &q])?.scale_real(2.0);
    let idempotent = t.matmul(&t)?.max_abs_diff(&t);
    let devs = [
        (thm51 - FRAC_1_SQRT_2).abs(),
        (diag - (SQRT_2 - 1.0)).abs(),
        (thm52 - 0.5).abs(),
        idempotent,
    ];
    Ok(Outcome::new(
        devs.iter().all(|&d| d <= 1e-12),
        format!(
            "1/sqrt2 {:.1e}, sqrt2-1 {:.1e}, 1/2 {:.1e}, (2P⊙Q)^2 - 2P⊙Q {:.1e}",
            devs[0], devs[1], devs[2], devs[3]
        ),
    ))
}

fn criterion_3() -> Check {
    let mut worst: f64 = 0.0;
    let mut gelfand_violations = 0;
    for t in 0..200 {
        let mut rng = sample::trial_rng(3, t);
        let d = rng.random_range(1..=5);
        let n = rng.random_range(2..=3);
        let a = sample::square(&mut rng, d);
        let power = sym_product(&vec![a.clone(); n])?;
        let rho = spectral_radius(&a)?;
        let rho_power = spectral_radius(&power)?;
        let expected = rho.powi(n as i32);
        worst = worst.max((rho_power - expected).abs() / expected.max(f64::MIN_POSITIVE));
        if gelfand_estimate(&power, 8)? < rho_power * (1.0 - 1e-6) {
            gelfand_violations += 1;
        }
    }
    Ok(Outcome::new(
        worst <= 1e-6 && gelfand_violations == 0,
        format!("max relative deviation {worst:.2e}, gelfand estimate below radius {gelfand_violations}x"),
    ))
}

fn sorted_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>, Box<dyn std::error::Error>> {
    let mut v = hermitian_eigen(m, 1e-10)?.real_parts();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut b = b.to_vec();
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut union_worst: f64 = 0.0;
    for k in 0..=60 {
        worst = worst
            .max(max_gap(&sorted_spectrum(&build_ak(k))?, &spec_ak(k)))
            .max(max_gap(&sorted_spectrum(&build_bk(k))?, &spec_bk(k)));
        let mut parts = spec_bk(k);
        if k >= 1 {
            worst = worst.max(max_gap(&sorted_spectrum(&build_ck(k)?)?, &spec_ck(k)?));
            parts.extend(spec_ck(k)?);
        }
        union_worst =
            union_worst.max(match_multisets(&reals(&spec_ak(k)), &reals(&parts), 1e-10).unwrap_or(f64::INFINITY));
    }
    let elapsed = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        worst <= 1e-10 && union_worst <= 1e-10 && elapsed < 30.0,
        format!("max deviation {worst:.2e}, union {union_worst:.2e}, {elapsed:.2} s"),
    ))
}

fn criterion_5() -> Check {
    let n = 26;
    let s = OperatorSpec::shift().materialize(n)?;
    let sa = OperatorSpec::back_shift().materialize(n)?;
    let m = (&kron(&[&s, &sa])? + &kron(&[&sa, &s])?).scale_real(0.5);
    let sym = TensorBasis::symmetric(n, 2)?;
    let asym = TensorBasis::antisymmetric(n, 2)?;
    let (qs, qa) = (sym.embedding()?, asym.embedding()?);
    let restrict = |q: &ComplexMatrix,
                    basis: &TensorBasis,
                    pairs: Vec<[usize; 2]>|
     -> Result<ComplexMatrix, Box<dyn std::error::Error>> {
        let cols: Vec<usize> = pairs
            .iter()
            .map(|p| basis.position_of(p).expect("pair in basis"))
            .collect();
        let all_rows: Vec<usize> = (0..q.rows()).collect();
        let qk = q.select(&all_rows, &cols);
        Ok(qk.adjoint().matmul(&m)?.matmul(&qk)?)
    };
    let mut worst: f64 = 0.0;
    for k in 0..=25 {
        let b = restrict(&qs, &sym, (0..=k / 2).map(|i| [i, k - i]).collect())?;
        worst = worst.max(b.max_abs_diff(&build_bk(k)));
        if k >= 1 {
            let c = restrict(&qa, &asym, (0..k.div_ceil(2)).map(|i| [i, k - i]).collect())?;
            worst = worst.max(c.max_abs_diff(&build_ck(k)?));
        }
    }
    Ok(Outcome::new(worst <= 1e-12, format!("max block deviation {worst:.2e}")))
}

fn criterion_6() -> Check {
    let mut worst: f64 = 0.0;
    for t in 0..100 {
        let mut rng = sample::trial_rng(6, t);
        let n = rng.random_range(2..=3);
        let trunc = rng.random_range(1..=8);
        let specs: Vec<Vec<C64>> = (0..n).map(|_| sample::diagonal_values(&mut rng, trunc)).collect();
        let u = sample::unitary(&mut rng, trunc);
        let ops: Vec<ComplexMatrix> = specs.iter().map(|s| sample::normal_with(&u, s)).collect();
        let dense = general_eigen(&sym_product(&ops)?, 1e-9)?.eigenvalues;
        let formula = multi_diag_sym_spectrum(&specs, trunc)?;
        worst = worst.max(match_multisets(&dense, &formula, 1e-9).unwrap_or(f64::INFINITY));
        if n == 2 {
            let pair = diag_sym_spectrum(&specs[0], &specs[1], trunc)?;
            worst = worst.max(match_multisets(&dense, &pair, 1e-9).unwrap_or(f64::INFINITY));
        }
    }
    Ok(Outcome::new(
        worst <= 1e-9,
        format!("max matching distance {worst:.2e}"),
    ))
}

/// Coefficients of `(S ⊙ M) v` for `v = 2 Σ a_{ij} e_i ⊙ e_j`, from the product-basis matrix of `v`.
fn shift_diag_image(a: impl Fn(usize, usize) -> C64, mu: &[C64], k_max: usize) -> Vec<((usize, usize), C64)> {
    let x = |i: isize, j: isize| -> C64 {
        if i < 0 || j < 0 || i as usize > k_max || j as usize > k_max {
            return ZERO;
        }
        let (i, j) = (i as usize, j as usize);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => a(i, j),
            std::cmp::Ordering::Greater => a(j, i),
            std::cmp::Ordering::Equal => a(i, i) * 2.0,
        }
    };
    let mut out = Vec::new();
    for k in 0..=k_max {
        for l in k..=k_max {
            let (ki, li) = (k as isize, l as isize);
            let y = (x(ki - 1, li) * mu[l] + mu[k] * x(ki, li - 1)) * 0.5;
            out.push(((k, l), if k == l { y } else { y * 2.0 }));
        }
    }
    out
}

fn criterion_7() -> Check {
    let k_max = 60;
    let mut worst_eq: f64 = 0.0;
    let mut worst_route: f64 = 0.0;
    let mut worst_decay: f64 = 0.0;
    for t in 0..50 {
        let mut rng = sample::trial_rng(7, t);
        let mu: Vec<C64> = (0..k_max + 2)
            .map(|_| sample::annulus_value(&mut rng, 0.1, 1.0))
            .collect();
        let coeffs = kernel_vector_sm(&mu, k_max, 0.5)?;
        let inline = shift_diag_image(|i, j| coeffs.get(i, j), &mu, k_max);
        for ((p, r), (q, s)) in kernel_equation_residuals(&coeffs, &mu).iter().zip(&inline) {
            assert_eq!(p, q);
            worst_eq = worst_eq.max(s.norm());
            worst_route = worst_route.max((r - s).norm());
        }
        let c2 = coeffs.c * coeffs.c;
        for k in 1..=k_max {
            for l in (k..=k_max).step_by(2) {
                let r = ((l - k) / 2) as f64;
                worst_decay = worst_decay.max(coeffs.get(k, l).norm_sqr() * (k as f64 + r).powi(3) / c2);
            }
        }
    }
    let mut point_failures = 0;
    for t in 0..100 {
        let mut rng = sample::trial_rng(7, 1000 + t);
        let mu: Vec<C64> = (0..31).map(|_| sample::annulus_value(&mut rng, 0.1, 1.0)).collect();
        let lambda = sample::complex_normal(&mut rng);
        if !verify_point_spectrum_sm(&mu, lambda, 30, 1e-12)?.passed() {
            point_failures += 1;
        }
    }
    let kernel_ok = worst_eq <= 1e-13 && worst_decay < 1.0;
    Ok(Outcome::new(
        kernel_ok && point_failures == 0 && worst_route <= 1e-13,
        format!(
            "max interior residual {worst_eq:.2e}, max |a|²(k+r)³/C² {worst_decay:.2e}, \
             expansion vs inline {worst_route:.1e}, point-spectrum failures {point_failures}/100"
        ),
    ))
}

fn criterion_8() -> Check {
    let k_max = 60;
    let mut over = 0;
    let mut worst_inline: f64 = 0.0;
    for t in 0..100 {
        let mut rng = sample::trial_rng(8, t);
        let mut mu = sample::vector(&mut rng, k_max + 1);
        mu[0] = sample::annulus_value(&mut rng, 0.1, 1.0);
        let ratio = rng.random_range(0.0..=0.45);
        let lambda = C64::from_polar(ratio * mu[0].norm(), rng.random_range(0.0..std::f64::consts::TAU));
        let v = backshift_eigenvector(&mu, lambda, k_max)?;
        if !v.within_bound() {
            over += 1;
        }
        // (S* ⊙ M) through X ↦ (S* X M + M X S)/2 with the coefficient rows of v.
        let rho = lambda * 2.0 / mu[0];
        let x = |i: usize, j: usize| -> C64 {
            let (i, j) = (i.min(j), i.max(j));
            if i != 0 || j > k_max {
                ZERO
            } else if j == 0 {
                ONE
            } else {
                rho.powi(j as i32) * 0.5
            }
        };
        let mut residual_sq = 0.0;
        let mut norm_sq = 0.0;
        for k in 0..=k_max {
            for l in k..=k_max {
                let y = (x(k + 1, l) * mu[l] + mu[k] * x(k, l + 1)) * 0.5;
                let (coef, lam, w) = if k == l {
                    (y, x(k, k), 1.0)
                } else {
                    (y * 2.0, x(k, l) * 2.0, 0.5)
                };
                let r = coef - lambda * lam;
                residual_sq += r.norm_sqr() * w;
                norm_sq += lam.norm_sqr() * w;
            }
        }
        worst_inline = worst_inline.max(((residual_sq / norm_sq).sqrt() - v.residual).abs());
    }
    Ok(Outcome::new(
        over == 0 && worst_inline <= 1e-13,
        format!("residual above tail {over}/100, library vs inline residual {worst_inline:.1e}"),
    ))
}

fn criterion_9() -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for (id, trials) in [
        ("lemma-2.10", Some(10_000)),
        ("lemma-10.1", Some(10_000)),
        ("lemma-4.1", None),
        ("prop-4.4", None),
        ("thm-4.6", None),
        ("examples-4", None),
    ] {
        let report = run_suite(
            id,
            &SuiteConfig {
                trials,
                seed: 9,
                ..SuiteConfig::default()
            },
        )?;
        ok &= report.passed();
        lines.push(format!("{id} {}/{}", report.checks - report.failures, report.checks));
    }
    let a = ComplexMatrix::from_rows(&[vec![ONE, c64(0.0, 1.0)], vec![c64(0.0, 1.0), ONE]])?;
    let b = ComplexMatrix::from_real(&[&[1.0, -1.0], &[1.0, 1.0]]);
    let t = sym_product(&[&a, &b])?;
    let defect = (&t.matmul(&t.adjoint())? - &t.adjoint().matmul(&t)?).frobenius_norm();
    let u = sym_product(&[
        ComplexMatrix::identity(2),
        ComplexMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]),
    ])?;
    let sv = sorted_spectrum(&u.adjoint().matmul(&u)?)?;
    let off_one = sv.iter().map(|s| (s.max(0.0).sqrt() - 1.0).abs()).fold(0.0, f64::max);
    ok &= defect > 0.1 && off_one > 0.1;
    Ok(Outcome::new(
        ok,
        format!(
            "{}; normality defect {defect:.3}, max |σ - 1| {off_one:.3}",
            lines.join(", ")
        ),
    ))
}

fn criterion_10() -> Check {
    let suite = run_suite(
        "thm-6.3",
        &SuiteConfig {
            trials: Some(200),
            seed: 10,
            tol: Some(1e-7),
            ..SuiteConfig::default()
        },
    )?;
    let mut misses = 0;
    for t in 0..200 {
        let mut rng = sample::trial_rng(10, t);
        let d = rng.random_range(1..=4);
        let normal = t % 2 == 0;
        let a = if normal {
            sample::normal_with(&sample::unitary(&mut rng, d), &sample::diagonal_values(&mut rng, d))
        } else {
            sample::square(&mut rng, d)
        };
        let lambda = general_eigen(&a, 1e-9)?.eigenvalues;
        let mut sums = Vec::new();
        let mut prods = Vec::new();
        for i in 0..d {
            for j in i..d {
                sums.push((lambda[i] + lambda[j]) * 0.5);
                prods.push(lambda[i] * lambda[j]);
            }
        }
        let shifted = general_eigen(&sym_product(&[&a, &ComplexMatrix::identity(d)])?, 1e-9)?.eigenvalues;
        let squared = general_eigen(&sym_product(&[&a, &a])?, 1e-9)?.eigenvalues;
        let scale = lambda.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let (ts, tp) = (1e-7 * scale, 1e-7 * scale * scale);
        let contained =
            contains_multiset(&sums, &shifted, ts).is_some() && contains_multiset(&prods, &squared, tp).is_some();
        let equal = !normal
            || (match_multisets(&sums, &shifted, ts).is_some() && match_multisets(&prods, &squared, tp).is_some());
        if !(contained && equal) {
            misses += 1;
        }
    }
    Ok(Outcome::new(
        suite.passed() && misses == 0,
        format!(
            "suite {}/{} checks, inline misses {misses}/200",
            suite.checks - suite.failures,
            suite.checks
        ),
    ))
}

type Criterion = (usize, &'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "2x2 product matches the 3x3 display", criterion_1),
        (2, "witness constants", criterion_2),
        (3, "spectral radius of symmetric powers", criterion_3),
        (4, "tridiagonal closed forms and union law", criterion_4),
        (5, "shift blocks from the dense restriction", criterion_5),
        (6, "diagonal spectra", criterion_6),
        (7, "kernel construction and point spectrum of S ⊙ M", criterion_7),
        (8, "back-shift eigenvectors", criterion_8),
        (9, "property suites and gallery", criterion_9),
        (10, "finite spectral inclusions", criterion_10),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        let note = if expected_fail && !pass { " [expected]" } else { "" };
        println!(
            "{} criterion {id}: {name}: {detail}{note}",
            if pass { "PASS" } else { "FAIL" }
        );
        if pass == expected_fail {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria differ from their expected outcome");
        std::process::exit(1);
    }
}
