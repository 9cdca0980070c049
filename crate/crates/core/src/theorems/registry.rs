use super::{
    conjecture, diagonal, norms, random_trials, shift, spectra, structure, weighted, ReportHeader, Trial, VerifyReport,
};
use crate::error::{Error, Result};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    /// Zero failures expected.
    Proven,
    /// A construction whose stated properties are checked as written.
    Construction,
}

/// User-facing knobs; `None` selects the suite default.
#[derive(Debug, Clone, Default)]
pub struct SuiteConfig {
    pub trials: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub k: Option<usize>,
    pub dim: Option<usize>,
}

pub struct Suite {
    pub id: &'static str,
    pub statement: &'static str,
    pub kind: SuiteKind,
    pub default_trials: usize,
    pub default_tol: f64,
    run: fn(&Ctx) -> Result<VerifyReport>,
}

impl std::fmt::Debug for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Suite").field("id", &self.id).finish()
    }
}

impl Suite {
    pub fn run(&self, cfg: &SuiteConfig) -> Result<VerifyReport> {
        let tol = cfg.tol.unwrap_or(self.default_tol);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        let ctx = Ctx {
            trials: cfg.trials.unwrap_or(self.default_trials),
            seed: cfg.seed,
            tol,
            k: cfg.k,
            dim: cfg.dim,
            header: ReportHeader::new(self.id, self.statement, cfg.seed, tol),
        };
        (self.run)(&ctx)
    }
}

/// Resolved configuration handed to a suite body.
pub(crate) struct Ctx {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub k: Option<usize>,
    pub dim: Option<usize>,
    pub header: ReportHeader,
}

impl Ctx {
    pub fn random<F>(&self, f: F) -> Vec<Result<Trial>>
    where
        F: Fn(usize, &mut ChaCha8Rng) -> Result<Trial> + Sync,
    {
        random_trials(self.seed, self.trials, f)
    }

    /// Fixed witnesses followed by the random trials.
    pub fn finish(&self, mut fixed: Vec<Result<Trial>>, random: Vec<Result<Trial>>) -> VerifyReport {
        fixed.extend(random);
        self.header.clone().finish(fixed)
    }
}

macro_rules! suite {
    ($id:literal, $kind:ident, $trials:expr, $tol:expr, $run:path, $statement:literal) => {
        Suite {
            id: $id,
            statement: $statement,
            kind: SuiteKind::$kind,
            default_trials: $trials,
            default_tol: $tol,
            run: $run,
        }
    };
}

static SUITES: &[Suite] = &[
    suite!("lemma-2.9", Proven, 500, 1e-12, structure::square_summable,
        "a finitely supported coefficient array gives a symmetric vector of squared norm at most the sum of squared coefficients"),
    suite!("lemma-2.10", Proven, 10_000, 1e-12, structure::vector_bounds,
        "|u||v|/sqrt2 <= |u ⊙ v| <= |u||v|, sharp for orthogonal and for equal vectors"),
    suite!("prop-2.2", Proven, 300, 1e-12, structure::permutation_operators,
        "slot permutations act multiplicatively and unitarily on the tensor power"),
    suite!("prop-2.4", Proven, 0, 1e-12, structure::tensor_projections,
        "the symmetrizer and antisymmetrizer are orthogonal projections onto the symmetric and antisymmetric powers"),
    suite!("prop-2.6", Proven, 300, 1e-12, structure::two_sum,
        "the second tensor power splits orthogonally into its symmetric and antisymmetric parts"),
    suite!("prop-3.3", Proven, 300, 1e-9, structure::basic_norm,
        "|A_1 ⊙ ... ⊙ A_n| <= prod |A_i| and |A^⊙n| = |A|^n"),
    suite!("eq-4.3", Proven, 10_000, 1e-12, structure::two_by_two,
        "the symmetric product of two 2x2 matrices has the explicit 3x3 representation"),
    suite!("lemma-4.1", Proven, 300, 1e-11, structure::product_rule,
        "(A ⊙ B)(C ⊙ D) = (AC ⊙ BD + AD ⊙ BC)/2"),
    suite!("prop-4.3", Proven, 200, 1e-11, structure::common_invariant,
        "a common invariant subspace V of the factors makes ⊙^n V invariant for their product"),
    suite!("prop-4.4", Proven, 300, 1e-12, structure::adjoints,
        "the adjoint of a symmetric or antisymmetric product is the product of the adjoints"),
    suite!("thm-4.6", Proven, 300, 1e-11, structure::closure,
        "products of selfadjoints are selfadjoint, of commuting normals are normal, and powers of a unitary are unitary"),
    suite!("examples-4", Proven, 50, 1e-12, structure::gallery,
        "noncommuting normal factors can give a non-normal product and unitary factors a non-unitary one"),
    suite!("prop-4.9", Proven, 300, 1e-11, structure::complementary_projections,
        "2P ⊙ Q is an orthogonal projection different from 0 and I when PQ = QP = 0"),
    suite!("prop-4.10", Proven, 300, 1e-11, structure::c_symmetric,
        "tensor and symmetric products of C-symmetric operators are C-symmetric"),
    suite!("thm-5.1a", Proven, 1000, 1e-10, norms::norm_lower_bound,
        "sup_x |Ax||Bx|/sqrt2 <= |A ⊙ B|, with equality for a witness pair"),
    suite!("thm-5.1b", Proven, 500, 1e-10, norms::nonzero_product,
        "A ⊙ B is nonzero whenever A and B are"),
    suite!("thm-5.1c", Proven, 200, 1e-6, norms::spectral_radius_law,
        "the spectral radius of A^⊙n is the n-th power of that of A"),
    suite!("thm-5.2", Proven, 500, 1e-10, norms::orthogonal_ranges,
        "orthogonal ranges give |⊙ A_i| <= prod|A_i|/sqrt(n!); under the kernel-range hypotheses |A||B|/2 <= |A ⊙ B| <= |A||B|/sqrt2"),
    suite!("thm-6.1", Proven, 200, 1e-7, spectra::brown_pearcy,
        "the spectrum of A ⊗ B is the set of products of eigenvalues"),
    suite!("prop-6.2", Proven, 200, 1e-7, spectra::spectrum_union,
        "the spectrum of (A ⊗ B + B ⊗ A)/2 is the union of those of A ⊙ B and A ∧ B"),
    suite!("thm-6.3", Proven, 200, 1e-7, spectra::finite_spectrum,
        "eigenvalues of A ⊙ I lie in (σ(A)+σ(A))/2 and of A ⊙ A in σ(A)σ(A), with equality for normal A"),
    suite!("eq-7.2", Proven, 100, 1e-9, diagonal::diagonal_spectrum,
        "the spectrum of diag(λ) ⊙ diag(μ) is {(λ_i μ_j + λ_j μ_i)/2 : i <= j}"),
    suite!("prop-7.1", Proven, 1000, 1e-10, diagonal::diagonal_norm,
        "(sqrt2 - 1)|L||M| <= |L ⊙ M| <= |L||M| for diagonal L and M, both sharp"),
    suite!("prop-7.3", Proven, 100, 1e-9, diagonal::multi_diagonal_spectrum,
        "the spectrum of a symmetric product of diagonals is the set of symmetrized eigenvalue products"),
    suite!("thm-8.1", Proven, 0, 1e-10, shift::shift_blocks,
        "S ⊙ S* and S ∧ S* decompose into tridiagonal degree blocks with cosine spectra filling [-1, 1]"),
    suite!("thm-9.1a", Proven, 200, 1e-10, weighted::shift_diagonal_norm,
        "|M|/sqrt2 <= |S ⊙ M| <= |M| for the shift S and a diagonal M, both sharp"),
    suite!("thm-9.1b", Construction, 50, 1e-13, weighted::shift_diagonal_kernel,
        "the four-step coefficient construction gives a nonzero square-summable kernel vector of S ⊙ M"),
    suite!("thm-9.1c", Proven, 100, 1e-12, weighted::shift_diagonal_point_spectrum,
        "the eigenvalue equations of S ⊙ M force the zero solution for every nonzero λ"),
    suite!("thm-9.2", Proven, 100, 1e-12, weighted::backshift_diagonal,
        "for |λ| < |μ_0|/2 the geometric vector sum (2λ/μ_0)^j e_0 ⊙ e_j is an eigenvector of S* ⊙ M"),
    suite!("lemma-10.1", Proven, 10_000, 1e-12, conjecture::three_vectors,
        "|x||y||z|/sqrt6 <= |x ⊙ y ⊙ z| <= |x||y||z|, sharp for orthonormal and for equal vectors"),
    suite!("thm-10.3", Proven, 300, 1e-10, conjecture::three_operators,
        "sup_x |Ax||Bx||Cx|/sqrt6 <= |A ⊙ B ⊙ C|"),
];

pub fn suites() -> &'static [Suite] {
    SUITES
}

pub fn find_suite(id: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.id == id)
}

pub fn run_suite(id: &str, cfg: &SuiteConfig) -> Result<VerifyReport> {
    find_suite(id)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{id}'")))?
        .run(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = SUITES.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), SUITES.len());
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(find_suite("nosuch").is_none());
        assert!(run_suite("nosuch", &SuiteConfig::default()).is_err());
    }
}
