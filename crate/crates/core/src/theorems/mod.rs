//! Executable checks of the structural, norm and spectral statements about
//! symmetric and antisymmetric products, the explicit shift constructions,
//! and samplers for the open lower-bound problems.
//!
//! Each suite runs a list of trials (fixed witnesses first, then seeded random
//! draws), evaluates named checks with a signed margin (negative means
//! violated) and folds everything into a [`VerifyReport`].

mod conjecture;
mod diagonal;
mod norms;
pub mod oracles;
mod registry;
pub mod sample;
mod shift;
mod spectra;
mod structure;
mod weighted;

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use conjecture::{conjecture_sampler, simple_tensor_ratio, Conjecture};
pub use diagonal::verify_diag_norm_bound;
pub use norms::{verify_nonzero_product, verify_norm_lower_2, verify_orthogonal_ranges};
pub use registry::{find_suite, run_suite, suites, Suite, SuiteConfig, SuiteKind};
pub use shift::{mesh_gap, shift_block_spectra, ShiftBlockSpectra};
pub use weighted::{
    backshift_eigenvector, kernel_equation_residuals, kernel_vector_sm, point_spectrum_system,
    verify_point_spectrum_sm, BackshiftEigenvector, KernelCoefficients, PointSpectrumSystem,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const MAX_WITNESSES: usize = 10;

/// One recorded failure (or, for exploratory suites, one flagged candidate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub check: String,
    pub margin: f64,
    pub input: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub statement: String,
    pub asserted: bool,
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
    pub worst_margin: f64,
    pub witnesses: Vec<Witness>,
    pub seed: u64,
    pub tolerance: f64,
    pub version: String,
    pub observed: BTreeMap<String, f64>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks and observations gathered by a single trial.
#[derive(Debug, Clone, Default)]
pub struct Trial {
    input: String,
    checks: Vec<(&'static str, f64)>,
    flags: Vec<(&'static str, f64)>,
    mins: Vec<(&'static str, f64)>,
    maxs: Vec<(&'static str, f64)>,
}

impl Trial {
    pub fn new(input: impl Into<String>) -> Self {
        Self {
            input: input.into(),
            ..Self::default()
        }
    }

    pub fn random(seed: u64, stream: usize, what: impl std::fmt::Display) -> Self {
        Self::new(format!("seed {seed} stream {stream}: {what}"))
    }

    /// Passes when `margin >= 0`; NaN fails.
    pub fn check(&mut self, name: &'static str, margin: f64) -> &mut Self {
        self.checks.push((name, margin));
        self
    }

    pub fn check_le(&mut self, name: &'static str, value: f64, bound: f64) -> &mut Self {
        self.check(name, bound - value)
    }

    pub fn check_true(&mut self, name: &'static str, ok: bool) -> &mut Self {
        self.check(name, if ok { 0.0 } else { -1.0 })
    }

    /// Recorded as a witness when negative, never counted as a failure.
    pub fn flag(&mut self, name: &'static str, margin: f64) -> &mut Self {
        self.flags.push((name, margin));
        self
    }

    pub fn min(&mut self, name: &'static str, value: f64) -> &mut Self {
        self.mins.push((name, value));
        self
    }

    pub fn max(&mut self, name: &'static str, value: f64) -> &mut Self {
        self.maxs.push((name, value));
        self
    }
}

fn violated(margin: f64) -> bool {
    margin.is_nan() || margin < 0.0
}

pub(crate) fn random_trials<F>(seed: u64, trials: usize, f: F) -> Vec<Result<Trial>>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Trial> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| f(t, &mut sample::trial_rng(seed, t)))
        .collect()
}

/// Identification of the statement a report belongs to.
#[derive(Debug, Clone)]
pub struct ReportHeader {
    pub suite: String,
    pub statement: String,
    pub asserted: bool,
    pub seed: u64,
    pub tolerance: f64,
}

impl ReportHeader {
    pub fn new(suite: &str, statement: &str, seed: u64, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            statement: statement.to_string(),
            asserted: true,
            seed,
            tolerance,
        }
    }

    pub fn exploratory(mut self) -> Self {
        self.asserted = false;
        self
    }

    /// Merges trial outcomes in order; an errored trial counts as one failure.
    pub fn finish(self, outcomes: Vec<Result<Trial>>) -> VerifyReport {
        let mut report = VerifyReport {
            suite: self.suite,
            statement: self.statement,
            asserted: self.asserted,
            trials: outcomes.len(),
            checks: 0,
            failures: 0,
            worst_margin: f64::INFINITY,
            witnesses: Vec::new(),
            seed: self.seed,
            tolerance: self.tolerance,
            version: VERSION.to_string(),
            observed: BTreeMap::new(),
        };
        let push_witness = |w: Witness, report: &mut VerifyReport| {
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(w);
            }
        };
        for (index, outcome) in outcomes.into_iter().enumerate() {
            let trial = match outcome {
                Ok(t) => t,
                Err(e) => {
                    report.checks += 1;
                    report.failures += 1;
                    report.worst_margin = f64::NAN;
                    push_witness(
                        Witness {
                            trial: index,
                            check: "error".into(),
                            margin: f64::NAN,
                            input: e.to_string(),
                        },
                        &mut report,
                    );
                    continue;
                }
            };
            for &(name, margin) in &trial.checks {
                report.checks += 1;
                if !report.worst_margin.is_nan() {
                    report.worst_margin = if margin.is_nan() {
                        f64::NAN
                    } else {
                        report.worst_margin.min(margin)
                    };
                }
                if violated(margin) {
                    report.failures += 1;
                    push_witness(
                        Witness {
                            trial: index,
                            check: name.into(),
                            margin,
                            input: trial.input.clone(),
                        },
                        &mut report,
                    );
                }
            }
            for &(name, margin) in &trial.flags {
                if violated(margin) {
                    push_witness(
                        Witness {
                            trial: index,
                            check: name.into(),
                            margin,
                            input: trial.input.clone(),
                        },
                        &mut report,
                    );
                }
            }
            for &(name, v) in &trial.mins {
                let e = report.observed.entry(name.to_string()).or_insert(v);
                *e = e.min(v);
            }
            for &(name, v) in &trial.maxs {
                let e = report.observed.entry(name.to_string()).or_insert(v);
                *e = e.max(v);
            }
        }
        if report.worst_margin == f64::INFINITY {
            report.worst_margin = 0.0;
        }
        report
    }
}

/// Relative deviation scale: `max(1, |x|)`.
pub(crate) fn scale(x: f64) -> f64 {
    x.abs().max(1.0)
}
