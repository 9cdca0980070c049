//! Eigenvalues, norms and spectral radii, plus closed forms for the shift blocks.

mod closed_form;
mod general;
mod hermitian;
mod multiset;
mod norm;

use serde::{Deserialize, Serialize};

use crate::matrix::C64;

pub use closed_form::{
    build_ak, build_bk, build_ck, diag_sym_spectrum, multi_diag_sym_spectrum, shift_cos, spec_ak, spec_bk, spec_ck,
};
pub use general::{general_decompose, general_eigen, GeneralEigen};
pub use hermitian::{hermitian_decompose, hermitian_eigen, HermitianEigen};
pub use multiset::{contains_multiset, match_multisets, sort_multiset, sorted_real};
pub use norm::{gelfand_estimate, operator_norm, operator_norm_power, spectral_radius, NormMethod, NormReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    HermitianJacobi,
    GeneralQr,
    ClosedForm,
}

/// Eigenvalue multiset with its provenance.
///
/// `max_residual` is the largest `‖Mv − λv‖ / (‖v‖ ‖M‖_F)` over the computed
/// eigenpairs, and 0 for closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    pub method: SpectrumMethod,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl SpectrumReport {
    pub fn closed_form(values: Vec<f64>) -> Self {
        Self {
            eigenvalues: values.into_iter().map(|x| C64::new(x, 0.0)).collect(),
            method: SpectrumMethod::ClosedForm,
            max_residual: 0.0,
            tolerance: 0.0,
        }
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}
