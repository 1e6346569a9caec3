//! Gamma-function and Jacobi-polynomial primitives.
//!
//! Everything downstream (weights, norms, the operator symbol) is a ratio of
//! gamma values, so all gamma arithmetic is done in log space.

mod gamma;
mod jacobi;
mod quadrature;

pub use gamma::log_gamma;
pub use jacobi::{
    jacobi_deriv, jacobi_eval, jacobi_eval_all, jacobi_norm_h, weight_normalizer, JacobiParams,
};
pub use quadrature::gauss_jacobi;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecialError {
    #[error("log_gamma requires x > 0, got {0}")]
    GammaDomain(f64),
    #[error("invalid Jacobi parameters: alpha = {alpha}, beta = {beta} (need > -1)")]
    BadParams { alpha: f64, beta: f64 },
    #[error("quadrature root {index} of {degree} failed to converge")]
    RootConvergence { index: usize, degree: usize },
}
