//! The sign-change obstruction: for a segregated pair, the difference
//! v = u_1 - u_2 has interacting positive and negative parts,
//! <v^-, v^+>_{H^s} > 0, which is exactly why glued sign-changing profiles
//! cannot be energy minimizers.

use super::SolverError;
use crate::spectral::{Problem, SpectralField};

#[derive(Debug, Clone)]
pub struct SignChangeReport {
    /// <v^-, v^+>_{H^s} with v = u_1 - u_2 (signed parts: v = v^+ + v^-).
    pub inner: f64,
    pub v_norm2: f64,
    pub plus_norm2: f64,
    pub minus_norm2: f64,
}

impl SignChangeReport {
    /// The obstruction normalized by |v|^2; the acceptance margin.
    pub fn margin(&self) -> f64 {
        self.inner / self.v_norm2.max(1e-300)
    }
}

/// Computes <v^-, v^+>_{H^s} for v = u_1 - u_2 by the polarization identity
/// (|v|^2 - |v^+|^2 - |v^-|^2)/2, every norm taken through the full
/// quadrature-mode expansion of the node values (the parts are not
/// band-limited even when v is).
pub fn sign_change_obstruction(
    pr: &Problem,
    u1: &SpectralField,
    u2: &SpectralField,
) -> Result<SignChangeReport, SolverError> {
    let a = pr.synthesize(u1)?;
    let b = pr.synthesize(u2)?;
    let v: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let plus: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    let minus: Vec<f64> = v.iter().map(|x| x.min(0.0)).collect();
    let v_norm2 = pr.sobolev_norm2_values(&v)?;
    let plus_norm2 = pr.sobolev_norm2_values(&plus)?;
    let minus_norm2 = pr.sobolev_norm2_values(&minus)?;
    Ok(SignChangeReport {
        inner: 0.5 * (v_norm2 - plus_norm2 - minus_norm2),
        v_norm2,
        plus_norm2,
        minus_norm2,
    })
}
