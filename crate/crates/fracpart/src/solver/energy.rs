//! Energies and gradients of the single equation and the coupled system.
//!
//! The functional is
//!   J(u) = 1/2 sum_i |u_i|_{H^s}^2 - 1/(2*) sum_i int |u_i|^{2*}
//!          - sum_{i<j} eta_ij int |u_i|^{b_ij} |u_j|^{a_ij},
//! every integral taken against the orbit weight h. With eta_ij < 0 the
//! coupling term penalizes overlap: the system is competitive.

use super::{CouplingSpec, SolverError};
use crate::spectral::{Problem, SpectralField};

/// sign(v) |v|^q for q > 0, continuous through v = 0.
pub(crate) fn odd_pow(v: f64, q: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(q)
    }
}

/// Single-field energy J(u) = 1/2 |u|^2 - 1/(2*) int |u|^{2*}.
///
/// With `mask = (t_lo, t_hi)` the field must vanish (relative to its sup, up
/// to `zero_tol`) at every quadrature node outside the mask, and the norm is
/// measured through the full quadrature-mode expansion, which is how interval
/// (Dirichlet) energies are defined. Unmasked fields use the Parseval norm of
/// their own coefficients.
pub fn energy_j(
    pr: &Problem,
    field: &SpectralField,
    mask: Option<(f64, f64)>,
    zero_tol: f64,
) -> Result<f64, SolverError> {
    let values = pr.synthesize(field)?;
    let norm2 = match mask {
        None => pr.sobolev_norm2(field)?,
        Some((lo, hi)) => {
            let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let mut worst = 0.0f64;
            for (&t, &v) in pr.basis.nodes().iter().zip(&values) {
                if !(lo < t && t < hi) {
                    worst = worst.max(v.abs());
                }
            }
            if worst > zero_tol * sup.max(1e-300) {
                return Err(SolverError::SupportViolation {
                    component: 0,
                    max_outside: worst,
                });
            }
            pr.sobolev_norm2_values(&values)?
        }
    };
    let two_star = pr.params.two_star;
    Ok(0.5 * norm2 - pr.lp_integral(&values, two_star)? / two_star)
}

/// The coupling integral int |u_j|^{a_ij} |u_i|^{b_ij} h dt of one ordered
/// pair, from node values.
fn pair_integral(
    pr: &Problem,
    coupling: &CouplingSpec,
    vi: &[f64],
    vj: &[f64],
    i: usize,
    j: usize,
) -> f64 {
    let (a, b) = (coupling.a(i, j), coupling.b(i, j));
    pr.basis
        .weights()
        .iter()
        .zip(vi.iter().zip(vj))
        .map(|(w, (x, y))| w * x.abs().powf(b) * y.abs().powf(a))
        .sum()
}

/// Total coupling mass sum_{i<j} int |u_i|^{b_ij} |u_j|^{a_ij} h dt (without
/// the eta factors); the segregation diagnostic.
///
/// Like all system-level operations this evaluates the band-limited
/// synthesis of the coefficients, ignoring any cached node values.
pub fn coupling_integral(
    pr: &Problem,
    coupling: &CouplingSpec,
    fields: &[SpectralField],
) -> Result<f64, SolverError> {
    let values: Vec<Vec<f64>> = fields
        .iter()
        .map(|f| pr.basis.synthesize(f.coeffs()))
        .collect();
    let mut total = 0.0;
    for i in 0..coupling.ell() {
        for j in (i + 1)..coupling.ell() {
            total += pair_integral(pr, coupling, &values[i], &values[j], i, j);
        }
    }
    Ok(total)
}

/// System energy; see the module docs for the functional. Evaluated on the
/// band-limited synthesis of the coefficients (cached values are ignored), so
/// the energy, the gradient, and the Nehari projection all see the same
/// function.
pub fn energy_system(
    pr: &Problem,
    coupling: &CouplingSpec,
    fields: &[SpectralField],
) -> Result<f64, SolverError> {
    let ell = coupling.ell();
    assert_eq!(fields.len(), ell, "field count must match the coupling");
    let two_star = pr.params.two_star;
    let values: Vec<Vec<f64>> = fields
        .iter()
        .map(|f| pr.basis.synthesize(f.coeffs()))
        .collect();
    let mut total = 0.0;
    for (f, v) in fields.iter().zip(&values) {
        total += 0.5 * pr.sobolev_norm2(f)?;
        total -= pr.lp_integral(v, two_star)? / two_star;
    }
    for i in 0..ell {
        for j in (i + 1)..ell {
            total -= coupling.eta(i, j) * pair_integral(pr, coupling, &values[i], &values[j], i, j);
        }
    }
    Ok(total)
}

/// Coefficient-space gradient of `energy_system`:
///   dJ/dc_{i,k} = phi_k c_{i,k} - < |u_i|^{2*-2} u_i
///                 + sum_{j != i} eta_ij b_ij |u_j|^{a_ij} |u_i|^{b_ij-2} u_i , p_k >_h.
pub fn grad_system(
    pr: &Problem,
    coupling: &CouplingSpec,
    fields: &[SpectralField],
) -> Result<Vec<Vec<f64>>, SolverError> {
    let ell = coupling.ell();
    assert_eq!(fields.len(), ell, "field count must match the coupling");
    let k = pr.k();
    let q = pr.q();
    let two_star = pr.params.two_star;
    let values: Vec<Vec<f64>> = fields
        .iter()
        .map(|f| pr.basis.synthesize(f.coeffs()))
        .collect();

    let mut grads = Vec::with_capacity(ell);
    for i in 0..ell {
        let mut nonlinear = vec![0.0; q];
        for (nl, &v) in nonlinear.iter_mut().zip(&values[i]) {
            *nl = odd_pow(v, two_star - 1.0);
        }
        for j in 0..ell {
            if j == i {
                continue;
            }
            let (eta, a, b) = (coupling.eta(i, j), coupling.a(i, j), coupling.b(i, j));
            for ((nl, &vi), &vj) in nonlinear.iter_mut().zip(&values[i]).zip(&values[j]) {
                *nl += eta * b * vj.abs().powf(a) * odd_pow(vi, b - 1.0);
            }
        }
        let proj = pr.basis.analyze_to(&nonlinear, k);
        let mut g = vec![0.0; k];
        for (kk, gk) in g.iter_mut().enumerate() {
            *gk = pr.phi(kk) * fields[i].coeffs()[kk] - proj[kk];
        }
        grads.push(g);
    }
    Ok(grads)
}
