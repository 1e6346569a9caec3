//! Direct evaluation of the sphere bilinear form as a singular double
//! integral, independent of the spectral route.
//!
//! For invariant fields the double sphere integral collapses to four angles:
//! the two orbit angles and one relative angle per block. The integrand is
//! absolutely integrable with an algebraic edge along the diagonal, handled
//! by a power-law grading of the relative variables.

use super::{Problem, SpectralField, SpectralError};
use crate::geometry::sphere_surface;
use crate::special::{gauss_jacobi, JacobiParams};
use rayon::prelude::*;

/// Resolution knobs for the direct double integral.
///
/// The error estimate compares the base resolution with one 1.5x finer; the
/// result is accepted when the difference is below `max(target_rel * |value|,
/// target_abs)`.
#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    pub n_theta: usize,
    pub n_delta: usize,
    pub n_phi: usize,
    /// Power-law grading exponent for the relative variables; defaults to
    /// 2/(2 - 2s), which makes the graded edge profile C^1.
    pub grading: Option<f64>,
    pub target_rel: f64,
    pub target_abs: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            n_theta: 96,
            n_delta: 64,
            n_phi: 48,
            grading: None,
            target_rel: 0.02,
            target_abs: 0.05,
        }
    }
}

/// Pair-independent tables of the reduced 4-D quadrature at one resolution:
/// evaluation angles and fully folded weights (orbit measures, block-sphere
/// ring integrals, symmetry factor, and the singular-form constant).
struct Level {
    thetas: Vec<f64>,
    /// theta' for every (theta, delta) cell, row-major n_theta x n_delta.
    theta_primes: Vec<f64>,
    /// folded weight per cell, same layout; the form is
    /// sum w * (w1(t)-w1(t')) * (w2(t)-w2(t')).
    weights: Vec<f64>,
}

/// Precomputed two-level kernel; build once, evaluate many pairs.
pub struct DirectKernel {
    coarse: Level,
    fine: Level,
    target_rel: f64,
    target_abs: f64,
}

fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Reuse the Jacobi machinery at alpha = beta = 0 and strip its weight
    // normalizer (pi^2) while mapping (-1,1) -> (0,1).
    let params = JacobiParams::new(0.0, 0.0).expect("legendre params");
    let (x, w) = gauss_jacobi(params, n).expect("legendre rule");
    let c = std::f64::consts::PI * std::f64::consts::PI * 2.0;
    (
        x.iter().map(|&t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|&wi| wi / c).collect(),
    )
}

fn build_level(problem: &Problem, n_theta: usize, n_delta: usize, n_phi: usize, gamma: f64) -> Level {
    let p = &problem.params;
    let (m, n, s) = (p.m as f64, p.n as f64, p.s);
    let pw = (p.big_n as f64 + 2.0 * s) / 2.0;
    let pi = std::f64::consts::PI;

    let (u_theta, w_theta) = gauss_legendre_01(n_theta);
    let (u_delta, w_delta) = gauss_legendre_01(n_delta);
    let (u_phi, w_phi) = gauss_legendre_01(n_phi);

    // Graded relative angles phi = pi * v^gamma, shared by both blocks; the
    // factor 4 sin^2(phi/2) enters the distance, the measure brings
    // sin^{m-2} resp. sin^{n-2}.
    let mut sx = Vec::with_capacity(n_phi); // 4 sin^2(phi_x/2), unscaled
    let mut mx = Vec::with_capacity(n_phi); // measure * jacobian * GL weight
    let mut sy = Vec::with_capacity(n_phi);
    let mut my = Vec::with_capacity(n_phi);
    for (&v, &wv) in u_phi.iter().zip(&w_phi) {
        let phi = pi * v.powf(gamma);
        let jac = pi * gamma * v.powf(gamma - 1.0) * wv;
        let half = (0.5 * phi).sin();
        sx.push(4.0 * half * half);
        mx.push(phi.sin().powf(m - 2.0) * jac);
        sy.push(4.0 * half * half);
        my.push(phi.sin().powf(n - 2.0) * jac);
    }

    // Everything independent of the field pair: symmetry factor 2, the 1/4
    // from the two orbit-angle Jacobians, the four ring measures, and
    // c_{N,s}/2 from the singular form itself.
    let ring = sphere_surface(p.m) * sphere_surface(p.m - 1) * sphere_surface(p.n)
        * sphere_surface(p.n - 1);
    let prefactor = 2.0 * 0.25 * ring * p.c_ns / 2.0;

    let thetas: Vec<f64> = u_theta.iter().map(|&u| pi * u).collect();
    let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..n_theta)
        .into_par_iter()
        .map(|a| {
            let theta = thetas[a];
            let w_a = w_theta[a] * pi; // d(theta) jacobian
            let meas_a = (0.5 * theta).sin().powf(m - 1.0) * (0.5 * theta).cos().powf(n - 1.0);
            let mut tp_row = Vec::with_capacity(n_delta);
            let mut w_row = Vec::with_capacity(n_delta);
            for (&ud, &wd) in u_delta.iter().zip(&w_delta) {
                let span = pi - theta;
                let delta = span * ud.powf(gamma);
                let jac_d = span * gamma * ud.powf(gamma - 1.0) * wd;
                let tprime = theta + delta;
                let meas_b =
                    (0.5 * tprime).sin().powf(m - 1.0) * (0.5 * tprime).cos().powf(n - 1.0);
                // Distance on the sphere: |z - z'|^2 = base + ss'*sx + cc'*sy
                // with base from the orbit-angle separation alone.
                let qd = (0.25 * delta).sin();
                let base = 4.0 * qd * qd;
                let ssp = (0.5 * theta).sin() * (0.5 * tprime).sin();
                let ccp = (0.5 * theta).cos() * (0.5 * tprime).cos();
                let mut ring_sum = 0.0;
                for i in 0..n_phi {
                    let dx = base + ssp * sx[i];
                    let mxi = mx[i];
                    let mut acc = 0.0;
                    for j in 0..n_phi {
                        let d2 = dx + ccp * sy[j];
                        acc += my[j] * d2.powf(-pw);
                    }
                    ring_sum += mxi * acc;
                }
                tp_row.push(tprime);
                w_row.push(prefactor * w_a * jac_d * meas_a * meas_b * ring_sum);
            }
            (tp_row, w_row)
        })
        .collect();

    let mut theta_primes = Vec::with_capacity(n_theta * n_delta);
    let mut weights = Vec::with_capacity(n_theta * n_delta);
    for (tp, w) in rows {
        theta_primes.extend(tp);
        weights.extend(w);
    }
    Level {
        thetas,
        theta_primes,
        weights,
    }
}

impl DirectKernel {
    pub fn new(problem: &Problem, spec: &QuadSpec) -> Self {
        let gamma = spec
            .grading
            .unwrap_or(2.0 / (2.0 - 2.0 * problem.params.s));
        let coarse = build_level(problem, spec.n_theta, spec.n_delta, spec.n_phi, gamma);
        let fine = build_level(
            problem,
            spec.n_theta * 3 / 2,
            spec.n_delta * 3 / 2,
            spec.n_phi * 3 / 2,
            gamma,
        );
        Self {
            coarse,
            fine,
            target_rel: spec.target_rel,
            target_abs: spec.target_abs,
        }
    }

    fn level_value(&self, problem: &Problem, level: &Level, w1: &[f64], w2: &[f64]) -> f64 {
        let n_delta = level.theta_primes.len() / level.thetas.len();
        let t_grid: Vec<f64> = level.thetas.iter().map(|t| t.cos()).collect();
        let tp_grid: Vec<f64> = level.theta_primes.iter().map(|t| t.cos()).collect();
        let v1 = problem.basis.eval_on_grid(w1, &t_grid);
        let v2 = problem.basis.eval_on_grid(w2, &t_grid);
        let v1p = problem.basis.eval_on_grid(w1, &tp_grid);
        let v2p = problem.basis.eval_on_grid(w2, &tp_grid);
        let mut acc = 0.0;
        for a in 0..level.thetas.len() {
            for b in 0..n_delta {
                let idx = a * n_delta + b;
                acc += level.weights[idx] * (v1[a] - v1p[idx]) * (v2[a] - v2p[idx]);
            }
        }
        acc
    }

    /// Full bilinear form: singular double integral plus the zeroth-order
    /// term A_{N,s} <w1, w2>_{L^2}.
    pub fn form(
        &self,
        problem: &Problem,
        w1: &SpectralField,
        w2: &SpectralField,
    ) -> Result<f64, SpectralError> {
        let k = problem.k();
        if w1.coeffs().len() != k || w2.coeffs().len() != k {
            return Err(SpectralError::ShapeMismatch {
                got: w1.coeffs().len().max(w2.coeffs().len()),
                want: k,
            });
        }
        let l2: f64 = w1.coeffs().iter().zip(w2.coeffs()).map(|(a, b)| a * b).sum();
        let zero_order = problem.params.a_ns * l2;
        let coarse = self.level_value(problem, &self.coarse, w1.coeffs(), w2.coeffs());
        let fine = self.level_value(problem, &self.fine, w1.coeffs(), w2.coeffs());
        let value = fine + zero_order;
        let err = (fine - coarse).abs();
        if err > (self.target_rel * value.abs()).max(self.target_abs) {
            return Err(SpectralError::Accuracy {
                achieved: err,
                target: (self.target_rel * value.abs()).max(self.target_abs),
            });
        }
        Ok(value)
    }
}

/// One-shot direct evaluation of the bilinear form on a pair of fields.
///
/// Builds the two-level kernel and discards it; batch callers should hold a
/// [`DirectKernel`] instead.
pub fn dirichlet_form_direct(
    problem: &Problem,
    w1: &SpectralField,
    w2: &SpectralField,
    spec: &QuadSpec,
) -> Result<f64, SpectralError> {
    DirectKernel::new(problem, spec).form(problem, w1, w2)
}
