//! Spectral side of the conformal fractional operator: the orbit-weighted
//! Jacobi basis, coefficient fields, the operator symbol, and Sobolev norms.

mod bilinear;
mod holder;

pub use bilinear::{dirichlet_form_direct, QuadSpec};
pub use holder::holder_partial_sums;

use crate::geometry::ProblemParams;
use crate::special::{
    gauss_jacobi, jacobi_eval_all, jacobi_norm_h, JacobiParams, SpecialError,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("coefficient/value vector has length {got}, basis expects {want}")]
    ShapeMismatch { got: usize, want: usize },
    #[error("symbol argument must be a nonnegative real, got {0}")]
    SymbolDomain(f64),
    #[error("direct bilinear quadrature did not reach target {target:e}: estimated error {achieved:e}")]
    Accuracy { achieved: f64, target: f64 },
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// Symbol phi_{N,s}(lambda) = G(1/2 + s + x) / G(1/2 - s + x) with
/// x = sqrt(lambda + ((N-1)/2)^2); the operator acts diagonally by phi.
pub fn symbol(params: &ProblemParams, lambda: f64) -> Result<f64, SpectralError> {
    if !(lambda >= 0.0) {
        return Err(SpectralError::SymbolDomain(lambda));
    }
    let half_nm1 = (params.big_n as f64 - 1.0) / 2.0;
    let x = (lambda + half_nm1 * half_nm1).sqrt();
    let s = params.s;
    Ok((crate::special::log_gamma(0.5 + s + x)? - crate::special::log_gamma(0.5 - s + x)?).exp())
}

/// Eigenvalue table of the invariant problem.
///
/// `lambda[i] = 2i(2i + N - 1)` are the eigenvalues seen by invariant
/// functions; `b[j] = j(j + N - 1)` is the full spherical ladder, carried to
/// index 2(len-1) so that `lambda[i] == b[2i]` stays checkable.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub lambda: Vec<f64>,
    pub b: Vec<f64>,
    pub phi: Vec<f64>,
}

/// First `k` invariant eigenvalues and symbol values.
pub fn spectrum(params: &ProblemParams, k: usize) -> Result<SpectrumTable, SpectralError> {
    let nm1 = params.big_n as f64 - 1.0;
    let lambda: Vec<f64> = (0..k).map(|i| 2.0 * i as f64 * (2.0 * i as f64 + nm1)).collect();
    let b: Vec<f64> = (0..(2 * k).max(1) - 1)
        .map(|j| j as f64 * (j as f64 + nm1))
        .collect();
    let phi = lambda
        .iter()
        .map(|&l| symbol(params, l))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumTable { lambda, b, phi })
}

/// Ratios r_i = phi(b_i) / b_i^s for i = 1..=imax; r_i -> 1, witnessing that
/// the symbol grows like lambda^s.
pub fn symbol_asymptotics(params: &ProblemParams, imax: usize) -> Result<Vec<f64>, SpectralError> {
    let nm1 = params.big_n as f64 - 1.0;
    (1..=imax)
        .map(|i| {
            let b = i as f64 * (i as f64 + nm1);
            Ok(symbol(params, b)? / b.powf(params.s))
        })
        .collect()
}

/// Orthonormal Jacobi basis sampled at a Gauss rule of its own weight.
///
/// `k` is the mode truncation used for fields; the evaluation table is kept
/// through all `q` quadrature modes because masked fields (Dirichlet interval
/// problems) measure their norm through the full expansion.
#[derive(Debug, Clone)]
pub struct JacobiBasis {
    pub params: JacobiParams,
    pub k: usize,
    pub q: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    thetas: Vec<f64>,
    norms: Vec<f64>,
    /// Row-major (mode i, node r) table of normalized values p_i(x_r), i < q.
    table: Vec<f64>,
}

impl JacobiBasis {
    pub fn new(params: JacobiParams, k: usize, q: usize) -> Result<Self, SpectralError> {
        assert!(k >= 1 && q >= k, "need 1 <= k <= q");
        let (nodes, weights) = gauss_jacobi(params, q)?;
        let thetas: Vec<f64> = nodes.iter().map(|t| t.clamp(-1.0, 1.0).acos()).collect();
        let norms: Vec<f64> = (0..q)
            .map(|i| jacobi_norm_h(params, i))
            .collect::<Result<_, _>>()?;
        let mut table = vec![0.0; q * q];
        let mut buf = vec![0.0; q];
        for (r, &x) in nodes.iter().enumerate() {
            jacobi_eval_all(params, q - 1, x, &mut buf);
            for i in 0..q {
                table[i * q + r] = buf[i] / norms[i];
            }
        }
        Ok(Self {
            params,
            k,
            q,
            nodes,
            weights,
            thetas,
            norms,
            table,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// arccos of the nodes: orbit angles of the quadrature points, descending
    /// in t means ascending theta ordering is reversed; kept aligned with
    /// `nodes` (so thetas decrease as t increases).
    pub fn theta_nodes(&self) -> &[f64] {
        &self.thetas
    }

    /// Normalized mode value p_i(x_r) from the precomputed table.
    pub fn mode_at_node(&self, i: usize, r: usize) -> f64 {
        self.table[i * self.q + r]
    }

    /// Normalized mode value at arbitrary t (recurrence; prefer the table at
    /// nodes).
    pub fn eval_mode(&self, i: usize, t: f64) -> f64 {
        crate::special::jacobi_eval(self.params, i, t) / self.norms[i]
    }

    /// Weighted integral of node values: approximates int f h dt.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// First `modes` coefficients of the node-value vector.
    pub fn analyze_to(&self, values: &[f64], modes: usize) -> Vec<f64> {
        assert_eq!(values.len(), self.q);
        let mut coeffs = vec![0.0; modes];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let row = &self.table[i * self.q..(i + 1) * self.q];
            *c = values
                .iter()
                .zip(&self.weights)
                .zip(row)
                .map(|((v, w), p)| v * w * p)
                .sum();
        }
        coeffs
    }

    /// Node values of a coefficient vector (any length <= q).
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        assert!(coeffs.len() <= self.q);
        let mut values = vec![0.0; self.q];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let row = &self.table[i * self.q..(i + 1) * self.q];
            for (v, p) in values.iter_mut().zip(row) {
                *v += c * p;
            }
        }
        values
    }

    /// Evaluate a coefficient vector on an arbitrary t-grid.
    pub fn eval_on_grid(&self, coeffs: &[f64], ts: &[f64]) -> Vec<f64> {
        let imax = coeffs.len().saturating_sub(1);
        let mut buf = vec![0.0; coeffs.len().max(1)];
        ts.iter()
            .map(|&t| {
                jacobi_eval_all(self.params, imax, t, &mut buf);
                coeffs
                    .iter()
                    .zip(&buf)
                    .zip(&self.norms)
                    .map(|((c, p), n)| c * p / n)
                    .sum()
            })
            .collect()
    }
}

/// A truncated invariant field, stored by coefficients in the orthonormal
/// basis, with optionally cached node values.
#[derive(Debug, Clone)]
pub struct SpectralField {
    coeffs: Vec<f64>,
    values: Option<Vec<f64>>,
}

impl SpectralField {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Self {
            coeffs,
            values: None,
        }
    }

    /// Assembles a field from both representations; the caller asserts that
    /// `values` is the node synthesis of `coeffs` (up to truncation).
    pub(crate) fn from_parts(coeffs: Vec<f64>, values: Option<Vec<f64>>) -> Self {
        Self { coeffs, values }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn cached_values(&self) -> Option<&[f64]> {
        self.values.as_deref()
    }
}

/// A ready-to-use discretization: parameters, basis, and symbol table
/// (carried through all q quadrature modes).
#[derive(Debug, Clone)]
pub struct Problem {
    pub params: ProblemParams,
    pub basis: JacobiBasis,
    spectrum: SpectrumTable,
}

impl Problem {
    pub fn new(params: ProblemParams, k: usize, q: usize) -> Result<Self, SpectralError> {
        let basis = JacobiBasis::new(JacobiParams::from_block_dims(params.m, params.n)?, k, q)?;
        let spectrum = spectrum(&params, q)?;
        Ok(Self {
            params,
            basis,
            spectrum,
        })
    }

    /// Convenience constructor with the default q = 2k margin.
    pub fn with_modes(params: ProblemParams, k: usize) -> Result<Self, SpectralError> {
        Self::new(params, k, 2 * k)
    }

    pub fn k(&self) -> usize {
        self.basis.k
    }

    pub fn q(&self) -> usize {
        self.basis.q
    }

    /// Symbol value at the i-th invariant eigenvalue (i < q).
    pub fn phi(&self, i: usize) -> f64 {
        self.spectrum.phi[i]
    }

    pub fn spectrum_table(&self) -> &SpectrumTable {
        &self.spectrum
    }

    fn check_len(&self, len: usize, want: usize) -> Result<(), SpectralError> {
        if len == want {
            Ok(())
        } else {
            Err(SpectralError::ShapeMismatch { got: len, want })
        }
    }

    /// Project node values onto the first k modes.
    pub fn analyze(&self, values: &[f64]) -> Result<SpectralField, SpectralError> {
        self.check_len(values.len(), self.q())?;
        Ok(SpectralField {
            coeffs: self.basis.analyze_to(values, self.k()),
            values: None,
        })
    }

    /// Node values of a field (cached copy if present).
    pub fn synthesize(&self, field: &SpectralField) -> Result<Vec<f64>, SpectralError> {
        self.check_len(field.coeffs.len(), self.k())?;
        if let Some(v) = &field.values {
            return Ok(v.clone());
        }
        Ok(self.basis.synthesize(&field.coeffs))
    }

    /// Builds a field from node values, caching them.
    pub fn field_from_values(&self, values: Vec<f64>) -> Result<SpectralField, SpectralError> {
        self.check_len(values.len(), self.q())?;
        Ok(SpectralField {
            coeffs: self.basis.analyze_to(&values, self.k()),
            values: Some(values),
        })
    }

    /// Applies the operator: multiply coefficient i by phi(lambda_i).
    pub fn apply_operator(&self, field: &SpectralField) -> Result<SpectralField, SpectralError> {
        self.check_len(field.coeffs.len(), self.k())?;
        Ok(SpectralField::from_coeffs(
            field
                .coeffs
                .iter()
                .zip(&self.spectrum.phi)
                .map(|(c, p)| c * p)
                .collect(),
        ))
    }

    /// H^s inner product sum_i phi_i c_i d_i of two k-mode fields.
    pub fn sobolev_inner(&self, a: &SpectralField, b: &SpectralField) -> Result<f64, SpectralError> {
        self.check_len(a.coeffs.len(), self.k())?;
        self.check_len(b.coeffs.len(), self.k())?;
        Ok(a.coeffs
            .iter()
            .zip(&b.coeffs)
            .zip(&self.spectrum.phi)
            .map(|((x, y), p)| x * y * p)
            .sum())
    }

    pub fn sobolev_norm2(&self, a: &SpectralField) -> Result<f64, SpectralError> {
        self.sobolev_inner(a, a)
    }

    /// H^s seminorm-with-mass of raw node values, measured through the full
    /// q-mode expansion. This is the norm masked (interval-supported) fields
    /// are measured in.
    pub fn sobolev_norm2_values(&self, values: &[f64]) -> Result<f64, SpectralError> {
        self.check_len(values.len(), self.q())?;
        let coeffs = self.basis.analyze_to(values, self.q());
        Ok(coeffs
            .iter()
            .zip(&self.spectrum.phi)
            .map(|(c, p)| c * c * p)
            .sum())
    }

    /// int |w|^p h dt by quadrature on node values.
    pub fn lp_integral(&self, values: &[f64], p: f64) -> Result<f64, SpectralError> {
        self.check_len(values.len(), self.q())?;
        Ok(values
            .iter()
            .zip(self.basis.weights())
            .map(|(v, w)| w * v.abs().powf(p))
            .sum())
    }
}
