//! Run configuration: a small JSON schema shared by the CLI and the
//! examples, with validation, canonical hashing, and builders for the
//! problem objects it describes.
//!
//! Reproducibility contract: every artifact a run writes is stamped with the
//! SHA-256 hash of the canonical serialization of the *effective*
//! configuration (after any command-line overrides), so identical stamps
//! mean identical inputs, and reruns with the same configuration and seed
//! are byte-identical.

use crate::geometry::{GeometryError, ProblemParams};
use crate::solver::{CouplingSpec, SolveOptions, SolverError};
use crate::spectral::{Problem, SpectralError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// How the coupling exponents (a_ij, b_ij) split the critical power
/// a_ij + b_ij = 2*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentMode {
    /// a_ij = b_ij = 2*/2 for every pair.
    Symmetric,
    /// a_ij = 0.6 * 2*, b_ij = 0.4 * 2* for i < j (and the transposed pair
    /// exponents for i > j).
    Skew,
}

impl ExponentMode {
    /// The (a, b) pair used for i < j.
    pub fn lower_pair(self, two_star: f64) -> (f64, f64) {
        match self {
            ExponentMode::Symmetric => (0.5 * two_star, 0.5 * two_star),
            ExponentMode::Skew => (0.6 * two_star, 0.4 * two_star),
        }
    }
}

/// One run of the solver pipeline, as read from `--config`.
///
/// `k` is the field resolution (number of retained invariant modes), `q` the
/// quadrature size; both appear in JSON as upper-case `K` and `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub m: usize,
    pub n: usize,
    pub s: f64,
    pub ell: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    pub eta_schedule: Vec<f64>,
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub a_exp_mode: ExponentMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m: 2,
            n: 2,
            s: 0.75,
            ell: 2,
            k: 256,
            q: 512,
            eta_schedule: vec![-1.0, -10.0, -100.0, -1000.0, -10000.0],
            tol: 1e-8,
            restarts: 3,
            seed: 0,
            a_exp_mode: ExponentMode::Symmetric,
        }
    }
}

impl RunConfig {
    /// Reads and validates a configuration file.
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::Invalid(msg));
        if self.m < 2 || self.n < 2 {
            return fail(format!(
                "block dimensions must be >= 2, got m = {}, n = {}",
                self.m, self.n
            ));
        }
        if !(self.s > 0.0 && self.s < 1.0) {
            return fail(format!("s must lie in (0, 1), got {}", self.s));
        }
        if self.ell < 1 {
            return fail("ell must be >= 1".into());
        }
        if self.k < 8 {
            return fail(format!("K must be >= 8, got {}", self.k));
        }
        if self.q < self.k {
            return fail(format!("need K <= Q, got K = {}, Q = {}", self.k, self.q));
        }
        if self.eta_schedule.is_empty() {
            return fail("eta_schedule must not be empty".into());
        }
        let mut prev = 0.0;
        for (idx, &eta) in self.eta_schedule.iter().enumerate() {
            if !(eta < 0.0) {
                return fail(format!("eta_schedule[{idx}] = {eta} must be negative"));
            }
            if idx > 0 && !(eta < prev) {
                return fail(format!(
                    "eta_schedule must be strictly decreasing, got {prev} then {eta}"
                ));
            }
            prev = eta;
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return fail(format!("tol must be positive and finite, got {}", self.tol));
        }
        // The exponent split must keep every exponent > 1 so the coupling
        // stays differentiable; this depends on 2*.
        let params = self.problem_params()?;
        let (a, b) = self.a_exp_mode.lower_pair(params.two_star);
        if !(a > 1.0 && b > 1.0) {
            return fail(format!(
                "exponent mode yields (a, b) = ({a}, {b}) for 2* = {}; both must exceed 1",
                params.two_star
            ));
        }
        Ok(())
    }

    /// Canonical serialization: fixed field order, one line. The hash input.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    /// SHA-256 of the canonical serialization, hex-encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn problem_params(&self) -> Result<ProblemParams, ConfigError> {
        Ok(ProblemParams::new(self.m, self.n, self.s)?)
    }

    /// Builds the spectral problem at the configured resolution.
    pub fn build_problem(&self) -> Result<Problem, ConfigError> {
        Ok(Problem::new(self.problem_params()?, self.k, self.q)?)
    }

    /// The coupling specification at a given competition strength.
    pub fn coupling(&self, eta: f64) -> Result<CouplingSpec, ConfigError> {
        let params = self.problem_params()?;
        let (a, b) = self.a_exp_mode.lower_pair(params.two_star);
        Ok(CouplingSpec::uniform(self.ell, eta, a, b, params.two_star)?)
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            restarts: self.restarts,
            seed: self.seed,
            ..SolveOptions::default()
        }
    }
}
