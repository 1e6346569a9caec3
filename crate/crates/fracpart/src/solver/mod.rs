//! Variational engine: energies and gradients of the competitive system,
//! Nehari projection, least-energy minimization, Dirichlet interval problems,
//! segregation continuation, and the brute-force partition sweep.
//!
//! All solvers work on the 1-D reduced profiles: an invariant function on the
//! sphere is a coefficient vector in the weighted Jacobi basis, nonlinear
//! terms are evaluated at quadrature nodes, and every integral is a weighted
//! node sum. Runs are deterministic for a fixed seed.

mod energy;
mod interval;
mod minimize;
mod nehari;
mod segregate;
mod sign_change;
mod sweep;

pub use energy::{coupling_integral, energy_j, energy_system, grad_system};
pub use interval::{solve_dirichlet_interval, IntervalSolution};
pub use minimize::{bump_init, minimize_system};
pub use nehari::nehari_project;
pub use segregate::{continuation_segregate, SegregationRun, StageRecord};
pub use sign_change::{sign_change_obstruction, SignChangeReport};
pub use sweep::{default_sweep_grid, partition_sweep, SweepPoint, SweepResult};

use crate::spectral::{SpectralError, SpectralField};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("component {component} has mass {max_outside:e} outside its prescribed support")]
    SupportViolation { component: usize, max_outside: f64 },
    #[error("Nehari projection did not converge within {iters} iterations")]
    ProjectionFailure { iters: usize },
    #[error("component {component} collapsed: |u| = {norm:e} fell below the floor {floor:e}")]
    Collapse {
        component: usize,
        norm: f64,
        floor: f64,
    },
    #[error("segregation incomplete: found {found} interface(s) between components {i} and {j}, expected 1")]
    SegregationIncomplete { i: usize, j: usize, found: usize },
    #[error("interval ({a}, {b}) holds {nodes} quadrature nodes; at least {min} are needed")]
    Resolution {
        a: f64,
        b: f64,
        nodes: usize,
        min: usize,
    },
    #[error("numerical breakdown: {0}")]
    Numerics(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Competition structure of the l-component system: coupling strengths
/// eta_ij < 0 and the exponent pair (a_ij, b_ij) of each cross term
/// |u_j|^{a_ij} |u_i|^{b_ij}.
#[derive(Debug, Clone)]
pub struct CouplingSpec {
    ell: usize,
    eta: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl CouplingSpec {
    /// Builds and validates a coupling from full matrices (row-major l x l).
    ///
    /// Required structure: eta symmetric with zero diagonal and negative
    /// off-diagonal entries; a_ij = b_ji; a_ij + b_ij = two_star; all
    /// exponents > 1.
    pub fn new(
        ell: usize,
        eta: Vec<f64>,
        a: Vec<f64>,
        b: Vec<f64>,
        two_star: f64,
    ) -> Result<Self, SolverError> {
        let bad = |msg: String| Err(SolverError::Numerics(msg));
        if ell == 0 {
            return bad("coupling needs at least one component".into());
        }
        if eta.len() != ell * ell || a.len() != ell * ell || b.len() != ell * ell {
            return bad(format!("coupling matrices must be {ell}x{ell}"));
        }
        for i in 0..ell {
            if eta[i * ell + i] != 0.0 {
                return bad(format!("eta has nonzero diagonal at {i}"));
            }
            for j in 0..ell {
                if i == j {
                    continue;
                }
                let (e, et) = (eta[i * ell + j], eta[j * ell + i]);
                if !(e < 0.0) {
                    return bad(format!("eta[{i}][{j}] = {e} must be negative"));
                }
                if (e - et).abs() > 1e-12 * e.abs() {
                    return bad(format!("eta is not symmetric at ({i},{j})"));
                }
                let (aij, bij) = (a[i * ell + j], b[i * ell + j]);
                if !(aij > 1.0) || !(bij > 1.0) {
                    return bad(format!("exponents at ({i},{j}) must exceed 1"));
                }
                if (aij + bij - two_star).abs() > 1e-12 * two_star {
                    return bad(format!("a+b at ({i},{j}) must equal the critical exponent"));
                }
                if (aij - b[j * ell + i]).abs() > 1e-12 * two_star {
                    return bad(format!("a[{i}][{j}] must equal b[{j}][{i}]"));
                }
            }
        }
        Ok(Self { ell, eta, a, b })
    }

    /// The symmetric default: every cross term is |u_i u_j|^{two_star/2} with
    /// a uniform strength.
    pub fn symmetric(ell: usize, eta_value: f64, two_star: f64) -> Result<Self, SolverError> {
        let half = two_star / 2.0;
        Self::uniform(ell, eta_value, half, half, two_star)
    }

    /// Uniform strength with one exponent pair used for every i < j (and the
    /// transposed pair for i > j, as the symmetry relations demand).
    pub fn uniform(
        ell: usize,
        eta_value: f64,
        a_lower: f64,
        b_lower: f64,
        two_star: f64,
    ) -> Result<Self, SolverError> {
        let mut eta = vec![0.0; ell * ell];
        let mut a = vec![0.0; ell * ell];
        let mut b = vec![0.0; ell * ell];
        for i in 0..ell {
            for j in 0..ell {
                if i == j {
                    continue;
                }
                eta[i * ell + j] = eta_value;
                // a_ij = b_ji pins the transposed pair.
                let (aij, bij) = if i < j {
                    (a_lower, b_lower)
                } else {
                    (b_lower, a_lower)
                };
                a[i * ell + j] = aij;
                b[i * ell + j] = bij;
            }
        }
        Self::new(ell, eta, a, b, two_star)
    }

    /// Same exponents, every off-diagonal strength replaced by `eta_value`.
    pub fn with_eta(&self, eta_value: f64) -> Self {
        let mut eta = vec![0.0; self.ell * self.ell];
        for i in 0..self.ell {
            for j in 0..self.ell {
                if i != j {
                    eta[i * self.ell + j] = eta_value;
                }
            }
        }
        Self {
            ell: self.ell,
            eta,
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn eta(&self, i: usize, j: usize) -> f64 {
        self.eta[i * self.ell + j]
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.ell + j]
    }

    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.b[i * self.ell + j]
    }
}

/// Knobs shared by the iterative solvers.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Relative projected-gradient tolerance.
    pub tol: f64,
    /// Iteration cap per minimization; reaching it is a recorded (not fatal)
    /// outcome, the returned residual tells the story.
    pub max_iter: usize,
    /// Fresh-initialization attempts after a Nehari projection failure.
    pub restarts: usize,
    /// Collapse detector: any component H^s norm below this aborts.
    pub d0_floor: f64,
    /// Values below this (relative to the component sup) count as zero in
    /// support checks.
    pub zero_tol: f64,
    /// Interface crossings closer than this (radians) are merged.
    pub merge_tol: f64,
    /// Resolution of the theta grid used for crossing detection.
    pub crossing_grid: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 4000,
            restarts: 3,
            d0_floor: 1e-3,
            zero_tol: 1e-8,
            merge_tol: 0.01,
            crossing_grid: 4096,
            seed: 0,
        }
    }
}

/// A solver outcome: fields on the Nehari set plus bookkeeping.
#[derive(Debug, Clone)]
pub struct SystemState {
    pub fields: Vec<SpectralField>,
    pub coupling: CouplingSpec,
    pub energy: f64,
    /// Relative Sobolev-dual norm of the full gradient at the final iterate.
    pub residual: f64,
    pub iterations: usize,
    /// Smallest component H^s norm observed along the whole trajectory.
    pub trajectory_min_norm: f64,
}

/// Route that produced a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionRoute {
    Segregation,
    Sweep,
}

impl PartitionRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            PartitionRoute::Segregation => "segregation",
            PartitionRoute::Sweep => "sweep",
        }
    }
}

/// An angular partition 0 < a_1 < ... < a_{l-1} < pi of the orbit interval,
/// with the least energy of each cell.
#[derive(Debug, Clone)]
pub struct Partition {
    pub angles: Vec<f64>,
    pub cell_energies: Vec<f64>,
    pub total: f64,
    pub route: PartitionRoute,
}
