//! Spectral machinery for symmetry-reduced fractional Yamabe problems on the
//! round sphere and for the optimal-partition limit of competitive systems.
//!
//! The sphere carries a block-rotation symmetry whose invariant functions
//! reduce to profiles on [-1, 1] weighted by a Jacobi weight. This crate
//! provides:
//!
//! - the Jacobi polynomial toolbox (recurrences, norms, Gauss quadrature),
//! - the spectral side of the conformal fractional Laplacian (symbol,
//!   eigenvalues, Sobolev norms, a direct double-integral cross-check),
//! - variational solvers for the single equation and for competitive
//!   l-component systems (Nehari projection, energy descent, Dirichlet
//!   interval problems, segregation continuation, partition sweeps),
//! - a small driver layer shared by the CLI binary and the examples.

pub mod cli;
pub mod config;
pub mod geometry;
pub mod solver;
pub mod special;
pub mod spectral;

pub use config::RunConfig;
pub use geometry::ProblemParams;
pub use spectral::{JacobiBasis, Problem, SpectralField, SpectrumTable};
