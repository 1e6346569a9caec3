//! Brute-force two-cell partition search: slide the interface over a grid and
//! solve both Dirichlet problems at every position. Entirely independent of
//! the segregation route, which is the point -- the two must agree.

use super::{
    solve_dirichlet_interval, Partition, PartitionRoute, SolveOptions, SolverError,
};
use crate::spectral::Problem;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct SweepPoint {
    /// Interface angle.
    pub a: f64,
    /// c_U of the cell (0, a).
    pub c_left: f64,
    /// c_U of the cell (a, pi).
    pub c_right: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Index of the grid minimizer of the total.
    pub argmin: usize,
    pub partition: Partition,
}

/// The default interface grid: symmetric about pi/2 with step 0.02 rad, so
/// that for equal blocks the mirror image of every grid point is again a grid
/// point (the symmetry check is exact on the grid).
pub fn default_sweep_grid() -> Vec<f64> {
    let half = std::f64::consts::FRAC_PI_2;
    (-73..=73).map(|j| half + 0.02 * j as f64).collect()
}

/// Sweeps the two-cell interface over `grid` (ascending angles in (0, pi)).
/// Grid points are independent and solved in parallel; the returned points
/// keep the grid order, so the output is deterministic.
pub fn partition_sweep(
    pr: &Problem,
    grid: &[f64],
    opts: &SolveOptions,
) -> Result<SweepResult, SolverError> {
    let pi = std::f64::consts::PI;
    if grid.is_empty() {
        return Err(SolverError::Numerics("empty sweep grid".into()));
    }
    let points: Vec<SweepPoint> = grid
        .par_iter()
        .map(|&a| {
            if !(0.0 < a && a < pi) {
                return Err(SolverError::Numerics(format!(
                    "sweep angle {a} outside (0, pi)"
                )));
            }
            let left = solve_dirichlet_interval(pr, 0.0, a, opts)?;
            let right = solve_dirichlet_interval(pr, a, pi, opts)?;
            Ok(SweepPoint {
                a,
                c_left: left.c_u,
                c_right: right.c_u,
                total: left.c_u + right.c_u,
            })
        })
        .collect::<Result<_, _>>()?;
    let argmin = points
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total.total_cmp(&y.1.total))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    let best = &points[argmin];
    let partition = Partition {
        angles: vec![best.a],
        cell_energies: vec![best.c_left, best.c_right],
        total: best.total,
        route: PartitionRoute::Sweep,
    };
    Ok(SweepResult {
        points,
        argmin,
        partition,
    })
}
