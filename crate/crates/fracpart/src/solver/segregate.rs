//! Continuation to the segregation limit: re-solve the system along a
//! schedule of increasingly negative coupling strengths, warm-starting each
//! stage, then read the partition off the final profiles.

use super::{
    coupling_integral, minimize_system, CouplingSpec, Partition, PartitionRoute, SolveOptions,
    SolverError, SystemState,
};
use crate::spectral::Problem;

/// Bookkeeping of one continuation stage.
#[derive(Debug, Clone)]
pub struct StageRecord {
    pub eta: f64,
    pub energy: f64,
    /// sum_{i<j} int |u_i|^{b_ij} |u_j|^{a_ij} h dt at the stage solution
    /// (without eta factors) -- the segregation diagnostic.
    pub coupling_integral: f64,
    /// Smallest component H^s norm at the stage solution.
    pub min_norm: f64,
    /// Smallest component H^s norm seen anywhere along the stage trajectory.
    pub trajectory_min_norm: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug)]
pub struct SegregationRun {
    pub stages: Vec<StageRecord>,
    pub states: Vec<SystemState>,
    pub partition: Partition,
}

/// Runs the eta continuation and extracts the limiting partition.
///
/// `coupling_template` fixes ell and the exponent structure; its strengths
/// are replaced stage by stage from `eta_schedule` (strictly decreasing,
/// negative). Each stage warm-starts from the previous solution. The
/// partition interfaces are the crossings |u_i| = |u_{i+1}| of consecutive
/// profiles (components ordered along the orbit angle), located on a refined
/// theta grid; cell energies are the per-component Nehari energies
/// (s/N)|u_i|^2 of the last stage.
pub fn continuation_segregate(
    pr: &Problem,
    coupling_template: &CouplingSpec,
    eta_schedule: &[f64],
    opts: &SolveOptions,
) -> Result<SegregationRun, SolverError> {
    if eta_schedule.is_empty() {
        return Err(SolverError::Numerics("empty eta schedule".into()));
    }
    for (k, w) in eta_schedule.windows(2).enumerate() {
        if !(w[1] < w[0]) {
            return Err(SolverError::Numerics(format!(
                "eta schedule must strictly decrease (stage {k} -> {})",
                k + 1
            )));
        }
    }
    if !(eta_schedule[0] < 0.0) {
        return Err(SolverError::Numerics("eta schedule must be negative".into()));
    }

    let mut stages = Vec::with_capacity(eta_schedule.len());
    let mut states: Vec<SystemState> = Vec::with_capacity(eta_schedule.len());
    for &eta in eta_schedule {
        let coupling = coupling_template.with_eta(eta);
        let init = states.last().map(|s| s.fields.as_slice());
        let state = minimize_system(pr, &coupling, init, opts)?;
        let mut min_norm = f64::INFINITY;
        for f in &state.fields {
            min_norm = min_norm.min(pr.sobolev_norm2(f)?.sqrt());
        }
        stages.push(StageRecord {
            eta,
            energy: state.energy,
            coupling_integral: coupling_integral(pr, &coupling, &state.fields)?,
            min_norm,
            trajectory_min_norm: state.trajectory_min_norm,
            residual: state.residual,
            iterations: state.iterations,
        });
        states.push(state);
    }

    let last = states.last().expect("schedule nonempty");
    let partition = extract_partition(pr, last, opts)?;
    Ok(SegregationRun {
        stages,
        states,
        partition,
    })
}

/// Locates the ell-1 interfaces of a (near-)segregated state.
pub(crate) fn extract_partition(
    pr: &Problem,
    state: &SystemState,
    opts: &SolveOptions,
) -> Result<Partition, SolverError> {
    let ell = state.fields.len();
    let pi = std::f64::consts::PI;
    let grid_n = opts.crossing_grid.max(64);
    let thetas: Vec<f64> = (0..grid_n)
        .map(|k| pi * (k as f64 + 0.5) / grid_n as f64)
        .collect();
    let ts: Vec<f64> = thetas.iter().map(|th| th.cos()).collect();
    let profiles: Vec<Vec<f64>> = state
        .fields
        .iter()
        .map(|f| {
            pr.basis
                .eval_on_grid(f.coeffs(), &ts)
                .iter()
                .map(|v| v.abs())
                .collect()
        })
        .collect();

    // Order components along the orbit angle by their mass centers.
    let mut order: Vec<usize> = (0..ell).collect();
    let centers: Vec<f64> = profiles
        .iter()
        .map(|p| {
            let mut mass = 0.0;
            let mut moment = 0.0;
            for (v, th) in p.iter().zip(&thetas) {
                let m = v * v;
                mass += m;
                moment += m * th;
            }
            moment / mass.max(1e-300)
        })
        .collect();
    order.sort_by(|&a, &b| centers[a].total_cmp(&centers[b]));

    let mut angles = Vec::with_capacity(ell - 1);
    for w in order.windows(2) {
        let (i, j) = (w[0], w[1]);
        angles.push(pair_interface(&thetas, &profiles[i], &profiles[j], i, j, opts)?);
    }
    for w in angles.windows(2) {
        if !(w[0] < w[1]) {
            return Err(SolverError::SegregationIncomplete {
                i: 0,
                j: ell - 1,
                found: angles.len(),
            });
        }
    }

    let s_over_n = pr.params.s / pr.params.big_n as f64;
    let cell_energies: Vec<f64> = order
        .iter()
        .map(|&i| Ok(s_over_n * pr.sobolev_norm2(&state.fields[i])?))
        .collect::<Result<_, SolverError>>()?;
    let total = cell_energies.iter().sum();
    Ok(Partition {
        angles,
        cell_energies,
        total,
        route: PartitionRoute::Segregation,
    })
}

/// The crossing |u_i| = |u_j| between two adjacent profiles.
///
/// Sign changes of the difference are searched only where at least one of the
/// two profiles is non-negligible (1% of its sup) -- elsewhere both are
/// truncation-level ripples and crossings are meaningless. Candidates closer
/// than `merge_tol` are merged; if several distinct candidates survive, the
/// one nearest the midpoint of the overlap region is deemed the interface
/// (deterministic tie-break); none at all means segregation has not resolved
/// the pair yet.
fn pair_interface(
    thetas: &[f64],
    pi_prof: &[f64],
    pj_prof: &[f64],
    i: usize,
    j: usize,
    opts: &SolveOptions,
) -> Result<f64, SolverError> {
    let sup_i = pi_prof.iter().fold(0.0f64, |m, v| m.max(*v));
    let sup_j = pj_prof.iter().fold(0.0f64, |m, v| m.max(*v));
    let (ti, tj) = (0.01 * sup_i, 0.01 * sup_j);

    let mut crossings = Vec::new();
    let mut overlap_lo = f64::INFINITY;
    let mut overlap_hi = f64::NEG_INFINITY;
    for k in 0..thetas.len() {
        if pi_prof[k] > ti && pj_prof[k] > tj {
            overlap_lo = overlap_lo.min(thetas[k]);
            overlap_hi = overlap_hi.max(thetas[k]);
        }
        if k == 0 {
            continue;
        }
        let active = pi_prof[k - 1].max(pj_prof[k - 1]) > ti.min(tj)
            || pi_prof[k].max(pj_prof[k]) > ti.min(tj);
        if !active {
            continue;
        }
        let d0 = pi_prof[k - 1] - pj_prof[k - 1];
        let d1 = pi_prof[k] - pj_prof[k];
        if d0 == 0.0 {
            crossings.push(thetas[k - 1]);
        } else if d0 * d1 < 0.0 {
            // linear interpolation of the root
            let frac = d0 / (d0 - d1);
            crossings.push(thetas[k - 1] + frac * (thetas[k] - thetas[k - 1]));
        }
    }
    if crossings.is_empty() {
        return Err(SolverError::SegregationIncomplete { i, j, found: 0 });
    }
    // Merge clusters closer than merge_tol.
    crossings.sort_by(f64::total_cmp);
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for c in crossings {
        match merged.last_mut() {
            Some((center, count)) if (c - *center / *count as f64).abs() < opts.merge_tol => {
                *center += c;
                *count += 1;
            }
            _ => merged.push((c, 1)),
        }
    }
    let clusters: Vec<f64> = merged.into_iter().map(|(sum, n)| sum / n as f64).collect();
    if clusters.len() == 1 {
        return Ok(clusters[0]);
    }
    // Several candidates: the interface is the crossing nearest the overlap
    // midpoint (and if there was no overlap at all, nearest the midpoint of
    // the two mass maxima).
    let mid = if overlap_lo <= overlap_hi {
        0.5 * (overlap_lo + overlap_hi)
    } else {
        let arg_i = pi_prof
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| thetas[k])
            .unwrap_or(0.0);
        let arg_j = pj_prof
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| thetas[k])
            .unwrap_or(0.0);
        0.5 * (arg_i + arg_j)
    };
    Ok(clusters
        .into_iter()
        .min_by(|a, b| (a - mid).abs().total_cmp(&(b - mid).abs()))
        .expect("nonempty clusters"))
}
