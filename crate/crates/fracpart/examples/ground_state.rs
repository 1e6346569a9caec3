//! Least-energy states of the single critical equation on the sphere,
//! restricted to the symmetric subspace, next to the explicit constant
//! solution. The solver records both energies; which one is smaller is a
//! question it never prejudges.
//!
//! Run with: cargo run --example ground_state

use fracpart::solver::{minimize_system, CouplingSpec, SolveOptions};
use fracpart::spectral::Problem;
use fracpart::ProblemParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ProblemParams::new(2, 2, 0.75)?;
    let pr = Problem::new(params, 64, 128)?;
    let coupling = CouplingSpec::symmetric(1, -1.0, params.two_star)?;
    let opts = SolveOptions {
        tol: 1e-9,
        ..SolveOptions::default()
    };

    let state = minimize_system(&pr, &coupling, None, &opts)?;
    println!(
        "minimizer: energy = {:.12}, residual = {:.2e}, {} iterations",
        state.energy, state.residual, state.iterations
    );

    // The constant critical point c* = A^{(N-2s)/(4s)} and its energy
    // (s/N) (c*)^{2*} |S^N|, both in closed form.
    let cstar = params
        .a_ns
        .powf((params.big_n as f64 - 2.0 * params.s) / (4.0 * params.s));
    let e_const = params.s / params.big_n as f64
        * cstar.powf(params.two_star)
        * params.sphere_volume();
    println!("constant:  energy = {:.12}  (c* = {:.12})", e_const, cstar);
    println!(
        "difference (minimizer - constant) = {:+.3e}",
        state.energy - e_const
    );

    // A ground-state profile summary: values at a few angles.
    let values = pr.synthesize(&state.fields[0])?;
    let thetas = pr.basis.theta_nodes();
    println!("\n{:>10} {:>14}", "theta", "u(theta)");
    for r in (0..pr.q()).rev().step_by(16) {
        println!("{:>10.5} {:>14.8}", thetas[r], values[r]);
    }
    Ok(())
}
