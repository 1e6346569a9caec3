//! Segregation continuation: drive the competition strength eta to minus
//! infinity along a schedule, watching the components disentangle. The
//! coupling integral collapses, the energy climbs toward the partition
//! optimum, and the supports converge to complementary angular cells whose
//! common boundary is the reported interface.
//!
//! Run with: cargo run --example segregation

use fracpart::solver::{continuation_segregate, CouplingSpec, SolveOptions};
use fracpart::spectral::Problem;
use fracpart::ProblemParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ProblemParams::new(2, 2, 0.75)?;
    let pr = Problem::new(params, 64, 128)?;
    let template = CouplingSpec::symmetric(2, -1.0, params.two_star)?;
    let schedule = [-1.0, -10.0, -100.0, -1000.0];
    let opts = SolveOptions {
        tol: 1e-7,
        ..SolveOptions::default()
    };

    let run = continuation_segregate(&pr, &template, &schedule, &opts)?;
    println!(
        "{:>8} {:>14} {:>12} {:>10} {:>8}",
        "eta", "energy", "coupling", "min norm", "iters"
    );
    for st in &run.stages {
        println!(
            "{:>8} {:>14.8} {:>12.4e} {:>10.6} {:>8}",
            st.eta, st.energy, st.coupling_integral, st.min_norm, st.iterations
        );
    }

    let p = &run.partition;
    println!("\ninterfaces: {:?}", p.angles);
    println!("cell energies: {:?}", p.cell_energies);
    println!("total: {:.8}   (route: {})", p.total, p.route.as_str());

    // The last stage's profiles near the interface: the crossing of the two
    // components is the partition boundary.
    let state = run.states.last().expect("at least one stage");
    let u1 = pr.synthesize(&state.fields[0])?;
    let u2 = pr.synthesize(&state.fields[1])?;
    let thetas = pr.basis.theta_nodes();
    println!("\n{:>10} {:>12} {:>12}", "theta", "u_1", "u_2");
    for r in (0..pr.q()).rev() {
        if (thetas[r] - p.angles[0]).abs() < 0.12 {
            println!("{:>10.5} {:>12.6} {:>12.6}", thetas[r], u1[r], u2[r]);
        }
    }
    Ok(())
}
