//! The obstruction to gluing: the difference v = u_1 - u_2 of a segregated
//! pair has signed parts with strictly positive cross inner product in H^s,
//! so v can never be a solution assembled from its positive and negative
//! halves. Locality fails for the fractional operator; the margin below is
//! exactly the nonlocal interaction of the two halves.
//!
//! Run with: cargo run --example sign_change

use fracpart::solver::{continuation_segregate, sign_change_obstruction, CouplingSpec, SolveOptions};
use fracpart::spectral::Problem;
use fracpart::ProblemParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ProblemParams::new(2, 2, 0.75)?;
    let pr = Problem::new(params, 64, 128)?;
    let template = CouplingSpec::symmetric(2, -1.0, params.two_star)?;
    let opts = SolveOptions {
        tol: 1e-7,
        ..SolveOptions::default()
    };

    let run = continuation_segregate(&pr, &template, &[-1.0, -10.0, -100.0], &opts)?;
    let state = run.states.last().expect("at least one stage");
    let report = sign_change_obstruction(&pr, &state.fields[0], &state.fields[1])?;

    println!("segregated pair at eta = {}", run.stages.last().unwrap().eta);
    println!("|v|^2_Hs        = {:.8}", report.v_norm2);
    println!("|v^+|^2_Hs      = {:.8}", report.plus_norm2);
    println!("|v^-|^2_Hs      = {:.8}", report.minus_norm2);
    println!("<v^-, v^+>_Hs   = {:.8}", report.inner);
    println!("margin <v^-,v^+>/|v|^2 = {:.6e}", report.margin());
    assert!(
        report.inner > 0.0,
        "the cross term of the signed parts must be positive"
    );

    // Pythagoras fails by exactly twice the cross term.
    let defect = report.v_norm2 - report.plus_norm2 - report.minus_norm2;
    println!("|v|^2 - |v^+|^2 - |v^-|^2 = {:.8} (= 2<v^-,v^+>)", defect);
    Ok(())
}
