//! The reduced spectrum: eigenvalues lambda_i of the symmetric subspace, the
//! full sphere eigenvalues b_j they embed into (lambda_i = b_{2i}), the
//! operator symbol phi(lambda_i), and the growth ratio phi(b_i)/b_i^s -> 1.
//!
//! Run with: cargo run --example spectrum

use fracpart::spectral::{symbol, symbol_asymptotics, Problem};
use fracpart::ProblemParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ProblemParams::new(2, 2, 0.75)?;
    let pr = Problem::with_modes(params, 12)?;
    let table = pr.spectrum_table();
    let ratios = symbol_asymptotics(&params, 11)?;

    println!(
        "N = {}, s = {}, critical exponent 2* = {:.6}",
        params.big_n, params.s, params.two_star
    );
    println!(
        "sphere constant A = {:.12} (= phi(0): {:.12})\n",
        params.a_ns,
        symbol(&params, 0.0)?
    );
    println!("{:>3} {:>10} {:>6} {:>16} {:>12}", "i", "lambda_i", "b_i", "phi(lambda_i)", "r_i");
    for i in 0..pr.k() {
        let ratio = if i == 0 {
            "-".to_string()
        } else {
            format!("{:.8}", ratios[i - 1])
        };
        println!(
            "{:>3} {:>10} {:>6} {:>16.10} {:>12}",
            i, table.lambda[i], table.b[i], table.phi[i], ratio
        );
    }

    // The embedding identity lambda_i = b_{2i}: the symmetric modes are the
    // even spherical levels.
    let worst = (0..pr.k())
        .map(|i| (table.lambda[i] - table.b[2 * i]).abs())
        .fold(0.0, f64::max);
    println!("\nmax |lambda_i - b_(2i)| = {worst:.1e}");

    // At order one half the symbol collapses to a square root.
    let half = ProblemParams::new(2, 2, 0.5)?;
    let lam = 8.0;
    println!(
        "s = 1/2 closed form: phi(8) = {:.12} vs sqrt(8 + 1) = 3",
        symbol(&half, lam)?
    );
    Ok(())
}
