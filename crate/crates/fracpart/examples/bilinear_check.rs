//! Two routes to the same quadratic form. The spectral route multiplies
//! coefficients by the symbol; the direct route evaluates the singular
//! double integral of the energy over pairs of orbit angles, with a graded
//! change of variables taming the |z - zeta|^{-(N+2s-2)} edge. Agreement of
//! the two is the discretization's strongest self-check.
//!
//! Run with: cargo run --release --example bilinear_check

use fracpart::spectral::{dirichlet_form_direct, Problem, QuadSpec, SpectralField};
use fracpart::ProblemParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ProblemParams::new(2, 2, 0.75)?;
    let pr = Problem::new(params, 6, 12)?;
    // Reduced quadrature for a fast demonstration; defaults are finer.
    let spec = QuadSpec {
        n_theta: 48,
        n_delta: 32,
        n_phi: 24,
        ..QuadSpec::default()
    };

    println!("diagonal entries (direct integral vs symbol):");
    println!("{:>3} {:>16} {:>16} {:>10}", "i", "direct", "phi(lambda_i)", "rel err");
    for i in 0..3usize {
        let mut c = vec![0.0; 6];
        c[i] = 1.0;
        let f = SpectralField::from_coeffs(c);
        let direct = dirichlet_form_direct(&pr, &f, &f, &spec)?;
        let exact = pr.phi(i);
        println!(
            "{:>3} {:>16.8} {:>16.8} {:>10.2e}",
            i,
            direct,
            exact,
            (direct - exact).abs() / exact
        );
    }

    println!("\noff-diagonal entries (exact value is zero):");
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let mut ci = vec![0.0; 6];
        ci[i] = 1.0;
        let mut cj = vec![0.0; 6];
        cj[j] = 1.0;
        let v = dirichlet_form_direct(
            &pr,
            &SpectralField::from_coeffs(ci),
            &SpectralField::from_coeffs(cj),
            &spec,
        )?;
        println!("  ({i},{j}): {v:+.3e}  (scale: phi(lambda_2) = {:.4})", pr.phi(2));
    }
    Ok(())
}
