use super::jacobi::{jacobi_deriv, jacobi_eval, jacobi_eval_all, jacobi_norm_h, JacobiParams};
use super::SpecialError;

/// Gauss-Jacobi rule with q nodes for the normalized weight
/// h(t) = C(alpha,beta) (1-t)^alpha (1+t)^beta, exact through degree 2q-1.
///
/// Nodes are the roots of P_q, found by bracketing sign changes on a dense
/// Chebyshev-angle grid and polishing with Newton (bisection fallback).
/// Weights come from the Christoffel function of h at each node,
///   w = 1 / sum_{k<q} p_k(x)^2
/// with p_k the h-orthonormal polynomials. Tying the weights to the same
/// normalized values the spectral table is built from keeps the discrete
/// Gram of the first q modes at machine precision even for large q; the
/// classical derivative formula drifts to ~1e-9 per weight by q = 256 and
/// is kept in the tests as an independent oracle.
pub fn gauss_jacobi(
    params: JacobiParams,
    q: usize,
) -> Result<(Vec<f64>, Vec<f64>), SpecialError> {
    assert!(q >= 1, "quadrature needs at least one node");
    let nodes = find_roots(params, q)?;

    let norms: Vec<f64> = (0..q)
        .map(|k| jacobi_norm_h(params, k))
        .collect::<Result<_, _>>()?;
    let mut buf = vec![0.0; q];
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            jacobi_eval_all(params, q - 1, x, &mut buf);
            let inv: f64 = buf
                .iter()
                .zip(&norms)
                .map(|(p, n)| (p / n) * (p / n))
                .sum();
            1.0 / inv
        })
        .collect();

    for (i, &w) in weights.iter().enumerate() {
        if !(w > 0.0) || !w.is_finite() {
            return Err(SpecialError::RootConvergence {
                index: i,
                degree: q,
            });
        }
    }
    Ok((nodes, weights))
}

fn find_roots(params: JacobiParams, q: usize) -> Result<Vec<f64>, SpecialError> {
    // Sample on theta = arccos(t): the roots are near-uniform there, so a few
    // samples per expected root spacing brackets all of them.
    let samples = 8 * q + 16;
    let mut grid = Vec::with_capacity(samples);
    let mut vals = Vec::with_capacity(samples);
    let mut buf = vec![0.0; q + 1];
    for j in 0..samples {
        let theta = std::f64::consts::PI * (j as f64 + 0.5) / samples as f64;
        let t = theta.cos();
        jacobi_eval_all(params, q, t, &mut buf);
        grid.push(t);
        vals.push(buf[q]);
    }
    // Chebyshev angles give descending t; flip for ascending output.
    let mut roots = Vec::with_capacity(q);
    for j in (1..samples).rev() {
        let (lo, hi) = (grid[j], grid[j - 1]);
        let (flo, fhi) = (vals[j], vals[j - 1]);
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo * fhi < 0.0 {
            roots.push(polish_root(params, q, lo, hi, flo).ok_or(
                SpecialError::RootConvergence {
                    index: roots.len(),
                    degree: q,
                },
            )?);
        }
    }
    if roots.len() != q {
        return Err(SpecialError::RootConvergence {
            index: roots.len(),
            degree: q,
        });
    }
    Ok(roots)
}

fn polish_root(params: JacobiParams, q: usize, mut lo: f64, mut hi: f64, flo: f64) -> Option<f64> {
    let mut sign_lo = flo.signum();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let f = jacobi_eval(params, q, x);
        if f == 0.0 {
            return Some(x);
        }
        if f.signum() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        let step = f / jacobi_deriv(params, q, x);
        let newton = x - step;
        // Keep Newton honest: fall back to bisection when it leaves the bracket.
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-15 * (1.0 + x.abs()) {
            return Some(next);
        }
        x = next;
        sign_lo = jacobi_eval(params, q, lo).signum();
    }
    // Bracket has collapsed to a few ulps even if the loop ran out.
    if (hi - lo).abs() <= 4e-15 * (1.0 + x.abs()) {
        Some(x)
    } else {
        None
    }
}
