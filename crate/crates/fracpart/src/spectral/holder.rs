//! Grid-based Hoelder seminorm diagnostic for the normalized basis.
//!
//! The solution-regularity argument rests on the weighted series
//! sum_i [p_i]^2_{C^{0,s-1/2}} (1 + i^2)^{-s} converging on compact interior
//! sets. The seminorms here are grid maxima, hence lower bounds; the point of
//! the diagnostic is that the cumulative sums flatten out.

use crate::special::{jacobi_norm_h, JacobiParams, SpecialError};
use rayon::prelude::*;

/// Cumulative sums S_I = sum_{i <= I} [p_i]^2 (1+i^2)^{-s} for I = 0..=imax,
/// with seminorms estimated on a uniform grid of `grid` points covering
/// [-1+eps, 1-eps]. Requires s in (1/2, 1) for the exponent to be a Hoelder
/// exponent.
pub fn holder_partial_sums(
    params: JacobiParams,
    s: f64,
    eps: f64,
    imax: usize,
    grid: usize,
) -> Result<Vec<f64>, SpecialError> {
    assert!(s > 0.5 && s < 1.0, "Hoelder exponent s - 1/2 needs s in (1/2, 1)");
    assert!(eps > 0.0 && eps < 1.0 && grid >= 2);
    let exponent = s - 0.5;
    let step = (2.0 - 2.0 * eps) / (grid - 1) as f64;
    let ts: Vec<f64> = (0..grid).map(|j| -1.0 + eps + j as f64 * step).collect();
    // Uniform grid: |t_k - t_j| depends only on k - j; precompute the powers.
    let inv_pow: Vec<f64> = (0..grid)
        .map(|d| {
            if d == 0 {
                0.0
            } else {
                (d as f64 * step).powf(-exponent)
            }
        })
        .collect();

    // Rolling three-term recurrence over the whole grid at once.
    let (a, b) = (params.alpha, params.beta);
    let mut prev: Vec<f64> = vec![1.0; grid];
    let mut curr: Vec<f64> = ts.iter().map(|&t| 0.5 * ((a + b + 2.0) * t + (a - b))).collect();

    let mut sums = Vec::with_capacity(imax + 1);
    sums.push(0.0); // p_0 is constant
    for i in 1..=imax {
        if i >= 2 {
            let i_f = i as f64;
            let c0 = 2.0 * i_f + a + b;
            let a1 = 2.0 * i_f * (i_f + a + b) * (c0 - 2.0);
            let a2 = (c0 - 1.0) * (a * a - b * b);
            let a3 = (c0 - 1.0) * c0 * (c0 - 2.0);
            let a4 = 2.0 * (i_f + a - 1.0) * (i_f + b - 1.0) * c0;
            for j in 0..grid {
                let next = ((a2 + a3 * ts[j]) * curr[j] - a4 * prev[j]) / a1;
                prev[j] = curr[j];
                curr[j] = next;
            }
        }
        let norm = jacobi_norm_h(params, i)?;
        let semi = (0..grid - 1)
            .into_par_iter()
            .map(|j| {
                let mut best = 0.0f64;
                let pj = curr[j];
                for k in j + 1..grid {
                    let ratio = (curr[k] - pj).abs() * inv_pow[k - j];
                    if ratio > best {
                        best = ratio;
                    }
                }
                best
            })
            .reduce(|| 0.0, f64::max)
            / norm;
        let i_f = i as f64;
        let term = semi * semi * (1.0 + i_f * i_f).powf(-s);
        sums.push(sums[i - 1] + term);
    }
    Ok(sums)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_are_nondecreasing_and_start_at_zero() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let sums = holder_partial_sums(p, 0.75, 0.1, 64, 201).unwrap();
        assert_eq!(sums[0], 0.0);
        for w in sums.windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert!(sums[64] > 0.0);
    }

    #[test]
    fn tail_fraction_shrinks_at_small_scale() {
        // Mini version of the acceptance check: the (I, 2I] slice is already
        // a modest fraction of the total at I = 128 on a coarse grid.
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let sums = holder_partial_sums(p, 0.75, 0.1, 256, 301).unwrap();
        let tail = sums[256] - sums[128];
        assert!(tail < 0.25 * sums[256], "tail {tail} vs total {}", sums[256]);
    }
}
