use super::{log_gamma, SpecialError};

/// Exponent pair of the orbit weight h(t) = C (1-t)^alpha (1+t)^beta.
///
/// For block dimensions (m, n) the exponents are alpha = m/2 - 1 and
/// beta = n/2 - 1; the polynomial toolbox itself accepts any pair > -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, SpecialError> {
        if !(alpha > -1.0) || !(beta > -1.0) {
            return Err(SpecialError::BadParams { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// Exponents induced by the O(m) x O(n) orbit map.
    pub fn from_block_dims(m: usize, n: usize) -> Result<Self, SpecialError> {
        Self::new(m as f64 / 2.0 - 1.0, n as f64 / 2.0 - 1.0)
    }
}

/// Normalizing constant C(alpha, beta) of the orbit weight, chosen so that
/// the weighted interval integral reproduces the sphere integral of an
/// invariant function: C = |S^{2a+1}| |S^{2b+1}| / 2^{a+b+2}.
pub fn weight_normalizer(params: JacobiParams) -> Result<f64, SpecialError> {
    let (a, b) = (params.alpha, params.beta);
    // |S^{k-1}| = 2 pi^{k/2} / Gamma(k/2) with k/2 = a+1 resp. b+1, so
    // C = 4 pi^{a+b+2} / (G(a+1) G(b+1) 2^{a+b+2}).
    let log_c = (a + b + 2.0) * std::f64::consts::PI.ln() + 2f64.ln() * (2.0 - (a + b + 2.0))
        - log_gamma(a + 1.0)?
        - log_gamma(b + 1.0)?;
    Ok(log_c.exp())
}

/// P_i^{(alpha,beta)}(t) by the standard three-term recurrence, normalized so
/// that P_i(1) = binom(i+alpha, i).
pub fn jacobi_eval(params: JacobiParams, i: usize, t: f64) -> f64 {
    let mut buf = [0.0; 2];
    jacobi_eval_iter(params, i, t, &mut buf);
    buf[i.min(1)]
}

/// Evaluates P_0..P_imax at t into `out` (length imax+1).
pub fn jacobi_eval_all(params: JacobiParams, imax: usize, t: f64, out: &mut [f64]) {
    assert!(out.len() > imax);
    let (a, b) = (params.alpha, params.beta);
    out[0] = 1.0;
    if imax == 0 {
        return;
    }
    out[1] = 0.5 * ((a + b + 2.0) * t + (a - b));
    for i in 2..=imax {
        let i_f = i as f64;
        let c0 = 2.0 * i_f + a + b;
        let a1 = 2.0 * i_f * (i_f + a + b) * (c0 - 2.0);
        let a2 = (c0 - 1.0) * (a * a - b * b);
        let a3 = (c0 - 1.0) * c0 * (c0 - 2.0);
        let a4 = 2.0 * (i_f + a - 1.0) * (i_f + b - 1.0) * c0;
        out[i] = ((a2 + a3 * t) * out[i - 1] - a4 * out[i - 2]) / a1;
    }
}

// Evaluate keeping only a rolling pair; `pair` ends as [P_{i-1}, P_i] for
// i >= 1, or [P_0, _] for i = 0.
fn jacobi_eval_iter(params: JacobiParams, i: usize, t: f64, pair: &mut [f64; 2]) {
    let (a, b) = (params.alpha, params.beta);
    pair[0] = 1.0;
    if i == 0 {
        return;
    }
    pair[1] = 0.5 * ((a + b + 2.0) * t + (a - b));
    for k in 2..=i {
        let k_f = k as f64;
        let c0 = 2.0 * k_f + a + b;
        let a1 = 2.0 * k_f * (k_f + a + b) * (c0 - 2.0);
        let a2 = (c0 - 1.0) * (a * a - b * b);
        let a3 = (c0 - 1.0) * c0 * (c0 - 2.0);
        let a4 = 2.0 * (k_f + a - 1.0) * (k_f + b - 1.0) * c0;
        let next = ((a2 + a3 * t) * pair[1] - a4 * pair[0]) / a1;
        pair[0] = pair[1];
        pair[1] = next;
    }
}

/// d/dt P_i^{(alpha,beta)}(t) via the parameter-shift identity
/// P_i' = (i + alpha + beta + 1)/2 * P_{i-1}^{(alpha+1,beta+1)}.
pub fn jacobi_deriv(params: JacobiParams, i: usize, t: f64) -> f64 {
    if i == 0 {
        return 0.0;
    }
    let shifted = JacobiParams {
        alpha: params.alpha + 1.0,
        beta: params.beta + 1.0,
    };
    0.5 * (i as f64 + params.alpha + params.beta + 1.0) * jacobi_eval(shifted, i - 1, t)
}

/// ||P_i||_{L^2(h)}: closed form with the weight normalizer folded in,
///   ||P_i||^2 = C * 2^{a+b+1}/(2i+a+b+1) * G(i+a+1) G(i+b+1) / (G(i+a+b+1) i!).
pub fn jacobi_norm_h(params: JacobiParams, i: usize) -> Result<f64, SpecialError> {
    let (a, b) = (params.alpha, params.beta);
    let i_f = i as f64;
    let c = weight_normalizer(params)?;
    let log_sq = (a + b + 1.0) * 2f64.ln() - (2.0 * i_f + a + b + 1.0).ln()
        + log_gamma(i_f + a + 1.0)?
        + log_gamma(i_f + b + 1.0)?
        - log_gamma(i_f + a + b + 1.0)?
        - log_gamma(i_f + 1.0)?;
    Ok((c * log_sq.exp()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::super::gamma::gamma_ratio;
    use super::*;
    use approx::assert_relative_eq;

    // binom(i+alpha, i) = P_i(1), an endpoint oracle.
    fn value_at_one(params: JacobiParams, i: usize) -> Result<f64, SpecialError> {
        let i_f = i as f64;
        gamma_ratio(i_f + params.alpha + 1.0, params.alpha + 1.0)
            .and_then(|r| Ok(r / gamma_ratio(i_f + 1.0, 1.0)?))
    }

    const PI: f64 = std::f64::consts::PI;

    // Explicit hypergeometric-sum form, used only as an independent oracle:
    // P_i(t) = sum_k binom(i+a, i-k) binom(i+b, k) ((t-1)/2)^k ((t+1)/2)^{i-k}.
    fn explicit(params: JacobiParams, i: usize, t: f64) -> f64 {
        fn binom(x: f64, j: usize) -> f64 {
            let mut acc = 1.0;
            for r in 0..j {
                acc *= (x - r as f64) / (j - r) as f64;
            }
            acc
        }
        let (a, b) = (params.alpha, params.beta);
        (0..=i)
            .map(|k| {
                binom(i as f64 + a, i - k)
                    * binom(i as f64 + b, k)
                    * ((t - 1.0) / 2.0).powi(k as i32)
                    * ((t + 1.0) / 2.0).powi((i - k) as i32)
            })
            .sum()
    }

    fn sample_params() -> Vec<JacobiParams> {
        [(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (1.0, 0.5), (1.5, 2.0)]
            .iter()
            .map(|&(a, b)| JacobiParams::new(a, b).unwrap())
            .collect()
    }

    #[test]
    fn recurrence_matches_explicit_low_degrees() {
        for p in sample_params() {
            for i in 0..=3 {
                for &t in &[-0.9, -0.3, 0.0, 0.41, 0.8, 1.0] {
                    assert_relative_eq!(
                        jacobi_eval(p, i, t),
                        explicit(p, i, t),
                        max_relative = 1e-12,
                        epsilon = 1e-13
                    );
                }
            }
        }
    }

    #[test]
    fn eval_all_agrees_with_single() {
        let p = JacobiParams::new(0.5, 0.0).unwrap();
        let mut all = vec![0.0; 21];
        jacobi_eval_all(p, 20, -0.372, &mut all);
        for i in 0..=20 {
            assert_relative_eq!(all[i], jacobi_eval(p, i, -0.372), max_relative = 1e-13);
        }
    }

    #[test]
    fn value_at_right_endpoint() {
        for p in sample_params() {
            for i in [0, 1, 2, 5, 17] {
                assert_relative_eq!(
                    jacobi_eval(p, i, 1.0),
                    value_at_one(p, i).unwrap(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-6;
        for p in sample_params() {
            for i in [1, 2, 3, 8] {
                for &t in &[-0.7, 0.1, 0.63] {
                    let fd = (jacobi_eval(p, i, t + h) - jacobi_eval(p, i, t - h)) / (2.0 * h);
                    let an = jacobi_deriv(p, i, t);
                    assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "i={i} t={t}");
                }
            }
        }
        assert_eq!(jacobi_deriv(sample_params()[0], 0, 0.3), 0.0);
    }

    #[test]
    fn satisfies_jacobi_ode() {
        // (1-t^2) P'' + [b - a - (a+b+2) t] P' + i(i+a+b+1) P = 0.
        for p in sample_params() {
            for i in [1usize, 2, 3, 7, 12] {
                for &t in &[-0.81, -0.11, 0.4, 0.92] {
                    let shifted2 = JacobiParams {
                        alpha: p.alpha + 2.0,
                        beta: p.beta + 2.0,
                    };
                    let i_f = i as f64;
                    let d2 = if i >= 2 {
                        0.25 * (i_f + p.alpha + p.beta + 1.0)
                            * (i_f + p.alpha + p.beta + 2.0)
                            * jacobi_eval(shifted2, i - 2, t)
                    } else {
                        0.0
                    };
                    let res = (1.0 - t * t) * d2
                        + (p.beta - p.alpha - (p.alpha + p.beta + 2.0) * t) * jacobi_deriv(p, i, t)
                        + i_f * (i_f + p.alpha + p.beta + 1.0) * jacobi_eval(p, i, t);
                    assert!(res.abs() < 1e-9 * (i_f * i_f).max(1.0), "i={i} t={t}: {res}");
                }
            }
        }
    }

    #[test]
    fn weight_normalizer_closed_forms() {
        let c00 = weight_normalizer(JacobiParams::new(0.0, 0.0).unwrap()).unwrap();
        assert_relative_eq!(c00, PI * PI, max_relative = 1e-13);
        // (m, n) = (2, 3): C = |S^1||S^2|/2^{5/2} = 8 pi^2 / 2^{5/2}.
        let c = weight_normalizer(JacobiParams::new(0.0, 0.5).unwrap()).unwrap();
        assert_relative_eq!(c, 8.0 * PI * PI / 2f64.powf(2.5), max_relative = 1e-13);
    }

    #[test]
    fn norm_closed_forms() {
        let p00 = JacobiParams::new(0.0, 0.0).unwrap();
        assert_relative_eq!(
            jacobi_norm_h(p00, 0).unwrap(),
            (2.0 * PI * PI).sqrt(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            jacobi_norm_h(p00, 1).unwrap(),
            (2.0 * PI * PI / 3.0).sqrt(),
            max_relative = 1e-13
        );
        // Frozen oracle values: (m,n) = (2,3) i = 2 and (3,3) i = 5.
        let p23 = JacobiParams::new(0.0, 0.5).unwrap();
        assert_relative_eq!(
            jacobi_norm_h(p23, 2).unwrap(),
            7.177894109883169904607f64.sqrt(),
            max_relative = 1e-12
        );
        let p33 = JacobiParams::new(0.5, 0.5).unwrap();
        assert_relative_eq!(
            jacobi_norm_h(p33, 5).unwrap(),
            6.311515540838160340819f64.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_bad_params() {
        assert!(JacobiParams::new(-1.0, 0.0).is_err());
        assert!(JacobiParams::new(0.0, -1.2).is_err());
    }
}
