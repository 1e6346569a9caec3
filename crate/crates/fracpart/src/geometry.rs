//! Sphere-side geometry: problem constants, the stereographic dictionary to
//! flat space, and the orbit map of the block-rotation symmetry.

use crate::special::{log_gamma, SpecialError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("invalid problem parameters: {0}")]
    BadParams(String),
    #[error("stereographic projection undefined at the south pole")]
    SouthPole,
    #[error("point does not lie on the unit sphere (|z| = {0})")]
    OffSphere(f64),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// Dimensions, fractional order, and the derived constants every module needs.
///
/// Construct with [`ProblemParams::new`]; the fields are plain data after
/// validation. `big_n = m + n - 1` is the sphere dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub m: usize,
    pub n: usize,
    pub s: f64,
    pub big_n: usize,
    /// Critical exponent 2N/(N-2s).
    pub two_star: f64,
    /// Normalization of the singular-integral form: 4^s pi^{-N/2} G(N/2+s)/G(2-s) s(1-s).
    pub c_ns: f64,
    /// Symbol at lambda = 0: G(N/2+s)/G(N/2-s).
    pub a_ns: f64,
    /// Flat-side Green constant G(N/2-s)/(4^s pi^{N/2} G(s)).
    pub kappa_ns: f64,
    /// Flat-side operator constant G(N/2+s)/(pi^{N/2} G(s)).
    pub p_ns: f64,
}

impl ProblemParams {
    pub fn new(m: usize, n: usize, s: f64) -> Result<Self, GeometryError> {
        if m < 2 || n < 2 {
            return Err(GeometryError::BadParams(format!(
                "block dimensions must be >= 2, got m = {m}, n = {n}"
            )));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(GeometryError::BadParams(format!(
                "fractional order must lie in (0, 1), got s = {s}"
            )));
        }
        let big_n = m + n - 1;
        let nh = big_n as f64 / 2.0;
        let log_pi = std::f64::consts::PI.ln();
        let c_ns = (s * 4f64.ln() - nh * log_pi + log_gamma(nh + s)? - log_gamma(2.0 - s)?)
            .exp()
            * s
            * (1.0 - s);
        let a_ns = (log_gamma(nh + s)? - log_gamma(nh - s)?).exp();
        let kappa_ns = (log_gamma(nh - s)? - s * 4f64.ln() - nh * log_pi - log_gamma(s)?).exp();
        let p_ns = (log_gamma(nh + s)? - nh * log_pi - log_gamma(s)?).exp();
        Ok(Self {
            m,
            n,
            s,
            big_n,
            two_star: 2.0 * big_n as f64 / (big_n as f64 - 2.0 * s),
            c_ns,
            a_ns,
            kappa_ns,
            p_ns,
        })
    }

    /// Surface measure of the unit N-sphere, 2 pi^{(N+1)/2} / G((N+1)/2).
    pub fn sphere_volume(&self) -> f64 {
        sphere_surface(self.big_n + 1)
    }
}

/// |S^{d-1}| for ambient dimension d.
pub fn sphere_surface(d: usize) -> f64 {
    let dh = d as f64 / 2.0;
    2.0 * (dh * std::f64::consts::PI.ln() - log_gamma(dh).expect("d >= 1")).exp()
}

/// A validated point of S^N in ambient coordinates, split as (x-block, y-block)
/// by the first `m` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    z: Vec<f64>,
    m: usize,
}

impl SpherePoint {
    /// Accepts `z` with |z| within 1e-12 of 1.
    pub fn new(z: Vec<f64>, m: usize) -> Result<Self, GeometryError> {
        assert!(m >= 2 && z.len() >= m + 2, "need m >= 2 and n >= 2 blocks");
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(GeometryError::OffSphere(norm));
        }
        Ok(Self { z, m })
    }

    /// Projects arbitrary nonzero coordinates onto the sphere.
    pub fn normalized(mut z: Vec<f64>, m: usize) -> Result<Self, GeometryError> {
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(GeometryError::OffSphere(0.0));
        }
        z.iter_mut().for_each(|v| *v /= norm);
        Self::new(z, m)
    }

    pub fn coords(&self) -> &[f64] {
        &self.z
    }

    pub fn x_block(&self) -> &[f64] {
        &self.z[..self.m]
    }

    pub fn y_block(&self) -> &[f64] {
        &self.z[self.m..]
    }

    fn last(&self) -> f64 {
        *self.z.last().unwrap()
    }
}

/// Stereographic projection from the south pole, sigma(z) = z' / (1 + z_{N+1}).
pub fn stereo(p: &SpherePoint) -> Result<Vec<f64>, GeometryError> {
    let denom = 1.0 + p.last();
    // Distance to the pole is sqrt(2 * denom); flag anything within 1e-10.
    if 2.0 * denom <= 1e-20 {
        return Err(GeometryError::SouthPole);
    }
    Ok(p.z[..p.z.len() - 1].iter().map(|v| v / denom).collect())
}

/// Inverse projection, sigma^{-1}(x) = (2x, 1 - |x|^2) / (1 + |x|^2).
pub fn stereo_inv(x: &[f64], m: usize) -> Result<SpherePoint, GeometryError> {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let denom = 1.0 + r2;
    let mut z: Vec<f64> = x.iter().map(|v| 2.0 * v / denom).collect();
    z.push((1.0 - r2) / denom);
    SpherePoint::new(z, m)
}

/// Conformal factor psi_s(x) = (2 / (1 + |x|^2))^{(N-2s)/2} relating sphere
/// and flat-space solutions.
pub fn conformal_factor(params: &ProblemParams, x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    (2.0 / (1.0 + r2)).powf((params.big_n as f64 - 2.0 * params.s) / 2.0)
}

/// Orbit coordinate t(z) = |z_x|^2 - |z_y|^2 of the block symmetry.
pub fn orbit_t(p: &SpherePoint) -> f64 {
    let x2: f64 = p.x_block().iter().map(|v| v * v).sum();
    let y2: f64 = p.y_block().iter().map(|v| v * v).sum();
    x2 - y2
}

/// Orbit angle arccos(t) in [0, pi].
pub fn orbit_angle(p: &SpherePoint) -> f64 {
    orbit_t(p).clamp(-1.0, 1.0).acos()
}
