//! Berry curvature density of the rotated-Hamiltonian family.
//!
//! The model admits a two-parameter family of local rotations with
//! sublattice-dependent angles theta_a, theta_b; the curvature of the
//! resulting ground-state line bundle over the (eta, xi) plane is
//!
//!   C = (i/2) sum_nu [ (d theta_nu/d eta) d_xi m_nu
//!                    - (d theta_nu/d xi) d_eta m_nu ],   nu in {a, b},
//!
//! with m_nu the sublattice magnetizations.  Two presets matter: the *sum*
//! channel (all four angle partials equal to 1) and the *difference* channel
//! (partials +1 on sublattice a, -1 on b).

use crate::error::Result;
use crate::model::FieldPoint;
use crate::response::{response_bundle, ResponseBundle};
use crate::spectrum::Mode;
use num_complex::Complex64;

/// Angle-map partial derivatives evaluated at a field point: how fast each
/// sublattice rotation angle changes with eta and xi.
pub struct ThetaMap {
    pub d_theta_a_d_eta: Box<dyn Fn(&FieldPoint) -> f64 + Send + Sync>,
    pub d_theta_a_d_xi: Box<dyn Fn(&FieldPoint) -> f64 + Send + Sync>,
    pub d_theta_b_d_eta: Box<dyn Fn(&FieldPoint) -> f64 + Send + Sync>,
    pub d_theta_b_d_xi: Box<dyn Fn(&FieldPoint) -> f64 + Send + Sync>,
}

impl ThetaMap {
    pub fn new(
        a_eta: impl Fn(&FieldPoint) -> f64 + Send + Sync + 'static,
        a_xi: impl Fn(&FieldPoint) -> f64 + Send + Sync + 'static,
        b_eta: impl Fn(&FieldPoint) -> f64 + Send + Sync + 'static,
        b_xi: impl Fn(&FieldPoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ThetaMap {
            d_theta_a_d_eta: Box::new(a_eta),
            d_theta_a_d_xi: Box::new(a_xi),
            d_theta_b_d_eta: Box::new(b_eta),
            d_theta_b_d_xi: Box::new(b_xi),
        }
    }

    /// Sum channel: all four partials identically 1.
    pub fn preset_sum() -> Self {
        Self::new(|_| 1.0, |_| 1.0, |_| 1.0, |_| 1.0)
    }

    /// Difference channel: +1 on sublattice a, -1 on sublattice b.
    pub fn preset_diff() -> Self {
        Self::new(|_| 1.0, |_| 1.0, |_| -1.0, |_| -1.0)
    }

    /// Constant angles: curvature vanishes identically.
    pub fn zero() -> Self {
        Self::new(|_| 0.0, |_| 0.0, |_| 0.0, |_| 0.0)
    }
}

fn curvature_from_bundle(b: &ResponseBundle, p: &FieldPoint, theta: &ThetaMap) -> Complex64 {
    // Magnetization partials from the second derivatives of eps_g:
    //   d_eta m_a = 2 d2_eta  + 2 i d2_mixed     d_xi m_a = 2 d2_mixed + 2 i d2_xi
    //   d_eta m_b = 2 d2_eta  - 2 i d2_mixed     d_xi m_b = 2 d2_mixed - 2 i d2_xi
    let de_ma = Complex64::new(2.0 * b.d2_eta, 2.0 * b.d2_mixed);
    let dx_ma = Complex64::new(2.0 * b.d2_mixed, 2.0 * b.d2_xi);
    let de_mb = Complex64::new(2.0 * b.d2_eta, -2.0 * b.d2_mixed);
    let dx_mb = Complex64::new(2.0 * b.d2_mixed, -2.0 * b.d2_xi);
    let ta_e = (theta.d_theta_a_d_eta)(p);
    let ta_x = (theta.d_theta_a_d_xi)(p);
    let tb_e = (theta.d_theta_b_d_eta)(p);
    let tb_x = (theta.d_theta_b_d_xi)(p);
    0.5 * Complex64::i() * (ta_e * dx_ma - ta_x * de_ma + tb_e * dx_mb - tb_x * de_mb)
}

/// Berry curvature density for an arbitrary angle map.
pub fn curvature_density(p: &FieldPoint, theta: &ThetaMap, mode: Mode) -> Result<Complex64> {
    let b = response_bundle(p, mode)?;
    Ok(curvature_from_bundle(&b, p, theta))
}

/// Sum-channel curvature in closed form: C = 2i (d2_mixed - d2_eta).
pub fn curvature_preset_sum(p: &FieldPoint, mode: Mode) -> Result<Complex64> {
    let b = response_bundle(p, mode)?;
    Ok(2.0 * Complex64::i() * Complex64::new(b.d2_mixed - b.d2_eta, 0.0))
}

/// Difference-channel curvature in closed form: C = 2 (d2_mixed - d2_xi).
pub fn curvature_preset_diff(p: &FieldPoint, mode: Mode) -> Result<Complex64> {
    let b = response_bundle(p, mode)?;
    Ok(Complex64::new(2.0 * (b.d2_mixed - b.d2_xi), 0.0))
}

/// Angular prefactor chi(phi) = sin 2phi - 2 cos^2 phi controlling the
/// sum-channel divergence amplitude along rays toward the critical circle;
/// it vanishes at phi = pi/4 (divergence-free ray) and phi = pi/2.
pub fn chi_prefactor(phi: f64) -> f64 {
    (2.0 * phi).sin() - 2.0 * phi.cos().powi(2)
}
