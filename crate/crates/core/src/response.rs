//! Field derivatives of the ground-state energy density: gradient,
//! Laplacian, sublattice magnetizations, and the near-critical asymptotic
//! prediction helpers.
//!
//! All derivatives are evaluated from closed-form k-resolved expressions
//! integrated over the momentum grid (finite chains) or the fixed composite
//! quadrature (thermodynamic limit) — no parameter finite differences except
//! in the explicitly-named FD checker.

use crate::error::{PtError, Result};
use crate::model::{inner_radical, momentum_grid, FieldPoint, Sector};
use crate::quad::{refined_rule, NeumaierSum};
use crate::spectrum::{energy_density_refined, ground_energy, min_eps1, Mode};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Minimum quasiparticle gap below which derivative quantities are refused.
pub const GAPLESS_TOL: f64 = 1e-8;

/// Default step for the finite-difference Laplacian checker.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// All first and second field derivatives of eps_g at one point.
///
/// The branch-1 dispersion is real for every field point, so every entry is
/// real; complex interfaces wrap these values with zero imaginary part.
#[derive(Debug, Clone, Copy)]
pub struct ResponseBundle {
    /// Energy density eps_g.
    pub eps_g: f64,
    /// d eps_g / d eta.
    pub d_eta: f64,
    /// d eps_g / d xi.
    pub d_xi: f64,
    /// d^2 eps_g / d eta^2.
    pub d2_eta: f64,
    /// d^2 eps_g / d xi^2.
    pub d2_xi: f64,
    /// d^2 eps_g / d eta d xi.
    pub d2_mixed: f64,
}

/// Energy density plus response functions, as produced for scan rows.
#[derive(Debug, Clone, Copy)]
pub struct ResponseRecord {
    pub eta: f64,
    pub xi: f64,
    pub r: f64,
    pub phi: f64,
    pub eps_g: Complex64,
    pub grad_eta: Complex64,
    pub grad_xi: Complex64,
    pub laplacian: Complex64,
    pub m_a: Complex64,
    pub m_b: Complex64,
}

/// k-resolved values of eps1 and its five field derivatives at J = 1.
///
/// With B the inner radical and P = (r^2 - cos k)/B:
///   d(eps1)/d(eta)   = 2 eta (1 + P) / eps1
///   d(eps1)/d(xi)    = 2 xi  (P - 1) / eps1
///   d2/d(eta)^2      = 2(1+P)/eps1 + 4 eta^2 sin^2 k/(B^3 eps1)
///                      - 4 eta^2 (1+P)^2 / eps1^3
///   d2/d(xi)^2       = 2(P-1)/eps1 + 4 xi^2 sin^2 k/(B^3 eps1)
///                      - 4 xi^2 (P-1)^2 / eps1^3
///   d2/d(xi)d(eta)   = 4 eta xi [sin^2 k/(B^3 eps1) - (P^2-1)/eps1^3]
fn kernel(k: f64, eta: f64, xi: f64) -> [f64; 6] {
    let r2 = eta * eta + xi * xi;
    let a = 2.0 * (eta * eta - xi * xi) + 2.0;
    let b = inner_radical(k, r2);
    let e1 = (a + 2.0 * b).max(0.0).sqrt();
    let p = (r2 - k.cos()) / b;
    let s2 = k.sin().powi(2);
    let b3 = b * b * b;
    let de = 2.0 * eta * (1.0 + p) / e1;
    let dx = 2.0 * xi * (p - 1.0) / e1;
    let d2e = 2.0 * (1.0 + p) / e1 + 4.0 * eta * eta * s2 / (b3 * e1)
        - 4.0 * eta * eta * (1.0 + p) * (1.0 + p) / (e1 * e1 * e1);
    let d2x = 2.0 * (p - 1.0) / e1 + 4.0 * xi * xi * s2 / (b3 * e1)
        - 4.0 * xi * xi * (p - 1.0) * (p - 1.0) / (e1 * e1 * e1);
    let d2m = 4.0 * eta * xi * (s2 / (b3 * e1) - (p * p - 1.0) / (e1 * e1 * e1));
    [e1, de, dx, d2e, d2x, d2m]
}

/// Closed-form derivative bundle for either mode.
///
/// Errors with [`PtError::Gapless`] when the minimum reachable |eps1| is
/// below [`GAPLESS_TOL`] — on the gapless ray the derivatives do not exist
/// in the thermodynamic limit and the k-resolved forms divide by zero.
pub fn response_bundle(p: &FieldPoint, mode: Mode) -> Result<ResponseBundle> {
    let gap = min_eps1(p, mode)?;
    if gap < GAPLESS_TOL * p.j {
        return Err(PtError::Gapless {
            min_eps: gap,
            tol: GAPLESS_TOL * p.j,
        });
    }
    let mut acc = [NeumaierSum::new(); 6];
    let scale;
    match mode {
        Mode::FiniteN { two_n } => {
            let grid = momentum_grid(two_n, Sector::Even)?;
            for (k, w) in grid.momenta.iter().zip(&grid.weights) {
                let vals = kernel(*k, p.eta, p.xi);
                for (a, v) in acc.iter_mut().zip(vals) {
                    a.add(w * v);
                }
            }
            scale = -p.j / two_n as f64;
        }
        Mode::Thermodynamic => {
            let (nodes, weights) = refined_rule();
            for (k, w) in nodes.iter().zip(weights) {
                let vals = kernel(*k, p.eta, p.xi);
                for (a, v) in acc.iter_mut().zip(vals) {
                    a.add(w * v);
                }
            }
            scale = -p.j / (2.0 * PI);
        }
    }
    Ok(ResponseBundle {
        eps_g: scale * acc[0].total(),
        d_eta: scale * acc[1].total(),
        d_xi: scale * acc[2].total(),
        d2_eta: scale * acc[3].total(),
        d2_xi: scale * acc[4].total(),
        d2_mixed: scale * acc[5].total(),
    })
}

/// Gradient (d eps_g/d eta, d eps_g/d xi).
pub fn gradient(p: &FieldPoint, mode: Mode) -> Result<(Complex64, Complex64)> {
    let b = response_bundle(p, mode)?;
    Ok((Complex64::new(b.d_eta, 0.0), Complex64::new(b.d_xi, 0.0)))
}

/// Field-plane Laplacian of the energy density.
pub fn laplacian(p: &FieldPoint, mode: Mode) -> Result<Complex64> {
    let b = response_bundle(p, mode)?;
    Ok(Complex64::new(b.d2_eta + b.d2_xi, 0.0))
}

/// Five-point-cross finite-difference Laplacian; second-order in `step`.
///
/// Finite chains difference the exact grid energy; the thermodynamic limit
/// differences the fixed composite quadrature so that quadrature error
/// cancels smoothly.  This is a checker for [`laplacian`], not a substitute.
pub fn laplacian_fd(p: &FieldPoint, step: f64, mode: Mode) -> Result<Complex64> {
    if !(step.is_finite() && step > 0.0) {
        return Err(PtError::InvalidArgument(format!(
            "FD step must be finite and positive, got {step}"
        )));
    }
    let f = |eta: f64, xi: f64| -> Result<Complex64> {
        let q = FieldPoint { eta, xi, j: p.j };
        match mode {
            Mode::FiniteN { two_n } => Ok(ground_energy(two_n, &q)?.density),
            Mode::Thermodynamic => energy_density_refined(&q),
        }
    };
    let c = f(p.eta, p.xi)?;
    let sum = f(p.eta + step, p.xi)? + f(p.eta - step, p.xi)? + f(p.eta, p.xi + step)?
        + f(p.eta, p.xi - step)?;
    Ok((sum - 4.0 * c) / (step * step))
}

/// Sublattice magnetizations (m_a, m_b) = 2 d_eta eps_g +- 2 i d_xi eps_g.
///
/// m_a couples to the sublattice carrying eta + i xi and m_b to its partner;
/// with a real gradient the two are complex conjugates, and their divergence
/// identity  lap eps_g = (1/4)[d_eta(m_a + m_b) - i d_xi(m_a - m_b)]  holds
/// exactly.
pub fn magnetizations(p: &FieldPoint, mode: Mode) -> Result<(Complex64, Complex64)> {
    let b = response_bundle(p, mode)?;
    let m_a = Complex64::new(2.0 * b.d_eta, 2.0 * b.d_xi);
    let m_b = Complex64::new(2.0 * b.d_eta, -2.0 * b.d_xi);
    Ok((m_a, m_b))
}

/// Full response record at one field point.
pub fn response_record(p: &FieldPoint, mode: Mode) -> Result<ResponseRecord> {
    let b = response_bundle(p, mode)?;
    let (r, phi) = p.to_polar();
    Ok(ResponseRecord {
        eta: p.eta,
        xi: p.xi,
        r,
        phi,
        eps_g: Complex64::new(b.eps_g, 0.0),
        grad_eta: Complex64::new(b.d_eta, 0.0),
        grad_xi: Complex64::new(b.d_xi, 0.0),
        laplacian: Complex64::new(b.d2_eta + b.d2_xi, 0.0),
        m_a: Complex64::new(2.0 * b.d_eta, 2.0 * b.d_xi),
        m_b: Complex64::new(2.0 * b.d_eta, -2.0 * b.d_xi),
    })
}

/// Near-critical integrand F(k) = sqrt(2) r sin^2 k /
/// (pi eps1 (r^4 - 2 r^2 cos k + 1)^{3/2}), at J = 1.
///
/// Errors where the expression is singular: B = 0 (r = 1 with k = 0) or
/// eps1 = 0 with sin k = 0 (the gapless ray endpoint).
pub fn integrand_f(k: f64, p: &FieldPoint) -> Result<f64> {
    let r2 = p.r_squared();
    let r = r2.sqrt();
    let b = inner_radical(k, r2);
    let a = 2.0 * (p.eta * p.eta - p.xi * p.xi) + 2.0;
    let e1 = (a + 2.0 * b).max(0.0).sqrt();
    let denom = PI * e1 * b * b * b;
    if denom == 0.0 || !denom.is_finite() {
        return Err(PtError::InvalidArgument(format!(
            "integrand is singular at k = {k} for this field point (eps1 = {e1}, B = {b})"
        )));
    }
    Ok(std::f64::consts::SQRT_2 * r * k.sin().powi(2) / denom)
}

/// Documented near-circle prediction for the Laplacian divergence:
/// -(sqrt2 / (pi |cos phi|)) ln|r - 1|.
///
/// Requires 0 < |r - 1| < 0.1 and cos phi bounded away from zero.  This
/// helper evaluates the prediction as stated; see the acceptance suite for
/// how it compares against the exact solution.
pub fn asymptotic_laplacian_circle(r: f64, phi: f64) -> Result<f64> {
    let d = (r - 1.0).abs();
    if !(d > 0.0 && d < 0.1) {
        return Err(PtError::InvalidArgument(format!(
            "prediction valid for 0 < |r - 1| < 0.1, got r = {r}"
        )));
    }
    let c = phi.cos().abs();
    if c < 1e-12 {
        return Err(PtError::InvalidArgument(
            "prediction undefined on the imaginary-field axis (cos phi = 0)".into(),
        ));
    }
    Ok(-(std::f64::consts::SQRT_2 / (PI * c)) * d.ln())
}

/// Documented small-eta prediction for the Laplacian divergence along
/// horizontal approaches to the gapless ray: -(sqrt2 / pi) ln|eta|.
///
/// Requires 0 < |eta| < 0.1.
pub fn asymptotic_laplacian_axis(eta: f64) -> Result<f64> {
    let d = eta.abs();
    if !(d > 0.0 && d < 0.1) {
        return Err(PtError::InvalidArgument(format!(
            "prediction valid for 0 < |eta| < 0.1, got eta = {eta}"
        )));
    }
    Ok(-(std::f64::consts::SQRT_2 / PI) * d.ln())
}
