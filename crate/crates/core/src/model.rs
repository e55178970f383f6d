//! Model definition: staggered complex transverse field on a periodic Ising
//! chain, and the exact quasiparticle dispersion of its free-fermion form.
//!
//! The chain has 2N sites with coupling J and site-dependent transverse
//! field g_j = eta + i xi on sublattice a (even sites, 1-based) and
//! g_j = eta - i xi on sublattice b (odd sites).  The Hamiltonian splits as
//! H = A + iB with A, B real symmetric, so H is complex symmetric and has a
//! real spectrum wherever the PT symmetry is unbroken.

use crate::error::{PtError, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Tolerance below which eigenvector normalization denominators are treated
/// as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// A point in the (eta, xi) field plane, with the overall coupling J kept as
/// an explicit energy scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub eta: f64,
    pub xi: f64,
    pub j: f64,
}

impl FieldPoint {
    /// Field point with J = 1.
    pub fn new(eta: f64, xi: f64) -> Self {
        FieldPoint { eta, xi, j: 1.0 }
    }

    /// Field point with an explicit coupling; J must be finite and positive.
    pub fn with_coupling(eta: f64, xi: f64, j: f64) -> Result<Self> {
        if !eta.is_finite() || !xi.is_finite() {
            return Err(PtError::InvalidArgument(format!(
                "field components must be finite, got ({eta}, {xi})"
            )));
        }
        if !j.is_finite() || j <= 0.0 {
            return Err(PtError::InvalidArgument(format!(
                "coupling J must be finite and positive, got {j}"
            )));
        }
        Ok(FieldPoint { eta, xi, j })
    }

    /// Squared field radius r^2 = eta^2 + xi^2.
    pub fn r_squared(&self) -> f64 {
        self.eta * self.eta + self.xi * self.xi
    }

    /// Polar form (r, phi) with phi in [0, 2pi); the origin maps to phi = 0.
    pub fn to_polar(&self) -> (f64, f64) {
        let r = self.r_squared().sqrt();
        if r == 0.0 {
            return (0.0, 0.0);
        }
        let mut phi = self.xi.atan2(self.eta);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        // atan2 can return exactly -0.0 -> phi = 2pi after the wrap; fold it.
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        (r, phi)
    }
}

/// Fermion boundary sector selecting the momentum quantization.
///
/// `Even` (antiperiodic fermions) contains the ground state and is the sector
/// all physics quantities use; `Odd` (periodic fermions) is provided for
/// spectrum-completeness checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Even,
    Odd,
}

/// Positive-k momentum grid with pair-degeneracy weights.
///
/// Momenta come in +-k pairs; the grid stores each pair once with weight 2,
/// and self-paired momenta (k = pi, and k = 0 in the odd sector) with
/// weight 1.  Weighted sums over the grid therefore equal sums over the full
/// Brillouin zone.
#[derive(Debug, Clone)]
pub struct MomentumGrid {
    pub two_n: usize,
    pub sector: Sector,
    pub momenta: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Build the momentum grid for a chain of `two_n` sites.
///
/// `two_n` must be even and at least 4 (N = two_n/2 two-site cells).
pub fn momentum_grid(two_n: usize, sector: Sector) -> Result<MomentumGrid> {
    if two_n < 4 || two_n % 2 != 0 {
        return Err(PtError::InvalidArgument(format!(
            "need an even site count >= 4, got {two_n}"
        )));
    }
    let n = two_n / 2;
    let mut momenta = Vec::new();
    let mut weights = Vec::new();
    match sector {
        Sector::Even => {
            // k = 2pi (m + 1/2) / N, kept up to pi.
            for m in 0..n {
                let k = 2.0 * PI * (m as f64 + 0.5) / n as f64;
                if k > PI + 1e-12 {
                    break;
                }
                let self_paired = (k - PI).abs() < 1e-12;
                momenta.push(if self_paired { PI } else { k });
                weights.push(if self_paired { 1.0 } else { 2.0 });
            }
        }
        Sector::Odd => {
            // k = 2pi m / N, kept up to pi; k = 0 and (for even N) k = pi are
            // self-paired.
            for m in 0..n {
                let k = 2.0 * PI * m as f64 / n as f64;
                if k > PI + 1e-12 {
                    break;
                }
                let self_paired = k == 0.0 || (k - PI).abs() < 1e-12;
                momenta.push(if (k - PI).abs() < 1e-12 { PI } else { k });
                weights.push(if self_paired { 1.0 } else { 2.0 });
            }
        }
    }
    Ok(MomentumGrid {
        two_n,
        sector,
        momenta,
        weights,
    })
}

/// The inner radical B(k) = sqrt(r^4 - 2 r^2 cos k + 1), evaluated stably as
/// hypot(r^2 - cos k, sin k).  Satisfies B >= |r^2 - 1| with equality at
/// k = 0.
pub fn inner_radical(k: f64, r_squared: f64) -> f64 {
    (r_squared - k.cos()).hypot(k.sin())
}

/// Principal square root folded into the closed right half plane:
/// Re >= 0, with pure-imaginary results taken on the positive imaginary
/// axis.  This is the branch used for every quasiparticle energy.
pub fn sqrt_branch(z: Complex64) -> Complex64 {
    let w = z.sqrt();
    if w.re < 0.0 || (w.re == 0.0 && w.im < 0.0) {
        -w
    } else {
        w
    }
}

/// Dimensionless (J = 1) quasiparticle energy of branch `n` at momentum `k`.
///
/// Branches 1 and 2 are +-sqrt(A + 2B); branches 3 and 4 are +-sqrt(A - 2B);
/// branches 5 and 6 are the exact zero modes.  Here
/// A = 2(eta^2 - xi^2) + 2 and B is [`inner_radical`].  Branch 1 is real and
/// nonnegative for every field point; branch 3 becomes imaginary in the
/// PT-broken region.
pub fn branch_value(n: usize, k: f64, eta: f64, xi: f64) -> Result<Complex64> {
    if !(1..=6).contains(&n) {
        return Err(PtError::InvalidArgument(format!(
            "branch index must be 1..=6, got {n}"
        )));
    }
    if n >= 5 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let r2 = eta * eta + xi * xi;
    let a = 2.0 * (eta * eta - xi * xi) + 2.0;
    let b = inner_radical(k, r2);
    let s = match n {
        1 | 2 => a + 2.0 * b,
        _ => a - 2.0 * b,
    };
    let root = sqrt_branch(Complex64::new(s, 0.0));
    Ok(match n {
        2 | 4 => -root,
        _ => root,
    })
}

/// Quasiparticle energy eps_n(k) in physical units (scaled by J).
pub fn dispersion(n: usize, k: f64, p: &FieldPoint) -> Result<Complex64> {
    Ok(p.j * branch_value(n, k, p.eta, p.xi)?)
}

/// Squared biorthogonal normalization Omega_n^2 for the composite
/// eigenvector of branch n (1..=4):
///
/// Omega^2 = 2 + 4 cos^2(k/2) [(eps + 2 i xi)^-2 + (eps - 2 i xi)^-2]
///             + 4 sin^2(k/2) [(eps + 2 eta)^-2 + (eps - 2 eta)^-2]
///
/// evaluated with the dimensionless eps.  Errors when any denominator falls
/// below [`DEGENERACY_TOL`].
pub fn normalization_squared(n: usize, k: f64, p: &FieldPoint) -> Result<Complex64> {
    if !(1..=4).contains(&n) {
        return Err(PtError::InvalidArgument(format!(
            "normalization is defined for branches 1..=4, got {n}"
        )));
    }
    let eps = branch_value(n, k, p.eta, p.xi)?;
    omega_squared_at(eps, k, p.eta, p.xi)
}

/// Omega^2 at an explicit (possibly zero) eps; shared with the zero-mode
/// normalization Omega_5.
pub(crate) fn omega_squared_at(eps: Complex64, k: f64, eta: f64, xi: f64) -> Result<Complex64> {
    let c2 = (0.5 * k).cos().powi(2);
    let s2 = (0.5 * k).sin().powi(2);
    let dens: [(&'static str, Complex64); 4] = [
        ("eps + 2 i xi", eps + Complex64::new(0.0, 2.0 * xi)),
        ("eps - 2 i xi", eps - Complex64::new(0.0, 2.0 * xi)),
        ("eps + 2 eta", eps + Complex64::new(2.0 * eta, 0.0)),
        ("eps - 2 eta", eps - Complex64::new(2.0 * eta, 0.0)),
    ];
    for (which, d) in &dens {
        if d.norm() < DEGENERACY_TOL {
            return Err(PtError::DegenerateDenominator {
                which,
                magnitude: d.norm(),
            });
        }
    }
    let inv2 = |d: Complex64| (d * d).finv();
    Ok(Complex64::new(2.0, 0.0)
        + 4.0 * c2 * (inv2(dens[0].1) + inv2(dens[1].1))
        + 4.0 * s2 * (inv2(dens[2].1) + inv2(dens[3].1)))
}

/// Biorthogonal normalization factor Omega_n (principal square root of
/// [`normalization_squared`]); right and left eigenvectors are both divided
/// by the same factor, so the branch choice cancels in all pairings.
pub fn normalization_factor(n: usize, k: f64, p: &FieldPoint) -> Result<Complex64> {
    Ok(normalization_squared(n, k, p)?.sqrt())
}
