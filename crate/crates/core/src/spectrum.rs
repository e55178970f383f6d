//! Ground-state energy: finite chains and the thermodynamic limit.

use crate::error::{PtError, Result};
use crate::model::{branch_value, momentum_grid, FieldPoint, Sector};
use crate::quad::{cached_rule, refined_rule, NeumaierSum};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default node count for the thermodynamic energy integral.
pub const DEFAULT_QUAD_POINTS: usize = 512;
/// Minimum admissible node count.
pub const MIN_QUAD_POINTS: usize = 64;

/// Evaluation mode shared by all ensemble quantities: a finite periodic
/// chain with the given site count, or the thermodynamic limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    FiniteN { two_n: usize },
    Thermodynamic,
}

/// Ground-state energy of a finite chain.
#[derive(Debug, Clone, Copy)]
pub struct EnergyResult {
    /// Total ground-state energy E_g.
    pub total: Complex64,
    /// Energy density eps_g = E_g / (2N).
    pub density: Complex64,
    pub two_n: usize,
}

/// Exact ground-state energy of the `two_n`-site chain:
/// E_g = -J * sum over the even-sector grid of w(k) eps1(k).
///
/// The branch-1 energy is real for every field point, so the imaginary part
/// is identically zero; it is kept in the type for interface uniformity.
pub fn ground_energy(two_n: usize, p: &FieldPoint) -> Result<EnergyResult> {
    let grid = momentum_grid(two_n, Sector::Even)?;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for (k, w) in grid.momenta.iter().zip(&grid.weights) {
        let e = branch_value(1, *k, p.eta, p.xi)?;
        re.add(w * e.re);
        im.add(w * e.im);
    }
    let total = -p.j * Complex64::new(re.total(), im.total());
    Ok(EnergyResult {
        total,
        density: total / two_n as f64,
        two_n,
    })
}

/// Thermodynamic-limit energy density
/// eps_g = -(J / 2pi) * integral_0^pi eps1(k) dk,
/// evaluated with an n-point Gauss-Legendre rule (n = `quad_points` >= 64).
pub fn energy_density_limit(p: &FieldPoint, quad_points: usize) -> Result<Complex64> {
    if quad_points < MIN_QUAD_POINTS {
        return Err(PtError::InvalidArgument(format!(
            "quad_points must be >= {MIN_QUAD_POINTS}, got {quad_points}"
        )));
    }
    let rule = cached_rule(quad_points);
    let mid = 0.5 * PI;
    let half = 0.5 * PI;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let k = mid + half * x;
        let e = branch_value(1, k, p.eta, p.xi)?;
        re.add(w * e.re);
        im.add(w * e.im);
    }
    Ok(Complex64::new(re.total(), im.total()) * (-p.j * half / (2.0 * PI)))
}

/// Thermodynamic energy density on the fixed composite refined rule.
///
/// Same integral as [`energy_density_limit`], but on panels that shrink
/// geometrically toward k = 0.  Because the node layout never changes, the
/// quadrature error is a smooth function of (eta, xi); use this variant as
/// the base function for finite-difference derivative checks.
pub fn energy_density_refined(p: &FieldPoint) -> Result<Complex64> {
    let (nodes, weights) = refined_rule();
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for (k, w) in nodes.iter().zip(weights) {
        let e = branch_value(1, *k, p.eta, p.xi)?;
        re.add(w * e.re);
        im.add(w * e.im);
    }
    Ok(Complex64::new(re.total(), im.total()) * (-p.j / (2.0 * PI)))
}

/// Energy density for either mode (finite chains use the exact grid sum,
/// the thermodynamic limit uses the default quadrature).
pub fn energy_density(p: &FieldPoint, mode: Mode) -> Result<Complex64> {
    match mode {
        Mode::FiniteN { two_n } => Ok(ground_energy(two_n, p)?.density),
        Mode::Thermodynamic => energy_density_limit(p, DEFAULT_QUAD_POINTS),
    }
}

/// Closed-form k -> 0 limit of the branch-1 energy:
/// 2|eta| outside the unit circle, 2 sqrt(1 - xi^2) inside (J-scaled).
/// This is the thermodynamic spectral gap scale; it vanishes exactly on
/// {eta = 0, r >= 1}.
pub fn eps1_at_zero(p: &FieldPoint) -> f64 {
    let r2 = p.r_squared();
    let s = if r2 >= 1.0 {
        4.0 * p.eta * p.eta
    } else {
        (4.0 * (1.0 - p.xi * p.xi)).max(0.0)
    };
    p.j * s.sqrt()
}

/// Smallest |eps1| reachable in the given mode: the minimum over the finite
/// momentum grid, or the k -> 0 infimum in the thermodynamic limit (eps1 is
/// increasing in k on (0, pi)).
pub fn min_eps1(p: &FieldPoint, mode: Mode) -> Result<f64> {
    match mode {
        Mode::FiniteN { two_n } => {
            let grid = momentum_grid(two_n, Sector::Even)?;
            let mut best = f64::INFINITY;
            for k in &grid.momenta {
                best = best.min(branch_value(1, *k, p.eta, p.xi)?.norm());
            }
            Ok(p.j * best)
        }
        Mode::Thermodynamic => Ok(eps1_at_zero(p)),
    }
}
