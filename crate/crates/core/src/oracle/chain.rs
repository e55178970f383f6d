//! Chain-level cross-checks: exact diagonalization against the closed-form
//! free-fermion solution.

use crate::error::Result;
use crate::model::{branch_value, momentum_grid, FieldPoint, Sector};
use crate::oracle::eig::eigenvalues;
use crate::oracle::matrix::{chain_hamiltonian, sector_hamiltonian, CMatrix, SpinParity};
use crate::spectrum::ground_energy;
use num_complex::Complex64;

/// Ground-state comparison between brute-force diagonalization and the
/// closed-form free-fermion sum.
#[derive(Debug, Clone)]
pub struct SectorGroundReport {
    /// Lowest eigenvalue (by real part) in the even spin-flip sector.
    pub ed_even_min: Complex64,
    /// Lowest eigenvalue in the odd sector.
    pub ed_odd_min: Complex64,
    /// Closed-form E_g from the momentum sum.
    pub free_fermion: Complex64,
    /// |ed_even_min - free_fermion|.
    pub defect: f64,
}

fn min_by_real(vals: &[Complex64]) -> Complex64 {
    *vals
        .iter()
        .min_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
        .expect("nonempty spectrum")
}

/// Diagonalize both spin-flip parity sectors of the chain and compare the
/// even-sector minimum with the closed-form ground energy.
pub fn sector_ground_compare(two_n: usize, p: &FieldPoint) -> Result<SectorGroundReport> {
    let h = chain_hamiltonian(two_n, p)?;
    let he = sector_hamiltonian(&h, two_n, SpinParity::Even)?;
    let ho = sector_hamiltonian(&h, two_n, SpinParity::Odd)?;
    let ev = eigenvalues(&he)?;
    let od = eigenvalues(&ho)?;
    let ed_even_min = min_by_real(&ev.eigenvalues);
    let ed_odd_min = min_by_real(&od.eigenvalues);
    let free_fermion = ground_energy(two_n, p)?.total;
    Ok(SectorGroundReport {
        ed_even_min,
        ed_odd_min,
        free_fermion,
        defect: (ed_even_min - free_fermion).norm(),
    })
}

/// Reconstruct the complete even-sector spectrum of the 8-site chain from
/// momentum-block eigenvalues and report the worst matching distance.
///
/// The even spin-flip sector maps onto antiperiodic fermions with even total
/// fermion number; for 8 sites the two momentum pairs (pi/4, 3pi/4) each
/// contribute a 16-dimensional block that splits into fermion-parity
/// subspaces, and the chain spectrum is the multiset of same-parity sums.
pub fn even_spectrum_reconstruction(p: &FieldPoint) -> Result<f64> {
    let two_n = 8usize;
    let h = chain_hamiltonian(two_n, p)?;
    let he = sector_hamiltonian(&h, two_n, SpinParity::Even)?;
    let chain_vals = eigenvalues(&he)?.eigenvalues;

    let grid = momentum_grid(two_n, Sector::Even)?;
    let mut per_block: Vec<[Vec<Complex64>; 2]> = Vec::new();
    for &k in &grid.momenta {
        let hk = crate::oracle::block::build_block(k, p);
        let mut split: [Vec<Complex64>; 2] = [Vec::new(), Vec::new()];
        for parity in 0..2 {
            let idx: Vec<usize> = (0..16)
                .filter(|n: &usize| (n.count_ones() as usize) % 2 == parity)
                .collect();
            let sub = CMatrix::from_fn(idx.len(), |i, j| hk[(idx[i], idx[j])]);
            split[parity] = eigenvalues(&sub)?.eigenvalues;
        }
        per_block.push(split);
    }
    assert_eq!(per_block.len(), 2, "8 sites give two momentum pairs");
    let mut combo = Vec::with_capacity(chain_vals.len());
    for parity in 0..2 {
        for l1 in &per_block[0][parity] {
            for l2 in &per_block[1][parity] {
                combo.push(l1 + l2);
            }
        }
    }
    assert_eq!(combo.len(), chain_vals.len());
    Ok(crate::oracle::block::multiset_distance(&chain_vals, &combo))
}

/// Single-chain dispersion folding at xi = 0: the two-site-cell bands fold
/// the standard transverse-field band Lambda(q) = 2 sqrt(1 + eta^2 -
/// 2 eta cos q) as
///
///   2 eps1(k) = Lambda(k/2) + Lambda(pi - k/2)
///   2 eps3(k) = |Lambda(k/2) - Lambda(pi - k/2)|
///
/// Returns the worst absolute defect of both identities over the grid of
/// the given chain.  The eps3 line loses ~half the significant digits near
/// k = pi (square-root cancellation), so meaningful tolerances are ~1e-6.
pub fn folding_defect(two_n: usize, eta: f64) -> Result<f64> {
    let grid = momentum_grid(two_n, Sector::Even)?;
    let lam = |q: f64| 2.0 * (1.0 + eta * eta - 2.0 * eta * q.cos()).sqrt();
    let mut worst = 0.0f64;
    for &k in &grid.momenta {
        let e1 = branch_value(1, k, eta, 0.0)?.re;
        let e3 = branch_value(3, k, eta, 0.0)?;
        let a = lam(0.5 * k);
        let b = lam(std::f64::consts::PI - 0.5 * k);
        worst = worst.max((2.0 * e1 - (a + b)).abs());
        worst = worst.max((2.0 * e3.norm() - (a - b).abs()).abs());
    }
    Ok(worst)
}
