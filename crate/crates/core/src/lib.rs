//! Exact free-fermion treatment of a PT-symmetric transverse-field Ising
//! chain with a staggered complex field: `g_j = eta + i xi` on one
//! sublattice and its conjugate on the other, with periodic boundaries.
//!
//! The Hamiltonian is complex symmetric rather than Hermitian, but its
//! single-particle dispersion stays real wherever the PT symmetry is
//! unbroken, and every bulk quantity used here — ground-state energy
//! density, field gradients, Laplacian, staggered magnetizations, and the
//! Berry-curvature-like response built from them — reduces to quadrature
//! over one real band.
//!
//! Layout:
//!
//! * [`model`] — field parameters, momentum grids, dispersion branches and
//!   mode normalizations.
//! * [`spectrum`] — ground-state energy for finite rings and the
//!   thermodynamic limit.
//! * [`response`] — closed-form first and second field derivatives,
//!   magnetizations, and asymptotic ridge laws.
//! * [`berry`] — curvature densities for parameter loops.
//! * [`phase`] — phase classification and Laplacian ridge detection.
//! * [`scan`] — parallel parameter-plane scans with deterministic CSV/JSON
//!   serialization.
//! * [`oracle`] — slow, independent cross-checks: exact diagonalization of
//!   the spin chain, a 16-dimensional momentum-block construction, and PT
//!   / biorthogonality diagnostics.

pub mod berry;
pub mod error;
pub mod model;
pub mod oracle;
pub mod phase;
pub mod quad;
pub mod response;
pub mod scan;
pub mod spectrum;

pub use error::{PtError, Result};
pub use model::{
    branch_value, dispersion, momentum_grid, FieldPoint, MomentumGrid, Sector, DEGENERACY_TOL,
};
pub use phase::{classify, detect_boundary, PhaseLabel};
pub use response::{
    gradient, laplacian, magnetizations, response_bundle, response_record, ResponseBundle,
    ResponseRecord, GAPLESS_TOL,
};
pub use scan::{run_scan, ScanConfig, ScanTable};
pub use spectrum::{
    energy_density, energy_density_limit, energy_density_refined, eps1_at_zero, ground_energy,
    EnergyResult, Mode, DEFAULT_QUAD_POINTS,
};
