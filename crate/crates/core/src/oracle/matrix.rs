//! Dense complex matrices and exact-diagonalization builders for small
//! chains.  Everything here exists to cross-check the closed-form solution
//! against brute force; dimensions are capped accordingly.

use crate::error::{PtError, Result};
use crate::model::FieldPoint;
use num_complex::Complex64;

/// Largest chain the exact-diagonalization builders accept.
pub const CHAIN_SITE_CAP: usize = 12;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |self - other| entrywise.
    pub fn max_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

fn check_chain_size(two_n: usize) -> Result<()> {
    if two_n < 4 || two_n % 2 != 0 {
        return Err(PtError::InvalidArgument(format!(
            "need an even site count >= 4, got {two_n}"
        )));
    }
    if two_n > CHAIN_SITE_CAP {
        return Err(PtError::SizeCap {
            dim: 1 << two_n,
            cap: 1 << CHAIN_SITE_CAP,
        });
    }
    Ok(())
}

/// Transverse field on site j (1-based): eta + i xi on even sites
/// (sublattice a), eta - i xi on odd sites (sublattice b).
pub fn site_field(j_one_based: usize, p: &FieldPoint) -> Complex64 {
    if j_one_based % 2 == 0 {
        Complex64::new(p.eta, p.xi)
    } else {
        Complex64::new(p.eta, -p.xi)
    }
}

/// Full 2^two_n-dimensional chain Hamiltonian in the spin-z product basis
/// (bit b of the index is site b+1; z eigenvalue 1 - 2 bit):
///
///   H = -J sum_j [ z_j z_{j+1} + g_j x_j ],  periodic.
pub fn chain_hamiltonian(two_n: usize, p: &FieldPoint) -> Result<CMatrix> {
    check_chain_size(two_n)?;
    let dim = 1usize << two_n;
    let mut h = CMatrix::zeros(dim);
    for s in 0..dim {
        let mut zz = 0.0;
        for j in 0..two_n {
            let zj = 1.0 - 2.0 * ((s >> j) & 1) as f64;
            let zn = 1.0 - 2.0 * ((s >> ((j + 1) % two_n)) & 1) as f64;
            zz += zj * zn;
        }
        h[(s, s)] += Complex64::new(-p.j * zz, 0.0);
        for j in 0..two_n {
            let g = site_field(j + 1, p);
            h[(s ^ (1 << j), s)] += -p.j * g;
        }
    }
    Ok(h)
}

/// Parity sector of the global spin-flip symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinParity {
    Even,
    Odd,
}

/// Restriction of `h` to one global-spin-flip parity sector.
///
/// The sector basis is (|s> +- |s XOR mask>)/sqrt2 over representatives
/// s < s XOR mask, in ascending s; both sectors have dimension 2^(two_n-1).
pub fn sector_hamiltonian(h: &CMatrix, two_n: usize, parity: SpinParity) -> Result<CMatrix> {
    check_chain_size(two_n)?;
    let dim = 1usize << two_n;
    if h.dim != dim {
        return Err(PtError::InvalidArgument(format!(
            "matrix dim {} does not match two_n = {two_n}",
            h.dim
        )));
    }
    let mask = dim - 1;
    let reps: Vec<usize> = (0..dim).filter(|s| *s < (*s ^ mask)).collect();
    let sign = match parity {
        SpinParity::Even => 1.0,
        SpinParity::Odd => -1.0,
    };
    let m = reps.len();
    let mut out = CMatrix::zeros(m);
    for (a, &sa) in reps.iter().enumerate() {
        let fa = sa ^ mask;
        for (b, &sb) in reps.iter().enumerate() {
            let fb = sb ^ mask;
            out[(a, b)] = 0.5
                * (h[(sa, sb)] + h[(fa, fb)] + sign * (h[(sa, fb)] + h[(fa, sb)]));
        }
    }
    Ok(out)
}

/// Antiunitary-symmetry defects of the chain Hamiltonian.
#[derive(Debug, Clone, Copy)]
pub struct PtReport {
    /// max |(P conj(H) P)_{ij} - H_{ij}|; zero when the combined
    /// reflection-conjugation symmetry holds.
    pub pt_defect: f64,
    /// max |[P, H]_{ij}|; nonzero whenever xi != 0.
    pub parity_comm_defect: f64,
    /// max |conj(H) - H|; nonzero whenever xi != 0.
    pub conj_defect: f64,
}

/// Site-reversal map on basis indices: site j -> two_n + 1 - j is bit
/// reversal of the two_n-bit index.
fn reverse_bits(s: usize, two_n: usize) -> usize {
    let mut out = 0usize;
    for b in 0..two_n {
        if s >> b & 1 == 1 {
            out |= 1 << (two_n - 1 - b);
        }
    }
    out
}

/// Measure the PT symmetry of the chain: P is the site-reversal
/// permutation, T is complex conjugation.
pub fn pt_check(two_n: usize, p: &FieldPoint) -> Result<PtReport> {
    let h = chain_hamiltonian(two_n, p)?;
    let dim = h.dim;
    let rev: Vec<usize> = (0..dim).map(|s| reverse_bits(s, two_n)).collect();
    let mut pt_defect = 0.0f64;
    let mut comm = 0.0f64;
    let mut conj = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let hij = h[(i, j)];
            // (P conj(H) P)[rev i][rev j] = conj(H[i][j])
            pt_defect = pt_defect.max((hij.conj() - h[(rev[i], rev[j])]).norm());
            // (PH)[i][j] = H[rev i][j]; (HP)[i][j] = H[i][rev j]
            comm = comm.max((h[(rev[i], j)] - h[(i, rev[j])]).norm());
            conj = conj.max(2.0 * hij.im.abs());
        }
    }
    Ok(PtReport {
        pt_defect,
        parity_comm_defect: comm,
        conj_defect: conj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_and_adjoint_basics() {
        let a = CMatrix::from_fn(2, |i, j| Complex64::new((i + 1) as f64, j as f64));
        let id = CMatrix::identity(2);
        assert_eq!(a.matmul(&id), a);
        let adj = a.adjoint();
        assert_eq!(adj[(0, 1)], a[(1, 0)].conj());
        let tr = a.trace();
        assert_eq!(tr, a[(0, 0)] + a[(1, 1)]);
    }

    #[test]
    fn chain_size_guards() {
        let p = FieldPoint::new(0.5, 0.0);
        assert!(chain_hamiltonian(3, &p).is_err());
        assert!(matches!(
            chain_hamiltonian(14, &p),
            Err(PtError::SizeCap { .. })
        ));
        assert!(chain_hamiltonian(4, &p).is_ok());
    }

    #[test]
    fn chain_is_complex_symmetric() {
        // H = A + iB with A, B real symmetric: H^T = H even though
        // H^dagger != H for xi != 0.
        let h = chain_hamiltonian(6, &FieldPoint::new(0.5, 0.3)).unwrap();
        let mut sym = 0.0f64;
        let mut herm = 0.0f64;
        for i in 0..h.dim {
            for j in 0..h.dim {
                sym = sym.max((h[(i, j)] - h[(j, i)]).norm());
                herm = herm.max((h[(i, j)] - h[(j, i)].conj()).norm());
            }
        }
        assert!(sym < 1e-15);
        assert!(herm > 0.1);
    }

    #[test]
    fn chain_diagonal_counts_bonds() {
        // Fully polarized state (s = 0): every zz bond is +1, so the
        // diagonal entry is -J * two_n; no transverse term on the diagonal.
        let h = chain_hamiltonian(4, &FieldPoint::new(0.7, 0.2)).unwrap();
        assert!((h[(0, 0)] - Complex64::new(-4.0, 0.0)).norm() < 1e-15);
        // One flip (s = 1, site 1 on sublattice b): couples back with -J g_b.
        assert!((h[(1, 0)] - Complex64::new(-0.7, 0.2)).norm() < 1e-15);
        // Site 2 (bit 1) is sublattice a.
        assert!((h[(2, 0)] - Complex64::new(-0.7, -0.2)).norm() < 1e-15);
    }

    #[test]
    fn sector_split_preserves_trace() {
        let p = FieldPoint::new(0.6, 0.25);
        let h = chain_hamiltonian(6, &p).unwrap();
        let he = sector_hamiltonian(&h, 6, SpinParity::Even).unwrap();
        let ho = sector_hamiltonian(&h, 6, SpinParity::Odd).unwrap();
        assert_eq!(he.dim, 32);
        assert_eq!(ho.dim, 32);
        let t = he.trace() + ho.trace();
        assert!((t - h.trace()).norm() < 1e-12);
    }

    #[test]
    fn pt_defect_zero_parity_broken_for_complex_field() {
        let rep = pt_check(6, &FieldPoint::new(0.5, 0.3)).unwrap();
        assert_eq!(rep.pt_defect, 0.0);
        assert!(rep.parity_comm_defect > 0.1);
        assert!(rep.conj_defect > 0.1);
        // Real field: every defect vanishes.
        let rep = pt_check(6, &FieldPoint::new(0.5, 0.0)).unwrap();
        assert_eq!(rep.pt_defect, 0.0);
        assert!(rep.parity_comm_defect < 1e-15);
        assert_eq!(rep.conj_defect, 0.0);
    }

    #[test]
    fn bit_reversal_is_involution() {
        for s in [0usize, 1, 5, 37, 63] {
            assert_eq!(reverse_bits(reverse_bits(s, 6), 6), s);
        }
    }
}
