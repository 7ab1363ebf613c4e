//! Dense exact diagonalization used as the Full-CI reference.
//!
//! Eigenpairs come from cyclic complex Jacobi rotations on the dense matrix.
//! Particle-number / spin-projection sectors follow the spin-orbital layout
//! used throughout the crate: qubit `2i` is site/orbital `i` spin up and
//! qubit `2i + 1` spin down.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Largest register accepted by the dense routines.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Smallest log error reported. Energies of order one summed over a few dozen
/// Pauli terms carry rounding noise of a few 1e-15, so differences below
/// 1e-14 are not resolvable.
pub const LOG_ERROR_FLOOR: f64 = -14.0;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> DenseMatrix {
        DenseMatrix { dim, data: vec![Complex64::default(); dim * dim] }
    }

    pub fn identity(dim: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Complex64::default() {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_residue(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    /// `M v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c {
                    acc += self[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// Particle number and spin projection of one eigenvector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorLabel {
    pub electrons: usize,
    pub sz: f64,
}

/// Ascending eigenvalues with eigenvectors stored as matrix columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
    pub sector_labels: Option<Vec<SectorLabel>>,
}

impl Spectrum {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// Eigenvalues of eigenvectors carrying the given sector label.
    pub fn sector_levels(&self, electrons: usize, sz: f64) -> Vec<f64> {
        match &self.sector_labels {
            None => Vec::new(),
            Some(labels) => self
                .eigenvalues
                .iter()
                .zip(labels)
                .filter(|(_, l)| l.electrons == electrons && (l.sz - sz).abs() < 1e-9)
                .map(|(&e, _)| e)
                .collect(),
        }
    }
}

/// Dense `2^n x 2^n` matrix of a Pauli sum.
pub fn dense_matrix(h: &PauliSum) -> Result<DenseMatrix> {
    let n = h.qubit_count();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { qubits: n, max: MAX_DENSE_QUBITS });
    }
    let dim = 1usize << n;
    let mut m = DenseMatrix::zeros(dim);
    for t in h.terms() {
        let masks = t.masks();
        let phase = masks.y_phase() * t.coeff;
        for col in 0..dim {
            let sign = if (col & masks.sign).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(col ^ masks.flip, col)] += phase * sign;
        }
    }
    Ok(m)
}

/// Cyclic Jacobi eigen-decomposition of a Hermitian matrix.
///
/// Returns ascending eigenvalues and the unitary whose columns are the
/// matching eigenvectors.
pub fn jacobi_eigh(matrix: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let residue = matrix.hermiticity_residue();
    if residue > 1e-10 {
        return Err(Error::NonHermitian { residue });
    }
    let n = matrix.dim();
    let mut a = matrix.clone();
    let mut v = DenseMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() < JACOBI_TOLERANCE {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                // Phase e^{-i phi} moves a_pq onto the positive real axis,
                // after which a real symmetric rotation annihilates it.
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q)
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;

                // A <- A J (columns p, q)
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * jpp + arq * jqp;
                    a[(r, q)] = arp * jpq + arq * jqq;
                }
                // A <- J^dagger A (rows p, q)
                for col in 0..n {
                    let apc = a[(p, col)];
                    let aqc = a[(q, col)];
                    a[(p, col)] = jpp.conj() * apc + jqp.conj() * aqc;
                    a[(q, col)] = jpq.conj() * apc + jqq.conj() * aqc;
                }
                a[(p, q)] = Complex64::default();
                a[(q, p)] = Complex64::default();
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * jpp + vrq * jqp;
                    v[(r, q)] = vrp * jpq + vrq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DenseMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok((eigenvalues, vectors))
}

/// Full spectrum of a Hermitian Pauli sum.
pub fn diagonalize(h: &PauliSum) -> Result<Spectrum> {
    let m = dense_matrix(h)?;
    let (eigenvalues, eigenvectors) = jacobi_eigh(&m)?;
    Ok(Spectrum { eigenvalues, eigenvectors, sector_labels: None })
}

/// Electron count of a basis index.
pub fn basis_electrons(index: usize) -> usize {
    index.count_ones() as usize
}

/// Spin projection of a basis index on `qubits` spin orbitals.
pub fn basis_sz(index: usize, qubits: usize) -> f64 {
    let mut sz = 0.0;
    for q in 0..qubits {
        if index >> (qubits - 1 - q) & 1 == 1 {
            sz += if q % 2 == 0 { 0.5 } else { -0.5 };
        }
    }
    sz
}

fn sector_basis(qubits: usize, electrons: usize, sz: f64) -> Vec<usize> {
    (0..1usize << qubits)
        .filter(|&b| basis_electrons(b) == electrons && (basis_sz(b, qubits) - sz).abs() < 1e-9)
        .collect()
}

/// Ascending eigenvalues restricted to the `(electrons, sz)` block.
///
/// Only meaningful for Hamiltonians that conserve both quantities.
pub fn sector_levels(h: &PauliSum, electrons: usize, sz: f64) -> Result<Vec<f64>> {
    let full = dense_matrix(h)?;
    let basis = sector_basis(h.qubit_count(), electrons, sz);
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let block = DenseMatrix::from_fn(basis.len(), |r, c| full[(basis[r], basis[c])]);
    Ok(jacobi_eigh(&block)?.0)
}

/// Full spectrum assembled block by block over `(N, S_z)` sectors, so every
/// eigenvector carries an exact sector label even inside degenerate levels.
pub fn diagonalize_by_sector(h: &PauliSum) -> Result<Spectrum> {
    let qubits = h.qubit_count();
    let full = dense_matrix(h)?;
    let dim = full.dim();
    let mut pairs: Vec<(f64, Vec<Complex64>, SectorLabel)> = Vec::with_capacity(dim);
    for electrons in 0..=qubits {
        let mut sz_values: Vec<f64> = (0..dim)
            .filter(|&b| basis_electrons(b) == electrons)
            .map(|b| basis_sz(b, qubits))
            .collect();
        sz_values.sort_by(f64::total_cmp);
        sz_values.dedup();
        for sz in sz_values {
            let basis = sector_basis(qubits, electrons, sz);
            let block = DenseMatrix::from_fn(basis.len(), |r, c| full[(basis[r], basis[c])]);
            let (values, vectors) = jacobi_eigh(&block)?;
            for (k, value) in values.into_iter().enumerate() {
                let mut embedded = vec![Complex64::default(); dim];
                for (row, &b) in basis.iter().enumerate() {
                    embedded[b] = vectors[(row, k)];
                }
                pairs.push((value, embedded, SectorLabel { electrons, sz }));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = DenseMatrix::from_fn(dim, |r, c| pairs[c].1[r]);
    let labels = pairs.iter().map(|p| p.2).collect();
    Ok(Spectrum { eigenvalues, eigenvectors, sector_labels: Some(labels) })
}

/// `log10 |calc - exact|`, clamped below at [`LOG_ERROR_FLOOR`].
pub fn log_error(calculated: f64, exact: f64) -> f64 {
    let diff = (calculated - exact).abs();
    if diff == 0.0 {
        LOG_ERROR_FLOOR
    } else {
        diff.log10().max(LOG_ERROR_FLOOR)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliTerm;

    fn sum(n: usize, terms: &[(f64, &str)]) -> PauliSum {
        PauliSum::from_terms(n, terms.iter().map(|&(c, a)| PauliTerm::real(c, a).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn dense_single_qubit() {
        let z = dense_matrix(&sum(1, &[(1.0, "Z")])).unwrap();
        assert_eq!(z[(0, 0)].re, 1.0);
        assert_eq!(z[(1, 1)].re, -1.0);
        assert_eq!(z[(0, 1)].norm(), 0.0);

        let xx = dense_matrix(&sum(2, &[(1.0, "XX")])).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r + c == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx[(r, c)].re, expected);
            }
        }
    }

    #[test]
    fn dense_size_cap() {
        let big = PauliSum::zero(11);
        assert!(matches!(dense_matrix(&big), Err(Error::TooManyQubits { qubits: 11, .. })));
    }

    #[test]
    fn diagonal_spectrum() {
        let s = diagonalize(&sum(2, &[(1.0, "ZI"), (1.0, "IZ")])).unwrap();
        let expected = [-2.0, 0.0, 0.0, 2.0];
        for (a, b) in s.eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_hermitian_two_by_two() {
        // [[1, 2 - i], [2 + i, -3]]: eigenvalues -1 +/- sqrt(9)
        let m = DenseMatrix::from_fn(2, |r, c| match (r, c) {
            (0, 0) => Complex64::new(1.0, 0.0),
            (0, 1) => Complex64::new(2.0, -1.0),
            (1, 0) => Complex64::new(2.0, 1.0),
            _ => Complex64::new(-3.0, 0.0),
        });
        let (values, vectors) = jacobi_eigh(&m).unwrap();
        assert!((values[0] - (-1.0 - 3.0)).abs() < 1e-12);
        assert!((values[1] - (-1.0 + 3.0)).abs() < 1e-12);
        for k in 0..2 {
            let v = vectors.column(k);
            let mv = m.apply(&v);
            for i in 0..2 {
                assert!((mv[i] - v[i] * values[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DenseMatrix::from_fn(2, |r, c| Complex64::new((r * 2 + c) as f64, 0.0));
        assert!(matches!(jacobi_eigh(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn log_error_values() {
        assert!((log_error(1.0 + 1e-3, 1.0) + 3.0).abs() < 1e-9);
        assert_eq!(log_error(-1.25, -1.25), LOG_ERROR_FLOOR);
        assert_eq!(log_error(1.0 + 4e-16, 1.0), LOG_ERROR_FLOOR);
    }

    #[test]
    fn basis_quantum_numbers() {
        // |1001>: mode 0 (up) and mode 3 (down)
        assert_eq!(basis_electrons(0b1001), 2);
        assert_eq!(basis_sz(0b1001, 4), 0.0);
        assert_eq!(basis_sz(0b1010, 4), 1.0);
    }
}
