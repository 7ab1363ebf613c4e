//! Exact dense statevector simulation.
//!
//! Basis index bit `n - 1 - q` holds qubit `q`, so the ket string `|1000>` on
//! four qubits is basis element 8. The SWAP-test overlap and the Hadamard-test
//! imaginary part are evaluated directly from amplitudes (infinite-shot limit).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliMasks, PauliSum, PauliTerm};

/// Imaginary residue above which an expectation value is treated as a caller bug.
pub const HERMITICITY_RESIDUE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubit_count: usize,
    amplitudes: Vec<Complex64>,
}

#[inline]
fn parity_sign(index: usize, mask: usize) -> f64 {
    if (index & mask).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Phase picked up by basis state `index` under `P`, so `P|index> = phase |index ^ flip>`.
#[inline]
fn basis_phase(masks: &PauliMasks, y_phase: Complex64, index: usize) -> Complex64 {
    y_phase * parity_sign(index, masks.sign)
}

impl StateVector {
    /// Computational basis state from a bit string such as `"1100"`.
    pub fn basis_state(bits: &str) -> Result<StateVector> {
        let qubit_count = bits.len();
        if qubit_count == 0 || qubit_count > usize::BITS as usize - 1 {
            return Err(Error::InvalidOccupation(bits.to_string()));
        }
        let mut index = 0usize;
        for c in bits.chars() {
            index <<= 1;
            match c {
                '0' => {}
                '1' => index |= 1,
                _ => return Err(Error::InvalidOccupation(bits.to_string())),
            }
        }
        let mut amplitudes = vec![Complex64::default(); 1 << qubit_count];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { qubit_count, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<StateVector> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "amplitude vector length {len} is not a power of two"
            )));
        }
        Ok(StateVector { qubit_count: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> StateVector {
        let norm = self.norm_squared().sqrt();
        if norm > 0.0 {
            for a in &mut self.amplitudes {
                *a /= norm;
            }
        }
        self
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same(other.qubit_count)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_same(&self, qubits: usize) -> Result<()> {
        if qubits != self.qubit_count {
            return Err(Error::QubitCountMismatch { expected: self.qubit_count, found: qubits });
        }
        Ok(())
    }

    /// In-place `exp(-i * angle * coeff * P)`; the coefficient must be real.
    pub fn apply_pauli_exponential_in_place(&mut self, term: &PauliTerm, angle: f64) -> Result<()> {
        self.check_same(term.qubit_count())?;
        if term.coeff.im != 0.0 {
            return Err(Error::NonRealCoefficient { imag: term.coeff.im });
        }
        let a = angle * term.coeff.re;
        let (sin, cos) = a.sin_cos();
        let masks = term.masks();
        let y_phase = masks.y_phase();
        // -i sin(a) folded with the basis phase
        let minus_i_sin = Complex64::new(0.0, -sin);
        if masks.flip == 0 {
            for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
                *amp *= cos + minus_i_sin * basis_phase(&masks, y_phase, idx);
            }
            return Ok(());
        }
        let flip = masks.flip;
        for i in 0..self.amplitudes.len() {
            let j = i ^ flip;
            if j < i {
                continue;
            }
            let ai = self.amplitudes[i];
            let aj = self.amplitudes[j];
            // (P psi)[j] = phase(i) psi[i], (P psi)[i] = phase(j) psi[j]
            let pi = basis_phase(&masks, y_phase, i);
            let pj = basis_phase(&masks, y_phase, j);
            self.amplitudes[i] = ai * cos + minus_i_sin * pj * aj;
            self.amplitudes[j] = aj * cos + minus_i_sin * pi * ai;
        }
        Ok(())
    }

    pub fn apply_pauli_exponential(&self, term: &PauliTerm, angle: f64) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_pauli_exponential_in_place(term, angle)?;
        Ok(out)
    }

    /// In-place `coeff * P`; not norm preserving in general.
    pub fn apply_pauli_in_place(&mut self, term: &PauliTerm) -> Result<()> {
        self.check_same(term.qubit_count())?;
        let masks = term.masks();
        let y_phase = masks.y_phase() * term.coeff;
        if masks.flip == 0 {
            for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
                *amp *= y_phase * parity_sign(idx, masks.sign);
            }
            return Ok(());
        }
        for i in 0..self.amplitudes.len() {
            let j = i ^ masks.flip;
            if j < i {
                continue;
            }
            let ai = self.amplitudes[i];
            let aj = self.amplitudes[j];
            self.amplitudes[j] = y_phase * parity_sign(i, masks.sign) * ai;
            self.amplitudes[i] = y_phase * parity_sign(j, masks.sign) * aj;
        }
        Ok(())
    }

    pub fn apply_pauli(&self, term: &PauliTerm) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_pauli_in_place(term)?;
        Ok(out)
    }

    /// `<bra|P|ket>` for the bare string (coefficient ignored).
    fn pauli_matrix_element(bra: &StateVector, masks: &PauliMasks, ket: &StateVector) -> Complex64 {
        let y_phase = masks.y_phase();
        let mut acc = Complex64::default();
        for (i, &k) in ket.amplitudes.iter().enumerate() {
            if k == Complex64::default() {
                continue;
            }
            let sign = parity_sign(i, masks.sign);
            acc += bra.amplitudes[i ^ masks.flip].conj() * k * sign;
        }
        acc * y_phase
    }

    /// `<bra|H|ket>`, accumulated in term order.
    pub fn matrix_element(bra: &StateVector, h: &PauliSum, ket: &StateVector) -> Result<Complex64> {
        bra.check_same(ket.qubit_count)?;
        bra.check_same(h.qubit_count())?;
        let mut acc = Complex64::default();
        for t in h.terms() {
            acc += t.coeff * Self::pauli_matrix_element(bra, &t.masks(), ket);
        }
        Ok(acc)
    }

    /// `<self|H|self>` for Hermitian `H`.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        let residue = h.terms().iter().map(|t| t.coeff.im.abs()).fold(0.0, f64::max);
        if residue > HERMITICITY_RESIDUE && !h.is_hermitian(HERMITICITY_RESIDUE) {
            return Err(Error::NonHermitian { residue: h.hermiticity_residue() });
        }
        let value = Self::matrix_element(self, h, self)?;
        if value.im.abs() > HERMITICITY_RESIDUE {
            return Err(Error::NonHermitian { residue: value.im.abs() });
        }
        Ok(value.re)
    }

    /// `Im <bra|H|ket>`, the exact value a Hadamard-test circuit would estimate.
    pub fn imag_cross_expectation(bra: &StateVector, h: &PauliSum, ket: &StateVector) -> Result<f64> {
        Ok(Self::matrix_element(bra, h, ket)?.im)
    }

    /// `|<a|b>|^2`, the exact value a SWAP-test circuit would estimate.
    pub fn overlap_squared(a: &StateVector, b: &StateVector) -> Result<f64> {
        a.check_same(b.qubit_count)?;
        let mut acc = Complex64::default();
        for (x, y) in a.amplitudes.iter().zip(&b.amplitudes) {
            acc += x.conj() * y;
        }
        Ok(acc.norm_sqr())
    }

    /// Bitwise fingerprint of the amplitudes, used to verify frozen states stay untouched.
    pub fn checksum(&self) -> u64 {
        // FNV-1a over the raw bit patterns
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for a in &self.amplitudes {
            for bits in [a.re.to_bits(), a.im.to_bits()] {
                for byte in bits.to_le_bytes() {
                    hash ^= byte as u64;
                    hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
                }
            }
        }
        hash
    }
}
