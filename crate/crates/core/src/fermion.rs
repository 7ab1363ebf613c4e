//! Fermionic ladder-operator polynomials and their Jordan–Wigner images.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum, PauliTerm};

/// A creation (`dagger = true`) or annihilation operator on one mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Ladder {
        Ladder { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Ladder {
        Ladder { mode, dagger: false }
    }
}

/// Polynomial in ladder operators: a sum of coefficient-weighted operator words.
///
/// Words are products read left to right, so `[a_1†, a_0]` is `a_1† a_0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FermionOperator {
    terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl FermionOperator {
    pub fn new() -> FermionOperator {
        FermionOperator::default()
    }

    pub fn term(coeff: Complex64, word: Vec<Ladder>) -> FermionOperator {
        FermionOperator { terms: vec![(coeff, word)] }
    }

    pub fn push(&mut self, coeff: Complex64, word: Vec<Ladder>) {
        self.terms.push((coeff, word));
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn add(mut self, other: FermionOperator) -> FermionOperator {
        self.terms.extend(other.terms);
        self
    }

    pub fn scaled(mut self, factor: Complex64) -> FermionOperator {
        for (c, _) in &mut self.terms {
            *c *= factor;
        }
        self
    }

    /// Hermitian conjugate: conjugated coefficients, reversed words, daggers toggled.
    pub fn adjoint(&self) -> FermionOperator {
        FermionOperator {
            terms: self
                .terms
                .iter()
                .map(|(c, word)| {
                    let word = word
                        .iter()
                        .rev()
                        .map(|l| Ladder { mode: l.mode, dagger: !l.dagger })
                        .collect();
                    (c.conj(), word)
                })
                .collect(),
        }
    }

    pub fn max_mode(&self) -> Option<usize> {
        self.terms.iter().flat_map(|(_, w)| w.iter().map(|l| l.mode)).max()
    }
}

/// JW image of one ladder operator:
/// `a_p† -> Z_0..Z_{p-1} (X_p - iY_p)/2`, `a_p -> Z_0..Z_{p-1} (X_p + iY_p)/2`.
fn ladder_image(ladder: Ladder, modes: usize) -> PauliSum {
    let mut x_axes = vec![Pauli::I; modes];
    let mut y_axes = vec![Pauli::I; modes];
    for q in 0..ladder.mode {
        x_axes[q] = Pauli::Z;
        y_axes[q] = Pauli::Z;
    }
    x_axes[ladder.mode] = Pauli::X;
    y_axes[ladder.mode] = Pauli::Y;
    let y_coeff = if ladder.dagger { Complex64::new(0.0, -0.5) } else { Complex64::new(0.0, 0.5) };
    PauliSum::from_terms(
        modes,
        vec![
            PauliTerm::new(Complex64::new(0.5, 0.0), x_axes),
            PauliTerm::new(y_coeff, y_axes),
        ],
    )
    .expect("ladder image axes match mode count")
}

/// Jordan–Wigner transform onto `modes` qubits, mode `p` on qubit `p`.
pub fn jordan_wigner(op: &FermionOperator, modes: usize) -> Result<PauliSum> {
    if let Some(mode) = op.max_mode() {
        if mode >= modes {
            return Err(Error::ModeOutOfRange { mode, modes });
        }
    }
    let mut total = PauliSum::zero(modes);
    for (coeff, word) in op.terms() {
        let mut image = PauliSum::from_terms(modes, vec![PauliTerm::identity(modes, *coeff)])?;
        for &ladder in word {
            image = image.product(&ladder_image(ladder, modes))?;
        }
        total = total.add(&image)?;
    }
    Ok(total.simplified())
}

/// `n_p = a_p† a_p`.
pub fn number_operator(mode: usize) -> FermionOperator {
    FermionOperator::term(
        Complex64::new(1.0, 0.0),
        vec![Ladder::create(mode), Ladder::annihilate(mode)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn lookup(s: &PauliSum, axes: &str) -> Complex64 {
        s.terms()
            .iter()
            .find(|t| t.axes_string() == axes)
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    #[test]
    fn creation_on_lowest_mode() {
        let op = FermionOperator::term(one(), vec![Ladder::create(0)]);
        let s = jordan_wigner(&op, 1).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(lookup(&s, "X"), Complex64::new(0.5, 0.0));
        assert_eq!(lookup(&s, "Y"), Complex64::new(0.0, -0.5));
    }

    #[test]
    fn number_operator_image() {
        let s = jordan_wigner(&number_operator(1), 2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(lookup(&s, "II"), Complex64::new(0.5, 0.0));
        assert_eq!(lookup(&s, "IZ"), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn hopping_image() {
        let hop = FermionOperator::term(one(), vec![Ladder::create(0), Ladder::annihilate(1)]);
        let op = hop.clone().add(hop.adjoint());
        let s = jordan_wigner(&op, 2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(lookup(&s, "XX"), Complex64::new(0.5, 0.0));
        assert_eq!(lookup(&s, "YY"), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn mode_out_of_range() {
        let op = FermionOperator::term(one(), vec![Ladder::create(3)]);
        assert!(matches!(jordan_wigner(&op, 2), Err(Error::ModeOutOfRange { mode: 3, modes: 2 })));
    }

    #[test]
    fn adjoint_reverses_word() {
        let op = FermionOperator::term(
            Complex64::new(0.0, 2.0),
            vec![Ladder::create(2), Ladder::annihilate(0)],
        );
        let adj = op.adjoint();
        assert_eq!(adj.terms()[0].0, Complex64::new(0.0, -2.0));
        assert_eq!(adj.terms()[0].1, vec![Ladder::create(0), Ladder::annihilate(2)]);
    }
}
