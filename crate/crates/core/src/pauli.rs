//! Weighted Pauli strings and sums of them.
//!
//! Qubit 0 is the leftmost character of an axes string such as `"XIZY"`.
//! Coefficients are always stored as complex numbers; Hermiticity of a sum is
//! checked on demand rather than assumed.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default magnitude below which simplified coefficients are dropped.
pub const DEFAULT_DROP_TOLERANCE: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const IMAG: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit Pauli axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Product of two single-qubit Paulis as `(phase, axis)`.
    pub fn product(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (ONE, p),
            (X, X) | (Y, Y) | (Z, Z) => (ONE, I),
            (X, Y) => (IMAG, Z),
            (Y, X) => (-IMAG, Z),
            (Y, Z) => (IMAG, X),
            (Z, Y) => (-IMAG, X),
            (Z, X) => (IMAG, Y),
            (X, Z) => (-IMAG, Y),
        }
    }
}

/// Bit masks describing how a Pauli string acts on computational basis states.
///
/// For basis index `b`, `P|b> = i^y_count * (-1)^popcount(b & sign) |b ^ flip>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliMasks {
    pub flip: usize,
    pub sign: usize,
    pub y_count: u32,
}

impl PauliMasks {
    /// `i^y_count` as a complex phase.
    pub fn y_phase(&self) -> Complex64 {
        match self.y_count % 4 {
            0 => ONE,
            1 => IMAG,
            2 => -ONE,
            _ => -IMAG,
        }
    }
}

/// A complex coefficient times a tensor product of Pauli axes.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coeff: Complex64,
    axes: Vec<Pauli>,
}

impl PauliTerm {
    pub fn new(coeff: Complex64, axes: Vec<Pauli>) -> PauliTerm {
        PauliTerm { coeff, axes }
    }

    pub fn real(coeff: f64, axes: &str) -> Result<PauliTerm> {
        Self::parse(Complex64::new(coeff, 0.0), axes)
    }

    /// Builds a term from an axes string such as `"XIZ"`.
    pub fn parse(coeff: Complex64, axes: &str) -> Result<PauliTerm> {
        let axes = axes
            .chars()
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("unknown Pauli axis {c:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliTerm { coeff, axes })
    }

    pub fn identity(qubit_count: usize, coeff: Complex64) -> PauliTerm {
        PauliTerm { coeff, axes: vec![Pauli::I; qubit_count] }
    }

    /// Single axis on `qubit`, identity elsewhere.
    pub fn single(qubit_count: usize, qubit: usize, axis: Pauli, coeff: Complex64) -> PauliTerm {
        let mut axes = vec![Pauli::I; qubit_count];
        axes[qubit] = axis;
        PauliTerm { coeff, axes }
    }

    pub fn axes(&self) -> &[Pauli] {
        &self.axes
    }

    pub fn qubit_count(&self) -> usize {
        self.axes.len()
    }

    pub fn axes_string(&self) -> String {
        self.axes.iter().map(|p| p.as_char()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.axes.iter().all(|&p| p == Pauli::I)
    }

    /// Number of non-identity axes.
    pub fn weight(&self) -> usize {
        self.axes.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn scaled(&self, factor: Complex64) -> PauliTerm {
        PauliTerm { coeff: self.coeff * factor, axes: self.axes.clone() }
    }

    /// Operator product `self * other`, with the phase folded into the coefficient.
    pub fn multiply(&self, other: &PauliTerm) -> Result<PauliTerm> {
        if self.axes.len() != other.axes.len() {
            return Err(Error::QubitCountMismatch {
                expected: self.axes.len(),
                found: other.axes.len(),
            });
        }
        let mut coeff = self.coeff * other.coeff;
        let axes = self
            .axes
            .iter()
            .zip(&other.axes)
            .map(|(&a, &b)| {
                let (phase, p) = a.product(b);
                coeff *= phase;
                p
            })
            .collect();
        Ok(PauliTerm { coeff, axes })
    }

    /// Whether the two strings commute as operators (coefficients ignored).
    pub fn commutes_with(&self, other: &PauliTerm) -> bool {
        let anti = self
            .axes
            .iter()
            .zip(&other.axes)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    pub fn masks(&self) -> PauliMasks {
        let n = self.axes.len();
        let mut masks = PauliMasks { flip: 0, sign: 0, y_count: 0 };
        for (q, &p) in self.axes.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => masks.flip |= bit,
                Pauli::Y => {
                    masks.flip |= bit;
                    masks.sign |= bit;
                    masks.y_count += 1;
                }
                Pauli::Z => masks.sign |= bit,
            }
        }
        masks
    }
}

/// A sum of Pauli terms on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    qubit_count: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn zero(qubit_count: usize) -> PauliSum {
        PauliSum { qubit_count, terms: Vec::new() }
    }

    pub fn from_terms(qubit_count: usize, terms: Vec<PauliTerm>) -> Result<PauliSum> {
        let mut sum = PauliSum::zero(qubit_count);
        for t in terms {
            sum.push(t)?;
        }
        Ok(sum)
    }

    pub fn push(&mut self, term: PauliTerm) -> Result<()> {
        if term.qubit_count() != self.qubit_count {
            return Err(Error::QubitCountMismatch {
                expected: self.qubit_count,
                found: term.qubit_count(),
            });
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges like terms and drops coefficients with magnitude below `drop_tolerance`.
    ///
    /// Output terms are ordered lexicographically by axes string.
    pub fn simplify(&self, drop_tolerance: f64) -> PauliSum {
        let mut merged: BTreeMap<&[Pauli], Complex64> = BTreeMap::new();
        for t in &self.terms {
            *merged.entry(t.axes.as_slice()).or_default() += t.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.norm() >= drop_tolerance)
            .map(|(axes, coeff)| PauliTerm { coeff, axes: axes.to_vec() })
            .collect();
        PauliSum { qubit_count: self.qubit_count, terms }
    }

    pub fn simplified(&self) -> PauliSum {
        self.simplify(DEFAULT_DROP_TOLERANCE)
    }

    /// Largest imaginary coefficient after merging like terms.
    pub fn hermiticity_residue(&self) -> f64 {
        self.simplify(0.0)
            .terms
            .iter()
            .map(|t| t.coeff.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.hermiticity_residue() <= tolerance
    }

    pub fn scaled(&self, factor: Complex64) -> PauliSum {
        PauliSum {
            qubit_count: self.qubit_count,
            terms: self.terms.iter().map(|t| t.scaled(factor)).collect(),
        }
    }

    /// Concatenation of terms (no simplification).
    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.qubit_count != other.qubit_count {
            return Err(Error::QubitCountMismatch {
                expected: self.qubit_count,
                found: other.qubit_count,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(PauliSum { qubit_count: self.qubit_count, terms })
    }

    /// Operator product, simplified with the default drop tolerance.
    pub fn product(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.qubit_count != other.qubit_count {
            return Err(Error::QubitCountMismatch {
                expected: self.qubit_count,
                found: other.qubit_count,
            });
        }
        let mut out = PauliSum::zero(self.qubit_count);
        for a in &self.terms {
            for b in &other.terms {
                out.terms.push(a.multiply(b)?);
            }
        }
        Ok(out.simplified())
    }

    /// Hermitian conjugate. Pauli strings are Hermitian, so only coefficients conjugate.
    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            qubit_count: self.qubit_count,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm { coeff: t.coeff.conj(), axes: t.axes.clone() })
                .collect(),
        }
    }

    /// Parses the line format `<real> <imag> <axes>`; `#` lines are comments.
    pub fn parse_text(text: &str) -> Result<PauliSum> {
        let mut sum: Option<PauliSum> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(format!(
                    "expected `<real> <imag> <axes>`, found {} fields",
                    fields.len()
                )));
            }
            let re: f64 = fields[0]
                .parse()
                .map_err(|_| parse_err(format!("bad real part {:?}", fields[0])))?;
            let im: f64 = fields[1]
                .parse()
                .map_err(|_| parse_err(format!("bad imaginary part {:?}", fields[1])))?;
            let term = PauliTerm::parse(Complex64::new(re, im), fields[2]).map_err(|e| match e {
                Error::Parse { message, .. } => parse_err(message),
                other => other,
            })?;
            match &mut sum {
                None => sum = Some(PauliSum { qubit_count: term.qubit_count(), terms: vec![term] }),
                Some(s) => {
                    if term.qubit_count() != s.qubit_count {
                        return Err(parse_err(format!(
                            "axes length {} differs from {} on earlier lines",
                            term.qubit_count(),
                            s.qubit_count
                        )));
                    }
                    s.terms.push(term);
                }
            }
        }
        sum.ok_or_else(|| Error::Parse { line: 0, message: "no terms".into() })
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "{:?} {:?} {}", t.coeff.re, t.coeff.im, t.axes_string())?;
        }
        Ok(())
    }
}
