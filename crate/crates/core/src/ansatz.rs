//! Trotterized unitary coupled-cluster ansatz and its derivative insertions.
//!
//! Each variable `theta_l` owns a block of real-coefficient Pauli terms
//! `c_k P_k`, the Jordan–Wigner image of `i (tau_l - tau_l^dagger)`. The state
//! preparation operator applies, for each of `depth` repetitions, every block
//! in order and every term in order as `exp(-i (theta_l / depth) c_k P_k)`.
//! Repetitions share parameters.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{jordan_wigner, FermionOperator, Ladder};
use crate::pauli::PauliTerm;
use crate::statevector::StateVector;

/// Trotter depth used by the experiments unless configured otherwise.
pub const DEFAULT_TROTTER_DEPTH: usize = 2;

/// Spin-conserving excitation out of a reference determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Excitation {
    Single { from: usize, to: usize },
    Double { from: (usize, usize), to: (usize, usize) },
}

impl Excitation {
    /// The cluster operator `tau`: `a_to^dagger a_from`, or `a_b^dagger a_a^dagger a_q a_p`.
    pub fn cluster_operator(&self) -> FermionOperator {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Excitation::Single { from, to } => {
                FermionOperator::term(one, vec![Ladder::create(to), Ladder::annihilate(from)])
            }
            Excitation::Double { from: (p, q), to: (a, b) } => FermionOperator::term(
                one,
                vec![Ladder::create(b), Ladder::create(a), Ladder::annihilate(q), Ladder::annihilate(p)],
            ),
        }
    }

    /// Orientation-free identity: an excitation and its reverse generate the
    /// same rotation up to the sign of the parameter.
    fn key(&self) -> (Vec<usize>, Vec<usize>) {
        let (mut a, mut b) = match *self {
            Excitation::Single { from, to } => (vec![from], vec![to]),
            Excitation::Double { from: (p, q), to: (r, s) } => (vec![p, q], vec![r, s]),
        };
        a.sort_unstable();
        b.sort_unstable();
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Excitation::Single { from, to } => format!("s{from}->{to}"),
            Excitation::Double { from: (p, q), to: (a, b) } => format!("d{p},{q}->{a},{b}"),
        }
    }
}

fn parse_occupation(reference: &str) -> Result<Vec<bool>> {
    reference
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidOccupation(reference.to_string())),
        })
        .collect()
}

fn is_up(mode: usize) -> bool {
    mode % 2 == 0
}

/// Spin-conserving singles then doubles from the occupied to the virtual
/// modes of `reference` (qubit 0 leftmost, even modes spin up).
pub fn excitations(reference: &str) -> Result<Vec<Excitation>> {
    let occ = parse_occupation(reference)?;
    let occupied: Vec<usize> = (0..occ.len()).filter(|&p| occ[p]).collect();
    let virtuals: Vec<usize> = (0..occ.len()).filter(|&p| !occ[p]).collect();
    if occupied.is_empty() || virtuals.is_empty() {
        return Err(Error::NoExcitations(reference.to_string()));
    }
    let mut out = Vec::new();
    for &p in &occupied {
        for &a in &virtuals {
            if is_up(p) == is_up(a) {
                out.push(Excitation::Single { from: p, to: a });
            }
        }
    }
    for (i, &p) in occupied.iter().enumerate() {
        for &q in &occupied[i + 1..] {
            let ups = usize::from(is_up(p)) + usize::from(is_up(q));
            for (j, &a) in virtuals.iter().enumerate() {
                for &b in &virtuals[j + 1..] {
                    if usize::from(is_up(a)) + usize::from(is_up(b)) == ups {
                        out.push(Excitation::Double { from: (p, q), to: (a, b) });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// One variable's Pauli factors `c_k P_k` with real `c_k`, ordered by axes string.
#[derive(Clone, Debug, PartialEq)]
pub struct VariableBlock {
    pub label: String,
    terms: Vec<PauliTerm>,
}

impl VariableBlock {
    pub fn new(label: impl Into<String>, terms: Vec<PauliTerm>) -> Result<VariableBlock> {
        if let Some(t) = terms.iter().find(|t| t.coeff.im != 0.0) {
            return Err(Error::NonRealCoefficient { imag: t.coeff.im });
        }
        Ok(VariableBlock { label: label.into(), terms })
    }

    /// Block for `exp(theta (tau - tau^dagger)) = exp(-i theta JW[i (tau - tau^dagger)])`.
    pub fn from_excitation(excitation: &Excitation, modes: usize) -> Result<VariableBlock> {
        let tau = excitation.cluster_operator();
        let anti = tau.clone().add(tau.adjoint().scaled(Complex64::new(-1.0, 0.0)));
        let generator = jordan_wigner(&anti.scaled(Complex64::new(0.0, 1.0)), modes)?;
        let residue = generator.hermiticity_residue();
        if residue > 1e-12 {
            return Err(Error::NonHermitian { residue });
        }
        let terms = generator
            .terms()
            .iter()
            .map(|t| PauliTerm::new(Complex64::new(t.coeff.re, 0.0), t.axes().to_vec()))
            .collect();
        VariableBlock::new(excitation.label(), terms)
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }
}

/// One appearance of a variable inside the factorized circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeSlot {
    pub variable: usize,
    pub repetition: usize,
    pub term_index: usize,
    /// `P_k` with coefficient `c_k / depth`.
    pub inserted: PauliTerm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UccAnsatz {
    qubit_count: usize,
    depth: usize,
    blocks: Vec<VariableBlock>,
}

impl UccAnsatz {
    pub fn new(qubit_count: usize, blocks: Vec<VariableBlock>, depth: usize) -> Result<UccAnsatz> {
        if depth == 0 {
            return Err(Error::InvalidConfig("trotter depth must be at least 1".into()));
        }
        for t in blocks.iter().flat_map(|b| b.terms.iter()) {
            if t.qubit_count() != qubit_count {
                return Err(Error::QubitCountMismatch { expected: qubit_count, found: t.qubit_count() });
            }
        }
        Ok(UccAnsatz { qubit_count, depth, blocks })
    }

    pub fn from_excitations(qubit_count: usize, excitations: &[Excitation], depth: usize) -> Result<UccAnsatz> {
        let blocks = excitations
            .iter()
            .map(|e| VariableBlock::from_excitation(e, qubit_count))
            .collect::<Result<Vec<_>>>()?;
        UccAnsatz::new(qubit_count, blocks, depth)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn blocks(&self) -> &[VariableBlock] {
        &self.blocks
    }

    pub fn parameter_count(&self) -> usize {
        self.blocks.len()
    }

    fn check_inputs(&self, theta: &[f64], initial: &StateVector) -> Result<()> {
        if theta.len() != self.blocks.len() {
            return Err(Error::ParameterCount { expected: self.blocks.len(), found: theta.len() });
        }
        if initial.qubit_count() != self.qubit_count {
            return Err(Error::QubitCountMismatch { expected: self.qubit_count, found: initial.qubit_count() });
        }
        Ok(())
    }

    /// `U(theta) |initial>`.
    pub fn prepare_state(&self, theta: &[f64], initial: &StateVector) -> Result<StateVector> {
        self.check_inputs(theta, initial)?;
        let mut state = initial.clone();
        let scale = 1.0 / self.depth as f64;
        for _ in 0..self.depth {
            for (block, &angle) in self.blocks.iter().zip(theta) {
                for term in &block.terms {
                    state.apply_pauli_exponential_in_place(term, angle * scale)?;
                }
            }
        }
        Ok(state)
    }

    /// Every appearance of variable `m`: one slot per repetition and term.
    pub fn derivative_slots(&self, m: usize) -> Result<Vec<DerivativeSlot>> {
        let block = self
            .blocks
            .get(m)
            .ok_or(Error::VariableOutOfRange { index: m, count: self.blocks.len() })?;
        let scale = Complex64::new(1.0 / self.depth as f64, 0.0);
        let mut slots = Vec::with_capacity(self.depth * block.terms.len());
        for repetition in 0..self.depth {
            for (term_index, term) in block.terms.iter().enumerate() {
                slots.push(DerivativeSlot {
                    variable: m,
                    repetition,
                    term_index,
                    inserted: term.scaled(scale),
                });
            }
        }
        Ok(slots)
    }

    /// `V_slot(theta) |initial>`: the preparation sequence with the bare
    /// `(c_k / depth) P_k` inserted just before the slot's own exponential.
    pub fn apply_derivative_operator(
        &self,
        theta: &[f64],
        slot: &DerivativeSlot,
        initial: &StateVector,
    ) -> Result<StateVector> {
        self.check_inputs(theta, initial)?;
        if slot.variable >= self.blocks.len() {
            return Err(Error::VariableOutOfRange { index: slot.variable, count: self.blocks.len() });
        }
        let mut state = initial.clone();
        let scale = 1.0 / self.depth as f64;
        for repetition in 0..self.depth {
            for (l, (block, &angle)) in self.blocks.iter().zip(theta).enumerate() {
                for (k, term) in block.terms.iter().enumerate() {
                    if repetition == slot.repetition && l == slot.variable && k == slot.term_index {
                        state.apply_pauli_in_place(&slot.inserted)?;
                    }
                    state.apply_pauli_exponential_in_place(term, angle * scale)?;
                }
            }
        }
        Ok(state)
    }
}

/// UCCSD ansatz over the spin-conserving excitations of `reference`.
pub fn build_uccsd(reference: &str, depth: usize) -> Result<UccAnsatz> {
    let excitations = excitations(reference)?;
    UccAnsatz::from_excitations(reference.len(), &excitations, depth)
}

/// Shared ansatz covering the excitations of several references, each
/// distinct rotation kept once (first orientation wins).
pub fn build_shared_uccsd(references: &[&str], depth: usize) -> Result<UccAnsatz> {
    let Some(first) = references.first() else {
        return Err(Error::InvalidConfig("no reference occupations".into()));
    };
    let qubits = first.len();
    let mut merged: Vec<Excitation> = Vec::new();
    for reference in references {
        if reference.len() != qubits {
            return Err(Error::QubitCountMismatch { expected: qubits, found: reference.len() });
        }
        for e in excitations(reference)? {
            if !merged.iter().any(|m| m.key() == e.key()) {
                merged.push(e);
            }
        }
    }
    // singles before doubles, as in the single-reference ansatz
    merged.sort_by_key(|e| matches!(e, Excitation::Double { .. }));
    UccAnsatz::from_excitations(qubits, &merged, depth)
}
