//! Trial energy, penalty terms, analytic gradients and the tangent-vector objective.
//!
//! For a state `|psi(theta)> = U(theta)|init>` the derivative of the energy is
//! assembled from derivative insertions:
//! `dE/dtheta_m = 2 sum_slots Im <psi| H V_slot |init>`.

use rayon::prelude::*;

use crate::ansatz::UccAnsatz;
use crate::error::{Error, Result};
use crate::hamiltonians::{total_number, total_sz};
use crate::pauli::PauliSum;
use crate::statevector::StateVector;
use crate::Complex64;

/// Golden-ratio constant `2 (sqrt(5) + 1)` in the overlap quartic.
fn quartic_base() -> f64 {
    2.0 * (5.0f64.sqrt() + 1.0)
}

/// `1 / (exp(x) + 1)`.
fn fermi(x: f64) -> f64 {
    1.0 / (x.exp() + 1.0)
}

/// How the lower-state energy scales the overlap quartic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyScale {
    /// `|E_p|`; keeps the quartic non-negative for bound states.
    Absolute,
    /// `E_p` as given; a negative value is rejected as a configuration error.
    Signed,
}

/// Constants of the bond-length dependent deflation term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeflationParams {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    /// Current bond length (Angstrom).
    pub r: f64,
    /// Reference bond length (Angstrom).
    pub r_d: f64,
    pub energy_scale: EnergyScale,
}

impl DeflationParams {
    pub const DEFAULT_A: f64 = 1.0;
    pub const DEFAULT_B: f64 = 1.0;
    pub const DEFAULT_ALPHA: f64 = 100.0;
    /// H2 equilibrium bond length.
    pub const DEFAULT_R_D: f64 = 0.7414;

    pub fn at_bond_length(r: f64) -> DeflationParams {
        DeflationParams {
            a: Self::DEFAULT_A,
            b: Self::DEFAULT_B,
            alpha: Self::DEFAULT_ALPHA,
            r,
            r_d: Self::DEFAULT_R_D,
            energy_scale: EnergyScale::Absolute,
        }
    }

    /// Fermi–Dirac switch `f = (exp(alpha (r - r_d)) + 1)^-1`.
    pub fn switch(&self) -> f64 {
        fermi(self.alpha * (self.r - self.r_d))
    }

    /// Weight `g = (exp(r - 0.25 r_d) + 1)^-1` of the plain overlap summand.
    pub fn overlap_weight(&self) -> f64 {
        fermi(self.r - 0.25 * self.r_d)
    }

    /// `a f + b (1 - f)`.
    pub fn prefactor(&self) -> f64 {
        let f = self.switch();
        self.a * f + self.b * (1.0 - f)
    }

    fn scaled_energy(&self, lower_energy: f64) -> f64 {
        match self.energy_scale {
            EnergyScale::Absolute => lower_energy.abs(),
            EnergyScale::Signed => lower_energy,
        }
    }

    /// Coefficients `(q4, q2)` of `q4 s^2 + q2 s`, with `s = |<lower|target>|^2`.
    pub fn quartic_coefficients(&self, lower_energy: f64) -> (f64, f64) {
        let scale = (self.r / self.r_d).powi(4) * self.scaled_energy(lower_energy) / 4.0;
        ((1.0 + quartic_base()) * scale, quartic_base() * scale)
    }

    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.alpha > 0.0 && self.b >= 0.0 && self.r_d > 0.0 && self.r > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "deflation constants need a > 0, alpha > 0, b >= 0, r, r_d > 0 (got {self:?})"
            )));
        }
        Ok(())
    }
}

/// Overlap penalty against frozen lower states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Deflation {
    None,
    /// Bond-length switched penalty with the overlap quartic.
    FermiDirac(DeflationParams),
    /// Plain `beta * sum_j |<j|psi>|^2`.
    Overlap { beta: f64 },
}

impl Deflation {
    /// `(value, d value / d s)` for one lower state at overlap `s`.
    fn summand(&self, s: f64, lower_energy: f64) -> (f64, f64) {
        match self {
            Deflation::None => (0.0, 0.0),
            Deflation::Overlap { beta } => (beta * s, *beta),
            Deflation::FermiDirac(p) => {
                let g = p.overlap_weight();
                let (q4, q2) = p.quartic_coefficients(lower_energy);
                let pre = p.prefactor();
                let value = g * s + (1.0 - g) * (q4 * s * s + q2 * s);
                let slope = g + (1.0 - g) * (2.0 * q4 * s + q2);
                (pre * value, pre * slope)
            }
        }
    }
}

/// A frozen, previously converged state and the energy attributed to it.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerState {
    pub state: StateVector,
    pub energy: f64,
}

/// Quadratic symmetry-sector penalties on `N` and `S_z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintParams {
    pub electron_target: f64,
    pub sz_target: f64,
    pub number_weight: f64,
    pub sz_weight: f64,
}

impl ConstraintParams {
    pub const DEFAULT_WEIGHT: f64 = 1.0;

    pub fn sector(electrons: usize, sz: f64) -> ConstraintParams {
        ConstraintParams {
            electron_target: electrons as f64,
            sz_target: sz,
            number_weight: Self::DEFAULT_WEIGHT,
            sz_weight: Self::DEFAULT_WEIGHT,
        }
    }

    pub fn disabled() -> ConstraintParams {
        ConstraintParams { electron_target: 0.0, sz_target: 0.0, number_weight: 0.0, sz_weight: 0.0 }
    }

    fn validate(&self) -> Result<()> {
        if self.number_weight < 0.0 || self.sz_weight < 0.0 {
            return Err(Error::InvalidConfig(format!("penalty weights must be >= 0 (got {self:?})")));
        }
        Ok(())
    }
}

/// The three parts of the penalized objective at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectiveParts {
    pub energy: f64,
    pub constraint: f64,
    pub deflation: f64,
}

impl ObjectiveParts {
    pub fn total(&self) -> f64 {
        self.energy + self.constraint + self.deflation
    }
}

/// Which scalar functional a finite-difference gradient differentiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    Energy,
    Penalized,
    Tangent,
}

/// Everything needed to evaluate one eigenstate's objectives.
#[derive(Clone, Debug)]
pub struct StateProblem {
    hamiltonian: PauliSum,
    ansatz: UccAnsatz,
    initial_state: StateVector,
    lower_states: Vec<LowerState>,
    deflation: Deflation,
    constraint: ConstraintParams,
    number_op: PauliSum,
    sz_op: PauliSum,
}

impl StateProblem {
    pub fn new(
        hamiltonian: PauliSum,
        ansatz: UccAnsatz,
        initial_state: StateVector,
        lower_states: Vec<LowerState>,
        deflation: Deflation,
        constraint: ConstraintParams,
    ) -> Result<StateProblem> {
        let n = hamiltonian.qubit_count();
        for q in [ansatz.qubit_count(), initial_state.qubit_count()] {
            if q != n {
                return Err(Error::QubitCountMismatch { expected: n, found: q });
            }
        }
        for lower in &lower_states {
            if lower.state.qubit_count() != n {
                return Err(Error::QubitCountMismatch { expected: n, found: lower.state.qubit_count() });
            }
            if (lower.state.norm_squared() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidConfig("lower states must be normalized".into()));
            }
        }
        constraint.validate()?;
        match &deflation {
            Deflation::FermiDirac(p) => {
                p.validate()?;
                if p.energy_scale == EnergyScale::Signed {
                    if let Some(l) = lower_states.iter().find(|l| l.energy < 0.0) {
                        return Err(Error::InvalidConfig(format!(
                            "signed energy scale with lower energy {} makes the deflation quartic negative",
                            l.energy
                        )));
                    }
                }
            }
            Deflation::Overlap { beta } if *beta < 0.0 => {
                return Err(Error::InvalidConfig(format!("overlap weight must be >= 0, got {beta}")));
            }
            _ => {}
        }
        Ok(StateProblem {
            hamiltonian,
            ansatz,
            initial_state,
            lower_states,
            deflation,
            constraint,
            number_op: total_number(n),
            sz_op: total_sz(n),
        })
    }

    /// Unpenalized problem: no lower states, no deflation, no constraints.
    pub fn plain(hamiltonian: PauliSum, ansatz: UccAnsatz, initial_state: StateVector) -> Result<StateProblem> {
        Self::new(hamiltonian, ansatz, initial_state, Vec::new(), Deflation::None, ConstraintParams::disabled())
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn ansatz(&self) -> &UccAnsatz {
        &self.ansatz
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.initial_state
    }

    pub fn lower_states(&self) -> &[LowerState] {
        &self.lower_states
    }

    pub fn parameter_count(&self) -> usize {
        self.ansatz.parameter_count()
    }

    pub fn prepare(&self, theta: &[f64]) -> Result<StateVector> {
        self.ansatz.prepare_state(theta, &self.initial_state)
    }

    pub fn trial_energy(&self, theta: &[f64]) -> Result<f64> {
        self.prepare(theta)?.expectation(&self.hamiltonian)
    }

    /// Energy gradient from derivative insertions, one Hadamard-test value per slot.
    pub fn analytic_gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let bra = self.prepare(theta)?;
        (0..self.parameter_count())
            .into_par_iter()
            .map(|m| {
                let mut acc = 0.0;
                for slot in self.ansatz.derivative_slots(m)? {
                    let ket = self.ansatz.apply_derivative_operator(theta, &slot, &self.initial_state)?;
                    acc += StateVector::imag_cross_expectation(&bra, &self.hamiltonian, &ket)?;
                }
                Ok(2.0 * acc)
            })
            .collect()
    }

    /// `d|psi>/d theta_m = -i sum_slots V_slot |init>` for every variable.
    pub fn state_derivatives(&self, theta: &[f64]) -> Result<Vec<StateVector>> {
        (0..self.parameter_count())
            .into_par_iter()
            .map(|m| {
                let mut acc = vec![Complex64::default(); self.initial_state.amplitudes().len()];
                for slot in self.ansatz.derivative_slots(m)? {
                    let v = self.ansatz.apply_derivative_operator(theta, &slot, &self.initial_state)?;
                    for (a, x) in acc.iter_mut().zip(v.amplitudes()) {
                        *a += Complex64::new(x.im, -x.re);
                    }
                }
                StateVector::from_amplitudes(acc)
            })
            .collect()
    }

    pub fn constraint_value(&self, state: &StateVector) -> Result<f64> {
        let c = &self.constraint;
        let mut value = 0.0;
        if c.number_weight != 0.0 {
            value += c.number_weight * (state.expectation(&self.number_op)? - c.electron_target).powi(2);
        }
        if c.sz_weight != 0.0 {
            value += c.sz_weight * (state.expectation(&self.sz_op)? - c.sz_target).powi(2);
        }
        Ok(value)
    }

    pub fn deflation_value(&self, state: &StateVector) -> Result<f64> {
        let mut value = 0.0;
        for lower in &self.lower_states {
            let s = StateVector::overlap_squared(&lower.state, state)?;
            value += self.deflation.summand(s, lower.energy).0;
        }
        Ok(value)
    }

    pub fn constraint_term(&self, theta: &[f64]) -> Result<f64> {
        self.constraint_value(&self.prepare(theta)?)
    }

    pub fn deflation_term(&self, theta: &[f64]) -> Result<f64> {
        self.deflation_value(&self.prepare(theta)?)
    }

    pub fn objective_parts(&self, theta: &[f64]) -> Result<ObjectiveParts> {
        let state = self.prepare(theta)?;
        Ok(ObjectiveParts {
            energy: state.expectation(&self.hamiltonian)?,
            constraint: self.constraint_value(&state)?,
            deflation: self.deflation_value(&state)?,
        })
    }

    /// `F = E + E_const + E_def`.
    pub fn objective_f(&self, theta: &[f64]) -> Result<f64> {
        Ok(self.objective_parts(theta)?.total())
    }

    /// `F_tv = sum_m |dE/dtheta_m| + E_const + E_def`.
    pub fn objective_ftv(&self, theta: &[f64]) -> Result<f64> {
        let state = self.prepare(theta)?;
        let tangent: f64 = self.analytic_gradient(theta)?.iter().map(|g| g.abs()).sum();
        Ok(tangent + self.constraint_value(&state)? + self.deflation_value(&state)?)
    }

    /// Gradient of `F`, every part differentiated through the state derivatives.
    pub fn objective_f_gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let state = self.prepare(theta)?;
        let derivatives = self.state_derivatives(theta)?;
        let h_psi = apply_sum(&self.hamiltonian, &state)?;
        let c = &self.constraint;
        let number_mean = state.expectation(&self.number_op)?;
        let sz_mean = state.expectation(&self.sz_op)?;
        let n_psi = apply_sum(&self.number_op, &state)?;
        let sz_psi = apply_sum(&self.sz_op, &state)?;
        let lower: Vec<(Complex64, f64)> = self
            .lower_states
            .iter()
            .map(|l| {
                let amp = l.state.inner(&state)?;
                Ok((amp, self.deflation.summand(amp.norm_sqr(), l.energy).1))
            })
            .collect::<Result<_>>()?;

        derivatives
            .iter()
            .map(|d| {
                // d<O> = 2 Re <O psi | d psi>
                let mut g = 2.0 * h_psi.inner(d)?.re;
                if c.number_weight != 0.0 {
                    g += 2.0 * c.number_weight * (number_mean - c.electron_target) * 2.0 * n_psi.inner(d)?.re;
                }
                if c.sz_weight != 0.0 {
                    g += 2.0 * c.sz_weight * (sz_mean - c.sz_target) * 2.0 * sz_psi.inner(d)?.re;
                }
                for (l, &(amp, slope)) in self.lower_states.iter().zip(&lower) {
                    let ds = 2.0 * (amp.conj() * l.state.inner(d)?).re;
                    g += slope * ds;
                }
                Ok(g)
            })
            .collect()
    }

    pub fn evaluate(&self, functional: Functional, theta: &[f64]) -> Result<f64> {
        match functional {
            Functional::Energy => self.trial_energy(theta),
            Functional::Penalized => self.objective_f(theta),
            Functional::Tangent => self.objective_ftv(theta),
        }
    }

    /// Central finite differences of the chosen functional.
    pub fn fdm_gradient(&self, functional: Functional, theta: &[f64], step: f64) -> Result<Vec<f64>> {
        fdm_gradient(|t| self.evaluate(functional, t), theta, step)
    }
}

/// `H |state>` as an unnormalized vector, summed in term order.
pub fn apply_sum(h: &PauliSum, state: &StateVector) -> Result<StateVector> {
    let mut acc = vec![Complex64::default(); state.amplitudes().len()];
    for term in h.terms() {
        let v = state.apply_pauli(term)?;
        for (a, x) in acc.iter_mut().zip(v.amplitudes()) {
            *a += x;
        }
    }
    StateVector::from_amplitudes(acc)
}

/// `(f(theta + h e_m) - f(theta - h e_m)) / 2h` per component.
pub fn fdm_gradient(f: impl Fn(&[f64]) -> Result<f64>, theta: &[f64], step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::InvalidConfig(format!("finite-difference step must be > 0, got {step}")));
    }
    let mut point = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for m in 0..theta.len() {
        point[m] = theta[m] + step;
        let plus = f(&point)?;
        point[m] = theta[m] - step;
        let minus = f(&point)?;
        point[m] = theta[m];
        grad.push((plus - minus) / (2.0 * step));
    }
    Ok(grad)
}

/// `sum_m |g_m|`.
pub fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::VariableBlock;
    use crate::hamiltonians::constant;
    use crate::pauli::PauliTerm;

    fn toy_ansatz() -> UccAnsatz {
        let block = VariableBlock::new("x", vec![PauliTerm::real(1.0, "X").unwrap()]).unwrap();
        UccAnsatz::new(1, vec![block], 1).unwrap()
    }

    fn z() -> PauliSum {
        PauliSum::from_terms(1, vec![PauliTerm::real(1.0, "Z").unwrap()]).unwrap()
    }

    fn toy_problem(h: PauliSum) -> StateProblem {
        StateProblem::plain(h, toy_ansatz(), StateVector::basis_state("0").unwrap()).unwrap()
    }

    #[test]
    fn toy_energy_and_gradient() {
        let p = toy_problem(z());
        for &theta in &[0.0, 0.25, 0.9, -2.0] {
            assert!((p.trial_energy(&[theta]).unwrap() - (2.0 * theta).cos()).abs() < 1e-14);
            let g = p.analytic_gradient(&[theta]).unwrap();
            assert!((g[0] + 2.0 * (2.0 * theta).sin()).abs() < 1e-14);
        }
        let ftv = p.objective_ftv(&[std::f64::consts::FRAC_PI_4]).unwrap();
        assert!((ftv - 2.0).abs() < 1e-14);
    }

    #[test]
    fn constant_hamiltonian() {
        let p = toy_problem(constant(1, 0.75));
        assert!((p.trial_energy(&[1.3]).unwrap() - 0.75).abs() < 1e-15);
        assert!(p.analytic_gradient(&[1.3]).unwrap()[0].abs() < 1e-15);
        let fd = p.fdm_gradient(Functional::Energy, &[1.3], 1e-5).unwrap();
        assert!(fd[0].abs() <= 2.0 * f64::EPSILON / 1e-5);
    }

    #[test]
    fn constraint_examples() {
        let h = constant(4, 0.0);
        let ansatz = crate::ansatz::build_uccsd("1100", 2).unwrap();
        let mk = |occ: &str, constraint| {
            StateProblem::new(
                h.clone(),
                ansatz.clone(),
                StateVector::basis_state(occ).unwrap(),
                Vec::new(),
                Deflation::None,
                constraint,
            )
            .unwrap()
        };
        assert_eq!(mk("1100", ConstraintParams::sector(2, 0.0)).constraint_term(&[0.0; 3]).unwrap(), 0.0);
        assert_eq!(mk("1000", ConstraintParams::disabled()).constraint_term(&[0.0; 3]).unwrap(), 0.0);
        let number_only = ConstraintParams { sz_weight: 0.0, ..ConstraintParams::sector(2, 0.0) };
        let value = mk("1000", number_only).constraint_term(&[0.0; 3]).unwrap();
        assert!((value - 1.0).abs() < 1e-14);
    }

    fn deflated_toy(deflation: Deflation, lower_energy: f64) -> StateProblem {
        let lower = LowerState { state: StateVector::basis_state("0").unwrap(), energy: lower_energy };
        StateProblem::new(
            z(),
            toy_ansatz(),
            StateVector::basis_state("0").unwrap(),
            vec![lower],
            deflation,
            ConstraintParams::disabled(),
        )
        .unwrap()
    }

    #[test]
    fn deflation_empty_and_orthogonal() {
        let p = toy_problem(z());
        assert_eq!(p.deflation_term(&[0.4]).unwrap(), 0.0);
        let fd = Deflation::FermiDirac(DeflationParams::at_bond_length(0.74));
        let q = deflated_toy(fd, -1.1);
        // theta = pi/2 maps |0> to -i|1>, orthogonal to the lower state
        assert!(q.deflation_term(&[std::f64::consts::FRAC_PI_2]).unwrap().abs() < 1e-30);
    }

    #[test]
    fn deflation_at_reference_bond_length() {
        // Independent scalar evaluation at r = r_d: f = 1/2.
        let r_d: f64 = 0.7414;
        let (a, b) = (1.0, 1.0);
        let e_p: f64 = -1.1373;
        let theta: f64 = 0.3;
        let s = theta.cos().powi(2);
        let g = 1.0 / ((0.75 * r_d).exp() + 1.0);
        let phi = 2.0 * (5f64.sqrt() + 1.0);
        let q1 = (1.0 + phi) * e_p.abs() / 4.0;
        let q2 = phi * e_p.abs() / 4.0;
        let expected = (a + b) / 2.0 * (g * s + (1.0 - g) * (q1 * s * s + q2 * s));

        let params = DeflationParams { a, b, r: r_d, r_d, ..DeflationParams::at_bond_length(r_d) };
        let p = deflated_toy(Deflation::FermiDirac(params), e_p);
        let value = p.deflation_term(&[theta]).unwrap();
        assert!((value - expected).abs() < 1e-14, "{value} vs {expected}");
        // frozen from a separate Python evaluation of the same formula
        assert!((value - 2.524682122392052).abs() < 1e-12, "{value}");
    }

    #[test]
    fn signed_energy_scale_rejects_negative_energy() {
        let params = DeflationParams { energy_scale: EnergyScale::Signed, ..DeflationParams::at_bond_length(0.74) };
        let lower = LowerState { state: StateVector::basis_state("0").unwrap(), energy: -1.0 };
        let err = StateProblem::new(
            z(),
            toy_ansatz(),
            StateVector::basis_state("0").unwrap(),
            vec![lower],
            Deflation::FermiDirac(params),
            ConstraintParams::disabled(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
        let bad = DeflationParams { b: -1.0, ..DeflationParams::at_bond_length(0.74) };
        assert!(StateProblem::new(
            z(),
            toy_ansatz(),
            StateVector::basis_state("0").unwrap(),
            Vec::new(),
            Deflation::FermiDirac(bad),
            ConstraintParams::disabled(),
        )
        .is_err());
    }

    #[test]
    fn parts_recombine() {
        let p = deflated_toy(Deflation::Overlap { beta: 2.0 }, -1.0);
        let parts = p.objective_parts(&[0.7]).unwrap();
        assert_eq!(parts.total(), parts.energy + parts.constraint + parts.deflation);
        assert_eq!(p.objective_f(&[0.7]).unwrap(), parts.total());
        assert!(parts.deflation > 0.0);

        let plain = toy_problem(z());
        for &t in &[0.0, 0.5, 1.5] {
            assert_eq!(plain.objective_f(&[t]).unwrap(), plain.trial_energy(&[t]).unwrap());
        }
    }

    #[test]
    fn penalized_gradient_matches_finite_differences() {
        let params = DeflationParams::at_bond_length(0.9);
        let p = deflated_toy(Deflation::FermiDirac(params), -0.8);
        for &t in &[0.2, 0.8, -1.1] {
            let analytic = p.objective_f_gradient(&[t]).unwrap();
            let fd = p.fdm_gradient(Functional::Penalized, &[t], 1e-5).unwrap();
            assert!((analytic[0] - fd[0]).abs() < 1e-8, "{analytic:?} vs {fd:?}");
        }
    }

    #[test]
    fn fdm_second_order_convergence() {
        let p = toy_problem(z());
        let theta = [0.37f64];
        let exact = -2.0 * (2.0 * theta[0]).sin();
        let e1 = (p.fdm_gradient(Functional::Energy, &theta, 1e-2).unwrap()[0] - exact).abs();
        let e2 = (p.fdm_gradient(Functional::Energy, &theta, 5e-3).unwrap()[0] - exact).abs();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
        assert!(fdm_gradient(|_| Ok(0.0), &theta, 0.0).is_err());
    }
}
