//! Multi-state drivers: VQD, tangent-vector VQE, SSVQE and MCVQE.

use std::fmt;
use std::str::FromStr;

use crate::ansatz::{build_shared_uccsd, build_uccsd, UccAnsatz, DEFAULT_TROTTER_DEPTH};
use crate::error::{Error, Result};
use crate::objectives::{l1_norm, ConstraintParams, Deflation, DeflationParams, LowerState, StateProblem};
use crate::optimizer::{minimize, OptimizerConfig, Termination};
use crate::oracle::{jacobi_eigh, log_error, DenseMatrix};
use crate::pauli::PauliSum;
use crate::statevector::StateVector;
use crate::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Vqd,
    Tvvqe,
    Ssvqe,
    Mcvqe,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Vqd, Method::Tvvqe, Method::Ssvqe, Method::Mcvqe];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Vqd => "vqd",
            Method::Tvvqe => "tvvqe",
            Method::Ssvqe => "ssvqe",
            Method::Mcvqe => "mcvqe",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "vqd" => Ok(Method::Vqd),
            "tvvqe" => Ok(Method::Tvvqe),
            "ssvqe" => Ok(Method::Ssvqe),
            "mcvqe" => Ok(Method::Mcvqe),
            _ => Err(Error::InvalidConfig(format!("unknown method {s:?}"))),
        }
    }
}

/// One eigenstate to find: a label, its starting occupation and, when known,
/// the exact level used for log errors.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetState {
    pub label: String,
    pub occupation: String,
    pub exact: Option<f64>,
}

impl TargetState {
    pub fn new(label: impl Into<String>, occupation: impl Into<String>, exact: Option<f64>) -> TargetState {
        TargetState { label: label.into(), occupation: occupation.into(), exact }
    }
}

/// Where the Fermi–Dirac quartic takes each lower state's energy from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerEnergySource {
    /// The lower target's exact level, falling back to the solver energy.
    Exact,
    Solver,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeflationConfig {
    None,
    FermiDirac { params: DeflationParams, source: LowerEnergySource },
    Overlap { beta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodConfig {
    pub method: Method,
    pub trotter_depth: usize,
    /// Energy-phase budget per state; the last entry covers any further states.
    pub phase1_iterations: Vec<usize>,
    /// Tangent-phase budget per state, same convention. Only for TVVQE.
    pub phase2_iterations: Vec<usize>,
    /// Tolerances and line search shared by every phase.
    pub optimizer: OptimizerConfig,
    pub deflation: DeflationConfig,
    pub constraint: ConstraintParams,
    /// Central-difference step for the tangent-phase gradient.
    pub tangent_fd_step: f64,
}

impl MethodConfig {
    pub const DEFAULT_TANGENT_FD_STEP: f64 = 1e-6;

    pub fn new(method: Method, phase1: Vec<usize>, phase2: Vec<usize>) -> MethodConfig {
        MethodConfig {
            method,
            trotter_depth: DEFAULT_TROTTER_DEPTH,
            phase1_iterations: phase1,
            phase2_iterations: phase2,
            optimizer: OptimizerConfig::default(),
            deflation: DeflationConfig::None,
            constraint: ConstraintParams::disabled(),
            tangent_fd_step: Self::DEFAULT_TANGENT_FD_STEP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.phase1_iterations.is_empty() {
            return Err(Error::InvalidConfig("phase1_iterations must list at least one budget".into()));
        }
        match (self.method, self.phase2_iterations.is_empty()) {
            (Method::Tvvqe, true) => {
                return Err(Error::InvalidConfig("tvvqe needs phase2_iterations".into()));
            }
            (m, false) if m != Method::Tvvqe => {
                return Err(Error::InvalidConfig(format!("phase2_iterations only applies to tvvqe, not {m}")));
            }
            _ => {}
        }
        if self.trotter_depth == 0 {
            return Err(Error::InvalidConfig("trotter depth must be >= 1".into()));
        }
        if !(self.tangent_fd_step > 0.0) {
            return Err(Error::InvalidConfig(format!("tangent_fd_step must be > 0, got {}", self.tangent_fd_step)));
        }
        if let DeflationConfig::Overlap { beta } = self.deflation {
            if beta < 0.0 {
                return Err(Error::InvalidConfig(format!("overlap weight must be >= 0, got {beta}")));
            }
        }
        Ok(())
    }

    fn budget(list: &[usize], state: usize) -> usize {
        list.get(state).or(list.last()).copied().unwrap_or(0)
    }

    pub fn phase1_budget(&self, state: usize) -> usize {
        Self::budget(&self.phase1_iterations, state)
    }

    pub fn phase2_budget(&self, state: usize) -> usize {
        Self::budget(&self.phase2_iterations, state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Energy,
    Tangent,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Energy => "energy",
            Phase::Tangent => "tangent",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub energy: f64,
    /// L1 norm of the energy gradient.
    pub tangent_norm: f64,
    pub log_error: Option<f64>,
    pub phase: Phase,
}

#[derive(Clone, Debug)]
pub struct StateOutcome {
    pub label: String,
    pub theta: Vec<f64>,
    pub state: StateVector,
    pub energy: f64,
    pub exact: Option<f64>,
    pub trace: Vec<TracePoint>,
    /// Iteration at which the tangent phase took over (TVVQE only).
    pub tangent_start: Option<usize>,
    pub terminations: Vec<Termination>,
    /// Checksum of `state` when the solve for this target finished.
    pub checksum: u64,
}

impl StateOutcome {
    pub fn log_error(&self) -> Option<f64> {
        self.exact.map(|e| log_error(self.energy, e))
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub method: Method,
    pub states: Vec<StateOutcome>,
    /// SSVQE/MCVQE energy weights.
    pub weights: Option<Vec<f64>>,
    /// MCVQE subspace matrix `<phi_i|H|phi_j>`.
    pub subspace: Option<DenseMatrix>,
}

/// Dispatches on `config.method`.
pub fn solve(h: &PauliSum, targets: &[TargetState], config: &MethodConfig) -> Result<SolveResult> {
    match config.method {
        Method::Vqd => solve_vqd(h, targets, config),
        Method::Tvvqe => solve_tvvqe(h, targets, config),
        Method::Ssvqe => solve_ssvqe(h, targets, config),
        Method::Mcvqe => solve_mcvqe(h, targets, config),
    }
}

fn trace_point(
    problem: &StateProblem,
    theta: &[f64],
    iteration: usize,
    exact: Option<f64>,
    phase: Phase,
) -> Result<TracePoint> {
    let energy = problem.trial_energy(theta)?;
    let tangent_norm = l1_norm(&problem.analytic_gradient(theta)?);
    Ok(TracePoint { iteration, energy, tangent_norm, log_error: exact.map(|e| log_error(energy, e)), phase })
}

fn deflation_for(config: &MethodConfig) -> Deflation {
    match config.deflation {
        DeflationConfig::None => Deflation::None,
        DeflationConfig::FermiDirac { params, .. } => Deflation::FermiDirac(params),
        DeflationConfig::Overlap { beta } => Deflation::Overlap { beta },
    }
}

fn lower_energy(config: &MethodConfig, target: &TargetState, solved: &StateOutcome) -> f64 {
    match config.deflation {
        DeflationConfig::FermiDirac { source: LowerEnergySource::Exact, .. } => target.exact.unwrap_or(solved.energy),
        _ => solved.energy,
    }
}

/// Sequential deflation with an optional tangent phase per state.
fn solve_sequential(h: &PauliSum, targets: &[TargetState], config: &MethodConfig, tangent: bool) -> Result<SolveResult> {
    config.validate()?;
    let deflation = deflation_for(config);
    let mut outcomes: Vec<StateOutcome> = Vec::with_capacity(targets.len());
    for (index, target) in targets.iter().enumerate() {
        let ansatz = build_uccsd(&target.occupation, config.trotter_depth)?;
        let initial = StateVector::basis_state(&target.occupation)?;
        let lower = outcomes
            .iter()
            .zip(targets)
            .map(|(o, t)| LowerState { state: o.state.clone(), energy: lower_energy(config, t, o) })
            .collect();
        let problem = StateProblem::new(h.clone(), ansatz, initial, lower, deflation, config.constraint)?;

        let theta0 = vec![0.0; problem.parameter_count()];
        let phase1 = OptimizerConfig { max_iterations: config.phase1_budget(index), ..config.optimizer };
        let run = minimize(|t| problem.objective_f(t), |t| problem.objective_f_gradient(t), &theta0, &phase1)?;
        let mut trace = run
            .trace
            .iter()
            .enumerate()
            .map(|(k, p)| trace_point(&problem, &p.theta, k, target.exact, Phase::Energy))
            .collect::<Result<Vec<_>>>()?;
        let mut theta = run.theta;
        let mut terminations = vec![run.termination];
        let mut tangent_start = None;

        if tangent {
            let start = run.iterations;
            tangent_start = Some(start);
            let phase2 = OptimizerConfig { max_iterations: config.phase2_budget(index), ..config.optimizer };
            let step = config.tangent_fd_step;
            let run = minimize(
                |t| problem.objective_ftv(t),
                |t| problem.fdm_gradient(crate::objectives::Functional::Tangent, t, step),
                &theta,
                &phase2,
            )?;
            for (k, p) in run.trace.iter().enumerate().skip(1) {
                trace.push(trace_point(&problem, &p.theta, start + k, target.exact, Phase::Tangent)?);
            }
            theta = run.theta;
            terminations.push(run.termination);
        }

        let state = problem.prepare(&theta)?;
        let energy = state.expectation(h)?;
        outcomes.push(StateOutcome {
            label: target.label.clone(),
            checksum: state.checksum(),
            theta,
            state,
            energy,
            exact: target.exact,
            trace,
            tangent_start,
            terminations,
        });
    }
    Ok(SolveResult { method: config.method, states: outcomes, weights: None, subspace: None })
}

/// VQE for the first target, then deflation against every converged state.
pub fn solve_vqd(h: &PauliSum, targets: &[TargetState], config: &MethodConfig) -> Result<SolveResult> {
    solve_sequential(h, targets, config, false)
}

/// VQD energy phase followed by minimization of the tangent-vector objective.
pub fn solve_tvvqe(h: &PauliSum, targets: &[TargetState], config: &MethodConfig) -> Result<SolveResult> {
    solve_sequential(h, targets, config, true)
}

/// `lambda_i = 2 (N - i) / (N^2 - N)` for `i = 0..N`; a single state gets 1.
pub fn ssvqe_weights(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => {
            let denom = (n * n - n) as f64;
            (0..n).map(|i| 2.0 * (n - i) as f64 / denom).collect()
        }
    }
}

struct SharedProblem {
    problems: Vec<StateProblem>,
    weights: Vec<f64>,
}

impl SharedProblem {
    fn new(h: &PauliSum, targets: &[TargetState], config: &MethodConfig) -> Result<SharedProblem> {
        let references: Vec<&str> = targets.iter().map(|t| t.occupation.as_str()).collect();
        let ansatz: UccAnsatz = build_shared_uccsd(&references, config.trotter_depth)?;
        let initials = targets
            .iter()
            .map(|t| StateVector::basis_state(&t.occupation))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..initials.len() {
            for j in i + 1..initials.len() {
                if StateVector::overlap_squared(&initials[i], &initials[j])? > 1e-12 {
                    return Err(Error::NonOrthogonalStates { first: i, second: j });
                }
            }
        }
        let problems = initials
            .into_iter()
            .map(|init| {
                StateProblem::new(h.clone(), ansatz.clone(), init, Vec::new(), Deflation::None, config.constraint)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SharedProblem { problems, weights: ssvqe_weights(targets.len()) })
    }

    /// `sum_i lambda_i F_i + sum_{i<j} (lambda_i + lambda_j) |<phi_i|phi_j>|^2`.
    fn objective(&self, theta: &[f64]) -> Result<f64> {
        let states = self.problems.iter().map(|p| p.prepare(theta)).collect::<Result<Vec<_>>>()?;
        let mut value = 0.0;
        for (i, (p, w)) in self.problems.iter().zip(&self.weights).enumerate() {
            value += w * (states[i].expectation(p.hamiltonian())? + p.constraint_value(&states[i])?);
        }
        for i in 0..states.len() {
            for j in i + 1..states.len() {
                value += (self.weights[i] + self.weights[j]) * StateVector::overlap_squared(&states[i], &states[j])?;
            }
        }
        Ok(value)
    }

    fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let mut grad = vec![0.0; theta.len()];
        for (p, w) in self.problems.iter().zip(&self.weights) {
            for (g, d) in grad.iter_mut().zip(p.objective_f_gradient(theta)?) {
                *g += w * d;
            }
        }
        if self.problems.len() > 1 {
            let states = self.problems.iter().map(|p| p.prepare(theta)).collect::<Result<Vec<_>>>()?;
            let derivs = self.problems.iter().map(|p| p.state_derivatives(theta)).collect::<Result<Vec<_>>>()?;
            for i in 0..states.len() {
                for j in i + 1..states.len() {
                    let weight = self.weights[i] + self.weights[j];
                    let amp = states[i].inner(&states[j])?;
                    for (m, g) in grad.iter_mut().enumerate() {
                        let d_amp = derivs[i][m].inner(&states[j])? + states[i].inner(&derivs[j][m])?;
                        *g += weight * 2.0 * (amp.conj() * d_amp).re;
                    }
                }
            }
        }
        Ok(grad)
    }
}

/// One shared parameter vector minimizing the weighted energy sum.
pub fn solve_ssvqe(h: &PauliSum, targets: &[TargetState], config: &MethodConfig) -> Result<SolveResult> {
    config.validate()?;
    if targets.is_empty() {
        return Ok(SolveResult { method: config.method, states: Vec::new(), weights: Some(Vec::new()), subspace: None });
    }
    let shared = SharedProblem::new(h, targets, config)?;
    let theta0 = vec![0.0; shared.problems[0].parameter_count()];
    let opt = OptimizerConfig { max_iterations: config.phase1_budget(0), ..config.optimizer };
    let run = minimize(|t| shared.objective(t), |t| shared.gradient(t), &theta0, &opt)?;

    let mut states = Vec::with_capacity(targets.len());
    for (problem, target) in shared.problems.iter().zip(targets) {
        let trace = run
            .trace
            .iter()
            .enumerate()
            .map(|(k, p)| trace_point(problem, &p.theta, k, target.exact, Phase::Energy))
            .collect::<Result<Vec<_>>>()?;
        let state = problem.prepare(&run.theta)?;
        states.push(StateOutcome {
            label: target.label.clone(),
            theta: run.theta.clone(),
            energy: state.expectation(h)?,
            checksum: state.checksum(),
            state,
            exact: target.exact,
            trace,
            tangent_start: None,
            terminations: vec![run.termination],
        });
    }
    Ok(SolveResult { method: config.method, states, weights: Some(shared.weights), subspace: None })
}

/// SSVQE, then diagonalization of `H` projected onto the optimized states.
pub fn solve_mcvqe(h: &PauliSum, targets: &[TargetState], config: &MethodConfig) -> Result<SolveResult> {
    let mut result = solve_ssvqe(h, targets, config)?;
    result.method = config.method;
    if result.states.is_empty() {
        return Ok(result);
    }
    let k = result.states.len();
    let h_states = result
        .states
        .iter()
        .map(|s| crate::objectives::apply_sum(h, &s.state))
        .collect::<Result<Vec<_>>>()?;
    let mut m = DenseMatrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = result.states[i].state.inner(&h_states[j])?;
        }
    }
    let (values, vectors) = jacobi_eigh(&m)?;
    let dim = result.states[0].state.amplitudes().len();
    let rotated = (0..k)
        .map(|c| {
            let mut amps = vec![Complex64::default(); dim];
            for i in 0..k {
                let u = vectors[(i, c)];
                for (a, x) in amps.iter_mut().zip(result.states[i].state.amplitudes()) {
                    *a += u * x;
                }
            }
            StateVector::from_amplitudes(amps)
        })
        .collect::<Result<Vec<_>>>()?;
    for ((outcome, value), state) in result.states.iter_mut().zip(values).zip(rotated) {
        outcome.energy = value;
        outcome.checksum = state.checksum();
        outcome.state = state;
    }
    result.subspace = Some(m);
    Ok(result)
}
