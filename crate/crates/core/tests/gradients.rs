use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangent_vqe::ansatz::build_uccsd;
use tangent_vqe::hamiltonians::{build_hubbard, load_molecular, HubbardSpec};
use tangent_vqe::objectives::{
    ConstraintParams, Deflation, DeflationParams, Functional, LowerState, StateProblem,
};
use tangent_vqe::pauli::PauliSum;
use tangent_vqe::statevector::StateVector;

fn data(rel: &str) -> String {
    format!("{}/../../data/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn h2() -> PauliSum {
    load_molecular(data("h2/h2_r0.74.txt")).unwrap().hamiltonian
}

fn random_theta(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn check_energy_gradient(problem: &StateProblem, draws: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..draws {
        let theta = random_theta(&mut rng, problem.parameter_count());
        let analytic = problem.analytic_gradient(&theta).unwrap();
        let fdm = problem.fdm_gradient(Functional::Energy, &theta, 1e-5).unwrap();
        let dev = max_deviation(&analytic, &fdm);
        assert!(dev < 1e-7, "deviation {dev:e} at {theta:?}");
    }
}

#[test]
fn h2_energy_gradient_matches_fdm() {
    let problem = StateProblem::plain(h2(), build_uccsd("1100", 2).unwrap(), StateVector::basis_state("1100").unwrap())
        .unwrap();
    assert_eq!(problem.parameter_count(), 3);
    check_energy_gradient(&problem, 20, 7);
}

#[test]
fn hubbard_energy_gradient_matches_fdm() {
    let h = build_hubbard(&HubbardSpec::benchmark()).unwrap();
    let problem =
        StateProblem::plain(h, build_uccsd("100100", 2).unwrap(), StateVector::basis_state("100100").unwrap())
            .unwrap();
    check_energy_gradient(&problem, 20, 11);
}

#[test]
fn penalized_gradient_matches_fdm() {
    let h = h2();
    let lower_ansatz = build_uccsd("1100", 2).unwrap();
    let lower = lower_ansatz.prepare_state(&[0.1, -0.2, 0.3], &StateVector::basis_state("1100").unwrap()).unwrap();
    let lower = vec![LowerState { state: lower, energy: -1.137 }];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for deflation in [
        Deflation::FermiDirac(DeflationParams::at_bond_length(0.74)),
        Deflation::FermiDirac(DeflationParams::at_bond_length(2.0)),
        Deflation::Overlap { beta: 2.5 },
    ] {
        let problem = StateProblem::new(
            h.clone(),
            build_uccsd("0110", 2).unwrap(),
            StateVector::basis_state("0110").unwrap(),
            lower.clone(),
            deflation,
            ConstraintParams::sector(2, 0.0),
        )
        .unwrap();
        for _ in 0..10 {
            let theta = random_theta(&mut rng, problem.parameter_count());
            let analytic = problem.objective_f_gradient(&theta).unwrap();
            let fdm = problem.fdm_gradient(Functional::Penalized, &theta, 1e-5).unwrap();
            assert!(max_deviation(&analytic, &fdm) < 1e-7, "{deflation:?}");
        }
    }
}

#[test]
fn coarse_step_is_visibly_worse() {
    let problem = StateProblem::plain(h2(), build_uccsd("1100", 2).unwrap(), StateVector::basis_state("1100").unwrap())
        .unwrap();
    let theta = [0.4, -0.7, 1.1];
    let analytic = problem.analytic_gradient(&theta).unwrap();
    let fine = max_deviation(&analytic, &problem.fdm_gradient(Functional::Energy, &theta, 1e-5).unwrap());
    let coarse = max_deviation(&analytic, &problem.fdm_gradient(Functional::Energy, &theta, 1e-2).unwrap());
    assert!(coarse > 100.0 * fine, "coarse {coarse:e} fine {fine:e}");
}
