use proptest::prelude::*;
use tangent_vqe::ansatz::build_uccsd;
use tangent_vqe::fermion::{jordan_wigner, FermionOperator, Ladder};
use tangent_vqe::oracle::{dense_matrix, diagonalize, DenseMatrix};
use tangent_vqe::pauli::{Pauli, PauliSum, PauliTerm};
use tangent_vqe::statevector::StateVector;
use tangent_vqe::Complex64;

const AXES: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

fn axes(n: usize) -> impl Strategy<Value = Vec<Pauli>> {
    prop::collection::vec(0..4usize, n).prop_map(|v| v.into_iter().map(|k| AXES[k]).collect())
}

fn term(n: usize) -> impl Strategy<Value = PauliTerm> {
    (axes(n), -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, re, im)| PauliTerm::new(Complex64::new(re, im), a))
}

fn real_term(n: usize) -> impl Strategy<Value = PauliTerm> {
    (axes(n), -2.0..2.0f64).prop_map(|(a, re)| PauliTerm::new(Complex64::new(re, 0.0), a))
}

/// Hermitian sum: real coefficients on Pauli words.
fn hermitian(n: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec(real_term(n), 1..8).prop_map(move |t| PauliSum::from_terms(n, t).unwrap())
}

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << n).prop_filter_map("nonzero", |v| {
        let s = StateVector::from_amplitudes(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).ok()?;
        (s.norm_squared() > 1e-3).then(|| s.normalized())
    })
}

fn single(t: &PauliTerm) -> PauliSum {
    PauliSum::from_terms(t.qubit_count(), vec![t.clone()]).unwrap()
}

fn max_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.sub(b).max_abs()
}

fn anticommutator(p: Ladder, q: Ladder, modes: usize) -> PauliSum {
    let one = Complex64::new(1.0, 0.0);
    let op = FermionOperator::term(one, vec![p, q]).add(FermionOperator::term(one, vec![q, p]));
    jordan_wigner(&op, modes).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_dense(a in term(3), b in term(3)) {
        let ab = a.multiply(&b).unwrap();
        let lhs = dense_matrix(&single(&ab)).unwrap();
        let rhs = dense_matrix(&single(&a)).unwrap().matmul(&dense_matrix(&single(&b)).unwrap());
        prop_assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn commutation_matches_dense(a in real_term(3), b in real_term(3)) {
        let ma = dense_matrix(&single(&a)).unwrap();
        let mb = dense_matrix(&single(&b)).unwrap();
        let comm = ma.matmul(&mb).sub(&mb.matmul(&ma));
        prop_assert_eq!(a.commutes_with(&b), comm.max_abs() < 1e-12);
    }

    #[test]
    fn simplify_is_idempotent(terms in prop::collection::vec(term(3), 0..10)) {
        let sum = PauliSum::from_terms(3, terms).unwrap();
        let once = sum.simplified();
        prop_assert_eq!(once.simplified(), once.clone());
        prop_assert!(max_diff(&dense_matrix(&sum).unwrap(), &dense_matrix(&once).unwrap()) < 1e-11);
    }

    #[test]
    fn canonical_anticommutation(p in 0..4usize, q in 0..4usize) {
        let zero = anticommutator(Ladder::annihilate(p), Ladder::annihilate(q), 4);
        prop_assert!(zero.is_empty());
        let delta = anticommutator(Ladder::annihilate(p), Ladder::create(q), 4);
        if p == q {
            prop_assert_eq!(delta.len(), 1);
            prop_assert!(delta.terms()[0].is_identity());
            prop_assert!((delta.terms()[0].coeff - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        } else {
            prop_assert!(delta.is_empty());
        }
    }

    #[test]
    fn exponential_inverse(t in real_term(3), angle in -3.0..3.0f64, s in state(3)) {
        let back = s.apply_pauli_exponential(&t, angle).unwrap().apply_pauli_exponential(&t, -angle).unwrap();
        let diff: f64 = back.amplitudes().iter().zip(s.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-12);
    }

    #[test]
    fn exponential_preserves_norm(t in real_term(3), angle in -3.0..3.0f64, s in state(3)) {
        let out = s.apply_pauli_exponential(&t, angle).unwrap();
        prop_assert!((out.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_within_spectrum(h in hermitian(3), s in state(3)) {
        let spectrum = diagonalize(&h).unwrap();
        let e = s.expectation(&h).unwrap();
        let lo = spectrum.eigenvalues[0];
        let hi = *spectrum.eigenvalues.last().unwrap();
        prop_assert!(e >= lo - 1e-10 && e <= hi + 1e-10);
    }

    #[test]
    fn overlap_is_symmetric(a in state(3), b in state(3)) {
        let ab = StateVector::overlap_squared(&a, &b).unwrap();
        let ba = StateVector::overlap_squared(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-14);
        prop_assert!((-1e-14..=1.0 + 1e-12).contains(&ab));
    }

    #[test]
    fn self_cross_term_is_real(h in hermitian(3), s in state(3)) {
        prop_assert!(StateVector::imag_cross_expectation(&s, &h, &s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn ansatz_preserves_norm_and_sector(theta in prop::collection::vec(-3.0..3.0f64, 3)) {
        let ansatz = build_uccsd("1100", 2).unwrap();
        let init = StateVector::basis_state("1100").unwrap();
        let psi = ansatz.prepare_state(&theta, &init).unwrap();
        prop_assert!((psi.norm_squared() - 1.0).abs() < 1e-12);
        for (index, amp) in psi.amplitudes().iter().enumerate() {
            if amp.norm() > 1e-12 {
                prop_assert_eq!(index.count_ones(), 2);
            }
        }
    }

    #[test]
    fn deeper_trotterization_converges(theta in prop::collection::vec(-0.5..0.5f64, 3)) {
        // depth 1 and depth 64 differ by O(theta^2); depth 32 vs 64 by far less
        let init = StateVector::basis_state("1100").unwrap();
        let at = |depth| build_uccsd("1100", depth).unwrap().prepare_state(&theta, &init).unwrap();
        let fine = at(64);
        let dist = |a: &StateVector| 1.0 - StateVector::overlap_squared(a, &fine).unwrap();
        prop_assert!(dist(&at(32)) <= dist(&at(1)) + 1e-12);
        prop_assert!(dist(&at(32)) < 1e-4);
    }
}
