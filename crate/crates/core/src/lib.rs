//! Variational quantum eigensolver laboratory on an exact statevector simulator.
//!
//! The crate provides Pauli algebra with a Jordan–Wigner mapping, a dense
//! statevector simulator, the benchmark Hamiltonians, a trotterized UCC
//! ansatz with analytic derivative insertions, the penalized and
//! tangent-vector objectives, a BFGS minimizer, an exact-diagonalization
//! reference, and four multi-state solvers (VQD, tangent-vector VQE, SSVQE,
//! MCVQE).

pub mod ansatz;
pub mod error;
pub mod fermion;
pub mod hamiltonians;
pub mod oracle;
pub mod objectives;
pub mod optimizer;
pub mod pauli;
pub mod solvers;
pub mod statevector;

pub use error::{Error, Result};
pub use num_complex::Complex64;
