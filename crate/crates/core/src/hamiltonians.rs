//! Benchmark Hamiltonians: file-backed molecular systems and the open-chain
//! spinful Hubbard model.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{jordan_wigner, number_operator, FermionOperator, Ladder};
use crate::pauli::{PauliSum, PauliTerm};
use crate::statevector::HERMITICITY_RESIDUE;

/// Open 1D Hubbard chain; energies in eV.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HubbardSpec {
    pub sites: usize,
    pub hopping_t: f64,
    pub coulomb_u: f64,
}

impl HubbardSpec {
    /// Three sites with `t = 0.13 eV` and `U = 8t`.
    pub fn benchmark() -> HubbardSpec {
        HubbardSpec { sites: 3, hopping_t: 0.13, coulomb_u: 8.0 * 0.13 }
    }

    pub fn qubit_count(&self) -> usize {
        2 * self.sites
    }

    pub fn bonds(&self) -> usize {
        self.sites.saturating_sub(1)
    }
}

/// Spin-orbital mode of `site` with spin up (`down = false`) or down.
pub fn spin_mode(site: usize, down: bool) -> usize {
    2 * site + usize::from(down)
}

/// `H = -t sum_<ij>,s (a+_is a_js + h.c.) + U sum_i n_iu n_id`, Jordan–Wigner mapped.
pub fn build_hubbard(spec: &HubbardSpec) -> Result<PauliSum> {
    if spec.sites < 2 {
        return Err(Error::InvalidConfig(format!(
            "hubbard chain needs at least 2 sites, got {}",
            spec.sites
        )));
    }
    let modes = spec.qubit_count();
    let mut op = FermionOperator::new();
    for site in 0..spec.bonds() {
        for down in [false, true] {
            let p = spin_mode(site, down);
            let q = spin_mode(site + 1, down);
            let hop = FermionOperator::term(
                Complex64::new(-spec.hopping_t, 0.0),
                vec![Ladder::create(p), Ladder::annihilate(q)],
            );
            let back = hop.adjoint();
            op = op.add(hop).add(back);
        }
    }
    for site in 0..spec.sites {
        let up = spin_mode(site, false);
        let down = spin_mode(site, true);
        op.push(
            Complex64::new(spec.coulomb_u, 0.0),
            vec![
                Ladder::create(up),
                Ladder::annihilate(up),
                Ladder::create(down),
                Ladder::annihilate(down),
            ],
        );
    }
    jordan_wigner(&op, modes)
}

/// Total particle number `N = sum_p n_p`.
pub fn total_number(modes: usize) -> PauliSum {
    let mut op = FermionOperator::new();
    for p in 0..modes {
        op = op.add(number_operator(p));
    }
    jordan_wigner(&op, modes).expect("modes in range")
}

/// Spin projection `S_z = (1/2) sum_i (n_iu - n_id)` for even-indexed up modes.
pub fn total_sz(modes: usize) -> PauliSum {
    let mut op = FermionOperator::new();
    for p in 0..modes {
        let sign = if p % 2 == 0 { 0.5 } else { -0.5 };
        op = op.add(number_operator(p).scaled(Complex64::new(sign, 0.0)));
    }
    jordan_wigner(&op, modes).expect("modes in range")
}

/// A precomputed molecular qubit Hamiltonian (energies in the file's units).
#[derive(Clone, Debug, PartialEq)]
pub struct MolecularSystem {
    pub label: String,
    pub bond_length: f64,
    pub electron_count: usize,
    pub units: String,
    pub hamiltonian: PauliSum,
}

impl MolecularSystem {
    pub fn qubit_count(&self) -> usize {
        self.hamiltonian.qubit_count()
    }

    /// Parses the Pauli text format with a `# label=.. r=.. electrons=.. units=..` header.
    pub fn parse(text: &str) -> Result<MolecularSystem> {
        let mut label = None;
        let mut bond_length = None;
        let mut electrons = None;
        let mut units = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let Some(comment) = line.strip_prefix('#') else { continue };
            for field in comment.split_whitespace() {
                let Some((key, value)) = field.split_once('=') else { continue };
                let bad = |what: &str| Error::Parse {
                    line: idx + 1,
                    message: format!("bad {what} value {value:?}"),
                };
                match key {
                    "label" => label = Some(value.to_string()),
                    "r" => bond_length = Some(value.parse::<f64>().map_err(|_| bad("r"))?),
                    "electrons" => {
                        electrons = Some(value.parse::<usize>().map_err(|_| bad("electrons"))?)
                    }
                    "units" => units = Some(value.to_string()),
                    _ => {}
                }
            }
        }
        let hamiltonian = PauliSum::parse_text(text)?;
        let missing = |key: &str| Error::Parse { line: 1, message: format!("header is missing `{key}=`") };
        let system = MolecularSystem {
            label: label.ok_or_else(|| missing("label"))?,
            bond_length: bond_length.ok_or_else(|| missing("r"))?,
            electron_count: electrons.ok_or_else(|| missing("electrons"))?,
            units: units.unwrap_or_else(|| "hartree".to_string()),
            hamiltonian,
        };
        if system.electron_count > system.qubit_count() {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "{} electrons do not fit in {} spin orbitals",
                    system.electron_count,
                    system.qubit_count()
                ),
            });
        }
        let residue = system.hamiltonian.hermiticity_residue();
        if residue > HERMITICITY_RESIDUE {
            return Err(Error::NonHermitian { residue });
        }
        Ok(system)
    }

    pub fn to_text(&self) -> String {
        format!(
            "# label={} r={:?} electrons={} units={}\n{}",
            self.label, self.bond_length, self.electron_count, self.units, self.hamiltonian
        )
    }
}

pub fn load_molecular(path: impl AsRef<Path>) -> Result<MolecularSystem> {
    let text = std::fs::read_to_string(path.as_ref())?;
    MolecularSystem::parse(&text)
}

/// A constant `c * I` on `qubits` qubits.
pub fn constant(qubits: usize, c: f64) -> PauliSum {
    PauliSum::from_terms(qubits, vec![PauliTerm::identity(qubits, Complex64::new(c, 0.0))])
        .expect("identity has matching length")
}
