//! Hamiltonians and target states for the three benchmark systems.

use std::path::{Path, PathBuf};

use tangent_vqe::hamiltonians::{build_hubbard, load_molecular, HubbardSpec};
use tangent_vqe::oracle::sector_levels;
use tangent_vqe::pauli::PauliSum;
use tangent_vqe::solvers::TargetState;

use crate::config::{ExperimentConfig, SystemKind};
use crate::error::{HarnessError, Result};

/// Occupations of ground, triplet, singlet and doubly excited states of a
/// two-electron, two-orbital active space.
pub const MOLECULAR_STATES: [(&str, &str); 4] =
    [("ground", "1100"), ("triplet", "1001"), ("singlet", "0110"), ("doubly", "0011")];

/// Hubbard 3x1 targets, one up and one down electron.
pub const HUBBARD_STATES: [(&str, &str); 3] = [("E0", "100100"), ("E1", "011000"), ("E2", "110000")];

#[derive(Clone, Debug)]
pub struct SystemInstance {
    pub kind: SystemKind,
    pub bond_length: Option<f64>,
    pub hamiltonian: PauliSum,
    pub electrons: usize,
    pub sz: f64,
    pub targets: Vec<TargetState>,
}

pub fn molecular_path(data_dir: &Path, kind: SystemKind, r: f64) -> PathBuf {
    let stem = kind.as_str();
    data_dir.join(stem).join(format!("{stem}_r{r:.2}.txt"))
}

/// Builds the system at `bond_length` (defaulting per system) and attaches
/// exact levels of the `(N, S_z)` sector to the targets in ascending order.
pub fn load_system(cfg: &ExperimentConfig, bond_length: Option<f64>) -> Result<SystemInstance> {
    let kind = cfg.system;
    let (hamiltonian, electrons, bond_length) = match kind {
        SystemKind::Hubbard => {
            let h = &cfg.hubbard;
            let spec = HubbardSpec { sites: h.sites, hopping_t: h.t, coulomb_u: h.u };
            (build_hubbard(&spec)?, 2, None)
        }
        SystemKind::H2 | SystemKind::Lih => {
            let r = bond_length.or(cfg.bond_length).or(kind.default_bond_length()).expect("molecules have a default");
            let path = molecular_path(&cfg.data_dir, kind, r);
            if !path.exists() {
                return Err(HarnessError::MissingData {
                    dir: cfg.data_dir.display().to_string(),
                    points: vec![format!("{r:.2}")],
                });
            }
            let sys = load_molecular(&path).map_err(|e| HarnessError::Config {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            (sys.hamiltonian, sys.electron_count, Some(r))
        }
    };
    let electrons = cfg.constraint.electrons.unwrap_or(electrons);
    let sz = cfg.constraint.sz;
    let defaults: Vec<(String, String)> = if cfg.states.is_empty() {
        let table: &[(&str, &str)] = match kind {
            SystemKind::Hubbard => &HUBBARD_STATES,
            _ => &MOLECULAR_STATES,
        };
        table.iter().map(|&(l, o)| (l.to_string(), o.to_string())).collect()
    } else {
        cfg.states.iter().map(|s| (s.label.clone(), s.occupation.clone())).collect()
    };
    let levels = sector_levels(&hamiltonian, electrons, sz)?;
    let targets = defaults
        .into_iter()
        .enumerate()
        .map(|(k, (label, occupation))| {
            if occupation.len() != hamiltonian.qubit_count() {
                return Err(HarnessError::Invalid(format!(
                    "state {label}: occupation {occupation:?} needs {} qubits",
                    hamiltonian.qubit_count()
                )));
            }
            Ok(TargetState::new(label, occupation, levels.get(k).copied()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SystemInstance { kind, bond_length, hamiltonian, electrons, sz, targets })
}

/// Grid points whose Hamiltonian file is absent.
pub fn missing_points(cfg: &ExperimentConfig, points: &[f64]) -> Vec<String> {
    points
        .iter()
        .filter(|&&r| !molecular_path(&cfg.data_dir, cfg.system, r).exists())
        .map(|r| format!("{r:.2}"))
        .collect()
}
