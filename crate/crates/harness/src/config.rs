//! TOML experiment descriptions.
//!
//! Every key has a default, so a file naming only `experiment` and `system`
//! is complete. Physical constants (deflation, Hubbard couplings, budgets)
//! are all exposed.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use tangent_vqe::objectives::{ConstraintParams, DeflationParams, EnergyScale};
use tangent_vqe::optimizer::{LineSearch, OptimizerConfig};
use tangent_vqe::solvers::{DeflationConfig, LowerEnergySource, Method, MethodConfig};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Convergence,
    TangentScatter,
    BondScan,
}

impl Experiment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::Convergence => "convergence",
            Experiment::TangentScatter => "tangent_scatter",
            Experiment::BondScan => "bond_scan",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    H2,
    Lih,
    Hubbard,
}

impl SystemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SystemKind::H2 => "h2",
            SystemKind::Lih => "lih",
            SystemKind::Hubbard => "hubbard",
        }
    }

    pub fn parse(s: &str) -> Result<SystemKind> {
        match s.to_ascii_lowercase().as_str() {
            "h2" => Ok(SystemKind::H2),
            "lih" => Ok(SystemKind::Lih),
            "hubbard" => Ok(SystemKind::Hubbard),
            _ => Err(HarnessError::Invalid(format!("unknown system {s:?} (h2, lih, hubbard)"))),
        }
    }

    pub fn default_bond_length(&self) -> Option<f64> {
        match self {
            SystemKind::H2 => Some(0.74),
            SystemKind::Lih => Some(1.6),
            SystemKind::Hubbard => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeflationKind {
    FermiDirac,
    Overlap,
    None,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    pub vqd: Vec<usize>,
    /// Energy phase of TVVQE.
    pub tvvqe: Vec<usize>,
    /// Tangent phase of TVVQE.
    pub tangent: Vec<usize>,
    pub ssvqe: Vec<usize>,
    pub mcvqe: Vec<usize>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { vqd: vec![22], tvvqe: vec![22], tangent: vec![3, 2], ssvqe: vec![50], mcvqe: vec![50] }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeflationSection {
    /// Defaults to `fermi_dirac` for molecules and `overlap` for Hubbard.
    pub kind: Option<DeflationKind>,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub r_d: f64,
    /// `absolute` or `signed`.
    pub energy_scale: String,
    /// `exact` or `solver`.
    pub lower_energy: String,
    pub beta: f64,
}

impl Default for DeflationSection {
    fn default() -> Self {
        DeflationSection {
            kind: None,
            a: DeflationParams::DEFAULT_A,
            b: DeflationParams::DEFAULT_B,
            alpha: DeflationParams::DEFAULT_ALPHA,
            r_d: DeflationParams::DEFAULT_R_D,
            energy_scale: "absolute".into(),
            lower_energy: "exact".into(),
            beta: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstraintSection {
    pub electrons: Option<usize>,
    pub sz: f64,
    pub number_weight: f64,
    pub sz_weight: f64,
}

impl Default for ConstraintSection {
    fn default() -> Self {
        ConstraintSection {
            electrons: None,
            sz: 0.0,
            number_weight: ConstraintParams::DEFAULT_WEIGHT,
            sz_weight: ConstraintParams::DEFAULT_WEIGHT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HubbardSection {
    pub sites: usize,
    pub t: f64,
    pub u: f64,
}

impl Default for HubbardSection {
    fn default() -> Self {
        HubbardSection { sites: 3, t: 0.13, u: 8.0 * 0.13 }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub label: String,
    pub occupation: String,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection { start: 0.1, stop: 2.5, step: 0.1 }
    }
}

impl ScanSection {
    /// Grid points rounded to 0.01 Angstrom, the file naming resolution.
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || self.stop < self.start || self.start <= 0.0 {
            return Err(HarnessError::Invalid(format!("bad scan range {self:?}")));
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|k| ((self.start + k as f64 * self.step) * 100.0).round() / 100.0).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSection {
    pub gradient_tolerance: f64,
    pub step_tolerance: f64,
    pub armijo_c1: f64,
    pub backtrack: f64,
    pub max_backtracks: usize,
    pub tangent_fd_step: f64,
    pub trotter_depth: usize,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        let o = OptimizerConfig::default();
        OptimizerSection {
            gradient_tolerance: o.gradient_tolerance,
            step_tolerance: o.step_tolerance,
            armijo_c1: o.line_search.c1,
            backtrack: o.line_search.backtrack,
            max_backtracks: o.line_search.max_backtracks,
            tangent_fd_step: MethodConfig::DEFAULT_TANGENT_FD_STEP,
            trotter_depth: tangent_vqe::ansatz::DEFAULT_TROTTER_DEPTH,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GradientSection {
    pub draws: usize,
    pub fd_step: f64,
    pub tolerance: f64,
}

impl Default for GradientSection {
    fn default() -> Self {
        GradientSection { draws: 20, fd_step: 1e-5, tolerance: 1e-7 }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportSection {
    /// MCVQE solves only this many of the lowest targets; the rest are absent.
    pub mcvqe_states: usize,
    /// Final log errors above this are flagged as local-minimum suspects.
    pub local_minimum_threshold: f64,
}

impl Default for ReportSection {
    fn default() -> Self {
        ReportSection { mcvqe_states: 3, local_minimum_threshold: -2.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub system: SystemKind,
    #[serde(default = "default_methods")]
    pub methods: Vec<String>,
    #[serde(default)]
    pub bond_length: Option<f64>,
    #[serde(default = "default_data_dir")]
    pub data_dir: PathBuf,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub deflation: DeflationSection,
    #[serde(default)]
    pub constraint: ConstraintSection,
    #[serde(default)]
    pub hubbard: HubbardSection,
    #[serde(default)]
    pub states: Vec<StateSection>,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
    #[serde(default)]
    pub gradients: GradientSection,
    #[serde(default)]
    pub report: ReportSection,
}

fn default_methods() -> Vec<String> {
    vec!["tvvqe".into()]
}

fn default_data_dir() -> PathBuf {
    PathBuf::from("data")
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    pub fn parse(text: &str, origin: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config { path: origin.into(), message: e.to_string() })?;
        cfg.validate().map_err(|e| HarnessError::Config { path: origin.into(), message: e.to_string() })?;
        Ok(cfg)
    }

    /// Loads a config file; a relative `data_dir` stays relative to the
    /// working directory.
    pub fn load(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Minimal config for CLI verbs that run without a file.
    pub fn for_system(experiment: Experiment, system: SystemKind) -> ExperimentConfig {
        let text = format!("experiment = \"{}\"\nsystem = \"{}\"\n", experiment.as_str(), system.as_str());
        Self::parse(&text, "<built-in>").expect("built-in config is valid")
    }

    pub fn validate(&self) -> Result<()> {
        self.method_list()?;
        self.energy_scale()?;
        self.lower_energy_source()?;
        self.scan.points()?;
        if self.optimizer.trotter_depth == 0 {
            return Err(HarnessError::Invalid("optimizer.trotter_depth must be >= 1".into()));
        }
        for (name, list) in [
            ("vqd", &self.budgets.vqd),
            ("tvvqe", &self.budgets.tvvqe),
            ("tangent", &self.budgets.tangent),
            ("ssvqe", &self.budgets.ssvqe),
            ("mcvqe", &self.budgets.mcvqe),
        ] {
            if list.is_empty() {
                return Err(HarnessError::Invalid(format!("budgets.{name} must list at least one value")));
            }
        }
        if !(self.gradients.fd_step > 0.0) {
            return Err(HarnessError::Invalid("gradients.fd_step must be > 0".into()));
        }
        Ok(())
    }

    pub fn method_list(&self) -> Result<Vec<Method>> {
        if self.methods.is_empty() {
            return Err(HarnessError::Invalid("methods must not be empty".into()));
        }
        self.methods.iter().map(|m| m.parse::<Method>().map_err(HarnessError::from)).collect()
    }

    fn energy_scale(&self) -> Result<EnergyScale> {
        match self.deflation.energy_scale.as_str() {
            "absolute" => Ok(EnergyScale::Absolute),
            "signed" => Ok(EnergyScale::Signed),
            other => Err(HarnessError::Invalid(format!("deflation.energy_scale {other:?} (absolute, signed)"))),
        }
    }

    fn lower_energy_source(&self) -> Result<LowerEnergySource> {
        match self.deflation.lower_energy.as_str() {
            "exact" => Ok(LowerEnergySource::Exact),
            "solver" => Ok(LowerEnergySource::Solver),
            other => Err(HarnessError::Invalid(format!("deflation.lower_energy {other:?} (exact, solver)"))),
        }
    }

    pub fn deflation_kind(&self) -> DeflationKind {
        self.deflation.kind.unwrap_or(match self.system {
            SystemKind::Hubbard => DeflationKind::Overlap,
            _ => DeflationKind::FermiDirac,
        })
    }

    /// Solver settings for `method` at bond length `r` (ignored by Hubbard).
    pub fn method_config(&self, method: Method, r: Option<f64>, electrons: usize) -> Result<MethodConfig> {
        let b = &self.budgets;
        let (phase1, phase2) = match method {
            Method::Vqd => (b.vqd.clone(), vec![]),
            Method::Tvvqe => (b.tvvqe.clone(), b.tangent.clone()),
            Method::Ssvqe => (b.ssvqe.clone(), vec![]),
            Method::Mcvqe => (b.mcvqe.clone(), vec![]),
        };
        let mut c = MethodConfig::new(method, phase1, phase2);
        let o = &self.optimizer;
        c.trotter_depth = o.trotter_depth;
        c.tangent_fd_step = o.tangent_fd_step;
        c.optimizer = OptimizerConfig {
            max_iterations: 0,
            gradient_tolerance: o.gradient_tolerance,
            step_tolerance: o.step_tolerance,
            line_search: LineSearch { c1: o.armijo_c1, backtrack: o.backtrack, max_backtracks: o.max_backtracks },
        };
        let d = &self.deflation;
        c.deflation = match self.deflation_kind() {
            DeflationKind::None => DeflationConfig::None,
            DeflationKind::Overlap => DeflationConfig::Overlap { beta: d.beta },
            DeflationKind::FermiDirac => {
                let r = r.ok_or_else(|| {
                    HarnessError::Invalid("fermi_dirac deflation needs a bond length; use kind = \"overlap\"".into())
                })?;
                DeflationConfig::FermiDirac {
                    params: DeflationParams {
                        a: d.a,
                        b: d.b,
                        alpha: d.alpha,
                        r,
                        r_d: d.r_d,
                        energy_scale: self.energy_scale()?,
                    },
                    source: self.lower_energy_source()?,
                }
            }
        };
        let k = &self.constraint;
        c.constraint = ConstraintParams {
            electron_target: k.electrons.unwrap_or(electrons) as f64,
            sz_target: k.sz,
            number_weight: k.number_weight,
            sz_weight: k.sz_weight,
        };
        c.validate()?;
        Ok(c)
    }
}
