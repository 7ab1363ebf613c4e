//! The experiment families and the small CLI verbs.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tangent_vqe::ansatz::build_uccsd;
use tangent_vqe::hamiltonians::load_molecular;
use tangent_vqe::objectives::{Functional, StateProblem};
use tangent_vqe::oracle::diagonalize_by_sector;
use tangent_vqe::solvers::{solve, Method, Phase, SolveResult, StateOutcome};
use tangent_vqe::statevector::StateVector;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::records::{
    read_table, write_table, ConvergenceSummaryRow, GradientRow, ScanRow, ScanSummaryRow, ScatterSummaryRow,
    TraceRow,
};
use crate::stats::{mean_present, spearman};
use crate::svg::{Plot, Series, Style};
use crate::systems::{load_system, missing_points, SystemInstance};

/// A named output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    fn new(name: impl Into<String>, contents: String) -> Artifact {
        Artifact { name: name.into(), contents }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub artifacts: Vec<Artifact>,
    /// Plain-text summary, also written as `<experiment>_summary.txt`.
    pub text: String,
}

impl Report {
    pub fn artifact(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }
}

pub fn write_artifacts(report: &Report, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    for a in &report.artifacts {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.contents).map_err(|e| HarnessError::io(&path, e))?;
    }
    Ok(())
}

/// Runs the experiment named in the config.
pub fn run(cfg: &ExperimentConfig, jobs: usize) -> Result<Report> {
    match cfg.experiment {
        Experiment::Convergence => Ok(run_convergence(cfg)?.report),
        Experiment::TangentScatter => Ok(run_tangent_scatter(cfg)?.report),
        Experiment::BondScan => Ok(run_bond_scan(cfg, jobs)?.report),
    }
}

fn timed<T>(what: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f();
    log::info!("{what}: {:.3?}", start.elapsed());
    out
}

/// Targets a method actually solves; MCVQE stops at `report.mcvqe_states`.
fn solved_targets<'a>(cfg: &ExperimentConfig, method: Method, sys: &'a SystemInstance) -> &'a [tangent_vqe::solvers::TargetState] {
    match method {
        Method::Mcvqe => &sys.targets[..cfg.report.mcvqe_states.min(sys.targets.len())],
        _ => &sys.targets,
    }
}

fn solve_system(cfg: &ExperimentConfig, method: Method, sys: &SystemInstance) -> Result<SolveResult> {
    let config = cfg.method_config(method, sys.bond_length, sys.electrons)?;
    let label = match sys.bond_length {
        Some(r) => format!("{} {method} r={r:.2}", sys.kind.as_str()),
        None => format!("{} {method}", sys.kind.as_str()),
    };
    timed(&label, || Ok(solve(&sys.hamiltonian, solved_targets(cfg, method, sys), &config)?))
}

fn trace_rows(sys: &SystemInstance, method: Method, outcome: &StateOutcome) -> Vec<TraceRow> {
    outcome
        .trace
        .iter()
        .map(|p| TraceRow {
            system: sys.kind.as_str().into(),
            method: method.as_str().into(),
            bond_length: sys.bond_length,
            state: outcome.label.clone(),
            iteration: p.iteration,
            phase: p.phase.as_str().into(),
            energy: p.energy,
            exact: outcome.exact,
            log_error: p.log_error,
            tangent_norm: p.tangent_norm,
            tv_start: outcome.tangent_start == Some(p.iteration) && p.phase == Phase::Energy,
        })
        .collect()
}

pub struct ConvergenceOutput {
    pub trace: Vec<TraceRow>,
    pub summary: Vec<ConvergenceSummaryRow>,
    pub report: Report,
}

/// Iteration-by-iteration traces of every state plus a per-state summary.
pub fn run_convergence(cfg: &ExperimentConfig) -> Result<ConvergenceOutput> {
    let sys = load_system(cfg, None)?;
    let mut trace = Vec::new();
    let mut summary = Vec::new();
    let mut plot = Plot::new(
        format!("{} convergence", sys.kind.as_str()),
        "iteration",
        "log10 |E - E_exact|",
    );
    for method in cfg.method_list()? {
        let result = solve_system(cfg, method, &sys)?;
        for outcome in &result.states {
            let rows = trace_rows(&sys, method, outcome);
            let mut series = Series::new(
                format!("{method} {}", outcome.label),
                rows.iter().filter_map(|r| r.log_error.map(|e| (r.iteration as f64, e))).collect(),
                Style::LineAndMarkers,
            );
            series.crossed = rows.iter().enumerate().filter(|(_, r)| r.tv_start).map(|(i, _)| i).collect();
            plot.series.push(series);
            trace.extend(rows);
            let final_log_error = outcome.log_error();
            summary.push(ConvergenceSummaryRow {
                system: sys.kind.as_str().into(),
                method: method.as_str().into(),
                bond_length: sys.bond_length,
                state: outcome.label.clone(),
                final_energy: outcome.energy,
                exact: outcome.exact,
                final_log_error,
                tangent_start: outcome.tangent_start,
                iterations: outcome.trace.last().map_or(0, |p| p.iteration),
                local_minimum_suspect: final_log_error.is_some_and(|e| e > cfg.report.local_minimum_threshold),
                terminations: outcome.terminations.iter().map(|t| t.as_str()).collect::<Vec<_>>().join("+"),
            });
        }
    }
    let text = convergence_text(&summary);
    let report = Report {
        artifacts: vec![
            Artifact::new("convergence.csv", write_table("convergence", &trace)?),
            Artifact::new("convergence_summary.csv", write_table("convergence_summary", &summary)?),
            Artifact::new("convergence_summary.txt", text.clone()),
            Artifact::new("convergence.svg", plot.render()),
        ],
        text,
    };
    Ok(ConvergenceOutput { trace, summary, report })
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "None".to_string(), |x| format!("{x:.digits$}"))
}

fn convergence_text(summary: &[ConvergenceSummaryRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<8} {:<7} {:<9} {:>10} {:>9}  note", "system", "method", "state", "log_error", "tv_start");
    for r in summary {
        let _ = writeln!(
            s,
            "{:<8} {:<7} {:<9} {:>10} {:>9}  {}",
            r.system,
            r.method,
            r.state,
            opt(r.final_log_error, 4),
            r.tangent_start.map_or("-".to_string(), |k| k.to_string()),
            if r.local_minimum_suspect { "local-minimum suspect" } else { "" }
        );
    }
    s
}

pub struct ScatterOutput {
    pub points: Vec<TraceRow>,
    pub summary: Vec<ScatterSummaryRow>,
    pub report: Report,
}

/// Rank correlation of tangent norm against log error over the tangent phase
/// (including its starting point).
pub fn scatter_summary(points: &[TraceRow]) -> Vec<ScatterSummaryRow> {
    let mut order: Vec<(String, String)> = Vec::new();
    for p in points {
        let key = (p.system.clone(), p.state.clone());
        if !order.contains(&key) {
            order.push(key);
        }
    }
    order
        .into_iter()
        .map(|(system, state)| {
            let mut started = false;
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for p in points.iter().filter(|p| p.system == system && p.state == state) {
                started |= p.tv_start;
                if let (true, Some(e)) = (started, p.log_error) {
                    xs.push(p.tangent_norm);
                    ys.push(e);
                }
            }
            ScatterSummaryRow { system, state, tangent_points: xs.len(), spearman: spearman(&xs, &ys) }
        })
        .collect()
}

pub fn run_tangent_scatter(cfg: &ExperimentConfig) -> Result<ScatterOutput> {
    if cfg.method_list()? != [Method::Tvvqe] {
        return Err(HarnessError::Invalid("tangent_scatter needs methods = [\"tvvqe\"]".into()));
    }
    let sys = load_system(cfg, None)?;
    let result = solve_system(cfg, Method::Tvvqe, &sys)?;
    let mut points = Vec::new();
    let mut plot = Plot::new(
        format!("{} tangent norm vs log error", sys.kind.as_str()),
        "log10 tangent norm (L1)",
        "log10 |E - E_exact|",
    );
    for outcome in &result.states {
        let rows = trace_rows(&sys, Method::Tvvqe, outcome);
        let mut series = Series::new(
            outcome.label.clone(),
            rows.iter()
                .filter_map(|r| r.log_error.map(|e| (r.tangent_norm.max(1e-300).log10(), e)))
                .collect(),
            Style::Markers,
        );
        series.crossed = rows.iter().enumerate().filter(|(_, r)| r.tv_start).map(|(i, _)| i).collect();
        plot.series.push(series);
        points.extend(rows);
    }
    let summary = scatter_summary(&points);
    let mut text = String::new();
    let _ = writeln!(text, "{:<9} {:>7} {:>9}", "state", "points", "spearman");
    for r in &summary {
        let _ = writeln!(text, "{:<9} {:>7} {:>9}", r.state, r.tangent_points, opt(r.spearman, 3));
    }
    let report = Report {
        artifacts: vec![
            Artifact::new("tangent_scatter.csv", write_table("tangent_scatter", &points)?),
            Artifact::new("tangent_scatter_summary.csv", write_table("tangent_scatter_summary", &summary)?),
            Artifact::new("tangent_scatter_summary.txt", text.clone()),
            Artifact::new("tangent_scatter.svg", plot.render()),
        ],
        text,
    };
    Ok(ScatterOutput { points, summary, report })
}

pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    pub summary: Vec<ScanSummaryRow>,
    pub report: Report,
}

/// Mean log error per method and state, in order of first appearance.
pub fn scan_summary(rows: &[ScanRow]) -> Vec<ScanSummaryRow> {
    let mut order: Vec<(String, String)> = Vec::new();
    for r in rows {
        let key = (r.method.clone(), r.state.clone());
        if !order.contains(&key) {
            order.push(key);
        }
    }
    order
        .into_iter()
        .map(|(method, state)| {
            let (points, mean) =
                mean_present(rows.iter().filter(|r| r.method == method && r.state == state).map(|r| r.log_error));
            ScanSummaryRow { method, state, points, mean_log_error: mean }
        })
        .collect()
}

fn scan_point(cfg: &ExperimentConfig, methods: &[Method], r: f64) -> Result<Vec<ScanRow>> {
    let sys = load_system(cfg, Some(r))?;
    let mut rows = Vec::new();
    for &method in methods {
        let result = solve_system(cfg, method, &sys)?;
        for (k, target) in sys.targets.iter().enumerate() {
            let outcome = result.states.get(k);
            let phase1_log_error = outcome.and_then(|o| {
                let start = o.tangent_start?;
                o.trace.iter().find(|p| p.iteration == start && p.phase == Phase::Energy)?.log_error
            });
            rows.push(ScanRow {
                method: method.as_str().into(),
                bond_length: r,
                state: target.label.clone(),
                energy: outcome.map(|o| o.energy),
                exact: target.exact,
                log_error: outcome.and_then(|o| o.log_error()),
                phase1_log_error,
            });
        }
    }
    Ok(rows)
}

/// All methods over the bond-length grid; grid points run on `jobs` workers.
pub fn run_bond_scan(cfg: &ExperimentConfig, jobs: usize) -> Result<ScanOutput> {
    let points = cfg.scan.points()?;
    let missing = missing_points(cfg, &points);
    if !missing.is_empty() {
        return Err(HarnessError::MissingData { dir: cfg.data_dir.display().to_string(), points: missing });
    }
    let methods = cfg.method_list()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Invalid(e.to_string()))?;
    let per_point: Vec<Vec<ScanRow>> = timed("bond scan", || {
        pool.install(|| points.par_iter().map(|&r| scan_point(cfg, &methods, r)).collect::<Result<Vec<_>>>())
    })?;
    let rows: Vec<ScanRow> = per_point.into_iter().flatten().collect();
    let summary = scan_summary(&rows);

    let mut artifacts = vec![
        Artifact::new("bond_scan.csv", write_table("bond_scan", &rows)?),
        Artifact::new("bond_scan_summary.csv", write_table("bond_scan_summary", &summary)?),
    ];
    let states: Vec<String> = summary.iter().map(|s| s.state.clone()).fold(Vec::new(), |mut acc, s| {
        if !acc.contains(&s) {
            acc.push(s);
        }
        acc
    });
    for &method in &methods {
        let mut energies = Plot::new(format!("{method}: energy levels"), "r (Angstrom)", "energy (hartree)");
        let mut errors = Plot::new(format!("{method}: log errors"), "r (Angstrom)", "log10 |E - E_exact|");
        for state in &states {
            let of = |f: &dyn Fn(&ScanRow) -> Option<f64>| -> Vec<(f64, f64)> {
                rows.iter()
                    .filter(|r| r.method == method.as_str() && &r.state == state)
                    .filter_map(|r| f(r).map(|v| (r.bond_length, v)))
                    .collect()
            };
            energies.series.push(Series::new(format!("{state} exact"), of(&|r| r.exact), Style::Dashed));
            energies.series.push(Series::new(state.clone(), of(&|r| r.energy), Style::Markers));
            errors.series.push(Series::new(state.clone(), of(&|r| r.log_error), Style::LineAndMarkers));
        }
        artifacts.push(Artifact::new(format!("bond_scan_{method}_energy.svg"), energies.render()));
        artifacts.push(Artifact::new(format!("bond_scan_{method}_log_error.svg"), errors.render()));
    }

    let mut text = String::new();
    let _ = write!(text, "{:<7}", "method");
    for s in &states {
        let _ = write!(text, " {s:>10}");
    }
    text.push('\n');
    for &method in &methods {
        let _ = write!(text, "{:<7}", method.as_str());
        for s in &states {
            let v = summary.iter().find(|r| r.method == method.as_str() && &r.state == s).and_then(|r| r.mean_log_error);
            let _ = write!(text, " {:>10}", opt(v, 4));
        }
        text.push('\n');
    }
    artifacts.push(Artifact::new("bond_scan_summary.txt", text.clone()));
    Ok(ScanOutput { rows, summary, report: Report { artifacts, text } })
}

/// Re-reads `bond_scan.csv` and recomputes its summary table.
pub fn recompute_scan_summary(csv_text: &str) -> Result<Vec<ScanSummaryRow>> {
    Ok(scan_summary(&read_table::<ScanRow>("bond_scan", csv_text)?))
}

pub struct GradientOutput {
    pub rows: Vec<GradientRow>,
    /// Largest deviation per variable.
    pub max_per_variable: Vec<f64>,
    pub passed: bool,
    pub report: Report,
}

/// Analytic gradients against central differences at random parameters.
pub fn validate_gradients(cfg: &ExperimentConfig) -> Result<GradientOutput> {
    let sys = load_system(cfg, None)?;
    let g = &cfg.gradients;
    let target = sys.targets.first().ok_or_else(|| HarnessError::Invalid("no target states".into()))?;
    let ansatz = match build_uccsd(&target.occupation, cfg.optimizer.trotter_depth) {
        Ok(a) => Some(a),
        Err(tangent_vqe::Error::NoExcitations(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut rows = Vec::new();
    let mut max_per_variable = Vec::new();
    if let Some(ansatz) = ansatz {
        let d = ansatz.parameter_count();
        let problem = StateProblem::plain(sys.hamiltonian.clone(), ansatz, StateVector::basis_state(&target.occupation)?)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        max_per_variable = vec![0.0; d];
        for draw in 0..g.draws {
            let theta: Vec<f64> =
                (0..d).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
            let analytic = problem.analytic_gradient(&theta)?;
            let fdm = problem.fdm_gradient(Functional::Energy, &theta, g.fd_step)?;
            for (variable, (a, f)) in analytic.iter().zip(&fdm).enumerate() {
                let abs_diff = (a - f).abs();
                max_per_variable[variable] = f64::max(max_per_variable[variable], abs_diff);
                rows.push(GradientRow {
                    system: sys.kind.as_str().into(),
                    draw,
                    variable,
                    analytic: *a,
                    fdm: *f,
                    abs_diff,
                });
            }
        }
    }
    let passed = max_per_variable.iter().all(|&m| m < g.tolerance);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{} gradients: {} draws, h = {:e}, tolerance {:e}",
        sys.kind.as_str(),
        g.draws,
        g.fd_step,
        g.tolerance
    );
    let _ = writeln!(text, "{:>8} {:>12} {}", "variable", "max |diff|", "status");
    for (k, m) in max_per_variable.iter().enumerate() {
        let _ = writeln!(text, "{k:>8} {m:>12.3e} {}", if *m < g.tolerance { "pass" } else { "FAIL" });
    }
    let _ = writeln!(text, "overall: {}", if passed { "pass" } else { "FAIL" });
    let report = Report {
        artifacts: vec![
            Artifact::new("gradients.csv", write_table("gradients", &rows)?),
            Artifact::new("gradients_summary.txt", text.clone()),
        ],
        text,
    };
    Ok(GradientOutput { rows, max_per_variable, passed, report })
}

/// Sector-resolved spectrum of the configured system.
pub fn exact_spectrum(cfg: &ExperimentConfig) -> Result<String> {
    let sys = load_system(cfg, None)?;
    let spectrum = diagonalize_by_sector(&sys.hamiltonian)?;
    let mut s = String::new();
    if let Some(r) = sys.bond_length {
        let _ = writeln!(s, "{} r = {r:.2}", sys.kind.as_str());
    } else {
        let _ = writeln!(s, "{}", sys.kind.as_str());
    }
    let _ = writeln!(s, "{:>4} {:>20} {:>3} {:>5}", "k", "energy", "N", "Sz");
    let labels = spectrum.sector_labels.as_deref().unwrap_or(&[]);
    for (k, (e, l)) in spectrum.eigenvalues.iter().zip(labels).enumerate() {
        let _ = writeln!(s, "{k:>4} {e:>20.12} {:>3} {:>5.1}", l.electrons, l.sz);
    }
    let _ = writeln!(s, "targets in N = {}, Sz = {}:", sys.electrons, sys.sz);
    for t in &sys.targets {
        let _ = writeln!(s, "  {:<9} {} {}", t.label, t.occupation, opt(t.exact, 12));
    }
    Ok(s)
}

/// One line per Hamiltonian file under `dir`.
pub fn list_data(dir: &Path) -> Result<String> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).map_err(|e| HarnessError::io(&d, e))? {
            let path = entry.map_err(|e| HarnessError::io(&d, e))?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|e| e == "txt") {
                files.push(path);
            }
        }
    }
    files.sort();
    let mut s = String::new();
    for path in files {
        match load_molecular(&path) {
            Ok(sys) => {
                let _ = writeln!(
                    s,
                    "{}  label={} r={:.2} electrons={} qubits={} terms={}",
                    path.display(),
                    sys.label,
                    sys.bond_length,
                    sys.electron_count,
                    sys.qubit_count(),
                    sys.hamiltonian.len()
                );
            }
            Err(e) => {
                let _ = writeln!(s, "{}  unreadable: {e}", path.display());
            }
        }
    }
    Ok(s)
}
