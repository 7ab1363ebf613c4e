//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use tangent_vqe::hamiltonians::{build_hubbard, load_molecular, HubbardSpec};
use tangent_vqe::oracle::{dense_matrix, jacobi_eigh, sector_levels, DenseMatrix};
use tangent_vqe::solvers::{solve, ssvqe_weights, Method};
use tangent_vqe::statevector::StateVector;
use tangent_vqe::Complex64;
use tvqe_harness::config::SystemKind;
use tvqe_harness::experiments::{
    recompute_scan_summary, run, run_bond_scan, run_convergence, run_tangent_scatter, validate_gradients,
    write_artifacts,
};
use tvqe_harness::records::{read_table, TraceRow};
use tvqe_harness::systems::load_system;
use tvqe_harness::ExperimentConfig;

type Outcome = Result<String, String>;

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn config(name: &str) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name))
        .unwrap_or_else(|e| panic!("{name}: {e}"));
    cfg.data_dir = workspace().join("data");
    cfg
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit_s: u64, detail: String) -> Outcome {
    check(elapsed.as_secs() < limit_s, format!("{detail}; {:.1?} (limit {limit_s} s)", elapsed))
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn gradient_fidelity() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, cfg) in [("h2", config("h2_gradients.toml")), ("hubbard", {
        let mut c = config("h2_gradients.toml");
        c.system = SystemKind::Hubbard;
        c
    })] {
        let out = validate_gradients(&cfg).map_err(e)?;
        let worst = out.max_per_variable.iter().copied().fold(0.0, f64::max);
        ok &= out.passed && !out.max_per_variable.is_empty() && cfg.gradients.draws >= 20;
        if name == "h2" {
            ok &= out.max_per_variable.len() == 3;
        }
        parts.push(format!("{name}: d={} max dev {worst:.2e}", out.max_per_variable.len()));
    }
    let detail = format!("{} ({} draws, h=1e-5, tol 1e-7)", parts.join(", "), 20);
    if !ok {
        return Err(detail);
    }
    within(start.elapsed(), 60, detail)
}

fn reconstruction_residual(m: &DenseMatrix) -> f64 {
    let (values, vectors) = jacobi_eigh(m).expect("jacobi");
    let diag =
        DenseMatrix::from_fn(m.dim(), |r, c| if r == c { Complex64::new(values[r], 0.0) } else { Complex64::default() });
    vectors.matmul(&diag).matmul(&vectors.adjoint()).sub(m).max_abs()
}

fn oracle_integrity() -> Outcome {
    let dimer = build_hubbard(&HubbardSpec { sites: 2, hopping_t: 1.0, coulomb_u: 0.0 }).map_err(e)?;
    let mut dimer_dev: f64 = 0.0;
    for sz in [0.5, -0.5] {
        let levels = sector_levels(&dimer, 1, sz).map_err(e)?;
        if levels.len() != 2 {
            return Err(format!("1-particle sector has {} levels", levels.len()));
        }
        dimer_dev = dimer_dev.max((levels[0] + 1.0).abs()).max((levels[1] - 1.0).abs());
    }
    let mut hamiltonians = vec![build_hubbard(&HubbardSpec::benchmark()).map_err(e)?];
    for sub in ["h2", "lih"] {
        let dir = workspace().join("data").join(sub);
        for entry in std::fs::read_dir(&dir).map_err(e)? {
            let path = entry.map_err(e)?.path();
            if path.extension().is_some_and(|x| x == "txt") {
                hamiltonians.push(load_molecular(&path).map_err(e)?.hamiltonian);
            }
        }
    }
    let mut worst: f64 = 0.0;
    for h in &hamiltonians {
        worst = worst.max(reconstruction_residual(&dense_matrix(h).map_err(e)?));
    }
    check(
        dimer_dev < 1e-10 && worst < 1e-9,
        format!("dimer levels off by {dimer_dev:.1e}; worst Jacobi residual {worst:.1e} over {} Hamiltonians", hamiltonians.len()),
    )
}

fn h2_convergence() -> Outcome {
    let start = Instant::now();
    let out = run_convergence(&config("h2_convergence.toml")).map_err(e)?;
    let errors: Vec<f64> = out.summary.iter().map(|r| r.final_log_error.unwrap_or(f64::INFINITY)).collect();
    let listed = out.summary.iter().map(|r| format!("{} {:.2}", r.state, r.final_log_error.unwrap_or(f64::NAN)));
    let detail = format!("log errors: {}", listed.collect::<Vec<_>>().join(", "));
    if errors.len() != 4 || errors[0] > -6.0 || errors.iter().any(|&x| x > -3.0) {
        return Err(detail);
    }
    within(start.elapsed(), 300, detail)
}

fn improvement_property() -> Outcome {
    let start = Instant::now();
    let mut cfg = config("h2_bond_scan.toml");
    cfg.methods = vec!["vqd".into(), "tvvqe".into()];
    let out = run_bond_scan(&cfg, 1).map_err(e)?;
    let mean = |m: &str| {
        out.summary.iter().find(|r| r.method == m && r.state == "ground").and_then(|r| r.mean_log_error.map(|v| (r.points, v)))
    };
    let (Some((nv, vqd)), Some((nt, tv))) = (mean("vqd"), mean("tvvqe")) else {
        return Err("missing ground summary".into());
    };
    let mut worst_change = f64::NEG_INFINITY;
    for r in out.rows.iter().filter(|r| r.method == "tvvqe" && r.state == "ground") {
        let (Some(after), Some(before)) = (r.log_error, r.phase1_log_error) else {
            return Err(format!("r={:.2}: missing log errors", r.bond_length));
        };
        worst_change = worst_change.max(after - before);
    }
    let tie = if tv == vqd { " (tie at the log-error floor)" } else { "" };
    let detail = format!(
        "ground mean: tvvqe {tv:.4} vs vqd {vqd:.4}{tie} over {nt}/{nv} points; largest phase-2 change {worst_change:+.2e}"
    );
    if nt != 25 || nv != 25 || tv > vqd || worst_change > 0.1 {
        return Err(detail);
    }
    within(start.elapsed(), 1800, detail)
}

fn hubbard_levels() -> Outcome {
    let start = Instant::now();
    let out = run_convergence(&config("hubbard_convergence.toml")).map_err(e)?;
    let errors: Vec<f64> = out.summary.iter().map(|r| r.final_log_error.unwrap_or(f64::INFINITY)).collect();
    let detail = format!(
        "log errors: {}",
        out.summary.iter().map(|r| format!("{} {:.2}", r.state, r.final_log_error.unwrap_or(f64::NAN))).collect::<Vec<_>>().join(", ")
    );
    if errors.len() != 3 || errors.iter().any(|&x| x > -2.3) {
        return Err(detail);
    }
    within(start.elapsed(), 600, detail)
}

fn tangent_correlation() -> Outcome {
    let out = run_tangent_scatter(&config("h2_tangent_scatter.toml")).map_err(e)?;
    let ground = out.summary.iter().find(|r| r.state == "ground").ok_or("no ground row")?;
    let rho = ground.spearman.ok_or("ground series is constant")?;
    check(rho > 0.5, format!("ground Spearman {rho:.3} over {} tangent-phase points", ground.tangent_points))
}

fn method_suite() -> Outcome {
    let w = ssvqe_weights(3);
    let weights_ok = w == [1.0, 2.0 / 3.0, 1.0 / 3.0];

    let cfg = config("h2_bond_scan.toml");
    let sys = load_system(&cfg, Some(0.74)).map_err(e)?;
    let mc_targets = &sys.targets[..3];
    let mc = solve(&sys.hamiltonian, mc_targets, &cfg.method_config(Method::Mcvqe, Some(0.74), 2).map_err(e)?).map_err(e)?;
    let residue = mc.subspace.as_ref().ok_or("no subspace matrix")?.hermiticity_residue();

    let vqd = solve(&sys.hamiltonian, &sys.targets[..2], &cfg.method_config(Method::Vqd, Some(0.74), 2).map_err(e)?)
        .map_err(e)?;
    let overlap = StateVector::overlap_squared(&vqd.states[0].state, &vqd.states[1].state).map_err(e)?;
    check(
        weights_ok && residue < 1e-10 && overlap < 0.1,
        format!("weights {w:?}; M hermiticity {residue:.1e}; VQD overlap^2 {overlap:.1e}"),
    )
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|x| x.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(e)?;
    let mut compared = 0;
    for (name, jobs) in [
        ("h2_convergence.toml", (1, 1)),
        ("hubbard_convergence.toml", (1, 1)),
        ("h2_tangent_scatter.toml", (1, 1)),
        ("h2_bond_scan.toml", (1, 4)),
        ("h2_gradients.toml", (1, 1)),
    ] {
        let cfg = config(name);
        let mut runs = Vec::new();
        for (k, j) in [jobs.0, jobs.1].into_iter().enumerate() {
            let dir = tmp.path().join(format!("{name}-{k}"));
            let report = if name == "h2_gradients.toml" {
                validate_gradients(&cfg).map_err(e)?.report
            } else {
                run(&cfg, j).map_err(e)?
            };
            write_artifacts(&report, &dir).map_err(e)?;
            runs.push(csv_files(&dir));
        }
        if runs[0].is_empty() || runs[0] != runs[1] {
            return Err(format!("{name}: CSV outputs differ"));
        }
        compared += runs[0].len();
        if name == "h2_bond_scan.toml" {
            let text = String::from_utf8(runs[0].iter().find(|f| f.0 == "bond_scan.csv").unwrap().1.clone()).unwrap();
            let summary = String::from_utf8(runs[0].iter().find(|f| f.0 == "bond_scan_summary.csv").unwrap().1.clone()).unwrap();
            let recomputed = tvqe_harness::records::write_table("bond_scan_summary", &recompute_scan_summary(&text).map_err(e)?)
                .map_err(e)?;
            if recomputed != summary {
                return Err("summary recomputed from bond_scan.csv differs".into());
            }
        }
    }
    Ok(format!("{compared} CSV files byte-identical across paired runs (scan with 1 and 4 workers)"))
}

fn lih_flags() -> Outcome {
    let tmp = tempfile::tempdir().map_err(e)?;
    let cfg = config("lih_convergence.toml");
    let out = run_convergence(&cfg).map_err(e)?;
    write_artifacts(&out.report, tmp.path()).map_err(e)?;
    let text = std::fs::read_to_string(tmp.path().join("convergence.csv")).map_err(e)?;
    let trace: Vec<TraceRow> = read_table("convergence", &text).map_err(e)?;
    let threshold = cfg.report.local_minimum_threshold;
    let mut parts = Vec::new();
    for r in &out.summary {
        let points = trace.iter().filter(|t| t.state == r.state).count();
        let expected = r.final_log_error.is_some_and(|x| x > threshold);
        if points == 0 || r.local_minimum_suspect != expected {
            return Err(format!("{}: {points} trace points, flag {}", r.state, r.local_minimum_suspect));
        }
        parts.push(format!(
            "{} {:.2}{}",
            r.state,
            r.final_log_error.unwrap_or(f64::NAN),
            if r.local_minimum_suspect { " [suspect]" } else { "" }
        ));
    }
    check(out.summary.len() == 4, format!("traces recorded, flags consistent with > {threshold}: {}", parts.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 gradient fidelity", gradient_fidelity),
        ("2 oracle integrity", oracle_integrity),
        ("3 H2 TVVQE convergence", h2_convergence),
        ("4 TVVQE improvement on H2 scan", improvement_property),
        ("5 Hubbard 3x1 levels", hubbard_levels),
        ("6 tangent-norm correlation", tangent_correlation),
        ("7 method suite sanity", method_suite),
        ("8 determinism", determinism),
        ("9 LiH completes and flags", lih_flags),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
