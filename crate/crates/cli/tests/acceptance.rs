//! End-to-end acceptance run: every scenario at its defaults, one verdict
//! line per criterion, then a second pass to check reproducibility.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use phasebridge::numerics::UnitSystem;
use phasebridge::phasespace::mvt_residual;
use phasebridge::photoelectric::recoil_kinematics;
use phasebridge::wavefunction::Potential;
use phasebridge::zeropoint::gamma_of;
use phasebridge_cli::{run_scenario, ScenarioConfig, ScenarioReport, SCENARIOS};

struct Verdict {
    pass: bool,
    detail: String,
}

fn run(name: &str, root: &Path) -> ScenarioReport {
    let cfg = ScenarioConfig::new(name, root).expect("known scenario");
    run_scenario(&cfg).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// All named metrics pass, there was no numerical failure and the run fit
/// its budget.
fn judge(report: &ScenarioReport, names: &[&str], budget: Duration) -> Verdict {
    let mut pass = report.error.is_none() && report.duration_seconds < budget.as_secs_f64();
    let mut parts = Vec::new();
    for &n in names {
        let m = report
            .metric(n)
            .unwrap_or_else(|| panic!("{}: no metric {n}", report.scenario));
        pass &= m.pass;
        parts.push(format!("{n}={:.6e}{}", m.value, if m.pass { "" } else { "!" }));
    }
    if let Some(e) = &report.error {
        parts.push(format!("error: {e}"));
    }
    parts.push(format!(
        "{:.3} s of {:.3} s",
        report.duration_seconds,
        budget.as_secs_f64()
    ));
    Verdict {
        pass,
        detail: parts.join(", "),
    }
}

/// Best of a few timings of `f`, to keep scheduler noise out of sub-ms budgets.
fn time<T>(mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..5 {
        let start = Instant::now();
        let v = f();
        best = best.min(start.elapsed());
        out = Some(v);
    }
    (out.expect("ran at least once"), best)
}

fn files(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).expect("readable output") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let bytes = std::fs::read(&path).expect("readable file");
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), bytes);
            }
        }
    }
    out
}

/// Report JSON with the wall-clock field removed.
fn stable_json(bytes: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(bytes).expect("valid report");
    v.as_object_mut()
        .expect("report object")
        .remove("duration_seconds");
    v
}

fn main() -> ExitCode {
    let first = tempfile::tempdir().expect("temp dir");
    let second = tempfile::tempdir().expect("temp dir");
    let secs = Duration::from_secs_f64;

    let suite_start = Instant::now();
    let reports: BTreeMap<&str, ScenarioReport> = SCENARIOS
        .iter()
        .map(|s| (s.name, run(s.name, first.path())))
        .collect();
    let suite_time = suite_start.elapsed();
    let r = |name: &str| &reports[name];

    let mut verdicts: Vec<(&str, Verdict)> = Vec::new();

    let mut v = judge(
        r("commutator"),
        &["integral_over_hbar", "charge_independence_spread", "hbar_linearity"],
        secs(1.0),
    );
    let disclosed = r("commutator").notes.iter().any(|n| n.contains("pi * hbar"));
    v.pass &= disclosed;
    v.detail += if disclosed { ", pi factor reported" } else { ", pi factor NOT reported" };
    verdicts.push(("commutator quadrature", v));

    let (gamma, elapsed) = time(|| gamma_of(&UnitSystem::electron_cgs()));
    let within = (gamma / 6.3e-24 - 1.0).abs() <= 0.02;
    let fast = elapsed < secs(1e-3);
    verdicts.push((
        "electron radiation-reaction time",
        Verdict {
            pass: within && fast && r("commutator").metric("electron_gamma_seconds").unwrap().pass,
            detail: format!("gamma={gamma:.4e} s, {:.1} us", elapsed.as_secs_f64() * 1e6),
        },
    ));

    verdicts.push((
        "harmonic correspondence",
        judge(r("harmonic-correspondence"), &["residual", "refined_residual"], secs(60.0)),
    ));
    verdicts.push((
        "quartic deviation",
        judge(r("quartic-deviation"), &["residual", "refinement_change"], secs(90.0)),
    ));
    verdicts.push((
        "alpha identification",
        judge(r("alpha-scan"), &["best_alpha", "mismatch_ratio"], secs(120.0)),
    ));

    let mut v = judge(
        r("mvt-scaling"),
        &["quadratic_residual", "cubic_ratio_error"],
        secs(1.0),
    );
    let ((quadratic, cubic), elapsed) = time(|| {
        let harmonic = Potential::harmonic(1.0, 1.0);
        let quartic = Potential::quartic(1.0);
        let samples = [-2.0, -0.7, 0.3, 1.1, 2.0];
        let mut q: f64 = 0.0;
        for r in samples {
            for s in samples {
                q = q.max(mvt_residual(&harmonic, r, s));
            }
        }
        let target = quartic.third_derivative(1.0) / 24.0;
        let mut c: f64 = 0.0;
        let mut delta = 0.1;
        for _ in 0..5 {
            let ratio = mvt_residual(&quartic, 1.0 + delta, 1.0 - delta) / (2.0 * delta).powi(3);
            c = c.max((ratio / target - 1.0).abs());
            delta *= 0.5;
        }
        (q, c)
    });
    v.pass &= quadratic <= 1e-14 && cubic <= 0.01 && elapsed < secs(1e-3);
    v.detail += &format!(", core {:.1} us", elapsed.as_secs_f64() * 1e6);
    verdicts.push(("mean-value residual", v));

    verdicts.push((
        "Fokker-Planck compensation",
        judge(
            r("fokker-planck-equilibrium"),
            &["var_x", "var_p", "liouville_step_difference"],
            secs(60.0),
        ),
    ));
    verdicts.push((
        "oscillator eigenspectrum",
        judge(r("eigenspectrum"), &["max_level_error"], secs(5.0)),
    ));
    verdicts.push((
        "Wigner function properties",
        judge(
            r("eigenspectrum"),
            &[
                "position_marginal_error",
                "momentum_marginal_error",
                "wigner_ground_origin",
                "wigner_first_origin",
            ],
            secs(5.0),
        ),
    ));
    verdicts.push((
        "free spreading",
        judge(
            r("free-spread"),
            &["variance_law_error", "kernel_vs_spectral", "kernel_composition"],
            secs(10.0),
        ),
    ));
    verdicts.push((
        "photoelectric threshold",
        judge(
            r("photoelectric-threshold"),
            &[
                "peak_offset",
                "einstein_slope",
                "ke_ev_at_1.8",
                "speed_at_1.8",
                "ke_ev_at_2.3",
                "speed_at_2.3",
                "ke_ev_at_3.1",
                "speed_at_3.1",
            ],
            secs(30.0),
        ),
    ));

    let mut v = judge(r("recoil"), &["closure_error", "momentum_ratio"], secs(1.0));
    let (recoil, elapsed) =
        time(|| recoil_kinematics(3.1, 1.1, 0.7, &UnitSystem::electron_ev()).expect("valid"));
    let ratio = recoil.electron_momentum() / recoil.photon_momentum();
    v.pass &= recoil.closure_error() <= 1e-15
        && (ratio / 342.0 - 1.0).abs() <= 0.01
        && elapsed < secs(1e-3);
    v.detail += &format!(", core {:.1} us", elapsed.as_secs_f64() * 1e6);
    verdicts.push(("recoil kinematics", v));

    for s in SCENARIOS.iter() {
        run(s.name, second.path());
    }
    let (a, b) = (files(first.path()), files(second.path()));
    let mut mismatched = Vec::new();
    if a.keys().ne(b.keys()) {
        mismatched.push("file sets differ".to_string());
    }
    for (path, bytes) in &a {
        let Some(other) = b.get(path) else { continue };
        let same = if path.extension().is_some_and(|e| e == "json") {
            stable_json(bytes) == stable_json(other)
        } else {
            bytes == other
        };
        if !same {
            mismatched.push(path.display().to_string());
        }
    }
    let within_budget = suite_time < secs(600.0);
    verdicts.push((
        "determinism",
        Verdict {
            pass: mismatched.is_empty() && within_budget,
            detail: format!(
                "{} files compared, {} differ{}, suite {:.1} s of 600 s",
                a.len(),
                mismatched.len(),
                if mismatched.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", mismatched.join(", "))
                },
                suite_time.as_secs_f64()
            ),
        },
    ));

    let mut failed = 0;
    for (i, (title, v)) in verdicts.iter().enumerate() {
        println!(
            "criterion {:>2} {} {title}: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", verdicts.len() - failed, verdicts.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
