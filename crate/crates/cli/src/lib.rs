//! Scenario runner for the phasebridge toolkit: strict configuration,
//! CSV field dumps and JSON metric reports.

pub mod config;
pub mod error;
pub mod report;
pub mod scenarios;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

pub use config::ScenarioConfig;
pub use error::CliError;
pub use report::{Check, Metric, Outcome, ScenarioReport};
pub use scenarios::{list_scenarios, Scenario, SCENARIOS};

use report::{write_text, Context};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_METRIC: i32 = 3;

/// Runs one scenario and writes `report.json` next to its CSV files.
/// Numerical failures still produce a report (with `error` set); invalid
/// input is returned as an error.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport, CliError> {
    let start = Instant::now();
    let mut ctx = Context::new(config);
    let error = match (config.scenario().run)(&mut ctx) {
        Ok(()) => None,
        Err(CliError::Core(e)) if e.is_numerical() => Some(e.to_string()),
        Err(CliError::Core(e)) => return Err(CliError::Config(e.to_string())),
        Err(other) => return Err(other),
    };
    let report = ctx.finish(error, start.elapsed().as_secs_f64());
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_text(&config.out_dir().join("report.json"), &(json + "\n"))?;
    Ok(report)
}

/// Runs `configs` on up to `workers` threads; results keep the input order.
pub fn run_batch(
    configs: &[ScenarioConfig],
    workers: usize,
) -> Vec<Result<ScenarioReport, CliError>> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<ScenarioReport, CliError>>>> =
        Mutex::new(configs.iter().map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers.clamp(1, configs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cfg) = configs.get(i) else { break };
                let result = run_scenario(cfg);
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every scenario ran"))
        .collect()
}

/// Process exit code for a batch: usage beats numerical beats metric failure.
pub fn exit_code(results: &[Result<ScenarioReport, CliError>]) -> i32 {
    let mut code = EXIT_PASS;
    for r in results {
        let c = match r {
            Err(_) => EXIT_USAGE,
            Ok(report) => match report.outcome() {
                Outcome::Pass => EXIT_PASS,
                Outcome::NumericalFailure => EXIT_NUMERICAL,
                Outcome::MetricFailure => EXIT_METRIC,
            },
        };
        code = match (code, c) {
            (EXIT_USAGE, _) | (_, EXIT_USAGE) => EXIT_USAGE,
            (EXIT_NUMERICAL, _) | (_, EXIT_NUMERICAL) => EXIT_NUMERICAL,
            (EXIT_METRIC, _) | (_, EXIT_METRIC) => EXIT_METRIC,
            _ => EXIT_PASS,
        };
    }
    code
}
