use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use phasebridge_cli::config::{apply_entries, parse_override, read_config};
use phasebridge_cli::{
    exit_code, list_scenarios, run_batch, Check, CliError, Outcome, ScenarioConfig, EXIT_USAGE, SCENARIOS,
};

/// Runs named phase-space correspondence scenarios and writes CSV fields
/// plus a JSON metric report per scenario.
#[derive(Debug, Parser)]
#[command(name = "phasebridge", version)]
struct Args {
    /// Scenario names, or `all`. May instead come from `scenario = ...` in the config.
    scenarios: Vec<String>,

    /// Flat `key = value` file; `scenario.key` scopes a key to one scenario.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output root; each scenario writes to its own subdirectory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Override one key (repeatable), applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Print the scenarios and exit.
    #[arg(long)]
    list: bool,

    /// Number of scenarios run concurrently.
    #[arg(long, value_name = "N", default_value_t = 1)]
    parallel: usize,
}

fn prepare(args: &Args) -> Result<Vec<ScenarioConfig>, CliError> {
    let file_entries = match &args.config {
        Some(path) => read_config(path)?,
        None => Vec::new(),
    };
    let mut names = args.scenarios.clone();
    if names.is_empty() {
        if let Some((_, v, _)) = file_entries.iter().find(|(k, _, _)| k == "scenario") {
            names.push(v.clone());
        }
    }
    if names.is_empty() {
        return Err(CliError::Usage(
            "no scenario given; use --list to see the available ones".into(),
        ));
    }
    if names.iter().any(|n| n == "all") {
        names = SCENARIOS.iter().map(|s| s.name.to_string()).collect();
    }
    let mut configs = names
        .iter()
        .map(|n| ScenarioConfig::new(n, &args.out))
        .collect::<Result<Vec<_>, _>>()?;
    apply_entries(
        &mut configs,
        file_entries.iter().map(|(k, v, _)| (k.as_str(), v.as_str())),
    )?;
    let overrides = args
        .set
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>, _>>()?;
    apply_entries(
        &mut configs,
        overrides.iter().map(|(k, v)| (k.as_str(), v.as_str())),
    )?;
    Ok(configs)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    if args.list {
        for (name, summary) in list_scenarios() {
            println!("{name:<28}{summary}");
        }
        return ExitCode::SUCCESS;
    }
    let configs = match prepare(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let results = run_batch(&configs, args.parallel);
    for (cfg, result) in configs.iter().zip(&results) {
        match result {
            Err(e) => eprintln!("{}: error: {e}", cfg.name()),
            Ok(report) => {
                let verdict = match report.outcome() {
                    Outcome::Pass => "PASS",
                    Outcome::MetricFailure => "FAIL",
                    Outcome::NumericalFailure => "ERROR",
                };
                println!(
                    "{}: {verdict} ({} metrics, {:.2} s) -> {}",
                    report.scenario,
                    report.metrics.len(),
                    report.duration_seconds,
                    cfg.out_dir().display()
                );
                for m in &report.metrics {
                    let criterion = match m.check {
                        Check::Absolute => format!("{:e} +/- {:e}", m.target, m.tol),
                        Check::Relative => format!("{:e} within {:e} relative", m.target, m.tol),
                        Check::AtMost => format!("<= {:e}", m.target),
                        Check::AtLeast => format!(">= {:e}", m.target),
                    };
                    println!(
                        "  {:<4} {:<28} {:<24e} {criterion}",
                        if m.pass { "ok" } else { "FAIL" },
                        m.name,
                        m.value,
                    );
                }
                for n in &report.notes {
                    println!("  note: {n}");
                }
                if let Some(e) = &report.error {
                    eprintln!("  numerical failure: {e}");
                }
            }
        }
    }
    ExitCode::from(exit_code(&results) as u8)
}
