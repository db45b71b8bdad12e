use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::CliError;

/// How a metric value is judged against its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `|value - target| <= tol`
    Absolute,
    /// `|value - target| <= tol |target|`
    Relative,
    /// `value <= target`
    AtMost,
    /// `value >= target`
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tol: f64,
    pub check: Check,
    pub pass: bool,
}

impl Metric {
    fn judged(name: &str, value: f64, target: f64, tol: f64, check: Check) -> Self {
        let pass = match check {
            Check::Absolute => (value - target).abs() <= tol,
            Check::Relative => (value - target).abs() <= tol * target.abs(),
            Check::AtMost => value <= target,
            Check::AtLeast => value >= target,
        };
        Metric {
            name: name.to_string(),
            value,
            target,
            tol,
            check,
            pass,
        }
    }

    pub fn absolute(name: &str, value: f64, target: f64, tol: f64) -> Self {
        Self::judged(name, value, target, tol, Check::Absolute)
    }

    pub fn relative(name: &str, value: f64, target: f64, tol: f64) -> Self {
        Self::judged(name, value, target, tol, Check::Relative)
    }

    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self::judged(name, value, bound, 0.0, Check::AtMost)
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self::judged(name, value, bound, 0.0, Check::AtLeast)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub config_echo: BTreeMap<String, String>,
    pub metrics: Vec<Metric>,
    pub files: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Set when the computation itself failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub duration_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    MetricFailure,
    NumericalFailure,
}

impl ScenarioReport {
    pub fn outcome(&self) -> Outcome {
        if self.error.is_some() {
            Outcome::NumericalFailure
        } else if self.metrics.iter().all(|m| m.pass) {
            Outcome::Pass
        } else {
            Outcome::MetricFailure
        }
    }

    pub fn metric(&self, name: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.name == name)
    }
}

/// Output sink handed to a scenario while it runs.
pub struct Context<'a> {
    pub config: &'a ScenarioConfig,
    metrics: Vec<Metric>,
    notes: Vec<String>,
    files: Vec<String>,
}

impl<'a> Context<'a> {
    pub fn new(config: &'a ScenarioConfig) -> Self {
        Context {
            config,
            metrics: Vec::new(),
            notes: Vec::new(),
            files: Vec::new(),
        }
    }

    pub fn metric(&mut self, metric: Metric) {
        self.metrics.push(metric);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Writes a CSV table: a `#` comment block (scenario, grid, units,
    /// columns) followed by one row per line.
    pub fn write_csv<I>(
        &mut self,
        file: &str,
        grid: &str,
        units: &str,
        columns: &[&str],
        rows: I,
    ) -> Result<(), CliError>
    where
        I: IntoIterator<Item = Vec<f64>>,
    {
        let mut text = String::new();
        writeln!(text, "# scenario: {}", self.config.name()).unwrap();
        writeln!(text, "# grid: {grid}").unwrap();
        writeln!(text, "# units: {units}").unwrap();
        writeln!(text, "# columns: {}", columns.join(",")).unwrap();
        for row in rows {
            debug_assert_eq!(row.len(), columns.len());
            let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            text.push_str(&line.join(","));
            text.push('\n');
        }
        self.write_file(file, &text)
    }

    fn write_file(&mut self, file: &str, text: &str) -> Result<(), CliError> {
        let path = self.config.out_dir().join(file);
        write_text(&path, text)?;
        self.files.push(file.to_string());
        Ok(())
    }

    pub fn finish(self, error: Option<String>, duration_seconds: f64) -> ScenarioReport {
        ScenarioReport {
            scenario: self.config.name().to_string(),
            config_echo: self.config.echo().clone(),
            metrics: self.metrics,
            files: self.files,
            notes: self.notes,
            error,
            duration_seconds,
        }
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks() {
        assert!(Metric::absolute("a", 1.05, 1.0, 0.1).pass);
        assert!(!Metric::relative("r", 1.05, 1.0, 0.01).pass);
        assert!(Metric::at_most("m", 1e-5, 5e-4).pass);
        assert!(!Metric::at_least("l", 1e-3, 1e-2).pass);
        assert!(!Metric::at_most("nan", f64::NAN, 1.0).pass);
    }

    #[test]
    fn outcome_ordering() {
        let mut r = ScenarioReport {
            scenario: "x".into(),
            config_echo: BTreeMap::new(),
            metrics: vec![Metric::at_most("m", 1.0, 2.0)],
            files: vec![],
            notes: vec![],
            error: None,
            duration_seconds: 0.0,
        };
        assert_eq!(r.outcome(), Outcome::Pass);
        r.metrics.push(Metric::at_most("n", 3.0, 2.0));
        assert_eq!(r.outcome(), Outcome::MetricFailure);
        r.error = Some("diverged".into());
        assert_eq!(r.outcome(), Outcome::NumericalFailure);
    }
}
