//! Flat `key = value` configuration with `#` comments and strict keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use phasebridge::numerics::UnitSystem;

use crate::error::CliError;
use crate::scenarios::{find, Scenario};

/// Accepted form of a configuration value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Float,
    Positive,
    /// Integer of at least one.
    Count,
    /// Comma-separated floats.
    List,
    Flag,
    Choice(&'static [&'static str]),
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

pub const fn key(name: &'static str, kind: Kind, default: &'static str, help: &'static str) -> Key {
    Key {
        name,
        kind,
        default,
        help,
    }
}

/// Entries of a config file in order of appearance, with their line numbers.
pub fn parse_config(text: &str) -> Result<Vec<(String, String, usize)>, CliError> {
    let mut entries: Vec<(String, String, usize)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("line {line_no}: expected key = value")))?;
        let (k, v) = (k.trim(), v.trim());
        let valid_key = !k.is_empty()
            && k
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || "_-.".contains(c));
        if !valid_key {
            return Err(CliError::config(format!("line {line_no}: invalid key '{k}'")));
        }
        if v.is_empty() {
            return Err(CliError::config(format!("line {line_no}: empty value for '{k}'")));
        }
        if let Some((_, _, first)) = entries.iter().find(|(name, _, _)| name == k) {
            return Err(CliError::config(format!(
                "line {line_no}: '{k}' already set on line {first}"
            )));
        }
        entries.push((k.to_string(), v.to_string(), line_no));
    }
    Ok(entries)
}

pub fn read_config(path: &Path) -> Result<Vec<(String, String, usize)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Splits `key=value` from a `--set` argument.
pub fn parse_override(arg: &str) -> Result<(String, String), CliError> {
    let (k, v) = arg
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got '{arg}'")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn check_value(key: &Key, value: &str) -> Result<(), CliError> {
    let bad = |what: &str| {
        CliError::config(format!("'{}' must be {what}, got '{value}'", key.name))
    };
    match key.kind {
        Kind::Float => {
            let v: f64 = value.parse().map_err(|_| bad("a number"))?;
            if !v.is_finite() {
                return Err(bad("finite"));
            }
        }
        Kind::Positive => {
            let v: f64 = value.parse().map_err(|_| bad("a number"))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad("positive"));
            }
        }
        Kind::Count => {
            let v: usize = value.parse().map_err(|_| bad("a whole number"))?;
            if v == 0 {
                return Err(bad("at least 1"));
            }
        }
        Kind::List => {
            let items = split_list(value).map_err(|_| bad("a comma-separated list of numbers"))?;
            if items.is_empty() || items.iter().any(|v| !v.is_finite()) {
                return Err(bad("a non-empty list of finite numbers"));
            }
        }
        Kind::Flag => {
            if value != "true" && value != "false" {
                return Err(bad("true or false"));
            }
        }
        Kind::Choice(options) => {
            if !options.contains(&value) {
                return Err(bad(&format!("one of {}", options.join(", "))));
            }
        }
    }
    Ok(())
}

fn split_list(value: &str) -> Result<Vec<f64>, std::num::ParseFloatError> {
    value.split(',').map(|s| s.trim().parse::<f64>()).collect()
}

/// Fully resolved settings of one scenario run: every declared key has a
/// validated value.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    scenario: &'static Scenario,
    values: BTreeMap<String, String>,
    out_dir: PathBuf,
}

impl ScenarioConfig {
    /// Defaults for `name`; results go to `out_root/name`.
    pub fn new(name: &str, out_root: &Path) -> Result<Self, CliError> {
        let scenario = find(name)?;
        let values = scenario
            .keys
            .iter()
            .map(|k| (k.name.to_string(), k.default.to_string()))
            .collect();
        Ok(ScenarioConfig {
            scenario,
            values,
            out_dir: out_root.join(scenario.name),
        })
    }

    pub fn scenario(&self) -> &'static Scenario {
        self.scenario
    }

    pub fn name(&self) -> &'static str {
        self.scenario.name
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    pub fn declares(&self, key: &str) -> bool {
        self.scenario.keys.iter().any(|k| k.name == key)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let spec = self
            .scenario
            .keys
            .iter()
            .find(|k| k.name == key)
            .ok_or_else(|| {
                CliError::config(format!(
                    "unknown key '{key}' for scenario {}; accepted: {}",
                    self.name(),
                    self.scenario
                        .keys
                        .iter()
                        .map(|k| k.name)
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?;
        check_value(spec, value)?;
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Resolved values, keyed and ordered by name.
    pub fn echo(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("scenario {} reads undeclared key '{key}'", self.name()))
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.raw(key).parse().expect("validated on entry")
    }

    pub fn usize(&self, key: &str) -> usize {
        self.raw(key).parse().expect("validated on entry")
    }

    pub fn list(&self, key: &str) -> Vec<f64> {
        split_list(self.raw(key)).expect("validated on entry")
    }

    pub fn flag(&self, key: &str) -> bool {
        self.raw(key) == "true"
    }

    pub fn text(&self, key: &str) -> &str {
        self.raw(key)
    }

    /// Dimensionless units with the `alpha` and `mass` keys applied.
    pub fn units(&self) -> Result<UnitSystem, CliError> {
        Ok(UnitSystem::dimensionless()
            .with_alpha(self.f64("alpha"))?
            .with_mass(self.f64("mass"))?)
    }
}

/// Applies file or `--set` entries to a batch of scenarios. A plain key goes
/// to every selected scenario declaring it, and is an error if none does.
/// `scenario.key` targets one scenario; it is validated against that
/// scenario's keys and ignored when the scenario is not selected.
pub fn apply_entries<'a, I>(configs: &mut [ScenarioConfig], entries: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    for (k, v) in entries {
        if k == "scenario" {
            continue;
        }
        if let Some((scope, bare)) = k.split_once('.') {
            let scenario = find(scope)?;
            if !scenario.keys.iter().any(|key| key.name == bare) {
                return Err(CliError::config(format!(
                    "unknown key '{bare}' for scenario {scope}"
                )));
            }
            for cfg in configs.iter_mut().filter(|c| c.name() == scope) {
                cfg.set(bare, v)?;
            }
            continue;
        }
        let mut applied = false;
        for cfg in configs.iter_mut().filter(|c| c.declares(k)) {
            cfg.set(k, v)?;
            applied = true;
        }
        if !applied {
            return Err(CliError::config(format!(
                "unknown key '{k}' for the selected scenarios"
            )));
        }
    }
    Ok(())
}
