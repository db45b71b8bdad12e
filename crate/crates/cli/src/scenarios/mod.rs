mod correspondence;
mod emission;
mod midpoint;
mod quantum;
mod spectrum;
mod transport;

use phasebridge::numerics::{Grid1D, UnitSystem};
use phasebridge::phasespace::PhaseSpaceDensity;

use crate::config::Key;
use crate::error::CliError;
use crate::report::Context;

pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    pub keys: &'static [Key],
    pub run: fn(&mut Context) -> Result<(), CliError>,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario").field("name", &self.name).finish()
    }
}

pub static SCENARIOS: [Scenario; 10] = [
    correspondence::HARMONIC,
    correspondence::QUARTIC,
    correspondence::ALPHA_SCAN,
    transport::EQUILIBRIUM,
    spectrum::COMMUTATOR,
    quantum::FREE_SPREAD,
    quantum::EIGENSPECTRUM,
    emission::THRESHOLD,
    emission::RECOIL,
    midpoint::MVT_SCALING,
];

/// `(name, summary)` for every scenario in a fixed order.
pub fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    SCENARIOS.iter().map(|s| (s.name, s.summary)).collect()
}

pub fn find(name: &str) -> Result<&'static Scenario, CliError> {
    SCENARIOS.iter().find(|s| s.name == name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown scenario '{name}'; valid names: {}",
            SCENARIOS.iter().map(|s| s.name).collect::<Vec<_>>().join(", ")
        ))
    })
}

fn grid_label(g: &Grid1D) -> String {
    format!("n={} length={} spacing={:e}", g.n_points(), g.length(), g.spacing())
}

fn lattice_label(w: &PhaseSpaceDensity, stride: usize) -> String {
    let g = w.grid();
    format!(
        "x: {}; p: {}; stride={stride}",
        grid_label(&g.x),
        grid_label(&g.p)
    )
}

fn units_label(u: &UnitSystem) -> String {
    format!("alpha={} mass={}", u.alpha(), u.mass())
}

/// Rows `x, p, values...` over every `stride`-th lattice site of `fields`,
/// which must share one lattice.
fn lattice_rows(fields: &[&PhaseSpaceDensity], stride: usize) -> Vec<Vec<f64>> {
    let g = fields[0].grid();
    let mut rows = Vec::new();
    for i in (0..g.x.n_points()).step_by(stride) {
        for j in (0..g.p.n_points()).step_by(stride) {
            let mut row = vec![g.x.point(i), g.p.point(j)];
            row.extend(fields.iter().map(|w| w.at(i, j)));
            rows.push(row);
        }
    }
    rows
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}
