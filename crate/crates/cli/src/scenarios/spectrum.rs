use std::f64::consts::PI;

use phasebridge::numerics::UnitSystem;
use phasebridge::zeropoint::{commutator_integral, commutator_quadrature, gamma_of, ZeroPointSpectrum};

use super::Scenario;
use crate::config::{key, Kind};
use crate::error::CliError;
use crate::report::{Context, Metric};

/// Radiation-reaction time of the electron quoted in the literature, seconds.
const ELECTRON_GAMMA_REFERENCE: f64 = 6.3e-24;

pub const COMMUTATOR: Scenario = Scenario {
    name: "commutator",
    summary: "Position-momentum commutator from the zero-point spectrum; fixes the action constant",
    keys: &[
        key("gammas", Kind::List, "1e-6,1e-3,1", "radiation-reaction times to compare"),
        key("hbar", Kind::Positive, "1", "action constant of the spectrum"),
        key("light_speed", Kind::Positive, "1", "speed of light"),
        key("hbar_scales", Kind::List, "0.5,2,4", "multipliers for the linearity check"),
        key("cutoffs", Kind::List, "1e1,1e2,1e3,1e4,1e5,1e6", "truncations in units of 1/gamma"),
    ],
    run: commutator,
};

fn commutator(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let hbar = cfg.f64("hbar");
    let spectrum = ZeroPointSpectrum::new(hbar, cfg.f64("light_speed"), 0.0, 1.0)?;
    let gammas = cfg.list("gammas");

    let values = gammas
        .iter()
        .map(|&g| commutator_integral(g, &spectrum))
        .collect::<Result<Vec<f64>, _>>()?;
    let ratios: Vec<f64> = values.iter().map(|v| v / hbar).collect();
    let worst = ratios
        .iter()
        .copied()
        .max_by(|a, b| (a - PI).abs().total_cmp(&(b - PI).abs()))
        .expect("non-empty list");
    ctx.metric(Metric::relative("integral_over_hbar", worst, PI, 1e-10));
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &r| (l.min(r), h.max(r)));
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    ctx.metric(Metric::at_most(
        "charge_independence_spread",
        (hi - lo) / mean,
        1e-9,
    ));

    let reference_gamma = gammas[0];
    let mut linearity: f64 = 0.0;
    for &s in &cfg.list("hbar_scales") {
        let scaled = commutator_integral(reference_gamma, &spectrum.with_hbar(s * hbar)?)?;
        linearity = linearity.max((scaled / (s * values[0]) - 1.0).abs());
    }
    ctx.metric(Metric::at_most("hbar_linearity", linearity, 1e-12));

    let electron = gamma_of(&UnitSystem::electron_cgs());
    ctx.metric(Metric::relative(
        "electron_gamma_seconds",
        electron,
        ELECTRON_GAMMA_REFERENCE,
        0.02,
    ));
    ctx.note(format!(
        "the integral evaluates to pi * hbar = {:.12} * hbar, not hbar",
        mean
    ));

    let units = format!("hbar={hbar} light_speed={}", spectrum.light_speed());
    ctx.write_csv(
        "gammas.csv",
        "none",
        &units,
        &["gamma", "integral", "integral_over_hbar"],
        gammas
            .iter()
            .zip(&values)
            .map(|(g, v)| vec![*g, *v, v / hbar]),
    )?;
    let truncated = cfg
        .list("cutoffs")
        .iter()
        .map(|&c| {
            let q = commutator_quadrature(reference_gamma, c / reference_gamma, &spectrum)?;
            Ok(vec![c, q.value / hbar, 2.0 * c.atan()])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    ctx.write_csv(
        "truncation.csv",
        &format!("gamma={reference_gamma}"),
        &units,
        &["cutoff_times_gamma", "integral_over_hbar", "closed_form"],
        truncated,
    )
}
