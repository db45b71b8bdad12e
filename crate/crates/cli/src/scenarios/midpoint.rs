use phasebridge::phasespace::mvt_residual;
use phasebridge::wavefunction::Potential;

use super::Scenario;
use crate::config::{key, Kind};
use crate::error::CliError;
use crate::report::{Context, Metric};

pub const MVT_SCALING: Scenario = Scenario {
    name: "mvt-scaling",
    summary: "Midpoint-force replacement of a potential difference: exact for quadratics, cubic error otherwise",
    keys: &[
        key("lambda", Kind::Positive, "1", "coefficient of x^4"),
        key("omega", Kind::Positive, "1", "oscillator frequency of the quadratic check"),
        key("mass", Kind::Positive, "1", "mass of the quadratic check"),
        key("center", Kind::Float, "1", "midpoint of the quartic pairs"),
        key("delta", Kind::Positive, "0.1", "largest half separation"),
        key("halvings", Kind::Count, "4", "number of times delta is halved"),
        key("samples", Kind::List, "-2,-0.7,0.3,1.1,2", "points paired for the quadratic check"),
    ],
    run: mvt_scaling,
};

fn mvt_scaling(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let harmonic = Potential::harmonic(cfg.f64("omega"), cfg.f64("mass"));
    let samples = cfg.list("samples");
    let mut quadratic: f64 = 0.0;
    for &r in &samples {
        for &s in &samples {
            quadratic = quadratic.max(mvt_residual(&harmonic, r, s));
        }
    }
    ctx.metric(Metric::at_most("quadratic_residual", quadratic, 1e-14));

    let quartic = Potential::quartic(cfg.f64("lambda"));
    let center = cfg.f64("center");
    let target = quartic.third_derivative(center) / 24.0;
    if target == 0.0 {
        return Err(CliError::config("center must be nonzero so that V''' does not vanish"));
    }
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut delta = cfg.f64("delta");
    for _ in 0..=cfg.usize("halvings") {
        let residual = mvt_residual(&quartic, center + delta, center - delta);
        let ratio = residual / (2.0 * delta).powi(3);
        worst = worst.max((ratio / target.abs() - 1.0).abs());
        rows.push(vec![delta, residual, ratio, target.abs()]);
        delta *= 0.5;
    }
    ctx.metric(Metric::at_most("cubic_ratio_error", worst, 0.01));
    ctx.write_csv(
        "mvt.csv",
        &format!("center={center}"),
        &format!("lambda={}", cfg.f64("lambda")),
        &["delta", "residual", "ratio", "third_derivative_over_24"],
        rows,
    )
}
