use std::f64::consts::PI;

use phasebridge::kinetics::correspondence_paths;
use phasebridge::numerics::make_grid;
use phasebridge::wavefunction::{gaussian_packet, Potential, WaveFunction};

use super::{lattice_label, lattice_rows, linspace, units_label, Scenario};
use crate::config::{key, Kind, ScenarioConfig};
use crate::error::CliError;
use crate::report::{Context, Metric};

const ROOT_HALF: &str = "0.7071067811865476";

pub const HARMONIC: Scenario = Scenario {
    name: "harmonic-correspondence",
    summary: "Liouville-advected Wigner density vs Schrodinger evolution in a quadratic well",
    keys: &[
        key("n", Kind::Count, "256", "lattice points per axis"),
        key("length", Kind::Positive, "44", "position domain length"),
        key("center", Kind::Float, "5", "initial packet position"),
        key("width", Kind::Positive, ROOT_HALF, "initial position spread"),
        key("omega", Kind::Positive, "1", "oscillator frequency"),
        key("mass", Kind::Positive, "1", "particle mass"),
        key("alpha", Kind::Positive, "1", "action constant"),
        key("dt", Kind::Positive, "0.001", "time step"),
        key("periods", Kind::Positive, "1", "horizon in oscillation periods"),
        key("refine", Kind::Flag, "true", "repeat on a doubled lattice"),
        key("dump_stride", Kind::Count, "2", "lattice stride of the field dump"),
    ],
    run: harmonic,
};

pub const QUARTIC: Scenario = Scenario {
    name: "quartic-deviation",
    summary: "Same two-path comparison in an anharmonic well, where the paths separate",
    keys: &[
        key("lambda", Kind::Positive, "0.25", "coefficient of x^4"),
        key("n", Kind::Count, "128", "coarsest lattice points per axis"),
        key("refinements", Kind::Count, "2", "lattice doublings after the coarsest"),
        key("length", Kind::Positive, "20", "position domain length"),
        key("center", Kind::Float, "1", "initial packet position"),
        key("width", Kind::Positive, ROOT_HALF, "initial position spread"),
        key("mass", Kind::Positive, "1", "particle mass"),
        key("alpha", Kind::Positive, "1", "action constant"),
        key("t", Kind::Positive, "1", "horizon"),
        key("dt", Kind::Positive, "0.001", "time step"),
        key("dump_stride", Kind::Count, "1", "lattice stride of the field dump"),
    ],
    run: quartic,
};

pub const ALPHA_SCAN: Scenario = Scenario {
    name: "alpha-scan",
    summary: "Two-path residual against the transform constant; minimal at the dynamical one",
    keys: &[
        key("n", Kind::Count, "128", "lattice points per axis"),
        key("length", Kind::Positive, "20", "position domain length"),
        key("center", Kind::Float, "1", "initial packet position"),
        key("width", Kind::Positive, ROOT_HALF, "initial position spread"),
        key("omega", Kind::Positive, "1", "oscillator frequency"),
        key("mass", Kind::Positive, "1", "particle mass"),
        key("alpha", Kind::Positive, "1", "action constant of the dynamics"),
        key("t", Kind::Positive, "1.5707963267948966", "horizon"),
        key("dt", Kind::Positive, "0.001", "time step"),
        key("alpha_min", Kind::Positive, "0.5", "smallest transform constant"),
        key("alpha_max", Kind::Positive, "2", "largest transform constant"),
        key("points", Kind::Count, "13", "scan points including both ends"),
    ],
    run: alpha_scan,
};

fn packet(cfg: &ScenarioConfig, n: usize) -> Result<WaveFunction, CliError> {
    let grid = make_grid(n, cfg.f64("length"))?;
    Ok(gaussian_packet(
        &grid,
        cfg.f64("center"),
        cfg.f64("width"),
        0.0,
        cfg.units()?,
    )?)
}

fn harmonic(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let units = cfg.units()?;
    let omega = cfg.f64("omega");
    let potential = Potential::harmonic(omega, units.mass());
    let t = cfg.f64("periods") * 2.0 * PI / omega;
    let dt = cfg.f64("dt");
    let n = cfg.usize("n");

    let paths = correspondence_paths(&packet(cfg, n)?, &potential, t, dt, units.alpha())?;
    let residual = paths.classical.relative_distance(&paths.quantum)?;
    ctx.metric(Metric::at_most("residual", residual, 5e-4));
    let mut table = vec![vec![n as f64, residual]];

    if cfg.flag("refine") {
        let fine = correspondence_paths(&packet(cfg, 2 * n)?, &potential, t, dt, units.alpha())?;
        let refined = fine.classical.relative_distance(&fine.quantum)?;
        ctx.metric(Metric::at_most("refined_residual", refined, residual));
        table.push(vec![(2 * n) as f64, refined]);
    }

    let stride = cfg.usize("dump_stride");
    ctx.write_csv(
        "residuals.csv",
        &format!("length={} t={t} steps={}", cfg.f64("length"), paths.steps),
        &units_label(&units),
        &["n", "residual"],
        table,
    )?;
    ctx.write_csv(
        "fields.csv",
        &lattice_label(&paths.classical, stride),
        &units_label(&units),
        &["x", "p", "classical", "quantum"],
        lattice_rows(&[&paths.classical, &paths.quantum], stride),
    )
}

fn quartic(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let units = cfg.units()?;
    let potential = Potential::quartic(cfg.f64("lambda"));
    let (t, dt) = (cfg.f64("t"), cfg.f64("dt"));
    let sizes: Vec<usize> = (0..=cfg.usize("refinements"))
        .map(|k| cfg.usize("n") << k)
        .collect();

    let mut table = Vec::new();
    let mut coarse_paths = None;
    for &n in &sizes {
        let paths = correspondence_paths(&packet(cfg, n)?, &potential, t, dt, units.alpha())?;
        table.push(vec![n as f64, paths.classical.relative_distance(&paths.quantum)?]);
        coarse_paths.get_or_insert(paths);
    }
    let coarse = table[0][1];
    let finest = table[table.len() - 1][1];
    ctx.metric(Metric::at_least("residual", coarse, 0.01));
    ctx.metric(Metric::at_most(
        "refinement_change",
        (finest - coarse).abs() / coarse,
        0.2,
    ));

    let paths = coarse_paths.expect("at least one lattice");
    let stride = cfg.usize("dump_stride");
    ctx.write_csv(
        "residuals.csv",
        &format!("length={} t={t} steps={}", cfg.f64("length"), paths.steps),
        &units_label(&units),
        &["n", "residual"],
        table,
    )?;
    ctx.write_csv(
        "fields.csv",
        &lattice_label(&paths.classical, stride),
        &units_label(&units),
        &["x", "p", "classical", "quantum"],
        lattice_rows(&[&paths.classical, &paths.quantum], stride),
    )
}

fn alpha_scan(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let units = cfg.units()?;
    let alpha = units.alpha();
    let potential = Potential::harmonic(cfg.f64("omega"), units.mass());
    let (lo, hi, points) = (cfg.f64("alpha_min"), cfg.f64("alpha_max"), cfg.usize("points"));
    if !(lo < hi) || points < 3 {
        return Err(CliError::config("alpha scan needs alpha_min < alpha_max and at least 3 points"));
    }
    let scan = linspace(lo, hi, points);
    let on_scan = |a: f64| scan.iter().position(|&s| (s - a).abs() <= 1e-12 * a);
    let (Some(matched), Some(doubled)) = (on_scan(alpha), on_scan(2.0 * alpha)) else {
        return Err(CliError::config(format!(
            "the scan must contain alpha = {alpha} and 2 alpha as grid points"
        )));
    };

    let psi = packet(cfg, cfg.usize("n"))?;
    let (t, dt) = (cfg.f64("t"), cfg.f64("dt"));
    let residuals = scan
        .iter()
        .map(|&a| {
            let paths = correspondence_paths(&psi, &potential, t, dt, a)?;
            Ok(paths.classical.relative_distance(&paths.quantum)?)
        })
        .collect::<Result<Vec<f64>, CliError>>()?;

    let best = (0..points)
        .min_by(|&a, &b| residuals[a].total_cmp(&residuals[b]))
        .expect("non-empty scan");
    let step = (hi - lo) / (points - 1) as f64;
    ctx.metric(Metric::absolute("best_alpha", scan[best], alpha, 0.5 * step));
    ctx.metric(Metric::at_least(
        "mismatch_ratio",
        residuals[doubled] / residuals[matched],
        100.0,
    ));
    ctx.write_csv(
        "scan.csv",
        &format!(
            "n={} length={} t={t}",
            cfg.usize("n"),
            cfg.f64("length")
        ),
        &units_label(&units),
        &["alpha_transform", "residual"],
        scan.iter().zip(&residuals).map(|(a, r)| vec![*a, *r]),
    )
}
