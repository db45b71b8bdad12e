use std::f64::consts::PI;

use phasebridge::numerics::make_grid;
use phasebridge::phasespace::wigner_of;
use phasebridge::wavefunction::{
    gaussian_packet, propagate_free, propagate_free_by_kernel, solve_eigenstates, Potential,
    WaveFunction,
};

use super::{grid_label, lattice_label, lattice_rows, units_label, Scenario};
use crate::config::{key, Kind};
use crate::error::CliError;
use crate::report::{Context, Metric};

pub const FREE_SPREAD: Scenario = Scenario {
    name: "free-spread",
    summary: "Free Gaussian spreading: variance law, kernel quadrature and kernel composition",
    keys: &[
        key("n", Kind::Count, "1024", "grid points"),
        key("length", Kind::Positive, "40", "domain length"),
        key("center", Kind::Float, "0", "initial packet position"),
        key("width", Kind::Positive, "1", "initial position spread"),
        key("momentum", Kind::Float, "0", "initial mean momentum"),
        key("mass", Kind::Positive, "1", "particle mass"),
        key("alpha", Kind::Positive, "1", "action constant"),
        key("times", Kind::List, "0.5,1,2,4", "sampling times"),
        key("split", Kind::List, "1,1.5", "two intervals composed by the kernel"),
    ],
    run: free_spread,
};

pub const EIGENSPECTRUM: Scenario = Scenario {
    name: "eigenspectrum",
    summary: "Oscillator levels and Wigner functions of the two lowest states",
    keys: &[
        key("n", Kind::Count, "512", "grid points"),
        key("length", Kind::Positive, "32", "domain length"),
        key("omega", Kind::Positive, "1", "oscillator frequency"),
        key("mass", Kind::Positive, "1", "particle mass"),
        key("alpha", Kind::Positive, "1", "action constant"),
        key("levels", Kind::Count, "6", "number of levels"),
        key("dump_stride", Kind::Count, "4", "lattice stride of the Wigner dump"),
    ],
    run: eigenspectrum,
};

/// L2 distance on the grid.
fn l2_distance(a: &WaveFunction, b: &WaveFunction) -> f64 {
    let sum: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    (sum * a.grid().spacing()).sqrt()
}

fn free_spread(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let units = cfg.units()?;
    let grid = make_grid(cfg.usize("n"), cfg.f64("length"))?;
    let sigma = cfg.f64("width");
    let psi0 = gaussian_packet(&grid, cfg.f64("center"), sigma, cfg.f64("momentum"), units)?;
    let times = cfg.list("times");
    if times.iter().any(|&t| !(t > 0.0)) {
        return Err(CliError::config("times must be positive"));
    }
    let split = cfg.list("split");
    if split.len() != 2 || split.iter().any(|&t| !(t > 0.0)) {
        return Err(CliError::config("split takes two positive intervals"));
    }

    let mut variance_error: f64 = 0.0;
    let mut kernel_error: f64 = 0.0;
    let mut variance_rows = Vec::new();
    let mut profiles = Vec::new();
    for &t in &times {
        let (spectral, escape) = propagate_free(&psi0, t)?;
        if let Some(e) = escape {
            ctx.note(format!("packet tail {:e} reaches the boundary at t = {t}", e.tail));
        }
        let spread = units.alpha() * t / (2.0 * units.mass() * sigma * sigma);
        let exact = sigma * sigma * (1.0 + spread * spread);
        let numeric = spectral.position_variance();
        variance_error = variance_error.max((numeric / exact - 1.0).abs());
        variance_rows.push(vec![t, numeric, exact]);
        let by_kernel = propagate_free_by_kernel(&psi0, t)?;
        kernel_error = kernel_error.max(l2_distance(&by_kernel, &spectral));
        profiles.push(spectral.density());
    }
    ctx.metric(Metric::at_most("variance_law_error", variance_error, 1e-6));
    ctx.metric(Metric::at_most("kernel_vs_spectral", kernel_error, 1e-8));

    let (t1, t2) = (split[0], split[1]);
    let stepwise = propagate_free_by_kernel(&propagate_free_by_kernel(&psi0, t1)?, t2)?;
    let direct = propagate_free_by_kernel(&psi0, t1 + t2)?;
    ctx.metric(Metric::at_most(
        "kernel_composition",
        l2_distance(&stepwise, &direct),
        1e-6,
    ));

    let units_text = units_label(&units);
    ctx.write_csv(
        "variance.csv",
        &format!("{} width={sigma}", grid_label(&grid)),
        &units_text,
        &["t", "variance", "exact"],
        variance_rows,
    )?;
    let mut columns = vec!["x".to_string()];
    columns.extend(times.iter().map(|t| format!("density_t{t}")));
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    let x = grid.points();
    ctx.write_csv(
        "density.csv",
        &grid_label(&grid),
        &units_text,
        &columns,
        (0..x.len()).map(|i| {
            std::iter::once(x[i])
                .chain(profiles.iter().map(|p| p[i]))
                .collect()
        }),
    )
}

fn eigenspectrum(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let units = cfg.units()?;
    let omega = cfg.f64("omega");
    let grid = make_grid(cfg.usize("n"), cfg.f64("length"))?;
    let levels = cfg.usize("levels");
    if levels < 2 {
        return Err(CliError::config("levels must be at least 2"));
    }
    let potential = Potential::harmonic(omega, units.mass());
    let solution = solve_eigenstates(&potential, &grid, &units, levels)?;

    let quantum = units.alpha() * omega;
    let level_rows: Vec<Vec<f64>> = solution
        .energies
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let exact = (k as f64 + 0.5) * quantum;
            vec![k as f64, e, exact, e - exact]
        })
        .collect();
    let worst_level = level_rows.iter().map(|r| r[3].abs()).fold(0.0, f64::max);
    ctx.metric(Metric::at_most("max_level_error", worst_level, 1e-6));
    ctx.metric(Metric::at_most(
        "orthonormality_error",
        solution.orthonormality_error(),
        1e-10,
    ));

    let ground = solution.wavefunction(0, units)?;
    let first = solution.wavefunction(1, units)?;
    let q0 = wigner_of(&ground, units.alpha())?;
    let q1 = wigner_of(&first, units.alpha())?;
    let g = q0.grid();
    let (i0, j0) = (g.x.nearest_index(0.0), g.p.nearest_index(0.0));
    let origin = 1.0 / (PI * units.alpha());
    ctx.metric(Metric::absolute("wigner_ground_origin", q0.at(i0, j0), origin, 1e-6));
    ctx.metric(Metric::absolute("wigner_first_origin", q1.at(i0, j0), -origin, 1e-6));

    let momenta: Vec<f64> = (0..g.p.n_points()).map(|j| g.p.point(j)).collect();
    let sup = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let mut position_error: f64 = 0.0;
    let mut momentum_error: f64 = 0.0;
    for (q, psi) in [(&q0, &ground), (&q1, &first)] {
        position_error = position_error.max(sup(&q.position_marginal(), &psi.density()));
        momentum_error =
            momentum_error.max(sup(&q.momentum_marginal(), &psi.momentum_density_at(&momenta)));
    }
    ctx.metric(Metric::at_most("position_marginal_error", position_error, 1e-8));
    ctx.metric(Metric::at_most("momentum_marginal_error", momentum_error, 1e-8));

    let units_text = format!("{} omega={omega}", units_label(&units));
    ctx.write_csv(
        "levels.csv",
        &grid_label(&grid),
        &units_text,
        &["level", "energy", "exact", "error"],
        level_rows,
    )?;
    let mut columns = vec!["x".to_string()];
    columns.extend((0..levels).map(|k| format!("state{k}")));
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    let x = grid.points();
    ctx.write_csv(
        "states.csv",
        &grid_label(&grid),
        &units_text,
        &columns,
        (0..x.len()).map(|i| {
            std::iter::once(x[i])
                .chain(solution.states.iter().map(|s| s[i]))
                .collect()
        }),
    )?;
    let stride = cfg.usize("dump_stride");
    ctx.write_csv(
        "wigner.csv",
        &lattice_label(&q0, stride),
        &units_text,
        &["x", "p", "ground", "first"],
        lattice_rows(&[&q0, &q1], stride),
    )
}
