use phasebridge::kinetics::{
    equilibrium_diffusion, evolve_fokker_planck, evolve_liouville, KineticParameters,
};
use phasebridge::numerics::{make_grid, PhaseSpaceGrid};
use phasebridge::phasespace::PhaseSpaceDensity;
use phasebridge::wavefunction::Potential;

use super::{lattice_label, lattice_rows, units_label, Scenario};
use crate::config::{key, Kind};
use crate::error::CliError;
use crate::report::{Context, Metric};

pub const EQUILIBRIUM: Scenario = Scenario {
    name: "fokker-planck-equilibrium",
    summary: "Radiation reaction balanced by compensating diffusion relaxes to ground-state spreads",
    keys: &[
        key("n", Kind::Count, "128", "lattice points per axis"),
        key("length", Kind::Positive, "16", "position domain length"),
        key("p_length", Kind::Positive, "16", "momentum domain length"),
        key("omega", Kind::Positive, "1", "oscillator frequency"),
        key("mass", Kind::Positive, "1", "particle mass"),
        key("alpha", Kind::Positive, "1", "action constant"),
        key("gamma", Kind::Positive, "0.1", "radiation-reaction time"),
        key("dt", Kind::Positive, "0.05", "time step"),
        key("steps", Kind::Count, "2000", "number of steps"),
        key("chunk", Kind::Count, "100", "steps between recorded moments"),
        key("var_x0", Kind::Positive, "0.2", "initial position variance"),
        key("var_p0", Kind::Positive, "1", "initial momentum variance"),
        key("check_steps", Kind::Count, "20", "states used for the undamped single-step check"),
        key("dump_stride", Kind::Count, "1", "lattice stride of the field dump"),
    ],
    run: equilibrium,
};

fn equilibrium(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let units = cfg.units()?;
    let (omega, mass, alpha) = (cfg.f64("omega"), units.mass(), units.alpha());
    let potential = Potential::harmonic(omega, mass);
    let n = cfg.usize("n");
    let grid = PhaseSpaceGrid::new(
        make_grid(n, cfg.f64("length"))?,
        make_grid(n, cfg.f64("p_length"))?,
    );
    let gamma = cfg.f64("gamma");
    let dt = cfg.f64("dt");
    let diffusion = equilibrium_diffusion(omega, gamma, &units)?;
    let w0 = PhaseSpaceDensity::gaussian(
        grid,
        units,
        (0.0, 0.0),
        (cfg.f64("var_x0"), cfg.f64("var_p0")),
    )?;

    let (steps, chunk) = (cfg.usize("steps"), cfg.usize("chunk"));
    let mut history = Vec::new();
    let mut w = w0.clone();
    let mut done = 0;
    while done < steps {
        let k = chunk.min(steps - done);
        let params = KineticParameters::new(gamma, diffusion, dt, k)?;
        w = evolve_fokker_planck(&w, &potential, &params)?;
        done += k;
        let (_, _, vx, vp) = w.moments();
        history.push(vec![done as f64 * dt, vx, vp]);
    }
    let (_, _, vx, vp) = w.moments();
    ctx.metric(Metric::relative("var_x", vx, alpha / (2.0 * mass * omega), 0.01));
    ctx.metric(Metric::relative("var_p", vp, mass * alpha * omega / 2.0, 0.01));
    ctx.metric(Metric::at_most("mass_drift", (w.mass() - w0.mass()).abs(), 1e-10));

    // Without reaction or noise one step must reproduce the Liouville step.
    let undamped = KineticParameters::new(0.0, 0.0, dt, 1)?;
    let mut probe = w0.clone();
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.usize("check_steps") {
        let a = evolve_fokker_planck(&probe, &potential, &undamped)?;
        let b = evolve_liouville(&probe, &potential, dt, 1)?;
        let peak = b.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        worst = worst.max(diff / peak);
        probe = evolve_liouville(&probe, &potential, dt, 10)?;
    }
    ctx.metric(Metric::at_most("liouville_step_difference", worst, 1e-12));

    let units_text = format!(
        "{} gamma={gamma} diffusion={diffusion:e}",
        units_label(&units)
    );
    ctx.write_csv(
        "moments.csv",
        &format!("dt={dt} steps={steps}"),
        &units_text,
        &["t", "var_x", "var_p"],
        history,
    )?;
    let stride = cfg.usize("dump_stride");
    ctx.write_csv(
        "equilibrium.csv",
        &lattice_label(&w, stride),
        &units_text,
        &["x", "p", "density"],
        lattice_rows(&[&w], stride),
    )
}
