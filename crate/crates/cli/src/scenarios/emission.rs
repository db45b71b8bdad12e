use phasebridge::numerics::{make_grid, UnitSystem};
use phasebridge::photoelectric::{
    einstein_ke_max, emission_spectrum, max_velocity, recoil_kinematics, EmissionModel,
};
use phasebridge::wavefunction::Potential;
use phasebridge::Error;

use super::{units_label, Scenario};
use crate::config::{key, Kind, ScenarioConfig};
use crate::error::CliError;
use crate::report::{Context, Metric};

/// Potassium: work function and the measured (photon energy, kinetic
/// energy, speed) rows, in eV and m/s.
const POTASSIUM_WORK_FUNCTION_EV: f64 = 2.0;
const POTASSIUM_ROWS: [(f64, f64, f64); 3] = [(1.8, 0.0, 0.0), (2.3, 0.3, 3.25e5), (3.1, 1.1, 6.22e5)];

/// Electron-to-photon momentum ratio for a 3.1 eV photon and a 1.1 eV electron.
const REFERENCE_MOMENTUM_RATIO: f64 = 342.0;

pub const THRESHOLD: Scenario = Scenario {
    name: "photoelectric-threshold",
    summary: "Golden-rule emission from a bound level: resonant peak, Einstein slope, potassium table",
    keys: &[
        key("material", Kind::Choice(&["potassium"]), "potassium", "reference table"),
        key("depth", Kind::Positive, "5", "well depth"),
        key("well_width", Kind::Positive, "2", "well width"),
        key("n", Kind::Count, "16384", "grid points of the continuum box"),
        key("length", Kind::Positive, "512", "continuum box length"),
        key("sigma", Kind::Positive, "0.1", "energy width of the broadened delta"),
        key("field", Kind::Positive, "0.05", "drive amplitude"),
        key("time", Kind::Positive, "10", "interaction time"),
        key("frequencies", Kind::List, "5,6,7,8,9,10", "drive frequencies for the slope fit"),
        key("reference_frequency", Kind::Positive, "6", "drive frequency of the dumped spectrum"),
        key("mass", Kind::Positive, "1", "electron mass"),
        key("alpha", Kind::Positive, "1", "action constant"),
    ],
    run: threshold,
};

pub const RECOIL: Scenario = Scenario {
    name: "recoil",
    summary: "Planar momentum balance of photon, electron and atom",
    keys: &[
        key("photon_ev", Kind::Positive, "3.1", "photon energy (eV)"),
        key("electron_ev", Kind::Positive, "1.1", "electron kinetic energy (eV)"),
        key("angles_deg", Kind::List, "0,30,60,90,120,150,180", "electron emission angles"),
    ],
    run: recoil,
};

fn model(cfg: &ScenarioConfig, omega: f64) -> Result<EmissionModel, CliError> {
    Ok(EmissionModel {
        well: Potential::finite_well(cfg.f64("depth"), cfg.f64("well_width")),
        grid: make_grid(cfg.usize("n"), cfg.f64("length"))?,
        drive_amplitude: cfg.f64("field"),
        drive_frequency: omega,
        delta_width: cfg.f64("sigma"),
        interaction_time: cfg.f64("time"),
        units: cfg.units()?,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    num / den
}

fn threshold(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let units = cfg.units()?;
    let alpha = units.alpha();
    let sigma = cfg.f64("sigma");
    let frequencies = cfg.list("frequencies");
    if frequencies.len() < 2 || frequencies.iter().any(|&w| !(w > 0.0)) {
        return Err(CliError::config("frequencies needs at least two positive values"));
    }
    let no_peak = |w: f64| Error::Degenerate(format!("no emission at drive frequency {w}"));

    let reference_omega = cfg.f64("reference_frequency");
    let reference = emission_spectrum(&model(cfg, reference_omega)?)?;
    let peak = reference.peak_energy().ok_or_else(|| no_peak(reference_omega))?;
    let resonance = reference.ground_energy + alpha * reference_omega;
    ctx.metric(Metric::absolute("peak_offset", peak - resonance, 0.0, sigma));

    let mut peaks = Vec::new();
    for &w in &frequencies {
        let s = if w == reference_omega {
            reference.clone()
        } else {
            emission_spectrum(&model(cfg, w)?)?
        };
        let p = s.peak_energy().ok_or_else(|| no_peak(w))?;
        peaks.push(vec![w, p, s.ground_energy + alpha * w]);
    }
    let points: Vec<(f64, f64)> = peaks.iter().map(|r| (r[0], r[1])).collect();
    ctx.metric(Metric::relative(
        "einstein_slope",
        least_squares_slope(&points),
        alpha,
        0.01,
    ));

    // Ten widths below threshold the Gaussian line leaves nothing to absorb.
    let below = (reference.threshold - 10.0 * sigma) / alpha;
    if below > 0.0 {
        let quiet = emission_spectrum(&model(cfg, below)?)?;
        ctx.metric(Metric::at_most(
            "below_threshold_ratio",
            quiet.total_rate() / reference.total_rate(),
            1e-6,
        ));
    }

    let ev = UnitSystem::electron_ev();
    let mut table = Vec::new();
    for (photon, ke_ref, speed_ref) in POTASSIUM_ROWS {
        let ke = einstein_ke_max(photon / ev.alpha(), POTASSIUM_WORK_FUNCTION_EV, &ev)?;
        let speed = max_velocity(ke, &ev)?;
        ctx.metric(Metric::absolute(&format!("ke_ev_at_{photon}"), ke, ke_ref, 1e-9));
        if speed_ref == 0.0 {
            ctx.metric(Metric::absolute(&format!("speed_at_{photon}"), speed, 0.0, 0.0));
        } else {
            ctx.metric(Metric::relative(&format!("speed_at_{photon}"), speed, speed_ref, 0.005));
        }
        table.push(vec![photon, ke, speed]);
    }

    let grid = format!(
        "n={} length={} sigma={sigma} ground={:e} threshold={:e}",
        cfg.usize("n"),
        cfg.f64("length"),
        reference.ground_energy,
        reference.threshold
    );
    let units_text = units_label(&units);
    ctx.write_csv(
        "spectrum.csv",
        &format!("{grid} omega={reference_omega}"),
        &units_text,
        &["final_energy", "rate", "dipole"],
        reference
            .final_energies
            .iter()
            .zip(&reference.rates)
            .zip(&reference.dipoles)
            .map(|((e, r), d)| vec![*e, *r, *d]),
    )?;
    ctx.write_csv(
        "peaks.csv",
        &grid,
        &units_text,
        &["omega", "peak_energy", "resonance"],
        peaks,
    )?;
    ctx.write_csv(
        "potassium.csv",
        &format!("work_function_ev={POTASSIUM_WORK_FUNCTION_EV}"),
        "energy in eV, speed in m/s",
        &["photon_ev", "ke_max_ev", "speed"],
        table,
    )
}

fn recoil(ctx: &mut Context) -> Result<(), CliError> {
    let cfg = ctx.config;
    let units = UnitSystem::electron_ev();
    let (photon, electron) = (cfg.f64("photon_ev"), cfg.f64("electron_ev"));
    let mut worst_closure: f64 = 0.0;
    let mut ratio = f64::NAN;
    let mut rows = Vec::new();
    for &deg in &cfg.list("angles_deg") {
        let r = recoil_kinematics(photon, electron, deg.to_radians(), &units)?;
        worst_closure = worst_closure.max(r.closure_error());
        ratio = r.electron_momentum() / r.photon_momentum();
        rows.push(vec![
            deg,
            r.photon[1],
            r.electron[0],
            r.electron[1],
            r.atom[0],
            r.atom[1],
            r.closure_error(),
        ]);
    }
    ctx.metric(Metric::at_most("closure_error", worst_closure, 1e-15));
    ctx.metric(Metric::relative(
        "momentum_ratio",
        ratio,
        REFERENCE_MOMENTUM_RATIO,
        0.01,
    ));
    ctx.write_csv(
        "recoil.csv",
        "none",
        "momentum in eV s/m, angle in degrees from the photon direction",
        &[
            "angle_deg",
            "photon_py",
            "electron_px",
            "electron_py",
            "atom_px",
            "atom_py",
            "closure",
        ],
        rows,
    )
}
