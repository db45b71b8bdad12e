use std::f64::consts::PI;

use num_complex::Complex64;
use phasebridge::numerics::{make_grid, Grid1D, PhaseSpaceGrid, UnitSystem};
use phasebridge::phasespace::{
    factorization_residual, factorize, transform_of_density, wigner_of, PhaseSpaceDensity,
};
use phasebridge::wavefunction::{gaussian_packet, solve_eigenstates, Potential, WaveFunction};
use proptest::prelude::*;

fn oscillator_states(alpha: f64) -> (Grid1D, Vec<WaveFunction>) {
    let grid = make_grid(512, 32.0).unwrap();
    let units = UnitSystem::default().with_alpha(alpha).unwrap();
    let sol = solve_eigenstates(&Potential::harmonic(1.0, 1.0), &grid, &units, 2).unwrap();
    let states = (0..2)
        .map(|n| sol.wavefunction(n, units).unwrap())
        .collect();
    (grid, states)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn oscillator_wigner_values_at_origin() {
    let (grid, states) = oscillator_states(1.0);
    let n = grid.n_points();
    let q0 = wigner_of(&states[0], 1.0).unwrap();
    let q1 = wigner_of(&states[1], 1.0).unwrap();
    assert!((q0.at(n / 2, n / 2) - 1.0 / PI).abs() < 1e-6);
    assert!((q1.at(n / 2, n / 2) + 1.0 / PI).abs() < 1e-6);
    // Closed form (1/pi) exp(-(x^2 + p^2)) for the ground state.
    let g = q0.grid();
    let worst = (0..n)
        .step_by(7)
        .flat_map(|i| (0..n).step_by(5).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (x, p) = (g.x.point(i), g.p.point(j));
            (q0.at(i, j) - (-(x * x + p * p)).exp() / PI).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn marginals_reproduce_densities() {
    for alpha in [0.5, 1.0, 2.0] {
        let (_, states) = oscillator_states(alpha);
        for psi in &states {
            let q = wigner_of(psi, alpha).unwrap();
            assert!((q.mass() - 1.0).abs() < 1e-8);
            assert!(max_abs_diff(&q.position_marginal(), &psi.density()) < 1e-8);
            let momenta: Vec<f64> = (0..q.grid().p.n_points())
                .map(|j| q.grid().p.point(j))
                .collect();
            let direct = psi.momentum_density_at(&momenta);
            assert!(
                max_abs_diff(&q.momentum_marginal(), &direct) < 1e-8,
                "alpha {alpha}"
            );
        }
    }
}

#[test]
fn ground_momentum_variance_and_boost() {
    let (_, states) = oscillator_states(1.0);
    let q = wigner_of(&states[0], 1.0).unwrap();
    let (_, mp, _, vp) = q.moments();
    assert!(mp.abs() < 1e-10);
    assert!((vp - 0.5).abs() < 1e-6);
    let pm = q.momentum_marginal();
    let n = pm.len();
    for j in 1..n {
        assert!((pm[j] - pm[n - j]).abs() < 1e-12);
    }

    let grid = make_grid(512, 40.0).unwrap();
    let boosted = gaussian_packet(&grid, 0.0, 1.0, 2.0, UnitSystem::default()).unwrap();
    let qb = wigner_of(&boosted, 1.0).unwrap();
    let (_, mean_p, _, _) = qb.moments();
    assert!((mean_p - 2.0).abs() < 1e-8);
}

#[test]
fn boost_translates_in_momentum() {
    // p0 = 4 pi alpha / L is two lattice steps of the Wigner momentum axis.
    let grid = make_grid(256, 32.0).unwrap();
    let units = UnitSystem::default();
    let step = 2.0 * PI / 32.0;
    let rest = gaussian_packet(&grid, 0.5, 1.2, 0.0, units).unwrap();
    let moving = gaussian_packet(&grid, 0.5, 1.2, 2.0 * step, units).unwrap();
    let q0 = wigner_of(&rest, 1.0).unwrap();
    let q1 = wigner_of(&moving, 1.0).unwrap();
    let n = grid.n_points();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n - 4 {
            worst = worst.max((q1.at(i, j + 4) - q0.at(i, j)).abs());
        }
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn transform_inverts_to_the_pair_product() {
    // Offsets reach |y| < L/4; beyond that the transform is zero by construction
    // and the pair product is negligible for this packet.
    let grid = make_grid(256, 40.0).unwrap();
    let psi = gaussian_packet(&grid, -1.0, 1.3, 0.6, UnitSystem::default()).unwrap();
    let q = wigner_of(&psi, 1.0).unwrap();
    let t = transform_of_density(&q, 1.0).unwrap();
    let n = grid.n_points();
    let amp = psi.values();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for k in 0..n {
            let m = k as i64 - (n / 2) as i64;
            let a = amp[(i as i64 - m).rem_euclid(n as i64) as usize];
            let b = amp[(i as i64 + m).rem_euclid(n as i64) as usize];
            let expected = if m.unsigned_abs() < (n / 4) as u64 {
                a.conj() * b
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((t.at(i, k) - expected).norm());
        }
    }
    assert!(worst < 1e-10, "{worst}");
    assert!(t.hermiticity_error() < 1e-10);
}

#[test]
fn pure_states_factorize_and_mixtures_do_not() {
    let (grid, states) = oscillator_states(1.0);
    let q0 = wigner_of(&states[0], 1.0).unwrap();
    let q1 = wigner_of(&states[1], 1.0).unwrap();
    let t0 = transform_of_density(&q0, 1.0).unwrap();
    let pure = factorize(&t0).unwrap();
    assert!(pure.residual <= 1e-8, "{}", pure.residual);
    // The recovered amplitude matches the state up to the block phases.
    let fitted: Vec<f64> = pure.amplitude.iter().map(|z| z.norm_sqr()).collect();
    assert!(max_abs_diff(&fitted, &states[0].density()) < 1e-8);

    let mixed_values: Vec<f64> = q0
        .values()
        .iter()
        .zip(q1.values())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let mixed = PhaseSpaceDensity::new(*q0.grid(), mixed_values, UnitSystem::default()).unwrap();
    let tm = transform_of_density(&mixed, 1.0).unwrap();
    assert!(factorization_residual(&tm).unwrap() >= 0.1);

    let scaled_values: Vec<f64> = q0.values().iter().map(|v| 3.5 * v).collect();
    let scaled = PhaseSpaceDensity::new(*q0.grid(), scaled_values, UnitSystem::default()).unwrap();
    let ts = transform_of_density(&scaled, 1.0).unwrap();
    assert!((factorization_residual(&ts).unwrap() - pure.residual).abs() < 1e-9);

    let zero = PhaseSpaceDensity::new(
        *q0.grid(),
        vec![0.0; grid.n_points().pow(2)],
        UnitSystem::default(),
    )
    .unwrap();
    assert!(factorization_residual(&transform_of_density(&zero, 1.0).unwrap()).is_err());
}

#[test]
fn kinetic_lattice_transform_cannot_be_factorized() {
    let x = make_grid(32, 16.0).unwrap();
    let g = PhaseSpaceGrid::kinetic(x, 32, 1.0).unwrap();
    let w = PhaseSpaceDensity::gaussian(g, UnitSystem::default(), (0.0, 0.0), (1.0, 1.0)).unwrap();
    let t = transform_of_density(&w, 1.0).unwrap();
    assert!(factorization_residual(&t).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn wigner_marginals_hold_for_random_packets(
        x0 in -2.0f64..2.0, width in 0.8f64..1.6, p0 in -1.5f64..1.5, alpha in 0.5f64..2.0,
    ) {
        let grid = make_grid(256, 48.0).unwrap();
        let units = UnitSystem::default().with_alpha(alpha).unwrap();
        let psi = gaussian_packet(&grid, x0, width, p0, units).unwrap();
        let q = wigner_of(&psi, alpha).unwrap();
        prop_assert!((q.mass() - 1.0).abs() < 1e-8);
        prop_assert!(max_abs_diff(&q.position_marginal(), &psi.density()) < 1e-8);
        prop_assert!(q.min_value() > -1e-10);
    }
}
