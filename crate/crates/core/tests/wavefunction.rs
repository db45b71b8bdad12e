use num_complex::Complex64;
use phasebridge::numerics::{make_grid, UnitSystem};
use phasebridge::wavefunction::{
    free_kernel, gaussian_packet, kernel_at, propagate_free, solve_eigenstates,
    solve_eigenstates_with, Discretization, LevelRequest, Potential,
};
use proptest::prelude::*;

/// Even ground state of a square well from `k tan(k a) = kappa`, by bisection.
fn square_well_ground(depth: f64, width: f64) -> f64 {
    let a = 0.5 * width;
    let matching = |e: f64| {
        let k = (2.0 * (e + depth)).sqrt();
        let kappa = (-2.0 * e).sqrt();
        k * (k * a).tan() - kappa
    };
    // The ground state has k a in (0, pi/2).
    let mut lo = -depth + 1e-12;
    let mut hi = ((std::f64::consts::FRAC_PI_2 / a).powi(2) / 2.0 - depth).min(-1e-12) - 1e-12;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if matching(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn finite_well_ground_level_matches_matching_condition() {
    let exact = square_well_ground(5.0, 2.0);
    assert!(exact < 0.0 && exact > -5.0);
    let units = UnitSystem::default();
    let well = Potential::finite_well(5.0, 2.0);
    let mut errors = Vec::new();
    for n in [512, 1024, 2048] {
        let grid = make_grid(n, 20.0).unwrap();
        let fd = solve_eigenstates_with(
            &well,
            &grid,
            &units,
            LevelRequest::Lowest(1),
            Discretization::FiniteDifference,
        )
        .unwrap();
        errors.push((fd.energies[0] - exact).abs());
    }
    assert!(errors[2] < 5e-3, "{errors:?}");
    assert!(errors[2] < errors[0], "{errors:?}");
    let grid = make_grid(1024, 20.0).unwrap();
    let spectral = solve_eigenstates(&well, &grid, &units, 2).unwrap();
    assert!(spectral.energies[0] < 0.0);
    // The step edge sits on a lattice site, an O(dx) width bias.
    assert!(
        (spectral.energies[0] - exact).abs() < 1e-2,
        "{} vs {exact}",
        spectral.energies[0]
    );
}

#[test]
fn free_packet_variance_is_convex_and_growing() {
    let grid = make_grid(512, 60.0).unwrap();
    let psi = gaussian_packet(&grid, 0.0, 1.0, 0.0, UnitSystem::default()).unwrap();
    let variances: Vec<f64> = (0..12)
        .map(|k| {
            propagate_free(&psi, 0.5 * k as f64)
                .unwrap()
                .0
                .position_variance()
        })
        .collect();
    for w in variances.windows(3) {
        assert!(w[1] >= w[0] - 1e-12);
        assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-10);
    }
}

#[test]
fn kernel_composition_with_regularized_times() {
    // Times in the lower half plane turn the kernels into decaying Gaussians;
    // the composed kernel is checked against the closed form.
    let units = UnitSystem::default();
    let t1 = Complex64::new(0.7, -0.4);
    let t2 = Complex64::new(1.1, -0.3);
    let h = 0.01;
    for &(x, x0) in &[(0.0, 0.0), (1.3, -0.4), (-2.0, 0.5)] {
        let mut sum = Complex64::new(0.0, 0.0);
        for i in -4000..=4000 {
            let x1 = i as f64 * h;
            sum += kernel_at(x - x1, t1, &units) * kernel_at(x1 - x0, t2, &units);
        }
        let composed = sum * h;
        let direct = kernel_at(x - x0, t1 + t2, &units);
        assert!(
            (composed - direct).norm() < 1e-6 * direct.norm(),
            "{composed} vs {direct}"
        );
    }
    // The real-time kernel is the boundary value of the continued one.
    let k = free_kernel(0.8, 1.5, 0.1, 0.0, &units).unwrap();
    assert!((k - kernel_at(0.7, Complex64::new(1.5, 0.0), &units)).norm() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_propagation_is_unitary(x0 in -3.0f64..3.0, p0 in -2.0f64..2.0, t in -3.0f64..3.0) {
        let grid = make_grid(256, 40.0).unwrap();
        let psi = gaussian_packet(&grid, x0, 1.0, p0, UnitSystem::default()).unwrap();
        let (out, _) = propagate_free(&psi, t).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kernel_is_symmetric(x in -5.0f64..5.0, x0 in -5.0f64..5.0, t in 0.01f64..10.0) {
        let u = UnitSystem::default();
        let a = free_kernel(x, t, x0, 0.0, &u).unwrap();
        let b = free_kernel(x0, t, x, 0.0, &u).unwrap();
        prop_assert!((a - b).norm() < 1e-14 * a.norm().max(1.0));
        prop_assert!((a.norm_sqr() - 1.0 / (2.0 * std::f64::consts::PI * t)).abs() < 1e-12 / t);
    }
}
