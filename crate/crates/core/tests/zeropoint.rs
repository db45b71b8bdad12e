use std::f64::consts::PI;

use phasebridge::numerics::integrate_adaptive;
use phasebridge::zeropoint::{
    commutator_integral, commutator_quadrature, rho0, thermal_part, ZeroPointSpectrum,
};

fn spectrum(hbar: f64, c: f64) -> ZeroPointSpectrum {
    ZeroPointSpectrum::new(hbar, c, 0.0, 1.0).unwrap()
}

#[test]
fn commutator_does_not_depend_on_gamma() {
    let s = spectrum(1.0, 1.0);
    let values: Vec<f64> = [1e-6, 1e-3, 1.0]
        .iter()
        .map(|&g| commutator_integral(g, &s).unwrap())
        .collect();
    for v in &values {
        assert!((v - PI).abs() < 1e-10 * PI);
        assert!((v - values[0]).abs() < 1e-9);
    }
}

#[test]
fn commutator_is_linear_in_hbar() {
    let one = commutator_integral(1e-3, &spectrum(1.0, 1.0)).unwrap();
    let two = commutator_integral(1e-3, &spectrum(2.0, 1.0)).unwrap();
    assert!((two / one - 2.0).abs() < 1e-12);
}

#[test]
fn commutator_over_hbar_is_a_pure_number() {
    for gamma in [1e-9, 1e-6, 1e-3, 1.0, 1e3] {
        for c in [1e-3, 1.0, 1e3] {
            let hbar = 0.37;
            let v = commutator_integral(gamma, &spectrum(hbar, c)).unwrap();
            assert!((v / hbar - PI).abs() < 1e-10 * PI, "gamma {gamma}, c {c}");
        }
    }
}

#[test]
fn truncated_commutator_follows_the_arctangent_tail() {
    let s = spectrum(1.0, 1.0);
    let gamma = 1e-3;
    for reach in [1e3, 1e6] {
        let q = commutator_quadrature(gamma, reach / gamma, &s).unwrap();
        let exact = 2.0 * reach.atan();
        assert!((q.value - exact).abs() < 1e-10 * exact);
    }
    let full = commutator_integral(gamma, &s).unwrap();
    let near = commutator_quadrature(gamma, 1e3 / gamma, &s).unwrap().value;
    let far = commutator_quadrature(gamma, 1e6 / gamma, &s).unwrap().value;
    // The tail beyond u = gamma omega is 2 hbar (pi/2 - arctan u) ~ 2 hbar / u.
    assert!(((full - near) / full - 2e-3 / PI).abs() < 1e-8);
    assert!((full - far) / full < 1e-6);
}

#[test]
fn zero_point_part_diverges_linearly_and_thermal_part_converges() {
    let s = spectrum(1.0, 1.0);
    let temperature = 0.5;
    let moment = |f: &dyn Fn(f64) -> f64, hi: f64| {
        integrate_adaptive(f, 1.0, hi, 1e-13, 1e-12, 4096).unwrap().value
    };
    let zp = |w: f64| rho0(w, &s).unwrap() / w.powi(3);
    let th = |w: f64| thermal_part(w, temperature, &s).unwrap() / w.powi(3);
    let cutoffs = [10.0, 100.0, 1000.0];
    let zp_values: Vec<f64> = cutoffs.iter().map(|&h| moment(&zp, h)).collect();
    let th_values: Vec<f64> = cutoffs.iter().map(|&h| moment(&th, h)).collect();
    // Growth per unit cutoff is the constant hbar / 2 pi^2 c^3.
    let rate = 1.0 / (2.0 * PI * PI);
    for k in 1..cutoffs.len() {
        let slope = (zp_values[k] - zp_values[k - 1]) / (cutoffs[k] - cutoffs[k - 1]);
        assert!((slope - rate).abs() < 1e-10);
    }
    assert!((th_values[2] - th_values[1]).abs() < 1e-12);
    assert!(th_values[1] > 0.0);
}
