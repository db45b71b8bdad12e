use nalgebra::DMatrix;
use num_complex::Complex64;

use super::TransformedDensity;
use crate::error::{Error, Result};
use crate::wavefunction::Potential;

/// Best rank-one fit `W~(r, s) ~ Psi(r) conj(Psi(s))` with `r = x + y`, `s = x - y`.
///
/// On the lattice, `r` and `s` indices always share parity, so the data split
/// into an even block and an odd block that are fitted separately. Each block
/// fixes its own phase by making the amplitude real and positive at its
/// largest-magnitude site.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// Relative Frobenius distance to the rank-one fit.
    pub residual: f64,
    /// Fitted amplitude on the x-lattice.
    pub amplitude: Vec<Complex64>,
    /// Leading singular values of the even and odd blocks.
    pub singular_values: [f64; 2],
}

pub fn factorize(wt: &TransformedDensity) -> Result<Factorization> {
    if !wt.on_pair_lattice() {
        return Err(Error::GridMismatch(
            "factorization needs y on the x-lattice spacing (a Wigner-derived transform)".into(),
        ));
    }
    let n = wt.x_grid().n_points();
    let half = n / 2;
    let mut amplitude = vec![Complex64::new(0.0, 0.0); n];
    let mut total = 0.0;
    let mut discarded = 0.0;
    let mut leading = [0.0; 2];
    for parity in 0..2 {
        // r = 2u + parity, s = 2v + parity  <=>  x = u + v + parity, y = u - v.
        let block = DMatrix::from_fn(half, half, |u, v| {
            // Of the two lattice representatives of each pair, use the one
            // with |y| <= L/4, where the transform carries the data.
            let mut i = u + v + parity;
            let mut m = u as i64 - v as i64;
            if m.unsigned_abs() as usize > n / 4 {
                m -= m.signum() * half as i64;
                i += half;
            }
            let i = i % n;
            let k = (m + half as i64) as usize;
            wt.at(i, k)
        });
        let frob = block.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let svd = block.svd(true, false);
        let (best, sigma) =
            svd.singular_values
                .iter()
                .enumerate()
                .fold(
                    (0, 0.0),
                    |acc, (idx, &s)| if s > acc.1 { (idx, s) } else { acc },
                );
        total += frob;
        discarded += (frob - sigma * sigma).max(0.0);
        leading[parity] = sigma;
        if sigma > 0.0 {
            let u = svd.u.as_ref().expect("left vectors requested");
            let col = u.column(best);
            let peak = col.iter().copied().fold(Complex64::new(0.0, 0.0), |a, b| {
                if b.norm() > a.norm() {
                    b
                } else {
                    a
                }
            });
            let phase = peak.conj() / peak.norm();
            for (idx, z) in col.iter().enumerate() {
                amplitude[2 * idx + parity] = z * phase * sigma.sqrt();
            }
        }
    }
    if total == 0.0 {
        return Err(Error::Degenerate(
            "transformed density is identically zero".into(),
        ));
    }
    Ok(Factorization {
        residual: (discarded / total).sqrt(),
        amplitude,
        singular_values: leading,
    })
}

/// Relative L2 distance between `W~` on the `(r, s)` lattice and its best
/// rank-one factorization. Zero for transforms of pure states.
pub fn factorization_residual(wt: &TransformedDensity) -> Result<f64> {
    factorize(wt).map(|f| f.residual)
}

/// `|-(r - s) F((r + s) / 2) - (V(r) - V(s))|`, evaluated from the analytic
/// potential.
pub fn mvt_residual(potential: &Potential, r: f64, s: f64) -> f64 {
    if r == s {
        return 0.0;
    }
    let midpoint = -(r - s) * potential.force(0.5 * (r + s));
    (midpoint - (potential.value(r) - potential.value(s))).abs()
}
