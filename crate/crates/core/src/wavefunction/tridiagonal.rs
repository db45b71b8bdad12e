//! Symmetric tridiagonal eigenpairs by Sturm-sequence bisection and inverse
//! iteration with a partially pivoted LU solve.

use rayon::prelude::*;

use crate::error::{Error, Result};

pub(crate) struct Tridiagonal<'a> {
    diag: &'a [f64],
    off: &'a [f64],
    coupling: Vec<f64>,
    bounds: (f64, f64),
    pivmin: f64,
}

impl<'a> Tridiagonal<'a> {
    pub fn new(diag: &'a [f64], off: &'a [f64]) -> Self {
        let n = diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { off[i].abs() } else { 0.0 };
            lo = lo.min(diag[i] - r);
            hi = hi.max(diag[i] + r);
        }
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        Tridiagonal {
            diag,
            off,
            coupling: std::iter::once(0.0).chain(off.iter().map(|e| e * e)).collect(),
            bounds: (lo, hi),
            pivmin: f64::EPSILON * scale * 1e-3,
        }
    }
}

impl Tridiagonal<'_> {
    fn len(&self) -> usize {
        self.diag.len()
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.bounds;
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn count_below(&self, lambda: f64) -> usize {
        self.counts_below([lambda])[0]
    }

    /// Sturm counts for several shifts in one sweep; the independent
    /// recurrences overlap their divisions.
    fn counts_below<const L: usize>(&self, lambdas: [f64; L]) -> [usize; L] {
        let mut counts = [0usize; L];
        let mut q = [1.0f64; L];
        for (d, c) in self.diag.iter().zip(&self.coupling) {
            for lane in 0..L {
                let mut next = d - lambdas[lane] - c / q[lane];
                if next.abs() < self.pivmin {
                    next = -self.pivmin;
                }
                counts[lane] += (next < 0.0) as usize;
                q[lane] = next;
            }
        }
        counts
    }

    /// Brackets `(lo, hi)` holding exactly the `k`-th eigenvalue, for every
    /// `k < count`. Brackets narrower than `cluster` may hold several.
    fn isolate(&self, count: usize, cluster: f64) -> Vec<(f64, f64)> {
        let (lo, hi) = self.bounds;
        let pad = cluster.max(f64::EPSILON * self.scale() * 4.0);
        let mut brackets = vec![(0.0, 0.0); count];
        let mut pending = vec![(lo - pad, hi + pad, 0, self.len())];
        while let Some((a, b, below_a, below_b)) = pending.pop() {
            if below_a >= count || below_a == below_b {
                continue;
            }
            if below_b - below_a == 1 || b - a <= cluster {
                for slot in &mut brackets[below_a..below_b.min(count)] {
                    *slot = (a, b);
                }
                continue;
            }
            let mid = 0.5 * (a + b);
            let below_mid = self.count_below(mid);
            pending.push((mid, b, below_mid, below_b));
            pending.push((a, mid, below_a, below_mid));
        }
        brackets
    }

    /// Halves the isolating brackets of eigenvalues `first..first + L`
    /// down to width `tol`.
    fn refine<const L: usize>(&self, first: usize, mut brackets: [(f64, f64); L], tol: f64) -> [f64; L] {
        loop {
            let mut mids = [0.0; L];
            let mut active = false;
            for (m, &(lo, hi)) in mids.iter_mut().zip(&brackets) {
                *m = 0.5 * (lo + hi);
                active |= hi - lo > tol && *m > lo && *m < hi;
            }
            if !active {
                return mids;
            }
            let counts = self.counts_below(mids);
            for (lane, (lo, hi)) in brackets.iter_mut().enumerate() {
                if *hi - *lo <= tol {
                    continue;
                }
                if counts[lane] > first + lane {
                    *hi = mids[lane];
                } else {
                    *lo = mids[lane];
                }
            }
        }
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Unit-norm eigenvector near the shift `lambda`, with its Rayleigh quotient.
    fn eigenvector(&self, lambda: f64) -> Result<(f64, Vec<f64>)> {
        let n = self.len();
        let tiny = f64::EPSILON * self.scale();
        let lu = ShiftedLu::factor(self, lambda, tiny);
        let mut v: Vec<f64> = (0..n as u64).map(scrambled_unit).collect();
        let tol = 1e-10 * self.scale();
        let mut residual = f64::INFINITY;
        for iteration in 0..8 {
            lu.solve(&mut v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::NonConvergence {
                    iterations: iteration + 1,
                    detail: format!("inverse iteration broke down at eigenvalue {lambda:e}"),
                });
            }
            v.iter_mut().for_each(|x| *x /= norm);
            if iteration >= 2 {
                let hv = self.apply(&v);
                let quotient: f64 = hv.iter().zip(&v).map(|(h, x)| h * x).sum();
                residual = hv
                    .iter()
                    .zip(&v)
                    .map(|(h, x)| (h - quotient * x).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if residual <= tol {
                    return Ok((quotient, v));
                }
            }
        }
        Err(Error::NonConvergence {
            iterations: 8,
            detail: format!("inverse iteration residual {residual:e} at eigenvalue {lambda:e}"),
        })
    }

    /// Lowest `count` eigenpairs in ascending order.
    pub fn lowest(&self, count: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let count = count.min(self.len());
        let cluster = 1e-10 * self.scale();
        let brackets = self.isolate(count, cluster);
        const LANES: usize = 4;
        let mut shifts = Vec::with_capacity(count);
        for (c, chunk) in brackets.chunks(LANES).enumerate() {
            let first = c * LANES;
            match <[(f64, f64); LANES]>::try_from(chunk) {
                Ok(lanes) => shifts.extend(self.refine(first, lanes, cluster)),
                Err(_) => shifts.extend(
                    chunk
                        .iter()
                        .enumerate()
                        .map(|(k, &b)| self.refine(first + k, [b], cluster)[0]),
                ),
            }
        }
        let pairs = brackets
            .par_iter()
            .zip(&shifts)
            .map(|(&bracket, &shift)| {
                let (quotient, v) = self.eigenvector(shift)?;
                // Within a cluster the bisected value keeps the ordering.
                let value = if bracket.1 - bracket.0 > cluster {
                    quotient.clamp(bracket.0, bracket.1)
                } else {
                    shift
                };
                Ok((value, v))
            })
            .collect::<Result<Vec<_>>>()?;
        let (values, mut vectors): (Vec<f64>, Vec<Vec<f64>>) = pairs.into_iter().unzip();
        // Re-orthogonalize within numerically degenerate clusters.
        let gap = 1e-10 * self.scale();
        for i in 1..count {
            let mut j = i;
            while j > 0 && values[i] - values[j - 1] < gap {
                j -= 1;
            }
            if j == i {
                continue;
            }
            let (done, rest) = vectors.split_at_mut(i);
            let v = &mut rest[0];
            for u in &done[j..i] {
                let d: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        Ok((values, vectors))
    }
}

/// Deterministic value in `[-1, 1)` from a splitmix64 hash of `i`, so the
/// start vector overlaps every mode.
fn scrambled_unit(i: u64) -> f64 {
    let mut z = i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

/// LU factors of `T - lambda I` with row interchanges.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &Tridiagonal<'_>, lambda: f64, tiny: f64) -> Self {
        let n = t.len();
        let mut d: Vec<f64> = t.diag.iter().map(|a| a - lambda).collect();
        let mut dl = t.off.to_vec();
        let mut du = t.off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for v in d.iter_mut() {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        ShiftedLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
