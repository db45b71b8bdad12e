//! FFT plumbing: complex transforms for wavefunctions, real row transforms
//! for phase-space densities, spectral shifts, and affine (shift + dilation)
//! resampling of band-limited periodic rows.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

use super::grid::Grid1D;
use crate::error::{Error, Result};

/// Complex FFT pair of fixed length. `inverse` includes the `1/n` factor.
#[derive(Clone)]
pub struct ComplexFft {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl ComplexFft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        ComplexFft {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let scale = 1.0 / self.n as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }

    /// Inverse transform without normalization.
    pub fn inverse_unscaled(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
    }
}

/// Returns `f(x - shift)` for band-limited periodic complex samples.
pub fn spectral_shift(samples: &[Complex64], grid: &Grid1D, shift: f64) -> Result<Vec<Complex64>> {
    grid.check_len(samples.len())?;
    let fft = ComplexFft::new(grid.n_points());
    let mut buf = samples.to_vec();
    fft.forward(&mut buf);
    for (j, v) in buf.iter_mut().enumerate() {
        *v *= Complex64::cis(-grid.wavenumber(j) * shift);
    }
    fft.inverse(&mut buf);
    Ok(buf)
}

/// Real-valued variant of [`spectral_shift`]. The Nyquist bin is multiplied by
/// `cos(k_N shift)` so real input stays real.
pub fn spectral_shift_real(samples: &[f64], grid: &Grid1D, shift: f64) -> Result<Vec<f64>> {
    grid.check_len(samples.len())?;
    let rows = RealRows::new(grid.n_points());
    let table = rows.shift_table(grid, &[shift]);
    let mut out = samples.to_vec();
    rows.apply(&mut out, &table);
    Ok(out)
}

/// Applies a per-row spectral multiplier to a stack of real rows.
#[derive(Clone)]
pub struct RealRows {
    n: usize,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
}

struct RowScratch {
    input: Vec<f64>,
    spectrum: Vec<Complex64>,
    fwd: Vec<Complex64>,
    inv: Vec<Complex64>,
}

impl RealRows {
    pub fn new(n: usize) -> Self {
        let mut planner = RealFftPlanner::<f64>::new();
        RealRows {
            n,
            r2c: planner.plan_fft_forward(n),
            c2r: planner.plan_fft_inverse(n),
        }
    }

    /// Number of stored half-spectrum bins per row.
    pub fn bins(&self) -> usize {
        self.n / 2 + 1
    }

    fn scratch(&self) -> RowScratch {
        RowScratch {
            input: vec![0.0; self.n],
            spectrum: self.r2c.make_output_vec(),
            fwd: self.r2c.make_scratch_vec(),
            inv: self.c2r.make_scratch_vec(),
        }
    }

    /// Half-spectrum of one row (`n/2 + 1` bins, unnormalized).
    pub fn spectrum(&self, row: &[f64]) -> Vec<Complex64> {
        let mut s = self.scratch();
        s.input.copy_from_slice(row);
        self.r2c
            .process_with_scratch(&mut s.input, &mut s.spectrum, &mut s.fwd)
            .expect("row length matches plan");
        s.spectrum
    }

    /// Multiplies the spectrum of row `r` by `table[r * bins .. (r + 1) * bins]`.
    /// The table must already contain the `1/n` normalization. A table holding a
    /// single row's worth of bins is broadcast to every row.
    pub fn apply(&self, data: &mut [f64], table: &[Complex64]) {
        let bins = self.bins();
        let broadcast = table.len() == bins;
        debug_assert!(broadcast || table.len() == data.len() / self.n * bins);
        data.par_chunks_mut(self.n).enumerate().for_each_init(
            || self.scratch(),
            |s, (r, row)| {
                let t = if broadcast {
                    table
                } else {
                    &table[r * bins..(r + 1) * bins]
                };
                self.apply_row(row, t, s);
            },
        );
    }

    fn apply_row(&self, row: &mut [f64], table: &[Complex64], s: &mut RowScratch) {
        s.input.copy_from_slice(row);
        self.r2c
            .process_with_scratch(&mut s.input, &mut s.spectrum, &mut s.fwd)
            .expect("row length matches plan");
        for (v, t) in s.spectrum.iter_mut().zip(table) {
            *v *= *t;
        }
        s.spectrum[0].im = 0.0;
        let last = s.spectrum.len() - 1;
        s.spectrum[last].im = 0.0;
        self.c2r
            .process_with_scratch(&mut s.spectrum, row, &mut s.inv)
            .expect("row length matches plan");
    }

    /// Shift table: row `r` is translated by `shifts[r]` (i.e. `f(x - shift)`).
    pub fn shift_table(&self, grid: &Grid1D, shifts: &[f64]) -> Vec<Complex64> {
        let bins = self.bins();
        let scale = 1.0 / self.n as f64;
        let mut table = Vec::with_capacity(shifts.len() * bins);
        for &s in shifts {
            for j in 0..bins {
                let k = 2.0 * PI * j as f64 / grid.length();
                if j == bins - 1 {
                    table.push(Complex64::new((k * s).cos() * scale, 0.0));
                } else {
                    table.push(Complex64::cis(-k * s) * scale);
                }
            }
        }
        table
    }

    /// Heat-kernel table: `exp(-coefficient * k^2 * time)` on every row.
    pub fn diffusion_table(&self, grid: &Grid1D, coefficient: f64, time: f64) -> Vec<Complex64> {
        let scale = 1.0 / self.n as f64;
        (0..self.bins())
            .map(|j| {
                let k = 2.0 * PI * j as f64 / grid.length();
                Complex64::new((-coefficient * k * k * time).exp() * scale, 0.0)
            })
            .collect()
    }
}

/// Exact resampling of band-limited periodic real rows under the affine map
/// `g(p) = s * f(s p + b)`, one `(s, b)` pair per row. Rows with `s == 1` reduce
/// to a spectral shift; other rows are evaluated by a chirp-z (Bluestein)
/// transform of length `2n`. An optional even spectral filter (for example a
/// heat kernel) may be applied to `f` before the map.
pub struct AffineResampler {
    n: usize,
    m: usize,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fft_m: Arc<dyn Fft<f64>>,
    ifft_m: Arc<dyn Fft<f64>>,
    plans: Vec<RowPlan>,
}

enum RowPlan {
    Shift(Vec<Complex64>),
    Chirp {
        pre: Vec<Complex64>,
        kernel: Arc<Vec<Complex64>>,
        post: Vec<Complex64>,
    },
}

struct AffineScratch {
    input: Vec<f64>,
    spectrum: Vec<Complex64>,
    fwd: Vec<Complex64>,
    inv: Vec<Complex64>,
    work: Vec<Complex64>,
    fft_scratch: Vec<Complex64>,
}

impl AffineResampler {
    /// `maps[r] = (s, b)` for row `r`. `grid` describes the row coordinate.
    pub fn new(grid: &Grid1D, maps: &[(f64, f64)]) -> Result<Self> {
        let n = grid.n_points();
        let m = 2 * n;
        let mut real = RealFftPlanner::<f64>::new();
        let mut planner = FftPlanner::new();
        let fft_m = planner.plan_fft_forward(m);
        let ifft_m = planner.plan_fft_inverse(m);
        let p0 = grid.point(0);
        let period = grid.length();
        let nf = n as f64;
        let half = (n / 2) as i64;

        // Rows sharing a dilation factor share the chirp kernel.
        let mut kernels: Vec<(u64, Arc<Vec<Complex64>>)> = Vec::new();
        let mut plans = Vec::with_capacity(maps.len());
        for &(s, b) in maps {
            if !(s > 0.0) || !s.is_finite() || !b.is_finite() {
                return Err(Error::Stability(format!("invalid affine map s={s}, b={b}")));
            }
            if s == 1.0 {
                let bins = n / 2 + 1;
                let table = (0..bins)
                    .map(|j| {
                        let eta = 2.0 * PI * j as f64 / period;
                        if j == bins - 1 {
                            Complex64::new((eta * b).cos() / nf, 0.0)
                        } else {
                            Complex64::cis(eta * b) / nf
                        }
                    })
                    .collect();
                plans.push(RowPlan::Shift(table));
                continue;
            }
            let kernel = match kernels.iter().find(|(bits, _)| *bits == s.to_bits()) {
                Some((_, k)) => k.clone(),
                None => {
                    let mut c: Vec<Complex64> = (0..m)
                        .map(|t| {
                            let d = t as f64 - half as f64;
                            Complex64::cis(-PI * s * d * d / nf)
                        })
                        .collect();
                    fft_m.process(&mut c);
                    let k = Arc::new(c);
                    kernels.push((s.to_bits(), k.clone()));
                    k
                }
            };
            let c0 = (s - 1.0) * p0 + b;
            let pre = (0..=n)
                .map(|kp| {
                    let k = kp as f64 - half as f64;
                    Complex64::cis(2.0 * PI * k * c0 / period + PI * s * k * k / nf)
                })
                .collect();
            let post = (0..n)
                .map(|j| {
                    let jf = j as f64;
                    Complex64::cis(PI * s * jf * jf / nf) * (s / (nf * m as f64))
                })
                .collect();
            plans.push(RowPlan::Chirp { pre, kernel, post });
        }
        Ok(AffineResampler {
            n,
            m,
            r2c: real.plan_fft_forward(n),
            c2r: real.plan_fft_inverse(n),
            fft_m,
            ifft_m,
            plans,
        })
    }

    fn scratch(&self) -> AffineScratch {
        let len = self
            .fft_m
            .get_inplace_scratch_len()
            .max(self.ifft_m.get_inplace_scratch_len());
        AffineScratch {
            input: vec![0.0; self.n],
            spectrum: self.r2c.make_output_vec(),
            fwd: self.r2c.make_scratch_vec(),
            inv: self.c2r.make_scratch_vec(),
            work: vec![Complex64::new(0.0, 0.0); self.m],
            fft_scratch: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// Resamples every row in place. `filter`, when given, holds `n/2 + 1`
    /// real multipliers applied to the half-spectrum before the map.
    pub fn apply(&self, data: &mut [f64], filter: Option<&[f64]>) {
        debug_assert_eq!(data.len(), self.plans.len() * self.n);
        data.par_chunks_mut(self.n)
            .zip(self.plans.par_iter())
            .for_each_init(
                || self.scratch(),
                |s, (row, plan)| self.apply_row(row, plan, filter, s),
            );
    }

    fn apply_row(
        &self,
        row: &mut [f64],
        plan: &RowPlan,
        filter: Option<&[f64]>,
        s: &mut AffineScratch,
    ) {
        let n = self.n;
        s.input.copy_from_slice(row);
        self.r2c
            .process_with_scratch(&mut s.input, &mut s.spectrum, &mut s.fwd)
            .expect("row length matches plan");
        if let Some(f) = filter {
            for (v, w) in s.spectrum.iter_mut().zip(f) {
                *v *= *w;
            }
        }
        match plan {
            RowPlan::Shift(table) => {
                for (v, t) in s.spectrum.iter_mut().zip(table) {
                    *v *= *t;
                }
                s.spectrum[0].im = 0.0;
                s.spectrum[n / 2].im = 0.0;
                self.c2r
                    .process_with_scratch(&mut s.spectrum, row, &mut s.inv)
                    .expect("row length matches plan");
            }
            RowPlan::Chirp { pre, kernel, post } => {
                let half = n / 2;
                // k runs over -n/2..=n/2; the Nyquist coefficient is split evenly.
                #[allow(clippy::needless_range_loop)]
                for kp in 0..=n {
                    let coeff = if kp == 0 || kp == n {
                        s.spectrum[half] * 0.5
                    } else if kp >= half {
                        s.spectrum[kp - half]
                    } else {
                        s.spectrum[half - kp].conj()
                    };
                    s.work[kp] = coeff * pre[kp];
                }
                s.work[n + 1..]
                    .iter_mut()
                    .for_each(|v| *v = Complex64::new(0.0, 0.0));
                self.fft_m
                    .process_with_scratch(&mut s.work, &mut s.fft_scratch);
                for (v, k) in s.work.iter_mut().zip(kernel.iter()) {
                    *v *= *k;
                }
                self.ifft_m
                    .process_with_scratch(&mut s.work, &mut s.fft_scratch);
                for (j, out) in row.iter_mut().enumerate() {
                    *out = (s.work[j + n] * post[j]).re;
                }
            }
        }
    }
}

/// Returns `s * f(s p_j + b)` for band-limited periodic real samples `f`.
pub fn affine_resample(
    samples: &[f64],
    grid: &Grid1D,
    scale: f64,
    offset: f64,
) -> Result<Vec<f64>> {
    grid.check_len(samples.len())?;
    let r = AffineResampler::new(grid, &[(scale, offset)])?;
    let mut out = samples.to_vec();
    r.apply(&mut out, None);
    Ok(out)
}

/// In-place transpose of a row-major `rows x cols` array into `out` (`cols x rows`).
pub fn transpose_into(src: &[f64], rows: usize, cols: usize, out: &mut [f64]) {
    const BLOCK: usize = 8;
    debug_assert_eq!(src.len(), rows * cols);
    debug_assert_eq!(out.len(), rows * cols);
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    out[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}
