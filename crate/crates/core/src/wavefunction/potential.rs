use std::fmt;

use crate::error::{Error, Result};

/// Model potentials with analytic `V`, force `F = -V'` and `V'''`.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    Free,
    /// `V = M w^2 x^2 / 2`
    Harmonic {
        omega: f64,
        mass: f64,
    },
    /// `V = lambda x^4`
    Quartic {
        lambda: f64,
    },
    /// `V = -depth` for `|x| <= width / 2`, zero outside.
    FiniteWell {
        depth: f64,
        width: f64,
    },
    /// Natural cubic spline through tabulated samples.
    Table(TablePotential),
}

impl Potential {
    pub fn harmonic(omega: f64, mass: f64) -> Self {
        Potential::Harmonic { omega, mass }
    }

    pub fn quartic(lambda: f64) -> Self {
        Potential::Quartic { lambda }
    }

    pub fn finite_well(depth: f64, width: f64) -> Self {
        Potential::FiniteWell { depth, width }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Potential::Free => 0.0,
            Potential::Harmonic { omega, mass } => 0.5 * mass * omega * omega * x * x,
            Potential::Quartic { lambda } => lambda * x.powi(4),
            Potential::FiniteWell { depth, width } => {
                if x.abs() <= 0.5 * width {
                    -depth
                } else {
                    0.0
                }
            }
            Potential::Table(t) => t.value(x),
        }
    }

    /// `F(x) = -V'(x)`. Zero inside and outside a finite well (the edges carry
    /// delta-function forces that a grid cannot represent).
    pub fn force(&self, x: f64) -> f64 {
        match self {
            Potential::Free | Potential::FiniteWell { .. } => 0.0,
            Potential::Harmonic { omega, mass } => -mass * omega * omega * x,
            Potential::Quartic { lambda } => -4.0 * lambda * x.powi(3),
            Potential::Table(t) => -t.derivative(x),
        }
    }

    /// `F'(x) = -V''(x)`.
    pub fn force_gradient(&self, x: f64) -> f64 {
        match self {
            Potential::Free | Potential::FiniteWell { .. } => 0.0,
            Potential::Harmonic { omega, mass } => -mass * omega * omega,
            Potential::Quartic { lambda } => -12.0 * lambda * x * x,
            Potential::Table(t) => -t.second_derivative(x),
        }
    }

    pub fn third_derivative(&self, x: f64) -> f64 {
        match self {
            Potential::Free | Potential::FiniteWell { .. } | Potential::Harmonic { .. } => 0.0,
            Potential::Quartic { lambda } => 24.0 * lambda * x,
            Potential::Table(t) => t.third_derivative(x),
        }
    }

    pub fn sample(&self, points: &[f64]) -> Vec<f64> {
        points.iter().map(|&x| self.value(x)).collect()
    }

    /// True when `V` is at most quadratic, so the mean-value replacement of the
    /// potential difference is exact.
    pub fn is_quadratic(&self) -> bool {
        matches!(self, Potential::Free | Potential::Harmonic { .. })
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Free => write!(f, "free"),
            Potential::Harmonic { omega, mass } => {
                write!(f, "harmonic(omega={omega}, mass={mass})")
            }
            Potential::Quartic { lambda } => write!(f, "quartic(lambda={lambda})"),
            Potential::FiniteWell { depth, width } => {
                write!(f, "finite_well(depth={depth}, width={width})")
            }
            Potential::Table(t) => write!(f, "table({} nodes)", t.xs.len()),
        }
    }
}

/// Natural cubic spline; constant extrapolation outside the table.
#[derive(Debug, Clone, PartialEq)]
pub struct TablePotential {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // second derivatives at the nodes
    m: Vec<f64>,
}

impl TablePotential {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 3 || ys.len() != n {
            return Err(Error::Configuration(format!(
                "table potential needs >= 3 matching nodes, got {} x and {} values",
                n,
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Configuration(
                "table nodes must be strictly increasing".into(),
            ));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::Configuration(
                "table contains non-finite values".into(),
            ));
        }
        // Tridiagonal system for the interior second derivatives.
        let mut m = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut r = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            let diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
            c[i] = h1 / diag;
            let rhs = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            r[i] = (rhs - h0 * r[i - 1]) / diag;
        }
        for i in (1..n - 1).rev() {
            m[i] = r[i] - c[i] * m[i + 1];
        }
        Ok(TablePotential { xs, ys, m })
    }

    fn segment(&self, x: f64) -> Option<usize> {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return None;
        }
        let idx = self.xs.partition_point(|&v| v <= x);
        Some(idx.clamp(1, n - 1) - 1)
    }

    fn value(&self, x: f64) -> f64 {
        match self.segment(x) {
            None if x < self.xs[0] => self.ys[0],
            None => self.ys[self.ys.len() - 1],
            Some(i) => {
                let h = self.xs[i + 1] - self.xs[i];
                let a = (self.xs[i + 1] - x) / h;
                let b = (x - self.xs[i]) / h;
                a * self.ys[i]
                    + b * self.ys[i + 1]
                    + ((a.powi(3) - a) * self.m[i] + (b.powi(3) - b) * self.m[i + 1]) * h * h / 6.0
            }
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        match self.segment(x) {
            None => 0.0,
            Some(i) => {
                let h = self.xs[i + 1] - self.xs[i];
                let a = (self.xs[i + 1] - x) / h;
                let b = (x - self.xs[i]) / h;
                (self.ys[i + 1] - self.ys[i]) / h
                    + ((1.0 - 3.0 * a * a) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h
                        / 6.0
            }
        }
    }

    fn second_derivative(&self, x: f64) -> f64 {
        match self.segment(x) {
            None => 0.0,
            Some(i) => {
                let h = self.xs[i + 1] - self.xs[i];
                let a = (self.xs[i + 1] - x) / h;
                let b = (x - self.xs[i]) / h;
                a * self.m[i] + b * self.m[i + 1]
            }
        }
    }

    fn third_derivative(&self, x: f64) -> f64 {
        match self.segment(x) {
            None => 0.0,
            Some(i) => (self.m[i + 1] - self.m[i]) / (self.xs[i + 1] - self.xs[i]),
        }
    }
}
