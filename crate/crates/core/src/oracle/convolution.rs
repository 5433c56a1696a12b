//! Tail of `X + Y` from tabulated tails of nonnegative `X` and `Y`.

use crate::error::{Error, Result};

/// `F̄(i h)` for `i = 0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailGrid {
    pub h: f64,
    pub values: Vec<f64>,
}

impl TailGrid {
    pub fn from_fn(h: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        TailGrid { h, values: (0..=n).map(|i| f(i as f64 * h)).collect() }
    }

    fn coarsen(&self) -> TailGrid {
        TailGrid { h: 2.0 * self.h, values: self.values.iter().step_by(2).copied().collect() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionGrid {
    pub h: f64,
    pub values: Vec<f64>,
    /// Richardson estimate of the O(h²) error, on even grid points (zero elsewhere).
    pub error: Vec<f64>,
}

/// `P(X+Y > t) = F̄_1(t) + ∫_{[0,t]} F̄_2(t − x) dF_1(x)` by the trapezoid rule.
fn convolve(f1: &TailGrid, f2: &TailGrid) -> Vec<f64> {
    let (a, b) = (&f1.values, &f2.values);
    let n = a.len();
    // mass of F_1 in each cell, and the atom at zero
    let atom = 1.0 - a[0];
    let dm: Vec<f64> = (0..n - 1).map(|k| a[k] - a[k + 1]).collect();
    (0..n)
        .map(|i| {
            let mut s = a[i] + atom * b[i];
            for k in 0..i {
                s += 0.5 * (b[i - k] + b[i - k - 1]) * dm[k];
            }
            s
        })
        .collect()
}

pub fn numeric_convolution(f1: &TailGrid, f2: &TailGrid) -> Result<ConvolutionGrid> {
    if f1.values.len() != f2.values.len() || (f1.h - f2.h).abs() > 1e-12 * f1.h.abs() || f1.h <= 0.0 {
        return Err(Error::precondition("tail grids must share spacing and length"));
    }
    if f1.values.len() < 3 {
        return Err(Error::precondition("tail grids need at least three points"));
    }
    let fine = convolve(f1, f2);
    let coarse = convolve(&f1.coarsen(), &f2.coarsen());
    let mut error = vec![0.0; fine.len()];
    for (j, c) in coarse.iter().enumerate() {
        error[2 * j] = (fine[2 * j] - c).abs() / 3.0;
    }
    Ok(ConvolutionGrid { h: f1.h, values: fine, error })
}
