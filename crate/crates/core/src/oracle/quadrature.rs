//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// `∫_a^b f` to absolute-or-relative tolerance `tol`; returns value and error estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    const MAX_INTERVALS: usize = 2000;
    let (v, e) = kronrod(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::Divergent("integrand is not finite".into()));
        }
        if err <= tol.max(tol * total.abs()) {
            return Ok((total, err));
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Internal(format!("quadrature did not converge (error {err:e})")));
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod(&f, lo, mid);
        let (v2, e2) = kronrod(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// `∫_0^∞ f` through `x = u / (1 − u)`.
pub fn integrate_half_line(f: impl Fn(f64) -> f64, tol: f64) -> Result<(f64, f64)> {
    integrate(
        |u| {
            if u >= 1.0 {
                return 0.0;
            }
            let x = u / (1.0 - u);
            let v = f(x) / ((1.0 - u) * (1.0 - u));
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, _) = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, 1e-13).unwrap();
        assert!((v - (64.0 / 6.0 - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn gamma_integral_on_half_line() {
        let (v, _) = integrate_half_line(|x| x.powf(1.5) * (-x).exp(), 1e-12).unwrap();
        assert!((v - statrs::function::gamma::gamma(2.5)).abs() < 1e-9);
    }

    #[test]
    fn log_singularity() {
        // ∫_0^1 x^{1/2} log x = −4/9
        let (v, _) = integrate(|x| if x > 0.0 { x.sqrt() * x.ln() } else { 0.0 }, 0.0, 1.0, 1e-12).unwrap();
        assert!((v + 4.0 / 9.0).abs() < 1e-9);
    }
}
