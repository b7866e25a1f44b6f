//! Adaptive Gauss-Kronrod (7/15) quadrature.

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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 50;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-12,
            rel: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    whole: (f64, f64),
) -> (f64, f64) {
    let (value, error) = whole;
    if error <= tol || depth >= MAX_DEPTH || !value.is_finite() {
        return whole;
    }
    let mid = 0.5 * (a + b);
    let left = kronrod(f, a, mid);
    let right = kronrod(f, mid, b);
    let (lv, le) = adapt(f, a, mid, 0.5 * tol, depth + 1, left);
    let (rv, re) = adapt(f, mid, b, 0.5 * tol, depth + 1, right);
    (lv + rv, le + re)
}

/// `∫_a^b f(x) dx` by recursive bisection until the Kronrod-Gauss
/// difference meets the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Estimate {
    if a == b {
        return Estimate {
            value: 0.0,
            error: 0.0,
        };
    }
    let first = kronrod(&f, a, b);
    let target = tol.abs.max(tol.rel * first.0.abs());
    let (value, error) = adapt(&f, a, b, target, 0, first);
    Estimate { value, error }
}

/// `∫_0^∞ f(x) dx` for a nonnegative integrand whose decay sets in beyond a
/// length scale of order `scale`. The upper limit doubles until the newly
/// added slab contributes less than the tolerance.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    scale: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    let mut upper = scale;
    let mut total = integrate(&f, 0.0, upper, tol);
    for _ in 0..64 {
        let slab = integrate(&f, upper, 2.0 * upper, tol);
        total.value += slab.value;
        total.error += slab.error;
        upper *= 2.0;
        if !total.value.is_finite() {
            break;
        }
        let target = tol.abs.max(tol.rel * total.value.abs());
        if slab.value.abs() <= 1e-2 * target && f(upper).abs() * upper < 1e-12 {
            return Ok(total);
        }
    }
    Err(Error::DivergentIntegral(format!(
        "tail still contributing beyond x = {upper:e}"
    )))
}
