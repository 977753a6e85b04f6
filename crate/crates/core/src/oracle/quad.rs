//! Adaptive Gauss–Kronrod (7/15) quadrature of complex-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: C64,
    /// Sum over subintervals of `|K15 − G7|`.
    pub est_error: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        Self { value: C64::new(0.0, 0.0), est_error: 0.0, evaluations: 0 }
    }

    pub fn add(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            est_error: self.est_error + other.est_error,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scale(self, s: C64) -> QuadResult {
        QuadResult { value: self.value * s, est_error: self.est_error * s.norm(), ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel: crate::tolerances::QUAD_REL, abs: 1e-15, max_intervals: 4000 }
    }
}

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

/// One Kronrod panel: `(K15 value, |K15 − G7|)`.
pub fn gk15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

struct Panel {
    a: f64,
    b: f64,
    value: C64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the panel with the largest error
/// estimate until the total estimate meets the tolerance.
pub fn integrate<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult::zero());
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, err: e });
    let mut total = v;
    let mut err = e;
    let mut evals = 15;
    loop {
        if !(total.is_finite() && err.is_finite()) {
            return Err(Error::NonConvergent(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err <= opts.abs.max(opts.rel * total.norm()) {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::NonConvergent(format!(
                "error estimate {err:e} after {} panels on [{a}, {b}]",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&mut f, worst.a, m);
        let (v2, e2) = gk15(&mut f, m, worst.b);
        evals += 30;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: m, value: v1, err: e1 });
        heap.push(Panel { a: m, b: worst.b, value: v2, err: e2 });
    }
    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().fold(C64::new(0.0, 0.0), |s, p| s + p.value);
    let est_error = heap.iter().map(|p| p.err).sum();
    Ok(QuadResult { value, est_error, evaluations: evals })
}
