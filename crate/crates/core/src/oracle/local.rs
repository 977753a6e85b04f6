//! Quadrature of the local model integrals around the special points that
//! produce RW, PD and SW, compared against their closed forms.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::contour::ContourPath;
use super::quad::{integrate, QuadOptions, QuadResult};
use crate::components::{u_pd1, u_rw, u_sw, VertexCoefficient};
use crate::error::{Error, Result};
use crate::geometry::{IncidenceConfig, ObservationPoint};
use crate::kernel::{gamma, kernel_k, res_w_p1, ComplexPoint2, Sheet};
use crate::singularities::{phase_model, Side};
use crate::tolerances;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `ln(1 / DECAY_FLOOR)`: exponent at which contour tails are cut.
fn cutoff() -> f64 {
    -tolerances::DECAY_FLOOR.ln()
}

/// Numeric value and closed form of one local-model integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub numeric: QuadResult,
    pub closed: C64,
}

impl Comparison {
    pub fn rel_err(&self) -> f64 {
        (self.numeric.value - self.closed).norm() / self.closed.norm().max(f64::MIN_POSITIVE)
    }

    pub fn abs_err(&self) -> f64 {
        (self.numeric.value - self.closed).norm()
    }
}

/// Closed form of [`pole_line_integral`].
pub fn pole_line_closed(a: f64, p: C64, side: Side, r: f64) -> C64 {
    let e = (-I * r * a * p).exp();
    match side {
        Side::Above if a > 0.0 => -2.0 * PI * I * e,
        Side::Below if a < 0.0 => 2.0 * PI * I * e,
        _ => C64::new(0.0, 0.0),
    }
}

/// `∫ e^{−i r a t} / (t − p) dt` along the real line, passing the pole on
/// the given side. The two infinite ends are turned into the half-plane
/// where the exponential decays.
pub fn pole_line_integral(a: f64, p: C64, side: Side, r: f64) -> Result<QuadResult> {
    pole_line_integral_with(a, p, side, r, tolerances::BYPASS_RADIUS)
}

pub fn pole_line_integral_with(a: f64, p: C64, side: Side, r: f64, bypass: f64) -> Result<QuadResult> {
    if !(r > 0.0) || a == 0.0 || !a.is_finite() {
        return Err(Error::NonConvergent(format!("pole integral needs r > 0 and a != 0, got r={r}, a={a}")));
    }
    let half = 1.0 + 2.0 * p.im.abs();
    let (xl, xr) = (p.re - half, p.re + half);
    let tail = cutoff() / (r * a.abs());
    let down = if a > 0.0 { -1.0 } else { 1.0 };
    let mut path = ContourPath::new(bypass).line(C64::new(xl, down * tail), C64::new(xl, 0.0));
    let needs_arc = match side {
        Side::Above => p.im > -bypass,
        Side::Below => p.im < bypass,
    };
    if needs_arc {
        let rad = p.im.abs() + bypass;
        let (left, right) = (C64::new(p.re - rad, 0.0), C64::new(p.re + rad, 0.0));
        let end = if side == Side::Above { 0.0 } else { 2.0 * PI };
        path = path.line(C64::new(xl, 0.0), left).arc(C64::new(p.re, 0.0), rad, PI, end).line(right, C64::new(xr, 0.0));
    } else {
        path = path.line(C64::new(xl, 0.0), C64::new(xr, 0.0));
    }
    path = path.line(C64::new(xr, 0.0), C64::new(xr, down * tail));
    let opts = QuadOptions { rel: 1e-12, abs: 1e-14, max_intervals: 4000 };
    path.integrate(|t| (-I * r * a * t).exp() / (t - p), opts)
}

/// `∫ e^{−i r σ t²/2} dt` along the steepest-descent line through 0.
pub fn gaussian_line_integral(sigma: f64, r: f64) -> Result<QuadResult> {
    if sigma == 0.0 || !sigma.is_finite() {
        return Err(Error::DegenerateHessian);
    }
    let dir = C64::from_polar(1.0, -0.25 * PI * sigma.signum());
    let u = (2.0 * cutoff() / (r * sigma.abs())).sqrt();
    let res = integrate(|s| (-0.5 * r * sigma.abs() * s * s).exp() * C64::new(1.0, 0.0), -u, u, QuadOptions::default())?;
    Ok(res.scale(dir))
}

pub fn gaussian_line_closed(sigma: f64, r: f64) -> C64 {
    (2.0 * PI / (r * sigma.abs())).sqrt() * C64::from_polar(1.0, -0.25 * PI * sigma.signum())
}

/// Data of the separable local model at a saddle on a polar trace:
/// `F ≈ amplitude / (ξ1 − ξ1*)`, `G ≈ G* + slope·(ξ1 − ξ1*) + σ(ξ2 − ξ2*)²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SosModel {
    pub slope: f64,
    pub sigma: f64,
    pub amplitude: C64,
    pub g_star: C64,
    pub side: Side,
}

/// The separable pole × Gaussian model of the PD1 contribution.
pub fn pd1_model(x: &ObservationPoint, cfg: &IncidenceConfig) -> Result<SosModel> {
    let xt = x.direction();
    let s = x.xt2.hypot(x.xt3);
    let xi = [-cfg.k1, C64::new(-x.xt2 * cfg.k2p.re / s, 0.0)];
    let pm = phase_model(xi, xt, cfg)?;
    let kk = kernel_k(&ComplexPoint2::physical(xi[0], xi[1]), cfg)?;
    Ok(SosModel {
        slope: pm.gradient[0].re,
        sigma: pm.hessian[1][1].re,
        amplitude: kk * res_w_p1(xi[1], cfg)?,
        g_star: pm.value,
        side: Side::Above,
    })
}

/// Separable model integrated numerically and in closed form.
pub fn sos_local_integral(m: &SosModel, r: f64) -> Result<Comparison> {
    let pre = -I / (4.0 * PI * PI) * m.amplitude * (-I * r * m.g_star).exp();
    let p = pole_line_integral(m.slope, C64::new(0.0, 0.0), m.side, r)?;
    let g = gaussian_line_integral(m.sigma, r)?;
    let value = pre * p.value * g.value;
    let est_error = pre.norm() * (p.est_error * g.value.norm() + g.est_error * p.value.norm());
    let closed = pre * pole_line_closed(m.slope, C64::new(0.0, 0.0), m.side, r) * gaussian_line_closed(m.sigma, r);
    Ok(Comparison { numeric: QuadResult { value, est_error, evaluations: p.evaluations + g.evaluations }, closed })
}

/// The PD1 contribution with the exact residue amplitude and the exact
/// phase `G(−k1, ξ2)`, integrated along the numerical steepest-descent path
/// through the saddle, against the closed form of the PD1 component.
pub fn pd1_full_local_model(x: &ObservationPoint, cfg: &IncidenceConfig) -> Result<Comparison> {
    if x.on_plane() {
        return Err(Error::InvalidPoint("the off-plane local model needs x3 > 0".into()));
    }
    let m = pd1_model(x, cfg)?;
    let r = x.r;
    let [t1, t2, t3] = x.direction();
    let k1 = cfg.k1;
    let q = |z: C64| cfg.k2p * cfg.k2p - z * z;
    let phi = |z: C64| -k1 * t1 + t2 * z - t3 * q(z).sqrt();
    let dphi = |z: C64| t2 + t3 * z / q(z).sqrt();
    let s = t2.hypot(t3);
    let z0 = C64::new(-t2 * cfg.k2p.re / s, 0.0);
    let phi0 = phi(z0);
    let lead = (-2.0 * I / m.sigma).sqrt();

    let vmax = (cutoff() / r).sqrt();
    let n = 4000;
    let dv = vmax / n as f64;
    let solve = |v: f64, guess: C64| -> Result<C64> {
        let mut z = guess;
        for _ in 0..60 {
            let d = dphi(z);
            let step = (phi(z) - phi0 + I * v * v) / d;
            z -= step;
            // Near the saddle the step cannot drop below the phase roundoff over |φ'|.
            let floor = 8.0 * f64::EPSILON * (1.0 + phi0.norm()) / d.norm().max(f64::MIN_POSITIVE);
            if step.norm() <= (1e-15 * (1.0 + z.norm())).max(floor) {
                return Ok(z);
            }
        }
        Err(Error::NonConvergent(format!("descent path Newton at v={v}")))
    };
    let mut table = [Vec::with_capacity(n + 1), Vec::with_capacity(n + 1)];
    for (branch, sign) in [1.0, -1.0].into_iter().enumerate() {
        let mut z = z0;
        table[branch].push(z);
        for j in 1..=n {
            let v = sign * dv * j as f64;
            let slope = if j == 1 { lead } else { -2.0 * I * (v - sign * dv) / dphi(z) };
            z = solve(v, z + slope * sign * dv)?;
            table[branch].push(z);
        }
    }
    let amplitude = |z: C64| -> Result<C64> {
        let kk = kernel_k(&ComplexPoint2::physical(k1 * -1.0, z), cfg)?;
        Ok(kk * res_w_p1(z, cfg)?)
    };
    // The integrand is smooth and Gaussian-damped on the tabulated path, so
    // the trapezoid rule converges geometrically; halving the resolution
    // gives the error estimate.
    let mut fine = C64::new(0.0, 0.0);
    let mut coarse = C64::new(0.0, 0.0);
    for (branch, sign) in [1.0, -1.0].into_iter().enumerate() {
        for (j, &z) in table[branch].iter().enumerate() {
            if branch == 1 && j == 0 {
                continue;
            }
            let v = sign * dv * j as f64;
            let dz = if j == 0 { lead } else { -2.0 * I * v / dphi(z) };
            let w = if j == n { 0.5 } else { 1.0 };
            let f = amplitude(z)? * (-r * v * v).exp() * dz * w;
            fine += f;
            if j % 2 == 0 {
                coarse += f;
            }
        }
    }
    let line = QuadResult {
        value: fine * dv,
        est_error: (fine * dv - coarse * 2.0 * dv).norm(),
        evaluations: 2 * n + 1,
    };
    let p = pole_line_integral(m.slope, C64::new(0.0, 0.0), m.side, r)?;
    let pre = -I / (4.0 * PI * PI) * (-I * r * phi0).exp();
    let value = pre * p.value * line.value;
    let est_error = pre.norm() * (p.est_error * line.value.norm() + line.est_error * p.value.norm());
    let closed = u_pd1(x, cfg)?.value;
    Ok(Comparison { numeric: QuadResult { value, est_error, evaluations: p.evaluations + line.evaluations }, closed })
}

/// The RW contribution as a product of two polar line integrals, with the
/// amplitude built from the kernel and the double residue of `W`.
pub fn rw_local_model(x: &ObservationPoint, cfg: &IncidenceConfig) -> Result<Comparison> {
    let xi = [-cfg.k1, -cfg.k2];
    let pm = phase_model(xi, x.direction(), cfg)?;
    let kk = kernel_k(&ComplexPoint2::physical(xi[0], xi[1]), cfg)?;
    let double_residue = I * gamma(cfg.k1, -cfg.k2, cfg, Sheet::Physical)? * gamma(cfg.k1, cfg.k2, cfg, Sheet::Physical)?;
    let r = x.r;
    let p1 = pole_line_integral(pm.gradient[0].re, C64::new(0.0, 0.0), Side::Above, r)?;
    let p2 = pole_line_integral(pm.gradient[1].re, C64::new(0.0, 0.0), Side::Above, r)?;
    let pre = -I / (4.0 * PI * PI) * kk * double_residue * (-I * r * pm.value).exp();
    let value = pre * p1.value * p2.value;
    let est_error = pre.norm() * (p1.est_error * p2.value.norm() + p2.est_error * p1.value.norm());
    Ok(Comparison {
        numeric: QuadResult { value, est_error, evaluations: p1.evaluations + p2.evaluations },
        closed: u_rw(x, cfg)?.value,
    })
}

/// Numeric two-dimensional Gaussian integral `∫∫ F e^{−i r δᵀHδ/2} dδ` for
/// a real symmetric Hessian, on the descent planes of its eigen-directions.
pub fn saddle2d_integral(hessian: [[C64; 2]; 2], f_value: C64, r: f64) -> Result<Comparison> {
    let h = hessian;
    let scale = h.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    if h.iter().flatten().any(|v| v.im.abs() > 1e-12 * scale) {
        return Err(Error::NonConvergent("complex Hessian entries are not supported".into()));
    }
    let (a, b, c) = (h[0][0].re, 0.5 * (h[0][1].re + h[1][0].re), h[1][1].re);
    let mean = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let (l1, l2) = (mean + rad, mean - rad);
    if l1.abs().min(l2.abs()) <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateHessian);
    }
    let u1 = (2.0 * cutoff() / (r * l1.abs())).sqrt();
    let u2 = (2.0 * cutoff() / (r * l2.abs())).sqrt();
    let opts = QuadOptions::default();
    let mut evals = 0;
    let mut inner_err = 0.0f64;
    let outer = integrate(
        |u| {
            let inner = integrate(|v| C64::new((-0.5 * r * l2.abs() * v * v).exp(), 0.0), -u2, u2, opts)
                .expect("smooth Gaussian");
            evals += inner.evaluations;
            inner_err = inner_err.max(inner.est_error);
            inner.value * (-0.5 * r * l1.abs() * u * u).exp()
        },
        -u1,
        u1,
        opts,
    )?;
    let phase = C64::from_polar(1.0, -0.25 * PI * (l1.signum() + l2.signum()));
    let numeric = QuadResult {
        value: f_value * phase * outer.value,
        est_error: f_value.norm() * (outer.est_error + inner_err * 2.0 * u1),
        evaluations: evals + outer.evaluations,
    };
    let closed = f_value * (2.0 * PI / r) / (l1 * l2).abs().sqrt() * phase;
    Ok(Comparison { numeric, closed })
}

/// The SW contribution from the 2D saddle integral, against the closed form.
pub fn sw_local_model(x: &ObservationPoint, cfg: &IncidenceConfig, vc: &VertexCoefficient) -> Result<Comparison> {
    if x.on_plane() {
        return Err(Error::InvalidPoint("the vertex saddle needs x3 > 0".into()));
    }
    let k0 = cfg.k0;
    let xi = [C64::new(-k0 * x.xt1, 0.0), C64::new(-k0 * x.xt2, 0.0)];
    let pm = phase_model(xi, x.direction(), cfg)?;
    let f = kernel_k(&ComplexPoint2::physical(xi[0], xi[1]), cfg)? * vc.wstar;
    let s = saddle2d_integral(pm.hessian, f, x.r)?;
    let pre = -I / (4.0 * PI * PI) * (-I * x.r * pm.value).exp();
    Ok(Comparison { numeric: s.numeric.scale(pre), closed: u_sw(x, cfg, vc)?.value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_incidence;

    fn simple() -> IncidenceConfig {
        make_incidence(1.0, 0.0, PI / 3.0, 5.0 * PI / 4.0).unwrap()
    }

    #[test]
    fn pole_integral_both_sides() {
        for (a, side) in [(0.7, Side::Above), (-0.7, Side::Above), (0.4, Side::Below), (-0.4, Side::Below)] {
            let p = C64::new(0.1, 0.0);
            let num = pole_line_integral(a, p, side, 50.0).unwrap();
            let closed = pole_line_closed(a, p, side, 50.0);
            assert!((num.value - closed).norm() < 1e-8 * 2.0 * PI, "{a} {side:?}: {:?} vs {closed:?}", num.value);
        }
    }

    #[test]
    fn pole_off_axis() {
        let p = C64::new(0.2, 0.3);
        let num = pole_line_integral(0.5, p, Side::Above, 20.0).unwrap();
        assert!((num.value - pole_line_closed(0.5, p, Side::Above, 20.0)).norm() < 1e-8);
    }

    #[test]
    fn fresnel() {
        for sigma in [2.5, -0.7] {
            let g = gaussian_line_integral(sigma, 100.0).unwrap();
            assert!((g.value - gaussian_line_closed(sigma, 100.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn pd1_separable_model_is_the_closed_form() {
        let cfg = simple();
        let x = ObservationPoint::new(200.0, -128.0, 96.0).unwrap();
        let m = pd1_model(&x, &cfg).unwrap();
        let cmp = sos_local_integral(&m, x.r).unwrap();
        let u = u_pd1(&x, &cfg).unwrap().value;
        assert!((cmp.closed - u).norm() < 1e-12 * u.norm());
        assert!(cmp.rel_err() < 1e-6);
    }

    #[test]
    fn identity_hessian() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let s = saddle2d_integral([[one, zero], [zero, one]], one, 100.0).unwrap();
        assert!((s.closed - 2.0 * PI / 100.0 * C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(s.rel_err() < 1e-10);
    }
}
