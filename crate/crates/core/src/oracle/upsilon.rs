//! The ψ-integral over the contour Υ that produces the in-plane secondary
//! diffracted wave, evaluated by quadrature and in closed form.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::quad::{integrate, QuadOptions, QuadResult};
use crate::error::{Error, Result};
use crate::geometry::{CaseKind, IncidenceConfig};
use crate::kernel::upper_sqrt;
use crate::tolerances;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Points of the real ψ segment that Υ must avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UpsilonPoint {
    Zero,
    Theta,
    HalfPi,
    Pi,
    ThetaPlusPi,
    ThreeHalfPi,
    TwoPi,
    /// `φ + π/2` reduced to `[0, 2π)`.
    PoleA,
    /// `φ + 3π/2` reduced to `[0, 2π)`.
    PoleB,
}

/// `+1`: Υ passes above the point, `−1`: below.
pub const SIDE_TABLE: [(UpsilonPoint, i8); 9] = [
    (UpsilonPoint::Zero, 1),
    (UpsilonPoint::Theta, -1),
    (UpsilonPoint::HalfPi, -1),
    (UpsilonPoint::Pi, -1),
    (UpsilonPoint::ThetaPlusPi, 1),
    (UpsilonPoint::ThreeHalfPi, 1),
    (UpsilonPoint::TwoPi, 1),
    (UpsilonPoint::PoleA, 1),
    (UpsilonPoint::PoleB, -1),
];

/// A second admissible table: the zeros of `sin ψ` at `0, π, 2π` are simple
/// poles with residues that cancel in pairs, so flipping all three leaves
/// the integral unchanged.
pub const SIDE_TABLE_ALT: [(UpsilonPoint, i8); 9] = [
    (UpsilonPoint::Zero, -1),
    (UpsilonPoint::Theta, -1),
    (UpsilonPoint::HalfPi, -1),
    (UpsilonPoint::Pi, 1),
    (UpsilonPoint::ThetaPlusPi, 1),
    (UpsilonPoint::ThreeHalfPi, 1),
    (UpsilonPoint::TwoPi, -1),
    (UpsilonPoint::PoleA, 1),
    (UpsilonPoint::PoleB, -1),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpsilonShape {
    /// Upper bound of the offset `|Im ψ|` of the horizontal runs.
    pub max_offset: f64,
    /// Fraction of the gap between consecutive points at which Υ switches
    /// sides.
    pub jump_at: f64,
    pub sides: &'static [(UpsilonPoint, i8); 9],
}

impl Default for UpsilonShape {
    fn default() -> Self {
        Self { max_offset: 0.15, jump_at: 0.5, sides: &SIDE_TABLE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UpsilonCase {
    /// `φ + π/2 < ϑ1`
    One,
    /// `ϑ1 < φ + π/2 < π/2`
    Two,
    /// `φ + π/2 > π/2`
    Three,
}

pub fn upsilon_case(vartheta1: f64, varphi: f64) -> Result<UpsilonCase> {
    let a = varphi + FRAC_PI_2;
    let eps = tolerances::PENUMBRA;
    if (a - vartheta1).abs() <= eps || (a - FRAC_PI_2).abs() <= eps {
        return Err(Error::CaseBoundary(format!("vartheta1={vartheta1}, varphi={varphi}")));
    }
    Ok(if a < vartheta1 {
        UpsilonCase::One
    } else if a < FRAC_PI_2 {
        UpsilonCase::Two
    } else {
        UpsilonCase::Three
    })
}

/// Integrand `cos^{1/2}ψ / (sin^{1/2}(ϑ1−ψ) sinψ cos(ψ−φ))` with the square
/// root supplied by the caller.
fn ratio(psi: C64, vartheta1: f64) -> C64 {
    psi.cos() / (C64::new(vartheta1, 0.0) - psi).sin()
}

fn rest(psi: C64, varphi: f64) -> C64 {
    (psi.sin() * (psi - varphi).cos()).inv()
}

fn located(p: UpsilonPoint, vartheta1: f64, varphi: f64) -> f64 {
    match p {
        UpsilonPoint::Zero => 0.0,
        UpsilonPoint::Theta => vartheta1,
        UpsilonPoint::HalfPi => FRAC_PI_2,
        UpsilonPoint::Pi => PI,
        UpsilonPoint::ThetaPlusPi => vartheta1 + PI,
        UpsilonPoint::ThreeHalfPi => 1.5 * PI,
        UpsilonPoint::TwoPi => TAU,
        UpsilonPoint::PoleA => (varphi + FRAC_PI_2).rem_euclid(TAU),
        UpsilonPoint::PoleB => (varphi + 1.5 * PI).rem_euclid(TAU),
    }
}

/// Vertices of the polygonal contour Υ from `Re ψ = 0` to `Re ψ = 2π`.
pub fn upsilon_vertices(vartheta1: f64, varphi: f64, shape: &UpsilonShape) -> Result<Vec<C64>> {
    if !(vartheta1 > 0.0 && vartheta1 < FRAC_PI_2) {
        return Err(Error::CaseBoundary(format!("vartheta1={vartheta1} outside (0, pi/2)")));
    }
    let mut pts: Vec<(f64, f64)> = shape
        .sides
        .iter()
        .map(|&(p, s)| (located(p, vartheta1, varphi), f64::from(s)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let gap = pts.windows(2).map(|w| w[1].0 - w[0].0).fold(f64::INFINITY, f64::min);
    if gap <= tolerances::PENUMBRA {
        return Err(Error::CaseBoundary(format!("vartheta1={vartheta1}, varphi={varphi}: coincident points")));
    }
    let d = shape.max_offset.min(0.4 * gap);
    let mut v = vec![C64::new(pts[0].0, pts[0].1 * d)];
    for w in pts.windows(2) {
        let (x0, s0) = w[0];
        let (x1, s1) = w[1];
        if s0 != s1 {
            let xm = x0 + shape.jump_at * (x1 - x0);
            v.push(C64::new(xm, s0 * d));
            v.push(C64::new(xm, s1 * d));
        }
        v.push(C64::new(x1, s1 * d));
    }
    Ok(v)
}

/// Numerical quadrature of the Υ integral.
pub fn upsilon_integral_numeric(vartheta1: f64, varphi: f64) -> Result<QuadResult> {
    upsilon_integral_with(vartheta1, varphi, &UpsilonShape::default())
}

pub fn upsilon_integral_with(vartheta1: f64, varphi: f64, shape: &UpsilonShape) -> Result<QuadResult> {
    upsilon_case(vartheta1, varphi)?;
    let verts = upsilon_vertices(vartheta1, varphi, shape)?;
    let d = verts.iter().map(|z| z.im.abs()).fold(f64::INFINITY, f64::min);
    let panel = (0.5 * d).min(0.05);
    let opts = QuadOptions { rel: 1e-13, abs: 1e-14, max_intervals: 2000 };

    let mut total = QuadResult::zero();
    // The root is followed continuously from its principal value at the
    // first vertex; each panel is short enough that the sign nearest the
    // interpolated endpoint roots is unambiguous.
    let mut h_prev = upper_sqrt(ratio(verts[0], vartheta1));
    for w in verts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = ((b - a).norm() / panel).ceil().max(1.0) as usize;
        for j in 0..n {
            let za = a + (b - a) * (j as f64 / n as f64);
            let zb = a + (b - a) * ((j + 1) as f64 / n as f64);
            let ha = h_prev;
            let hb = nearest(upper_sqrt(ratio(zb, vartheta1)), ha);
            let hm = nearest(upper_sqrt(ratio(0.5 * (za + zb), vartheta1)), 0.5 * (ha + hb));
            if (hm - 0.5 * (ha + hb)).norm() > 0.5 * hm.norm() {
                return Err(Error::NonConvergent("square root varies too fast on a panel".into()));
            }
            let dz = zb - za;
            let r = integrate(
                |t| {
                    let z = za + dz * t;
                    let guide = ha + (hb - ha) * t;
                    nearest(upper_sqrt(ratio(z, vartheta1)), guide) * rest(z, varphi) * dz
                },
                0.0,
                1.0,
                opts,
            )?;
            total = total.add(r);
            h_prev = hb;
        }
    }
    Ok(total)
}

fn nearest(w: C64, guide: C64) -> C64 {
    if (w - guide).norm() <= (w + guide).norm() {
        w
    } else {
        -w
    }
}

/// `4π√(−sinφ) / (cosφ √cos(ϑ1−φ)) · H(−sinφ) · H(cos(ϑ1−φ))`.
pub fn upsilon_integral_closed(vartheta1: f64, varphi: f64) -> Result<C64> {
    let s = varphi.sin();
    let c = (vartheta1 - varphi).cos();
    let eps = tolerances::PENUMBRA;
    if s.abs() <= eps || c.abs() <= eps || varphi.cos().abs() <= eps {
        return Err(Error::CaseBoundary(format!("vartheta1={vartheta1}, varphi={varphi}")));
    }
    if s > 0.0 || c < 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(C64::new(4.0 * PI * (-s).sqrt() / (varphi.cos() * c.sqrt()), 0.0))
}

/// The constant multiplying the Υ integral in the in-plane SD1 field.
pub fn triple_crossing_constant(cfg: &IncidenceConfig) -> C64 {
    (cfg.k1p + cfg.k1).sqrt() / (4.0 * PI * PI * (2.0 * cfg.k).sqrt() * (cfg.k1 - cfg.k1p))
}

/// In-plane SD1 field assembled from the numerical Υ integral.
pub fn triple_crossing_field(x1: f64, x2: f64, cfg: &IncidenceConfig) -> Result<C64> {
    if cfg.case()? != CaseKind::Complicated {
        return Err(Error::SimpleCaseRequest("SD1"));
    }
    let r = x1.hypot(x2);
    if r == 0.0 {
        return Err(Error::InvalidPoint("the origin has no direction".into()));
    }
    let varphi = x2.atan2(x1);
    let ups = upsilon_integral_numeric(cfg.vartheta1, varphi)?;
    let xi = [-cfg.k1p, -cfg.k2];
    let a = triple_crossing_constant(cfg);
    Ok(-I * a / r * (-I * (x1 * xi[0] + x2 * xi[1])).exp() * ups.value)
}

/// `∫ e^{−iρ r cos(ψ−φ)} dρ` along a ray from 0 in a decaying direction,
/// with its closed form `−i / (r cos(ψ−φ))`.
pub fn inner_rho_integral(psi: C64, varphi: f64, r: f64) -> Result<(QuadResult, C64)> {
    let c = (psi - varphi).cos();
    if c.norm() <= tolerances::BRANCH {
        return Err(Error::PoleHit("cos(psi - varphi) = 0"));
    }
    // Steepest direction turned by 0.4 rad, still inside the decaying sector.
    let tilt: f64 = 0.4;
    let dir = C64::from_polar(1.0, -c.arg() - FRAC_PI_2 + tilt);
    let decay = r * c.norm() * tilt.cos();
    let t_max = -tolerances::DECAY_FLOOR.ln() / decay;
    let q = integrate(|t| (-I * r * c * dir * t).exp() * dir, 0.0, t_max, QuadOptions::default())?;
    Ok((q, -I / (r * c)))
}
