//! Real traces of the singular sets, special points of the spectral plane,
//! and the Heaviside gates deciding which points contribute.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CaseKind, IncidenceConfig};
use crate::kernel::{kernel_k, ComplexPoint2};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TraceId {
    P1,
    P2,
    B1,
    B2,
    C,
    Cc,
    Sb1,
    Sb2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TraceGeometry {
    /// `ξ1 = value`
    Xi1Const(f64),
    /// `ξ2 = value`
    Xi2Const(f64),
    /// `ξ1² + ξ2² = radius²`
    Circle { radius: f64 },
    /// The part of the circle in the third quadrant.
    ThirdQuadrantArc { radius: f64 },
}

/// Side on which the real integration surface passes the singular value of
/// the transverse coordinate (`ξ1` for vertical lines, `ξ2` for horizontal
/// ones, the radius for the circle).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub id: TraceId,
    pub geometry: TraceGeometry,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointKind {
    TransverseCrossing,
    TripleCrossing,
    AdditiveCrossing,
    TangentialTouch,
    SoS,
    Saddle2D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointLabel {
    RW,
    PD1,
    PD2,
    SW,
    SD1,
    SD2,
    Inert,
}

impl PointLabel {
    pub fn swapped(self) -> Self {
        match self {
            PointLabel::PD1 => PointLabel::PD2,
            PointLabel::PD2 => PointLabel::PD1,
            PointLabel::SD1 => PointLabel::SD2,
            PointLabel::SD2 => PointLabel::SD1,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialPoint {
    /// Short tag such as `PD1^F` or `b1∩b2`.
    pub name: String,
    pub location: [f64; 2],
    pub kind: PointKind,
    pub traces: Vec<TraceId>,
    pub label: PointLabel,
    pub active: bool,
    pub penumbra: bool,
}

/// Phase `G = x̃1ξ1 + x̃2ξ2 − x̃3/K` and its derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseModel {
    pub value: C64,
    pub gradient: [C64; 2],
    pub hessian: [[C64; 2]; 2],
}

impl TraceId {
    pub fn swapped(self) -> Self {
        match self {
            TraceId::P1 => TraceId::P2,
            TraceId::P2 => TraceId::P1,
            TraceId::B1 => TraceId::B2,
            TraceId::B2 => TraceId::B1,
            TraceId::Sb1 => TraceId::Sb2,
            TraceId::Sb2 => TraceId::Sb1,
            other => other,
        }
    }
}

/// Real traces at vanishing absorption. Every straight trace sits at a value
/// with negative imaginary part once absorption is switched on (or keeps the
/// bridge it had before the sign change of `k1`, `k2`), so the surface passes
/// above it; the circle radius `k` has positive imaginary part and is passed
/// below.
pub fn real_traces(cfg: &IncidenceConfig, case: CaseKind) -> Result<Vec<Trace>> {
    case.require_components()?;
    let k0 = cfg.k0;
    let line1 = |id, v| Trace { id, geometry: TraceGeometry::Xi1Const(v), side: Side::Above };
    let line2 = |id, v| Trace { id, geometry: TraceGeometry::Xi2Const(v), side: Side::Above };
    let mut out = vec![
        line1(TraceId::P1, -cfg.k1.re),
        line2(TraceId::P2, -cfg.k2.re),
        line1(TraceId::B1, -k0),
        line2(TraceId::B2, -k0),
        Trace { id: TraceId::C, geometry: TraceGeometry::Circle { radius: k0 }, side: Side::Below },
    ];
    if case == CaseKind::Complicated {
        out.push(line1(TraceId::Sb1, -cfg.k1p.re));
        out.push(line2(TraceId::Sb2, -cfg.k2p.re));
    }
    Ok(out)
}

/// The arc of the circle on which `K·W` is regular.
pub fn cc_arc(cfg: &IncidenceConfig) -> Trace {
    Trace { id: TraceId::Cc, geometry: TraceGeometry::ThirdQuadrantArc { radius: cfg.k0 }, side: Side::Below }
}

pub fn phase_model(p: [C64; 2], xt: [f64; 3], cfg: &IncidenceConfig) -> Result<PhaseModel> {
    let [x1, x2, x3] = xt;
    let lin = p[0] * x1 + p[1] * x2;
    if x3 == 0.0 {
        let zero = C64::new(0.0, 0.0);
        return Ok(PhaseModel {
            value: lin,
            gradient: [C64::new(x1, 0.0), C64::new(x2, 0.0)],
            hessian: [[zero; 2]; 2],
        });
    }
    if p[0].im == 0.0 && p[1].im == 0.0 && p[0].norm_sqr() + p[1].norm_sqr() >= cfg.k0 * cfg.k0 {
        return Err(Error::OutsideCircle);
    }
    let s = kernel_k(&ComplexPoint2::physical(p[0], p[1]), cfg)?.inv();
    let q = s * s;
    let g = [x1 + x3 * p[0] / s, x2 + x3 * p[1] / s];
    let h = |i: usize, j: usize| {
        let d = if i == j { s.inv() } else { C64::new(0.0, 0.0) };
        x3 * (d + p[i] * p[j] / (q * s))
    };
    Ok(PhaseModel { value: lin - x3 * s, gradient: g, hessian: [[h(0, 0), h(0, 1)], [h(1, 0), h(1, 1)]] })
}

/// Result of a product of Heaviside factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub h: f64,
    pub penumbra: bool,
}

impl Gate {
    const OPEN: Gate = Gate { h: 1.0, penumbra: false };

    fn and(self, other: Gate) -> Gate {
        Gate { h: self.h * other.h, penumbra: self.penumbra || other.penumbra }
    }

    pub fn active(self) -> bool {
        self.h > 0.0
    }
}

fn heaviside(arg: f64, scale: f64) -> Gate {
    if arg.abs() <= tolerances::PENUMBRA * scale {
        Gate { h: 0.5, penumbra: true }
    } else if arg > 0.0 {
        Gate { h: 1.0, penumbra: false }
    } else {
        Gate { h: 0.0, penumbra: false }
    }
}

/// Heaviside gate of a wave label at the point or direction `x`; the gates
/// are homogeneous, so either may be passed. `x[2] == 0` selects the
/// in-plane gates.
pub fn gate(label: PointLabel, x: [f64; 3], cfg: &IncidenceConfig) -> Gate {
    match label {
        PointLabel::PD2 | PointLabel::SD2 => {
            return gate(label.swapped(), [x[1], x[0], x[2]], &cfg.swapped());
        }
        _ => {}
    }
    let [x1, x2, x3] = x;
    let (k1, k2, k3, k1p, k2p) = (cfg.k1.re, cfg.k2.re, cfg.k3.re, cfg.k1p.re, cfg.k2p.re);
    let rho = x2.hypot(x3);
    let plane = x3 == 0.0;
    match label {
        PointLabel::RW => {
            let a = heaviside(x1 + x3 * k1 / k3, x1.abs() + x3 * (k1 / k3).abs());
            let b = heaviside(x2 + x3 * k2 / k3, x2.abs() + x3 * (k2 / k3).abs());
            a.and(b)
        }
        PointLabel::PD1 if plane => {
            heaviside(-x2, x2.abs()).and(heaviside(k2p * x1 + k1 * x2, (k2p * x1).abs() + (k1 * x2).abs()))
        }
        PointLabel::PD1 => heaviside(x1 - k1 / k2p * rho, x1.abs() + (k1 / k2p).abs() * rho),
        PointLabel::SW if plane => {
            let r = x1.hypot(x2);
            let tol = tolerances::PENUMBRA * r;
            let edge = (x1 > -tol && x2.abs() <= tol) || (x2 > -tol && x1.abs() <= tol);
            if edge {
                Gate { h: 0.5, penumbra: true }
            } else if x1 > 0.0 && x2 > 0.0 {
                Gate { h: 0.0, penumbra: false }
            } else {
                Gate::OPEN
            }
        }
        PointLabel::SW => Gate::OPEN,
        PointLabel::SD1 if plane => {
            heaviside(-x2, x2.abs()).and(heaviside(k1p * x2 - k2 * x1, (k1p * x2).abs() + (k2 * x1).abs()))
        }
        PointLabel::SD1 => heaviside(-k2 * x1 - k1p * rho, (k2 * x1).abs() + k1p.abs() * rho),
        PointLabel::Inert => Gate { h: 0.0, penumbra: false },
        PointLabel::PD2 | PointLabel::SD2 => unreachable!(),
    }
}

/// Activity and penumbra flags of a special point for direction `xt`.
pub fn activity(sp: &SpecialPoint, xt: [f64; 3], cfg: &IncidenceConfig) -> (bool, bool) {
    if matches!(sp.kind, PointKind::AdditiveCrossing | PointKind::TangentialTouch) {
        return (false, false);
    }
    let g = gate(sp.label, xt, cfg);
    (g.active(), g.penumbra)
}

struct Builder<'a> {
    cfg: &'a IncidenceConfig,
    xt: [f64; 3],
    out: Vec<SpecialPoint>,
}

impl Builder<'_> {
    fn push(&mut self, name: &str, location: [f64; 2], kind: PointKind, traces: &[TraceId], label: PointLabel) {
        let mut sp = SpecialPoint {
            name: name.to_string(),
            location,
            kind,
            traces: traces.to_vec(),
            label,
            active: false,
            penumbra: false,
        };
        let (a, p) = activity(&sp, self.xt, self.cfg);
        sp.active = a;
        sp.penumbra = p;
        self.out.push(sp);
    }
}

/// Special points of the in-plane Fourier integral (`x̃3 = 0`).
pub fn special_points_plane(cfg: &IncidenceConfig, case: CaseKind, xt: [f64; 3]) -> Result<Vec<SpecialPoint>> {
    use PointKind::*;
    use PointLabel::*;
    use TraceId::*;
    case.require_components()?;
    if xt[2] != 0.0 {
        return Err(Error::InvalidPoint("in-plane enumeration needs x3 = 0".into()));
    }
    let n = xt[0].hypot(xt[1]);
    if xt[1].abs() <= tolerances::PENUMBRA * n {
        return Err(Error::PenumbralDirection("vertical traces"));
    }
    if xt[0].abs() <= tolerances::PENUMBRA * n {
        return Err(Error::PenumbralDirection("horizontal traces"));
    }
    let (k0, k1, k2, k1p, k2p) = (cfg.k0, cfg.k1.re, cfg.k2.re, cfg.k1p.re, cfg.k2p.re);
    let mut b = Builder { cfg, xt, out: Vec::new() };
    b.push("RW", [-k1, -k2], TransverseCrossing, &[P1, P2], RW);
    b.push("PD1^F", [-k1, k2p], TransverseCrossing, &[P1, C], PD1);
    b.push("PD2^F", [k1p, -k2], TransverseCrossing, &[P2, C], PD2);
    b.push("SW", [-k0 * xt[0] / n, -k0 * xt[1] / n], SoS, &[C], SW);
    match case {
        CaseKind::Simple => {
            b.push("PD1^W", [-k1, -k2p], TransverseCrossing, &[P1, C], Inert);
            b.push("PD2^W", [-k1p, -k2], TransverseCrossing, &[P2, C], Inert);
        }
        _ => {
            b.push("SD1^F", [-k1p, -k2], TripleCrossing, &[Sb1, C, P2], SD1);
            b.push("SD2^F", [-k1, -k2p], TripleCrossing, &[Sb2, C, P1], SD2);
            b.push("SD1^W", [-k1p, k2], TransverseCrossing, &[Sb1, C], Inert);
            b.push("SD2^W", [k1, -k2p], TransverseCrossing, &[Sb2, C], Inert);
        }
    }
    b.push("b1∩b2", [-k0, -k0], AdditiveCrossing, &[B1, B2], Inert);
    b.push("p1∩b2", [-k1, -k0], AdditiveCrossing, &[P1, B2], Inert);
    b.push("p2∩b1", [-k0, -k2], AdditiveCrossing, &[P2, B1], Inert);
    b.push("b1∩c", [-k0, 0.0], TangentialTouch, &[B1, C], Inert);
    b.push("b2∩c", [0.0, -k0], TangentialTouch, &[B2, C], Inert);
    if case == CaseKind::Complicated {
        b.push("sb1∩sb2", [-k1p, -k2p], AdditiveCrossing, &[Sb1, Sb2], Inert);
        b.push("sb1∩b2", [-k1p, -k0], AdditiveCrossing, &[Sb1, B2], Inert);
        b.push("b1∩sb2", [-k0, -k2p], AdditiveCrossing, &[B1, Sb2], Inert);
    }
    Ok(b.out)
}

/// Special points of the Fourier-type integral for `x̃3 > 0`.
pub fn special_points_space(cfg: &IncidenceConfig, case: CaseKind, xt: [f64; 3]) -> Result<Vec<SpecialPoint>> {
    use PointKind::*;
    use PointLabel::*;
    use TraceId::*;
    case.require_components()?;
    if xt[2] <= 0.0 {
        return Err(Error::InvalidPoint("off-plane enumeration needs x3 > 0".into()));
    }
    let (k0, k1, k2, k1p, k2p) = (cfg.k0, cfg.k1.re, cfg.k2.re, cfg.k1p.re, cfg.k2p.re);
    let norm = (xt[0] * xt[0] + xt[1] * xt[1] + xt[2] * xt[2]).sqrt();
    let [x1, x2, x3] = xt.map(|v| v / norm);
    let s1 = x2.hypot(x3);
    let s2 = x1.hypot(x3);
    let mut b = Builder { cfg, xt, out: Vec::new() };
    b.push("RW", [-k1, -k2], TransverseCrossing, &[P1, P2], RW);
    b.push("SW", [-k0 * x1, -k0 * x2], Saddle2D, &[], SW);
    b.push("PD1", [-k1, -x2 * k2p / s1], SoS, &[P1], PD1);
    b.push("PD2", [-x1 * k1p / s2, -k2], SoS, &[P2], PD2);
    if case == CaseKind::Complicated {
        b.push("SD1", [-k1p, k2 * x2 / s1], SoS, &[Sb1], SD1);
        b.push("SD2", [k1 * x1 / s2, -k2p], SoS, &[Sb2], SD2);
    }
    Ok(b.out)
}
