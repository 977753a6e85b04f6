//! Closed-form far-field wave components and the total field.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CaseKind, IncidenceConfig, ObservationPoint};
use crate::singularities::{gate, Gate, PointLabel};
use crate::tolerances;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WaveLabel {
    RW,
    PD1,
    PD2,
    SW,
    SD1,
    SD2,
}

impl WaveLabel {
    pub const ALL: [WaveLabel; 6] =
        [WaveLabel::RW, WaveLabel::PD1, WaveLabel::PD2, WaveLabel::SW, WaveLabel::SD1, WaveLabel::SD2];

    pub fn for_case(case: CaseKind) -> &'static [WaveLabel] {
        match case {
            CaseKind::Complicated => &Self::ALL,
            _ => &Self::ALL[..4],
        }
    }

    pub fn point_label(self) -> PointLabel {
        match self {
            WaveLabel::RW => PointLabel::RW,
            WaveLabel::PD1 => PointLabel::PD1,
            WaveLabel::PD2 => PointLabel::PD2,
            WaveLabel::SW => PointLabel::SW,
            WaveLabel::SD1 => PointLabel::SD1,
            WaveLabel::SD2 => PointLabel::SD2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WaveLabel::RW => "RW",
            WaveLabel::PD1 => "PD1",
            WaveLabel::PD2 => "PD2",
            WaveLabel::SW => "SW",
            WaveLabel::SD1 => "SD1",
            WaveLabel::SD2 => "SD2",
        }
    }

    pub fn parse(s: &str) -> Option<WaveLabel> {
        Self::ALL.into_iter().find(|l| l.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for WaveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Quality annotations attached to component values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flag {
    /// The point is within the penumbral tolerance of the component's gate.
    Penumbra(WaveLabel),
    /// SW was evaluated with the unit placeholder for `W(ξ_SW)`.
    RelativeSwAmplitude,
    /// The off-plane secondary diffracted formula is near its blow-up sector.
    BlowupZone(WaveLabel),
    /// The component could not be evaluated at this point.
    Failed(WaveLabel, String),
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::Penumbra(l) => write!(f, "penumbra:{l}"),
            Flag::RelativeSwAmplitude => f.write_str("relative-sw-amplitude"),
            Flag::BlowupZone(l) => write!(f, "blowup-zone:{l}"),
            Flag::Failed(l, m) => write!(f, "failed:{l}:{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveComponent {
    pub label: WaveLabel,
    pub value: C64,
    pub active: bool,
    pub penumbra: bool,
    pub needs_vertex_coeff: bool,
    pub flags: Vec<Flag>,
}

impl WaveComponent {
    fn gated(label: WaveLabel, g: Gate, value: impl FnOnce() -> C64) -> WaveComponent {
        let value = if g.active() { value() * g.h } else { C64::new(0.0, 0.0) };
        let mut flags = Vec::new();
        if g.penumbra {
            flags.push(Flag::Penumbra(label));
        }
        WaveComponent {
            label,
            value,
            active: g.active(),
            penumbra: g.penumbra,
            needs_vertex_coeff: label == WaveLabel::SW,
            flags,
        }
    }

    fn relabel(mut self, label: WaveLabel) -> WaveComponent {
        let from = self.label;
        self.label = label;
        for f in &mut self.flags {
            match f {
                Flag::Penumbra(l) | Flag::BlowupZone(l) | Flag::Failed(l, _) if *l == from => *l = label,
                _ => {}
            }
        }
        self
    }

    fn mark_penumbra(&mut self) {
        if !self.penumbra {
            self.penumbra = true;
            self.flags.push(Flag::Penumbra(self.label));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexSource {
    UserSupplied,
    PlaceholderUnit,
}

/// The value `W(ξ_SW)` for the current direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexCoefficient {
    pub wstar: C64,
    pub source: VertexSource,
}

impl VertexCoefficient {
    pub fn unit() -> Self {
        Self { wstar: C64::new(1.0, 0.0), source: VertexSource::PlaceholderUnit }
    }

    pub fn supplied(wstar: C64) -> Self {
        Self { wstar, source: VertexSource::UserSupplied }
    }
}

impl Default for VertexCoefficient {
    fn default() -> Self {
        Self::unit()
    }
}

fn require_case(cfg: &IncidenceConfig) -> Result<CaseKind> {
    let case = cfg.case()?;
    case.require_components()?;
    Ok(case)
}

/// `x2 + sqrt(x2² + x3²)` without cancellation for negative `x2`.
fn rho_plus(x2: f64, x3: f64, rho: f64) -> f64 {
    if x2 >= 0.0 {
        rho + x2
    } else {
        x3 * x3 / (rho - x2)
    }
}

pub fn u_incident(x: &ObservationPoint, cfg: &IncidenceConfig) -> C64 {
    (I * (cfg.k1 * x.x1 + cfg.k2 * x.x2 + cfg.k3 * x.x3)).exp()
}

/// Specularly reflected plane wave.
pub fn u_rw(x: &ObservationPoint, cfg: &IncidenceConfig) -> Result<WaveComponent> {
    require_case(cfg)?;
    let g = gate(PointLabel::RW, [x.x1, x.x2, x.x3], cfg);
    Ok(WaveComponent::gated(WaveLabel::RW, g, || {
        -(I * (cfg.k1 * x.x1 + cfg.k2 * x.x2 - cfg.k3 * x.x3)).exp()
    }))
}

/// Primary conical wave diffracted by the edge along `x1`.
pub fn u_pd1(x: &ObservationPoint, cfg: &IncidenceConfig) -> Result<WaveComponent> {
    require_case(cfg)?;
    let g = gate(PointLabel::PD1, [x.x1, x.x2, x.x3], cfg);
    let (k1, k2, k2p) = (cfg.k1, cfg.k2, cfg.k2p);
    let pre = C64::from_polar(1.0, -0.75 * PI);
    if x.on_plane() {
        if g.active() && x.x2.abs() <= tolerances::PENUMBRA * x.r {
            return Err(Error::DivergentAtPlate("PD1"));
        }
        return Ok(WaveComponent::gated(WaveLabel::PD1, g, || {
            pre * (I * (k1 * x.x1 - k2p * x.x2)).exp() / ((k2p + k2).sqrt() * (-PI * x.x2).sqrt())
        }));
    }
    let rho = x.rho1();
    let den = k2 * rho - k2p * x.x2;
    let mut out = WaveComponent::gated(WaveLabel::PD1, g, || {
        pre * x.x3 * (k2p + k2).sqrt() * (I * (k1 * x.x1 + k2p * rho)).exp()
            / ((2.0 * PI).sqrt() * den * rho_plus(x.x2, x.x3, rho).sqrt())
    });
    if g.active() && den.norm() <= tolerances::PENUMBRA * (k2.norm() * rho + k2p.norm() * x.x2.abs()) {
        out.mark_penumbra();
    }
    Ok(out)
}

/// Primary conical wave diffracted by the edge along `x2`.
pub fn u_pd2(x: &ObservationPoint, cfg: &IncidenceConfig) -> Result<WaveComponent> {
    u_pd1(&x.swapped(), &cfg.swapped())
        .map(|c| c.relabel(WaveLabel::PD2))
        .map_err(|e| match e {
            Error::DivergentAtPlate(_) => Error::DivergentAtPlate("PD2"),
            other => other,
        })
}

/// Spherical wave scattered by the vertex.
pub fn u_sw(x: &ObservationPoint, cfg: &IncidenceConfig, vc: &VertexCoefficient) -> Result<WaveComponent> {
    require_case(cfg)?;
    let k = cfg.k;
    let g = gate(PointLabel::SW, [x.x1, x.x2, x.x3], cfg);
    let r = if x.on_plane() { x.x1.hypot(x.x2) } else { x.r };
    let mut out = WaveComponent::gated(WaveLabel::SW, g, || {
        -(k * vc.wstar / (2.0 * PI)) * (I * k * r).exp() / (k * r)
    });
    if vc.source == VertexSource::PlaceholderUnit {
        out.flags.push(Flag::RelativeSwAmplitude);
    }
    Ok(out)
}

/// Secondary wave diffracted first by the edge along `x2`, then along `x1`.
pub fn u_sd1(x: &ObservationPoint, cfg: &IncidenceConfig) -> Result<WaveComponent> {
    if require_case(cfg)? == CaseKind::Simple {
        return Err(Error::SimpleCaseRequest("SD1"));
    }
    let g = gate(PointLabel::SD1, [x.x1, x.x2, x.x3], cfg);
    let (k1, k2, k1p) = (cfg.k1, cfg.k2, cfg.k1p);
    if x.on_plane() {
        return Ok(WaveComponent::gated(WaveLabel::SD1, g, || {
            let num = -I * (k1p + k1).sqrt() * (-x.x2).sqrt() * (I * (k1p * x.x1 + k2 * x.x2)).exp();
            num / (SQRT_2 * PI * (k1 - k1p) * x.x1 * (k1p * x.x2 - k2 * x.x1).sqrt())
        }));
    }
    let rho = x.rho1();
    let rp = rho_plus(x.x2, x.x3, rho);
    if g.active() && rp == 0.0 {
        return Err(Error::DivergentAtPlate("SD1"));
    }
    let mut out = WaveComponent::gated(WaveLabel::SD1, g, || {
        let b = -k2 * x.x1 - k1p * rho;
        let num = -x.x3 * (k1p + k1).sqrt() * (I * (k1p * x.x1 - k2 * rho)).exp();
        num / (4.0 * PI * (k1p - k1) * rp.powf(1.5) * b * b.sqrt())
    });
    if g.active() && x.x2 < 0.0 && rp < tolerances::SD_BLOWUP * rho {
        out.flags.push(Flag::BlowupZone(WaveLabel::SD1));
    }
    Ok(out)
}

/// Secondary wave diffracted first by the edge along `x1`, then along `x2`.
pub fn u_sd2(x: &ObservationPoint, cfg: &IncidenceConfig) -> Result<WaveComponent> {
    u_sd1(&x.swapped(), &cfg.swapped())
        .map(|c| c.relabel(WaveLabel::SD2))
        .map_err(|e| match e {
            Error::DivergentAtPlate(_) => Error::DivergentAtPlate("SD2"),
            Error::SimpleCaseRequest(_) => Error::SimpleCaseRequest("SD2"),
            other => other,
        })
}

pub fn component(
    label: WaveLabel,
    x: &ObservationPoint,
    cfg: &IncidenceConfig,
    vc: &VertexCoefficient,
) -> Result<WaveComponent> {
    match label {
        WaveLabel::RW => u_rw(x, cfg),
        WaveLabel::PD1 => u_pd1(x, cfg),
        WaveLabel::PD2 => u_pd2(x, cfg),
        WaveLabel::SW => u_sw(x, cfg, vc),
        WaveLabel::SD1 => u_sd1(x, cfg),
        WaveLabel::SD2 => u_sd2(x, cfg),
    }
}

/// Real phase function `S(x)` of each component's exponential, at
/// vanishing absorption.
pub fn phase_function(label: WaveLabel, x: &ObservationPoint, cfg: &IncidenceConfig) -> f64 {
    let (k1, k2, k3, k1p, k2p, k0) = (cfg.k1.re, cfg.k2.re, cfg.k3.re, cfg.k1p.re, cfg.k2p.re, cfg.k0);
    match label {
        WaveLabel::RW => k1 * x.x1 + k2 * x.x2 - k3 * x.x3,
        WaveLabel::PD1 => k1 * x.x1 + k2p * x.rho1(),
        WaveLabel::PD2 => k2 * x.x2 + k1p * x.rho2(),
        WaveLabel::SW => k0 * x.r,
        WaveLabel::SD1 => k1p * x.x1 - k2 * x.rho1(),
        WaveLabel::SD2 => k2p * x.x2 - k1 * x.rho2(),
    }
}

/// Analytic gradient of [`phase_function`].
pub fn phase_gradient(label: WaveLabel, x: &ObservationPoint, cfg: &IncidenceConfig) -> [f64; 3] {
    let (k1, k2, k3, k1p, k2p, k0) = (cfg.k1.re, cfg.k2.re, cfg.k3.re, cfg.k1p.re, cfg.k2p.re, cfg.k0);
    let r1 = x.rho1();
    let r2 = x.rho2();
    match label {
        WaveLabel::RW => [k1, k2, -k3],
        WaveLabel::PD1 => [k1, k2p * x.x2 / r1, k2p * x.x3 / r1],
        WaveLabel::PD2 => [k1p * x.x1 / r2, k2, k1p * x.x3 / r2],
        WaveLabel::SW => [k0 * x.xt1, k0 * x.xt2, k0 * x.xt3],
        WaveLabel::SD1 => [k1p, -k2 * x.x2 / r1, -k2 * x.x3 / r1],
        WaveLabel::SD2 => [-k1 * x.x1 / r2, k2p, -k1 * x.x3 / r2],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalField {
    pub scattered: C64,
    pub total: C64,
    pub breakdown: Vec<WaveComponent>,
    pub flags: Vec<Flag>,
}

/// Sum of the active components plus the incident wave.
pub fn total_field(x: &ObservationPoint, cfg: &IncidenceConfig, vc: &VertexCoefficient) -> Result<TotalField> {
    let case = require_case(cfg)?;
    let mut breakdown = Vec::new();
    let mut flags = Vec::new();
    let mut scattered = C64::new(0.0, 0.0);
    for &label in WaveLabel::for_case(case) {
        let c = component(label, x, cfg, vc)?;
        scattered += c.value;
        for f in &c.flags {
            if !flags.contains(f) {
                flags.push(f.clone());
            }
        }
        breakdown.push(c);
    }
    Ok(TotalField { scattered, total: scattered + u_incident(x, cfg), breakdown, flags })
}
