//! Incidence configuration, derived wavenumbers and observation points.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances;

/// A plane wave `exp(i(k1 x1 + k2 x2 + k3 x3))` hitting the quarter-plane,
/// together with the projections derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncidenceConfig {
    pub k0: f64,
    pub kappa: f64,
    pub theta0: f64,
    pub phi0: f64,
    pub k: C64,
    pub k1: C64,
    pub k2: C64,
    pub k3: C64,
    pub k1p: C64,
    pub k2p: C64,
    /// Angle with `k2 = -k cos(vartheta1)` and `k1p = k sin(vartheta1)` at
    /// vanishing absorption.
    pub vartheta1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseKind {
    Simple,
    Complicated,
    /// `Re k1 > 0`, `Re k2 < 0`.
    Intermediate12,
    /// `Re k1 < 0`, `Re k2 > 0`.
    Intermediate21,
}

impl CaseKind {
    pub fn has_components(self) -> bool {
        matches!(self, CaseKind::Simple | CaseKind::Complicated)
    }

    pub fn require_components(self) -> Result<()> {
        if self.has_components() {
            Ok(())
        } else {
            Err(Error::UnsupportedCase(format!("{self:?}")))
        }
    }
}

/// Builds an incidence configuration. `phi0` is reduced modulo `2π`.
pub fn make_incidence(k0: f64, kappa: f64, theta0: f64, phi0: f64) -> Result<IncidenceConfig> {
    if !(k0.is_finite() && k0 > 0.0) {
        return Err(Error::InvalidConfig(format!("k0 must be positive, got {k0}")));
    }
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(Error::InvalidConfig(format!("kappa must be non-negative, got {kappa}")));
    }
    if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
        return Err(Error::InvalidConfig(format!("theta0 must lie in (0, pi/2), got {theta0}")));
    }
    if !phi0.is_finite() {
        return Err(Error::InvalidConfig(format!("phi0 must be finite, got {phi0}")));
    }
    let phi0 = phi0.rem_euclid(TAU);
    let k = C64::new(k0, kappa);
    let (s0, c0) = theta0.sin_cos();
    let k1 = -k * s0 * phi0.cos();
    let k2 = -k * s0 * phi0.sin();
    let k3 = -k * c0;
    let k1p = (k * k - k2 * k2).sqrt();
    let k2p = (k * k - k1 * k1).sqrt();
    let vartheta1 = k1p.re.atan2(-k2.re);
    Ok(IncidenceConfig { k0, kappa, theta0, phi0, k, k1, k2, k3, k1p, k2p, vartheta1 })
}

/// Quadrant of `(Re k1, Re k2)`.
pub fn classify_case(cfg: &IncidenceConfig) -> Result<CaseKind> {
    let tol = tolerances::GRAZING * cfg.k0;
    if cfg.k1.re.abs() < tol {
        return Err(Error::GrazingIncidence { which: "k1", value: cfg.k1.re });
    }
    if cfg.k2.re.abs() < tol {
        return Err(Error::GrazingIncidence { which: "k2", value: cfg.k2.re });
    }
    Ok(match (cfg.k1.re > 0.0, cfg.k2.re > 0.0) {
        (true, true) => CaseKind::Simple,
        (false, false) => CaseKind::Complicated,
        (true, false) => CaseKind::Intermediate12,
        (false, true) => CaseKind::Intermediate21,
    })
}

impl IncidenceConfig {
    /// Wavenumber with the effective absorption used by branch predicates.
    pub fn k_eff(&self) -> C64 {
        C64::new(self.k0, self.kappa.max(tolerances::KAPPA_EFF * self.k0))
    }

    /// The configuration obtained by exchanging the roles of `x1` and `x2`.
    pub fn swapped(&self) -> IncidenceConfig {
        let phi0 = (FRAC_PI_2 - self.phi0).rem_euclid(TAU);
        let mut out = *self;
        out.phi0 = phi0;
        out.k1 = self.k2;
        out.k2 = self.k1;
        out.k1p = self.k2p;
        out.k2p = self.k1p;
        out.vartheta1 = out.k1p.re.atan2(-out.k2.re);
        out
    }

    pub fn case(&self) -> Result<CaseKind> {
        classify_case(self)
    }
}

/// A point of the upper half-space `x3 >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub r: f64,
    pub xt1: f64,
    pub xt2: f64,
    pub xt3: f64,
}

impl ObservationPoint {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        if !(x1.is_finite() && x2.is_finite() && x3.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        if x3 < 0.0 {
            return Err(Error::InvalidPoint(format!("x3 must be >= 0, got {x3}")));
        }
        let r = (x1 * x1 + x2 * x2 + x3 * x3).sqrt();
        if r == 0.0 {
            return Err(Error::InvalidPoint("the origin has no direction".into()));
        }
        Ok(Self { x1, x2, x3, r, xt1: x1 / r, xt2: x2 / r, xt3: x3 / r })
    }

    /// Point at distance `r` along the direction with polar angle `theta`
    /// (from the `x3` axis) and azimuth `phi`. Directions within roundoff of
    /// the plane are snapped onto it.
    pub fn spherical(r: f64, theta: f64, phi: f64) -> Result<Self> {
        let (st, ct) = theta.sin_cos();
        let x3 = if ct.abs() < 1e-14 { 0.0 } else { r * ct };
        Self::new(r * st * phi.cos(), r * st * phi.sin(), x3)
    }

    pub fn swapped(&self) -> Self {
        Self { x1: self.x2, x2: self.x1, xt1: self.xt2, xt2: self.xt1, ..*self }
    }

    pub fn on_plane(&self) -> bool {
        self.x3 == 0.0
    }

    /// `sqrt(x2^2 + x3^2)`, the distance from the `x1` axis.
    pub fn rho1(&self) -> f64 {
        self.x2.hypot(self.x3)
    }

    /// `sqrt(x1^2 + x3^2)`, the distance from the `x2` axis.
    pub fn rho2(&self) -> f64 {
        self.x1.hypot(self.x3)
    }

    pub fn direction(&self) -> [f64; 3] {
        [self.xt1, self.xt2, self.xt3]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn simple_config_values() {
        let cfg = make_incidence(1.0, 0.0, PI / 3.0, 5.0 * PI / 4.0).unwrap();
        assert_relative_eq!(cfg.k1.re, 6f64.sqrt() / 4.0, epsilon = 1e-15);
        assert_relative_eq!(cfg.k2.re, 0.612_372_435_695_794_5, epsilon = 1e-15);
        assert_relative_eq!(cfg.k3.re, -0.5, epsilon = 1e-15);
        assert_relative_eq!(cfg.k2p.re, 0.790_569_415_042_094_8, epsilon = 1e-15);
        assert_eq!(classify_case(&cfg).unwrap(), CaseKind::Simple);
    }

    #[test]
    fn complicated_config_values() {
        let cfg = make_incidence(1.0, 0.0, PI / 3.0, PI / 4.0).unwrap();
        assert_relative_eq!(cfg.k1.re, -0.612_372_435_695_794_5, epsilon = 1e-15);
        assert_relative_eq!(cfg.k1p.re, 0.790_569_415_042_094_8, epsilon = 1e-15);
        assert_eq!(classify_case(&cfg).unwrap(), CaseKind::Complicated);
        assert_relative_eq!(cfg.k2.re, -cfg.vartheta1.cos(), epsilon = 1e-15);
        assert_relative_eq!(cfg.k1p.re, cfg.vartheta1.sin(), epsilon = 1e-15);
    }

    #[test]
    fn intermediate_and_grazing() {
        let cfg = make_incidence(1.0, 0.0, PI / 3.0, 3.0 * PI / 4.0).unwrap();
        assert_eq!(classify_case(&cfg).unwrap(), CaseKind::Intermediate12);
        let cfg = make_incidence(1.0, 0.0, PI / 3.0, PI).unwrap();
        assert!(matches!(classify_case(&cfg), Err(Error::GrazingIncidence { which: "k2", .. })));
    }

    #[test]
    fn axial_limit() {
        let cfg = make_incidence(1.0, 0.0, 1e-9, 1.0).unwrap();
        assert!(cfg.k1.norm() < 1e-8 && cfg.k2.norm() < 1e-8);
        assert_relative_eq!(cfg.k3.re, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_incidence(0.0, 0.0, 1.0, 1.0).is_err());
        assert!(make_incidence(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(make_incidence(1.0, 0.0, FRAC_PI_2, 1.0).is_err());
        assert!(ObservationPoint::new(1.0, 1.0, -1.0).is_err());
    }
}
