//! Finite-difference residual of the Helmholtz operator on one component.

use crate::components::{component, VertexCoefficient, WaveLabel};
use crate::error::{Error, Result};
use crate::geometry::{IncidenceConfig, ObservationPoint};

/// `|(Δ_h + k²)u| / (k²|u|)` with the 7-point centred stencil of step `h`.
pub fn helmholtz_residual(
    label: WaveLabel,
    x: &ObservationPoint,
    h: f64,
    cfg: &IncidenceConfig,
    vc: &VertexCoefficient,
) -> Result<f64> {
    if x.x3 <= h {
        return Err(Error::InvalidPoint("stencil would leave the upper half-space".into()));
    }
    let centre = component(label, x, cfg, vc)?;
    if !centre.active || centre.value.norm() == 0.0 {
        return Err(Error::StencilCrossesDiscontinuity);
    }
    let mut lap = -6.0 * centre.value;
    for axis in 0..3 {
        for s in [-1.0, 1.0] {
            let mut p = [x.x1, x.x2, x.x3];
            p[axis] += s * h;
            let c = component(label, &ObservationPoint::new(p[0], p[1], p[2])?, cfg, vc)?;
            if c.active != centre.active || c.penumbra != centre.penumbra {
                return Err(Error::StencilCrossesDiscontinuity);
            }
            lap += c.value;
        }
    }
    lap /= h * h;
    let k2 = cfg.k * cfg.k;
    Ok((lap + k2 * centre.value).norm() / (k2.norm() * centre.value.norm()))
}
