//! Numerical thresholds shared across modules.
//!
//! Length-like tolerances are multiplied by `k0` (or divided, for lengths in
//! physical space) at the call site.

/// Reject incidence when `|Re k1|` or `|Re k2|` falls below this times `k0`.
pub const GRAZING: f64 = 1e-9;

/// Absorption used only inside branch-selection predicates, times `k0`.
pub const KAPPA_EFF: f64 = 1e-10;

/// Proximity guard to branch and polar sets, times `k0`.
pub const BRANCH: f64 = 1e-8;

/// Relative width of the Heaviside transition flagged as penumbra.
pub const PENUMBRA: f64 = 1e-6;

/// Relative jump allowed between consecutive continuation steps.
pub const CONTINUITY: f64 = 1e-6;

/// Default indentation radius around bypassed poles, times `k0`.
pub const BYPASS_RADIUS: f64 = 1e-3;

/// Contour tails stop once the exponential envelope drops below this.
pub const DECAY_FLOOR: f64 = 1e-16;

/// Target relative accuracy of the adaptive quadrature.
pub const QUAD_REL: f64 = 1e-12;

/// Below this value of `(rho + x2) / rho` the off-plane secondary diffracted
/// formula is inside its blow-up sector and gets a quality flag.
pub const SD_BLOWUP: f64 = 1e-2;
