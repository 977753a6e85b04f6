//! Monodromy check of the additive crossing at `(−k, −k)` for the free term
//! of the continuation formula.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::geometry::IncidenceConfig;
use crate::kernel::{track, w_free_term_1, w_free_term_1_tracked, BranchPath, ComplexPoint2, SheetTracker};

/// Small loops used for the two continuations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingLoops {
    pub center1: C64,
    pub center2: C64,
    pub radius1: f64,
    pub radius2: f64,
}

impl CrossingLoops {
    /// Loops around `−k` in each plane.
    pub fn around_minus_k(cfg: &IncidenceConfig, radius: f64) -> Self {
        Self { center1: -cfg.k, center2: -cfg.k, radius1: radius, radius2: radius }
    }
}

/// The four values `W`, `W_δ1'`, `W_δ2'`, `W_δ1'δ2'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Continuations {
    pub plain: C64,
    pub d1: C64,
    pub d2: C64,
    pub d12: C64,
}

impl Continuations {
    pub fn defect(&self) -> f64 {
        let scale = [self.plain, self.d1, self.d2, self.d12].iter().map(|v| v.norm()).fold(0.0, f64::max);
        (self.plain + self.d12 - self.d1 - self.d2).norm() / scale
    }
}

/// Continues `f` around the keyhole `δ1'` in the `ξ1` plane, around `δ2'`
/// in the `ξ2` plane, and around both in turn.
pub fn continuations<F>(mut f: F, xi1: C64, xi2: C64, start: C64, loops: &CrossingLoops) -> Result<Continuations>
where
    F: FnMut((C64, C64), &mut SheetTracker) -> C64,
{
    let l1 = BranchPath::keyhole(xi1, loops.center1, loops.radius1, 48);
    let l2 = BranchPath::keyhole(xi2, loops.center2, loops.radius2, 48);
    let p1: Vec<(C64, C64)> = l1.waypoints.iter().map(|&z| (z, xi2)).collect();
    let p2: Vec<(C64, C64)> = l2.waypoints.iter().map(|&z| (xi1, z)).collect();
    let both: Vec<(C64, C64)> = p1.iter().chain(p2.iter().skip(1)).copied().collect();
    let (d1, _) = track(&mut f, &p1, start)?;
    let (d2, _) = track(&mut f, &p2, start)?;
    let (d12, _) = track(&mut f, &both, start)?;
    Ok(Continuations { plain: start, d1, d2, d12 })
}

/// Singular points of the free term in each plane that the loops must
/// keep away from.
fn obstacles(xi1: C64, xi2: C64, cfg: &IncidenceConfig) -> (Vec<C64>, Vec<C64>) {
    let k = cfg.k;
    let w2 = (k * k - xi2 * xi2).sqrt();
    let w1 = (k * k - xi1 * xi1).sqrt();
    let in1 = vec![k, -k, -cfg.k1, cfg.k1p, -cfg.k1p, w2, -w2];
    let in2 = vec![k, -k, -cfg.k2, w1, -w1];
    (in1, in2)
}

/// Relative defect of the additive-crossing relation for the free term.
pub fn additive_crossing_defect(xi1: C64, xi2: C64, cfg: &IncidenceConfig) -> Result<f64> {
    additive_crossing_defect_with(xi1, xi2, cfg, &CrossingLoops::around_minus_k(cfg, 0.05 * cfg.k0))
}

/// Checks that both keyholes keep clear of every singular point of the free
/// term and that no singular point other than the loop centres lies inside
/// a loop.
pub fn loops_admissible(xi1: C64, xi2: C64, cfg: &IncidenceConfig, loops: &CrossingLoops) -> Result<()> {
    let (in1, in2) = obstacles(xi1, xi2, cfg);
    let c1: Vec<C64> = in1.into_iter().filter(|p| (p - loops.center1).norm() > 1e-12).collect();
    let c2: Vec<C64> = in2.into_iter().filter(|p| (p - loops.center2).norm() > 1e-12).collect();
    let clearance = 0.2 * loops.radius1.min(loops.radius2);
    let enclosed = |pts: &[C64], c: C64, r: f64| pts.iter().any(|p| (p - c).norm() <= r + clearance);
    if enclosed(&c1, loops.center1, loops.radius1) || enclosed(&c2, loops.center2, loops.radius2) {
        return Err(Error::InvalidPoint("a loop encloses a second singular point".into()));
    }
    BranchPath::keyhole(xi1, loops.center1, loops.radius1, 48).ensure_clearance(&c1, clearance)?;
    BranchPath::keyhole(xi2, loops.center2, loops.radius2, 48).ensure_clearance(&c2, clearance)
}

pub fn additive_crossing_defect_with(xi1: C64, xi2: C64, cfg: &IncidenceConfig, loops: &CrossingLoops) -> Result<f64> {
    loops_admissible(xi1, xi2, cfg, loops)?;
    let start = w_free_term_1(&ComplexPoint2::physical(xi1, xi2), cfg)?;
    let c = continuations(|(a, b), t| w_free_term_1_tracked(a, b, cfg, t), xi1, xi2, start, loops)?;
    let defect = c.defect();
    if defect.is_finite() {
        Ok(defect)
    } else {
        Err(Error::NonConvergent("non-finite continuation".into()))
    }
}
