//! Spectral kernel, the γ factorisation atom, residues on the polar sets,
//! the non-integral terms of the continuation formulae for `W`, and a
//! stepwise analytic-continuation tracker.
//!
//! Square roots follow two conventions. Inner roots `√(k²−ξ²)` and the
//! kernel root are chosen on the physical sheet by aligning them with the
//! root computed at a small effective absorption. Outer roots of γ use the
//! principal branch with the cut approached from above, so that the
//! negative real axis maps to the positive imaginary axis regardless of the
//! sign of a zero imaginary part.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::IncidenceConfig;
use crate::tolerances;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sheet {
    Physical,
    Flipped,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Physical => 1.0,
            Sheet::Flipped => -1.0,
        }
    }

    pub fn flip(self) -> Sheet {
        match self {
            Sheet::Physical => Sheet::Flipped,
            Sheet::Flipped => Sheet::Physical,
        }
    }
}

/// A spectral point in ℂ² with the sheets of `√(k²−ξ1²)` and `√(k²−ξ2²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint2 {
    pub xi1: C64,
    pub xi2: C64,
    pub sheet1: Sheet,
    pub sheet2: Sheet,
}

impl ComplexPoint2 {
    pub fn physical(xi1: C64, xi2: C64) -> Self {
        Self { xi1, xi2, sheet1: Sheet::Physical, sheet2: Sheet::Physical }
    }

    pub fn real(xi1: f64, xi2: f64) -> Self {
        Self::physical(C64::new(xi1, 0.0), C64::new(xi2, 0.0))
    }

    pub fn swapped(&self) -> Self {
        Self { xi1: self.xi2, xi2: self.xi1, sheet1: self.sheet2, sheet2: self.sheet1 }
    }
}

/// Principal square root with the negative real axis sent to `+i`.
pub fn upper_sqrt(z: C64) -> C64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    C64::new(z.re, im).sqrt()
}

/// Root of `z` whose sign agrees with the root of the nearby `z_eff`.
fn aligned_sqrt(z: C64, z_eff: C64) -> C64 {
    let w = upper_sqrt(z);
    let w_eff = upper_sqrt(z_eff);
    if (w * w_eff.conj()).re < 0.0 {
        -w
    } else {
        w
    }
}

/// `√(k²−ξ²)` on the requested sheet.
pub fn inner_root(xi: C64, cfg: &IncidenceConfig, sheet: Sheet) -> C64 {
    let k = cfg.k;
    let ke = cfg.k_eff();
    sheet.sign() * aligned_sqrt(k * k - xi * xi, ke * ke - xi * xi)
}

fn branch_tol(cfg: &IncidenceConfig) -> f64 {
    tolerances::BRANCH * cfg.k0
}

/// `γ(ξ1, ξ2) = √(√(k²−ξ1²) + ξ2)`.
pub fn gamma(xi1: C64, xi2: C64, cfg: &IncidenceConfig, sheet: Sheet) -> Result<C64> {
    let tol = branch_tol(cfg);
    if (xi1 - cfg.k).norm() < tol || (xi1 + cfg.k).norm() < tol {
        return Err(Error::BranchPointHit("xi1 = ±k"));
    }
    let arg = inner_root(xi1, cfg, sheet) + xi2;
    if arg.norm() < tol {
        return Err(Error::BranchPointHit("sqrt(k^2 - xi1^2) + xi2 = 0"));
    }
    Ok(upper_sqrt(arg))
}

/// The kernel `K = 1/√(k²−ξ1²−ξ2²)`.
pub fn kernel_k(p: &ComplexPoint2, cfg: &IncidenceConfig) -> Result<C64> {
    let k = cfg.k;
    let q = k * k - p.xi1 * p.xi1 - p.xi2 * p.xi2;
    if q.norm() < tolerances::BRANCH * k.norm_sqr() {
        return Err(Error::OnCircle);
    }
    let ke = cfg.k_eff();
    let q_eff = ke * ke - p.xi1 * p.xi1 - p.xi2 * p.xi2;
    Ok(aligned_sqrt(q, q_eff).inv())
}

/// Largest of `|K γ(ξ1,ξ2) γ(ξ1,−ξ2) − 1|` and `|K γ(ξ2,ξ1) γ(ξ2,−ξ1) − 1|`.
pub fn factorization_defect(p: &ComplexPoint2, cfg: &IncidenceConfig) -> Result<f64> {
    let k = kernel_k(p, cfg)?;
    let a = k * gamma(p.xi1, p.xi2, cfg, p.sheet1)? * gamma(p.xi1, -p.xi2, cfg, p.sheet1)?;
    let b = k * gamma(p.xi2, p.xi1, cfg, p.sheet2)? * gamma(p.xi2, -p.xi1, cfg, p.sheet2)?;
    Ok((a - 1.0).norm().max((b - 1.0).norm()))
}

/// Residue of `W` on the polar set `ξ1 = −k1`, as a function of `ξ2`.
pub fn res_w_p1(xi2: C64, cfg: &IncidenceConfig) -> Result<C64> {
    let tol = branch_tol(cfg);
    if (xi2 + cfg.k2).norm() < tol {
        return Err(Error::PoleHit("xi2 = -k2"));
    }
    if (xi2 + cfg.k2p).norm() < tol {
        return Err(Error::BranchPointHit("xi2 = -k2'"));
    }
    let g = gamma(cfg.k1, xi2, cfg, Sheet::Physical)?;
    let g0 = gamma(cfg.k1, cfg.k2, cfg, Sheet::Physical)?;
    Ok(I * g * g0 / (xi2 + cfg.k2))
}

/// Residue of `W` on the polar set `ξ2 = −k2`, as a function of `ξ1`.
pub fn res_w_p2(xi1: C64, cfg: &IncidenceConfig) -> Result<C64> {
    res_w_p1(xi1, &cfg.swapped())
}

/// Non-integral term of the continuation formula for `W` across `ξ1`.
pub fn w_free_term_1(p: &ComplexPoint2, cfg: &IncidenceConfig) -> Result<C64> {
    let tol = branch_tol(cfg);
    if (p.xi1 + cfg.k1).norm() < tol {
        return Err(Error::PoleHit("xi1 = -k1"));
    }
    if (p.xi2 + cfg.k2).norm() < tol {
        return Err(Error::PoleHit("xi2 = -k2"));
    }
    let a = gamma(p.xi1, p.xi2, cfg, p.sheet1)?;
    let b = gamma(p.xi1, cfg.k2, cfg, p.sheet1)?;
    let c = gamma(cfg.k2, cfg.k1, cfg, Sheet::Physical)?;
    let d = gamma(cfg.k2, -p.xi1, cfg, Sheet::Physical)?;
    Ok(I * a * b * c / ((p.xi1 + cfg.k1) * (p.xi2 + cfg.k2) * d))
}

/// Non-integral term of the continuation formula for `W` across `ξ2`.
pub fn w_free_term_2(p: &ComplexPoint2, cfg: &IncidenceConfig) -> Result<C64> {
    w_free_term_1(&p.swapped(), &cfg.swapped())
}

/// [`w_free_term_1`] with every square root supplied by a tracker, for use
/// with [`continue_along`].
pub fn w_free_term_1_tracked(xi1: C64, xi2: C64, cfg: &IncidenceConfig, t: &mut SheetTracker) -> C64 {
    let k2 = cfg.k * cfg.k;
    let w1 = t.sqrt(k2 - xi1 * xi1);
    let a = t.sqrt(w1 + xi2);
    let b = t.sqrt(w1 + cfg.k2);
    let w2 = t.sqrt(k2 - cfg.k2 * cfg.k2);
    let c = t.sqrt(w2 + cfg.k1);
    let d = t.sqrt(w2 - xi1);
    I * a * b * c / ((xi1 + cfg.k1) * (xi2 + cfg.k2) * d)
}

/// Supplies square roots whose signs follow the previous evaluation.
///
/// A function evaluated through the tracker calls [`SheetTracker::sqrt`] in
/// the same order each time; the i-th call picks the root closest to the
/// value it returned at the previous point of the path.
#[derive(Debug, Clone, Default)]
pub struct SheetTracker {
    roots: Vec<C64>,
    cursor: usize,
    flips: u64,
}

impl SheetTracker {
    fn seeded(flips: u64) -> Self {
        Self { roots: Vec::new(), cursor: 0, flips }
    }

    fn rewind(&mut self) {
        self.cursor = 0;
    }

    pub fn sqrt(&mut self, z: C64) -> C64 {
        let w = upper_sqrt(z);
        let i = self.cursor;
        self.cursor += 1;
        match self.roots.get(i).copied() {
            Some(prev) => {
                let chosen = if (w - prev).norm() <= (w + prev).norm() { w } else { -w };
                self.roots[i] = chosen;
                chosen
            }
            None => {
                let chosen = if i < 64 && self.flips >> i & 1 == 1 { -w } else { w };
                self.roots.push(chosen);
                chosen
            }
        }
    }

    pub fn roots(&self) -> &[C64] {
        &self.roots
    }
}

/// A continuation path in one spectral plane.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPath {
    pub waypoints: Vec<C64>,
}

impl BranchPath {
    pub fn new(waypoints: Vec<C64>) -> Self {
        Self { waypoints }
    }

    /// Anticlockwise circle starting and ending at `center + radius·e^{i·start}`.
    pub fn circle(center: C64, radius: f64, start: f64, n: usize) -> Self {
        let n = n.max(8);
        let waypoints = (0..=n)
            .map(|j| {
                let t = start + std::f64::consts::TAU * j as f64 / n as f64;
                center + radius * C64::from_polar(1.0, t)
            })
            .collect::<Vec<_>>();
        let mut path = Self { waypoints };
        let first = path.waypoints[0];
        *path.waypoints.last_mut().unwrap() = first;
        path
    }

    /// Goes straight from `base` towards `center`, once round `center`
    /// anticlockwise at distance `radius`, and back to `base`.
    pub fn keyhole(base: C64, center: C64, radius: f64, n: usize) -> Self {
        let dir = (base - center).arg();
        let ring = Self::circle(center, radius, dir, n);
        let mut waypoints = vec![base];
        waypoints.extend(ring.waypoints);
        waypoints.push(base);
        Self { waypoints }
    }

    /// Anticlockwise axis-aligned rectangle through its four corners.
    pub fn rectangle(center: C64, half_w: f64, half_h: f64) -> Self {
        let c = |sx: f64, sy: f64| center + C64::new(sx * half_w, sy * half_h);
        Self { waypoints: vec![c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0), c(1.0, -1.0)] }
    }

    pub fn is_closed(&self) -> bool {
        match (self.waypoints.first(), self.waypoints.last()) {
            (Some(a), Some(b)) => (a - b).norm() <= 1e-14 * (1.0 + a.norm()),
            _ => false,
        }
    }

    /// Smallest distance between the path and any of `points`.
    pub fn clearance(&self, points: &[C64]) -> f64 {
        let mut best = f64::INFINITY;
        for w in self.waypoints.windows(2) {
            for &p in points {
                best = best.min(segment_distance(w[0], w[1], p));
            }
        }
        best
    }

    pub fn ensure_clearance(&self, points: &[C64], clearance: f64) -> Result<()> {
        if self.clearance(points) < clearance {
            Err(Error::StepTooCoarse { at: "path passes too close to a singular point".into() })
        } else {
            Ok(())
        }
    }
}

fn segment_distance(a: C64, b: C64, p: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

/// A point that can be interpolated along a continuation path.
pub trait PathPoint: Copy + std::fmt::Debug {
    fn lerp(a: Self, b: Self, t: f64) -> Self;
    fn distance(a: Self, b: Self) -> f64;
}

impl PathPoint for C64 {
    fn lerp(a: Self, b: Self, t: f64) -> Self {
        a + (b - a) * t
    }
    fn distance(a: Self, b: Self) -> f64 {
        (b - a).norm()
    }
}

impl PathPoint for (C64, C64) {
    fn lerp(a: Self, b: Self, t: f64) -> Self {
        (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t)
    }
    fn distance(a: Self, b: Self) -> f64 {
        (b.0 - a.0).norm().hypot((b.1 - a.1).norm())
    }
}

const MAX_HALVINGS: u32 = 40;
const SUBSTEPS: usize = 16;

/// Continues `f` analytically along `path`, starting from the branch of `f`
/// whose value at the first waypoint equals `start_value`.
pub fn continue_along<F>(f: F, path: &BranchPath, start_value: C64) -> Result<C64>
where
    F: FnMut(C64, &mut SheetTracker) -> C64,
{
    track(f, &path.waypoints, start_value).map(|(v, _)| v)
}

/// As [`continue_along`], for a path in ℂ²; also returns the final tracker so
/// that a further path can pick up on the sheet reached.
pub fn track<P, F>(mut f: F, waypoints: &[P], start_value: C64) -> Result<(C64, SheetTracker)>
where
    P: PathPoint,
    F: FnMut(P, &mut SheetTracker) -> C64,
{
    let start = *waypoints.first().ok_or_else(|| Error::StepTooCoarse { at: "empty path".into() })?;
    let mut tracker = seed(&mut f, start, start_value)?;
    let mut value = start_value;
    for w in waypoints.windows(2) {
        for j in 0..SUBSTEPS {
            let a = P::lerp(w[0], w[1], j as f64 / SUBSTEPS as f64);
            let b = P::lerp(w[0], w[1], (j + 1) as f64 / SUBSTEPS as f64);
            value = advance(&mut f, &mut tracker, a, b, 0)?;
        }
    }
    Ok((value, tracker))
}

/// Continues `f` from the sheet state held by `tracker`.
pub fn track_from<P, F>(mut f: F, waypoints: &[P], tracker: &mut SheetTracker) -> Result<C64>
where
    P: PathPoint,
    F: FnMut(P, &mut SheetTracker) -> C64,
{
    let mut value = C64::new(f64::NAN, f64::NAN);
    if let Some(&p) = waypoints.first() {
        tracker.rewind();
        value = f(p, tracker);
    }
    for w in waypoints.windows(2) {
        for j in 0..SUBSTEPS {
            let a = P::lerp(w[0], w[1], j as f64 / SUBSTEPS as f64);
            let b = P::lerp(w[0], w[1], (j + 1) as f64 / SUBSTEPS as f64);
            value = advance(&mut f, tracker, a, b, 0)?;
        }
    }
    Ok(value)
}

fn seed<P, F>(f: &mut F, start: P, start_value: C64) -> Result<SheetTracker>
where
    P: PathPoint,
    F: FnMut(P, &mut SheetTracker) -> C64,
{
    let mut probe = SheetTracker::seeded(0);
    f(start, &mut probe);
    let n = probe.roots.len().min(16);
    let scale = start_value.norm().max(1e-300);
    for mask in 0..(1u64 << n) {
        let mut t = SheetTracker::seeded(mask);
        let v = f(start, &mut t);
        if (v - start_value).norm() <= 1e-8 * scale {
            return Ok(t);
        }
    }
    Err(Error::SheetMismatch)
}

fn advance<P, F>(f: &mut F, tracker: &mut SheetTracker, a: P, b: P, depth: u32) -> Result<C64>
where
    P: PathPoint,
    F: FnMut(P, &mut SheetTracker) -> C64,
{
    let mut whole = tracker.clone();
    whole.rewind();
    let v_whole = f(b, &mut whole);

    let m = P::lerp(a, b, 0.5);
    let mut halves = tracker.clone();
    halves.rewind();
    f(m, &mut halves);
    let mid_roots = halves.roots().to_vec();
    let mut mid_ok = roots_close(tracker.roots(), &mid_roots);
    halves.rewind();
    let v_halves = f(b, &mut halves);
    mid_ok &= roots_close(&mid_roots, halves.roots());

    let same_sheet = whole
        .roots()
        .iter()
        .zip(halves.roots())
        .all(|(x, y)| (x - y).norm() <= tolerances::CONTINUITY * x.norm().max(y.norm()));
    let smooth = mid_ok && roots_close(tracker.roots(), whole.roots());
    let agree = (v_whole - v_halves).norm() <= tolerances::CONTINUITY * v_halves.norm().max(1e-300);

    if same_sheet && smooth && agree && v_halves.is_finite() {
        *tracker = halves;
        return Ok(v_halves);
    }
    if depth >= MAX_HALVINGS {
        return Err(Error::StepTooCoarse { at: format!("{b:?}") });
    }
    advance(f, tracker, a, m, depth + 1)?;
    advance(f, tracker, m, b, depth + 1)
}

/// Every root moved by less than a quarter of its size.
fn roots_close(prev: &[C64], next: &[C64]) -> bool {
    prev.iter().zip(next).all(|(p, n)| (n - p).norm() <= 0.25 * p.norm().max(n.norm()))
}
