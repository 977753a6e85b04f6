//! Named verification suites that gather the invariant checks of every
//! module behind one entry point.
//!
//! Each suite reports the largest error it saw relative to its reference
//! values. A [`Perturbation`] scales every numerical reference value and
//! shifts every measured defect that has no reference value, which
//! lets a harness confirm that the suites can actually fail.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::components::{
    component, phase_function, phase_gradient, total_field, u_pd1, u_sd1, VertexCoefficient, WaveLabel,
};
use crate::error::Result;
use crate::geometry::{make_incidence, CaseKind, IncidenceConfig, ObservationPoint};
use crate::kernel::{factorization_defect, gamma, res_w_p1, res_w_p2, w_free_term_1, ComplexPoint2, Sheet};
use crate::oracle::contour::ContourPath;
use crate::oracle::crossing::{additive_crossing_defect, continuations, loops_admissible, CrossingLoops};
use crate::oracle::helmholtz::helmholtz_residual;
use crate::oracle::local::{
    gaussian_line_closed, gaussian_line_integral, pd1_model, pole_line_closed, pole_line_integral, rw_local_model,
    saddle2d_integral, sos_local_integral, sw_local_model,
};
use crate::oracle::quad::QuadOptions;
use crate::oracle::upsilon::{
    inner_rho_integral, triple_crossing_field, upsilon_case, upsilon_integral_closed, upsilon_integral_numeric,
    UpsilonCase,
};
use crate::singularities::{special_points_plane, special_points_space, PointKind, PointLabel, SpecialPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    Factorization,
    Residues,
    SpecialPoints,
    Components,
    Oracles,
    AppendixA,
    AppendixB,
    Helmholtz,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Factorization,
        Suite::Residues,
        Suite::SpecialPoints,
        Suite::Components,
        Suite::Oracles,
        Suite::AppendixA,
        Suite::AppendixB,
        Suite::Helmholtz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Factorization => "factorization",
            Suite::Residues => "residues",
            Suite::SpecialPoints => "special-points",
            Suite::Components => "components",
            Suite::Oracles => "oracles",
            Suite::AppendixA => "appendixA",
            Suite::AppendixB => "appendixB",
            Suite::Helmholtz => "helmholtz",
        }
    }

    /// Resolves a suite name; `"all"` expands to every suite.
    pub fn parse_selection(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Self::ALL.to_vec());
        }
        Self::ALL.into_iter().find(|s| s.name() == name).map(|s| vec![s])
    }
}

/// Relative scaling applied to every numerical reference value.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Perturbation {
    pub relative: f64,
}

impl Perturbation {
    fn apply(self, v: C64) -> C64 {
        v * (1.0 + self.relative)
    }

    fn apply_re(self, v: f64) -> f64 {
        v * (1.0 + self.relative)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub max_rel_err: f64,
    pub pass: bool,
    pub failures: Vec<String>,
}

struct Tally {
    suite: Suite,
    cases: usize,
    max_rel_err: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new(suite: Suite) -> Self {
        Tally { suite, cases: 0, max_rel_err: 0.0, failures: Vec::new() }
    }

    fn check(&mut self, what: &str, err: f64, tol: f64) {
        self.cases += 1;
        if err.is_finite() {
            self.max_rel_err = self.max_rel_err.max(err);
        }
        if !(err <= tol) {
            self.failures.push(format!("{what}: {err:.3e} > {tol:.1e}"));
        }
    }

    fn check_result(&mut self, what: &str, r: Result<f64>, tol: f64) {
        match r {
            Ok(err) => self.check(what, err, tol),
            Err(e) => self.fail(what, &e.to_string()),
        }
    }

    fn require(&mut self, what: &str, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn fail(&mut self, what: &str, why: &str) {
        self.cases += 1;
        self.failures.push(format!("{what}: {why}"));
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.suite.name().to_string(),
            cases: self.cases,
            max_rel_err: self.max_rel_err,
            pass: self.failures.is_empty(),
            failures: self.failures,
        }
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Low-discrepancy points in `[0, 1)^D` from the additive recurrence with
/// the generalised golden ratio.
pub fn weyl<const D: usize>(n: usize) -> Vec<[f64; D]> {
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (D as f64 + 1.0));
    }
    let alpha: [f64; D] = std::array::from_fn(|j| phi.powi(-(j as i32 + 1)).fract());
    (1..=n).map(|i| std::array::from_fn(|j| (0.5 + alpha[j] * i as f64).fract())).collect()
}

/// Reference configuration at unit wavenumber with `θ0 = π/3`.
pub fn reference_config(phi0: f64) -> IncidenceConfig {
    make_incidence(1.0, 0.0, PI / 3.0, phi0).expect("reference incidence is valid")
}

pub fn simple_config() -> IncidenceConfig {
    reference_config(5.0 * FRAC_PI_4)
}

pub fn complicated_config() -> IncidenceConfig {
    reference_config(FRAC_PI_4)
}

pub fn run(suite: Suite, p: Perturbation) -> SuiteReport {
    let mut t = Tally::new(suite);
    match suite {
        Suite::Factorization => factorization(&mut t, p),
        Suite::Residues => residues(&mut t, p),
        Suite::SpecialPoints => special_points(&mut t),
        Suite::Components => components(&mut t, p),
        Suite::Oracles => oracles(&mut t, p),
        Suite::AppendixA => appendix_a(&mut t, p),
        Suite::AppendixB => appendix_b(&mut t, p),
        Suite::Helmholtz => helmholtz(&mut t, p),
    }
    t.finish()
}

pub fn run_selection(suites: &[Suite], p: Perturbation) -> Vec<SuiteReport> {
    suites.iter().map(|&s| run(s, p)).collect()
}

/// Real points of `[-2k0, 2k0]²` kept clear of the circle and the branch
/// lines by `margin`.
pub fn real_plane_points(cfg: &IncidenceConfig, n: usize, margin: f64) -> Vec<ComplexPoint2> {
    let k0 = cfg.k0;
    weyl::<2>(4 * n)
        .into_iter()
        .map(|[a, b]| ((4.0 * a - 2.0) * k0, (4.0 * b - 2.0) * k0))
        .filter(|&(a, b)| {
            let clear = |v: f64| (v.abs() - k0).abs() > margin;
            clear(a.hypot(b)) && clear(a) && clear(b)
        })
        .filter(|&(a, b)| {
            let clear2 = |x: f64, y: f64| x.abs() >= k0 || ((k0 * k0 - x * x).sqrt() - y.abs()).abs() > margin;
            clear2(a, b) && clear2(b, a)
        })
        .take(n)
        .map(|(a, b)| ComplexPoint2::real(a, b))
        .collect()
}

fn factorization(t: &mut Tally, p: Perturbation) {
    for cfg in [simple_config(), complicated_config()] {
        for pt in real_plane_points(&cfg, 500, 1e-3) {
            let r = factorization_defect(&pt, &cfg).map(|d| d + p.relative.abs());
            t.check_result(&format!("K·γ·γ at ({}, {})", pt.xi1.re, pt.xi2.re), r, 1e-12);
        }
    }
}

fn residues(t: &mut Tally, p: Perturbation) {
    let s = simple_config();
    let zero = C64::new(0.0, 0.0);
    let frozen = [
        ("res W on p1 at ξ2=0", res_w_p1(zero, &s), C64::new(0.0, 1.719_785_194_552_643)),
        ("res W on p2 at ξ1=0", res_w_p2(zero, &s), C64::new(0.0, 1.719_785_194_552_643)),
        ("γ(k1, k2)", gamma(s.k1, s.k2, &s, Sheet::Physical), C64::new(1.184_458_463_069_891_4, 0.0)),
        ("γ(k1, 0)", gamma(s.k1, zero, &s, Sheet::Physical), C64::new(0.889_139_705_019_461_4, 0.0)),
        ("γ(0, 0)", gamma(zero, zero, &s, Sheet::Physical), C64::new(1.0, 0.0)),
        ("γ(0, 0) flipped", gamma(zero, zero, &s, Sheet::Flipped), C64::new(0.0, 1.0)),
    ];
    for (what, value, reference) in frozen {
        t.check_result(what, value.map(|v| rel(v, p.apply(reference))), 1e-12);
    }
    for cfg in [simple_config(), complicated_config()] {
        for xi2 in [-0.3, 0.2, 0.55, 1.4] {
            let xi2 = C64::new(xi2, 0.0);
            let r = residue_by_contour(xi2, &cfg).and_then(|num| Ok(rel(num, p.apply(res_w_p1(xi2, &cfg)?))));
            t.check_result(&format!("contour residue at ξ2={}", xi2.re), r, 1e-10);
        }
    }
}

/// `(1/2πi)∮ W_free dξ1` on a small circle around `ξ1 = −k1`.
fn residue_by_contour(xi2: C64, cfg: &IncidenceConfig) -> Result<C64> {
    let radius = 0.02 * cfg.k0;
    let path = ContourPath::new(radius).arc(-cfg.k1, radius, 0.0, 2.0 * PI);
    let mut failure = None;
    let q = path.integrate(
        |z| match w_free_term_1(&ComplexPoint2::physical(z, xi2), cfg) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        },
        QuadOptions::default(),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(q.value / (2.0 * PI * C64::i())),
    }
}

fn direction(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

fn swap_key(sp: &SpecialPoint, swap: bool) -> (PointKind, PointLabel, [i64; 2], bool) {
    let q = |v: f64| (v * 1e9).round() as i64;
    if swap {
        (sp.kind, sp.label.swapped(), [q(sp.location[1]), q(sp.location[0])], sp.active)
    } else {
        (sp.kind, sp.label, [q(sp.location[0]), q(sp.location[1])], sp.active)
    }
}

fn special_points(t: &mut Tally) {
    let dirs = weyl::<2>(1000);
    for (cfg, case) in [(simple_config(), CaseKind::Simple), (complicated_config(), CaseKind::Complicated)] {
        let swapped = cfg.swapped();
        let mut additive_active = 0;
        let mut outside = 0;
        let mut covariance = 0;
        let mut errors = 0;
        for &[a, b] in &dirs {
            let plane = b < 0.25;
            let xt = if plane {
                let ang = 2.0 * PI * a;
                [ang.cos(), ang.sin(), 0.0]
            } else {
                direction(0.05 + 1.45 * a, 2.0 * PI * (b - 0.25) / 0.75)
            };
            let enumerate = |c: &IncidenceConfig, x: [f64; 3]| {
                if plane {
                    special_points_plane(c, case, x)
                } else {
                    special_points_space(c, case, x)
                }
            };
            let (pts, mirrored) = match (enumerate(&cfg, xt), enumerate(&swapped, [xt[1], xt[0], xt[2]])) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    errors += 1;
                    continue;
                }
            };
            for sp in &pts {
                let additive = matches!(sp.kind, PointKind::AdditiveCrossing | PointKind::TangentialTouch);
                if additive && sp.active {
                    additive_active += 1;
                }
                if !plane && sp.active && sp.location[0].hypot(sp.location[1]) >= cfg.k0 {
                    outside += 1;
                }
            }
            let mut lhs: Vec<_> = pts.iter().map(|s| swap_key(s, true)).collect();
            let mut rhs: Vec<_> = mirrored.iter().map(|s| swap_key(s, false)).collect();
            lhs.sort();
            rhs.sort();
            if lhs != rhs {
                covariance += 1;
            }
        }
        let tag = format!("{case:?}");
        t.require(&format!("{tag}: additive or tangential point active ({additive_active})"), additive_active == 0);
        t.require(&format!("{tag}: active off-plane point outside the circle ({outside})"), outside == 0);
        t.require(&format!("{tag}: swap covariance broken ({covariance})"), covariance == 0);
        t.require(&format!("{tag}: enumeration failed ({errors})"), errors <= dirs.len() / 100);
    }
    let cfg = complicated_config();
    let small: f64 = 1e-7;
    let xt = [0.6, -0.8 * (1.0 - small * small).sqrt(), 0.8 * small];
    match special_points_space(&cfg, CaseKind::Complicated, xt) {
        Ok(pts) => {
            let find = |name: &str| pts.iter().find(|s| s.name == name).map(|s| s.location);
            let pd1 = find("PD1").unwrap_or([f64::NAN; 2]);
            let sd1 = find("SD1").unwrap_or([f64::NAN; 2]);
            let d_pd1 = (pd1[0] + cfg.k1.re).hypot(pd1[1] - cfg.k2p.re);
            let d_sd1 = (sd1[0] + cfg.k1p.re).hypot(sd1[1] + cfg.k2.re);
            t.check("PD1 limit point at x̃3=1e-7", d_pd1, 1e-6);
            t.check("SD1 limit point at x̃3=1e-7", d_sd1, 1e-6);
        }
        Err(e) => t.fail("limit points", &e.to_string()),
    }
}

/// Points of the quarter-plane interior at least `margin` from its edges.
pub fn plate_points(n: usize, extent: f64, margin: f64) -> Vec<ObservationPoint> {
    weyl::<2>(n)
        .into_iter()
        .map(|[a, b]| {
            ObservationPoint::new(margin + a * extent, margin + b * extent, 0.0).expect("plate point is valid")
        })
        .collect()
}

/// Observation points in `r ∈ [20, 200]/k0` where `label` is active and
/// away from its gate boundaries and the plate.
pub fn active_points(label: WaveLabel, cfg: &IncidenceConfig, n: usize) -> Vec<ObservationPoint> {
    let vc = VertexCoefficient::unit();
    let mut out = Vec::with_capacity(n);
    for [a, b, c] in weyl::<3>(200 * n) {
        let r = (20.0 + 180.0 * a) / cfg.k0;
        let theta = 0.05 + 1.45 * b;
        let phi = 2.0 * PI * c;
        let Ok(x) = ObservationPoint::spherical(r, theta, phi) else { continue };
        match component(label, &x, cfg, &vc) {
            Ok(cmp) if cmp.active && !cmp.penumbra && cmp.flags.iter().all(|f| !matches!(f, crate::Flag::BlowupZone(_))) => {
                out.push(x)
            }
            _ => {}
        }
        if out.len() == n {
            break;
        }
    }
    out
}

fn components(t: &mut Tally, p: Perturbation) {
    let vc = VertexCoefficient::unit();
    for (cfg, tag) in [(simple_config(), "simple"), (complicated_config(), "complicated")] {
        for x in plate_points(100, 30.0, 0.1) {
            match total_field(&x, &cfg, &vc) {
                Ok(f) => t.check(&format!("{tag}: total on plate at ({}, {})", x.x1, x.x2), f.total.norm(), 1e-12),
                Err(e) => t.fail(&format!("{tag}: total on plate"), &e.to_string()),
            }
        }
        let case = cfg.case().expect("reference case");
        let k2 = cfg.k0 * cfg.k0;
        for &label in WaveLabel::for_case(case) {
            let pts = active_points(label, &cfg, 1000 / WaveLabel::for_case(case).len() + 1);
            t.require(&format!("{tag}: {label} has active sample points"), pts.len() > 10);
            let mut worst = 0.0f64;
            let mut worst_fd = 0.0f64;
            for x in &pts {
                let g = phase_gradient(label, x, &cfg);
                let n2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
                worst = worst.max((n2 - p.apply_re(k2)).abs() / k2);
                let h = 1e-5 * x.r;
                let mut fd = [0.0; 3];
                for (axis, d) in fd.iter_mut().enumerate() {
                    let shift = |s: f64| {
                        let mut v = [x.x1, x.x2, x.x3];
                        v[axis] += s;
                        ObservationPoint::new(v[0], v[1], v[2]).map(|q| phase_function(label, &q, &cfg))
                    };
                    *d = match (shift(h), shift(-h)) {
                        (Ok(a), Ok(b)) => (a - b) / (2.0 * h),
                        _ => f64::NAN,
                    };
                }
                let dev = (0..3).map(|i| (fd[i] - g[i]).abs()).fold(0.0, f64::max) / cfg.k0;
                worst_fd = worst_fd.max(if dev.is_nan() { f64::INFINITY } else { dev });
            }
            t.check(&format!("{tag}: eikonal |∇S|² = k² for {label}"), worst, 1e-12);
            t.check(&format!("{tag}: phase gradient of {label} vs finite differences"), worst_fd, 1e-6);
        }
        let sw = cfg.swapped();
        for [a, b, c] in weyl::<3>(50) {
            let Ok(x) = ObservationPoint::spherical(30.0 + 50.0 * a, 0.1 + 1.4 * b, 2.0 * PI * c) else { continue };
            match (total_field(&x, &cfg, &vc), total_field(&x.swapped(), &sw, &vc)) {
                (Ok(f), Ok(g)) => t.check(&format!("{tag}: swap symmetry of the total field"), rel(g.total, p.apply(f.total)), 1e-12),
                (Err(e), _) | (_, Err(e)) => t.fail(&format!("{tag}: swap symmetry"), &e.to_string()),
            }
        }
    }
    let cfg = simple_config();
    let x = ObservationPoint::new(60.0, -30.0, 0.0).expect("valid");
    let near = ObservationPoint::new(60.0, -30.0, 30.0 * 1e-4).expect("valid");
    match (u_pd1(&x, &cfg), u_pd1(&near, &cfg)) {
        (Ok(a), Ok(b)) => t.check("PD1 x3→0 under the plate edge", rel(b.value, p.apply(a.value)), 1e-3),
        _ => t.fail("PD1 x3→0", "evaluation failed"),
    }
    // Above the plane beyond the edge the conical waves vanish as x3 → 0.
    for (label, cfg, x1, x2) in [(WaveLabel::PD1, simple_config(), 60.0, 20.0), (WaveLabel::SD1, complicated_config(), 80.0, 20.0)] {
        let at = |x3: f64| ObservationPoint::new(x1, x2, x3).and_then(|x| component(label, &x, &cfg, &vc));
        match (at(1e-5 * x2), at(1e-4 * x2)) {
            (Ok(a), Ok(b)) if b.active => {
                let ratio = a.value.norm() / p.apply_re(b.value.norm());
                t.check(&format!("{label} vanishes linearly as x3→0 beside the plate"), (ratio - 0.1).abs(), 1e-3)
            }
            (Ok(_), Ok(_)) => t.fail(&format!("{label} x3→0"), "reference point is inactive"),
            _ => t.fail(&format!("{label} x3→0"), "evaluation failed"),
        }
    }
}

fn oracles(t: &mut Tally, p: Perturbation) {
    for (a, side) in [(0.7, crate::Side::Above), (-0.7, crate::Side::Above), (0.4, crate::Side::Below), (-0.4, crate::Side::Below)] {
        let pole = C64::new(0.1, 0.0);
        let r = pole_line_integral(a, pole, side, 50.0)
            .map(|q| (q.value - p.apply(pole_line_closed(a, pole, side, 50.0))).norm() / (2.0 * PI));
        t.check_result(&format!("pole line integral a={a} {side:?}"), r, 1e-8);
    }
    for sigma in [2.5, -0.7] {
        let r = gaussian_line_integral(sigma, 200.0).map(|q| rel(q.value, p.apply(gaussian_line_closed(sigma, 200.0))));
        t.check_result(&format!("Fresnel integral σ={sigma}"), r, 1e-10);
    }
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let r = saddle2d_integral([[one, zero], [zero, one]], one, 100.0).map(|c| rel(c.numeric.value, p.apply(c.closed)));
    t.check_result("identity Hessian saddle", r, 1e-6);

    let s = simple_config();
    let x = ObservationPoint::spherical(200.0, 1.2, -0.6).expect("valid");
    let r = pd1_model(&x, &s).and_then(|m| sos_local_integral(&m, x.r)).and_then(|c| {
        let u = u_pd1(&x, &s)?.value;
        Ok(rel(c.numeric.value, p.apply(c.closed)).max(rel(c.closed, u)))
    });
    t.check_result("separable PD1 model", r, 1e-6);
    for (cfg, tag) in [(s, "simple"), (complicated_config(), "complicated")] {
        let x = ObservationPoint::new(150.0, 120.0, 40.0).expect("valid");
        let r = rw_local_model(&x, &cfg).map(|c| rel(c.numeric.value, p.apply(c.closed)));
        t.check_result(&format!("{tag}: RW pole-pole model"), r, 1e-6);
        let x = ObservationPoint::spherical(200.0, 0.7, 2.3).expect("valid");
        let r = sw_local_model(&x, &cfg, &VertexCoefficient::unit()).map(|c| rel(c.numeric.value, p.apply(c.closed)));
        t.check_result(&format!("{tag}: SW saddle model"), r, 1e-6);
    }
    let cfg = complicated_config();
    for &psi in &[C64::new(0.4, -0.1), C64::new(1.1, 0.15), C64::new(2.9, -0.15)] {
        let r = inner_rho_integral(psi, -0.3, 80.0).map(|(q, closed)| rel(q.value, p.apply(closed)));
        t.check_result(&format!("inner ρ integral at ψ={psi}"), r, 1e-10);
    }
    for (x1, x2) in triple_crossing_points(&cfg, 50) {
        let r = (|| {
            let oracle = triple_crossing_field(x1, x2, &cfg)?;
            let closed = u_sd1(&ObservationPoint::new(x1, x2, 0.0)?, &cfg)?.value;
            Ok(rel(oracle, p.apply(closed)))
        })();
        t.check_result(&format!("triple crossing at ({x1:.3}, {x2:.3})"), r, 1e-6);
    }
}

/// In-plane points of the SD1 active sector, kept 0.05 rad from its edges.
pub fn triple_crossing_points(cfg: &IncidenceConfig, n: usize) -> Vec<(f64, f64)> {
    let lo = cfg.vartheta1 - FRAC_PI_2 + 0.05;
    let hi = -0.05;
    weyl::<2>(n)
        .into_iter()
        .map(|[a, b]| {
            let phi = lo + (hi - lo) * a;
            let r = (20.0 + 180.0 * b) / cfg.k0;
            (r * phi.cos(), r * phi.sin())
        })
        .collect()
}

/// Loop-test points: `ξ1` in the lower half-plane, `ξ2` below the real
/// axis on either side of the branch points, kept where the default loops
/// around `−k` enclose nothing else.
pub fn appendix_a_points(cfg: &IncidenceConfig, n: usize) -> Vec<(C64, C64)> {
    let k0 = cfg.k0;
    let loops = CrossingLoops::around_minus_k(cfg, 0.05 * k0);
    weyl::<4>(50 * n)
        .into_iter()
        .map(|[a, b, c, d]| {
            let xi1 = C64::new((-1.4 + 1.9 * a) * k0, (-0.5 + 0.45 * b) * k0);
            let re2 = if c < 0.5 { -1.4 + 1.9 * c } else { 0.9 + (c - 0.5) };
            let xi2 = C64::new(re2 * k0, (-0.3 + 0.25 * d) * k0);
            (xi1, xi2)
        })
        .filter(|&(a, b)| loops_admissible(a, b, cfg, &loops).is_ok())
        .take(n)
        .collect()
}

fn appendix_a(t: &mut Tally, p: Perturbation) {
    for (cfg, tag) in [(simple_config(), "simple"), (complicated_config(), "complicated")] {
        for (xi1, xi2) in appendix_a_points(&cfg, 20) {
            let r = additive_crossing_defect(xi1, xi2, &cfg).map(|d| d + p.relative.abs());
            t.check_result(&format!("{tag}: additive crossing at ({xi1}, {xi2})"), r, 1e-10);
        }
        let loops = CrossingLoops {
            center1: C64::new(3.0 * cfg.k0, -3.0 * cfg.k0),
            center2: C64::new(3.0 * cfg.k0, -3.0 * cfg.k0),
            radius1: 0.1 * cfg.k0,
            radius2: 0.1 * cfg.k0,
        };
        let (xi1, xi2) = (C64::new(-0.3, -0.2), C64::new(-0.5, -0.2));
        let r = w_free_term_1(&ComplexPoint2::physical(xi1, xi2), &cfg).and_then(|start| {
            let c = continuations(
                |(a, b), tr| crate::kernel::w_free_term_1_tracked(a, b, &cfg, tr),
                xi1,
                xi2,
                start,
                &loops,
            )?;
            Ok(c.defect() + rel(c.d12, p.apply(c.plain)))
        });
        t.check_result(&format!("{tag}: loop enclosing nothing"), r, 1e-13);
    }
}

/// The 5×5 grid of `(ϑ1, φ)` used by the Υ comparison: five angles from
/// each of the three cases, with 0.05 rad margins to every case boundary.
pub fn appendix_b_grid() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..5 {
        let v = 0.2 + 0.3 * i as f64;
        let phis = [
            -FRAC_PI_2 + 0.5 * v,
            v - FRAC_PI_2 + (FRAC_PI_2 - v) / 3.0,
            v - FRAC_PI_2 + 2.0 * (FRAC_PI_2 - v) / 3.0,
            FRAC_PI_4,
            FRAC_PI_2 - 0.2,
        ];
        out.extend(phis.into_iter().map(|phi| (v, phi)));
    }
    out
}

fn appendix_b(t: &mut Tally, p: Perturbation) {
    let spot = upsilon_integral_numeric(PI / 3.0, -PI / 12.0)
        .map(|q| rel(q.value, p.apply(C64::new(13.009_664_171_251_273, 0.0))));
    t.check_result("Υ spot value", spot, 1e-8);
    for (v, phi) in appendix_b_grid() {
        let r = (|| {
            let case = upsilon_case(v, phi)?;
            let num = upsilon_integral_numeric(v, phi)?.value;
            let closed = p.apply(upsilon_integral_closed(v, phi)?);
            let err = (num - closed).norm() / closed.norm().max(1.0);
            Ok(match case {
                UpsilonCase::Two => err,
                _ => err.max(num.norm() * 10.0),
            })
        })();
        t.check_result(&format!("Υ at ϑ1={v:.2}, φ={phi:.3}"), r, 1e-7);
    }
}

/// Helmholtz residual of the asymptotic components. Exact plane and
/// spherical waves leave only the `O(h²)` stencil error. The conical
/// amplitudes satisfy the transport equation exactly, so their residual
/// is the `ΔA/A` term and falls like `(k0 r)⁻²`.
fn helmholtz(t: &mut Tally, p: Perturbation) {
    let vc = VertexCoefficient::unit();
    let h = 1e-3;
    let s = simple_config();
    let k2 = s.k0 * s.k0;
    let stencil_bound = k2 * h * h / 12.0 * 1.05;
    let shift = p.relative.abs();
    let x = ObservationPoint::new(10.0, 10.0, 1.0).expect("valid");
    let r = helmholtz_residual(WaveLabel::RW, &x, h, &s, &vc).map(|v| v + shift);
    t.check_result("RW residual", r, stencil_bound);
    let x = ObservationPoint::spherical(40.0, 0.7, 2.3).expect("valid");
    let r = helmholtz_residual(WaveLabel::SW, &x, h, &s, &vc).map(|v| v + shift);
    t.check_result("SW residual", r, stencil_bound);

    let sweeps = [
        (WaveLabel::PD1, simple_config(), (1.2, -0.6)),
        (WaveLabel::PD2, simple_config(), (1.2, 2.2)),
        (WaveLabel::SD1, complicated_config(), (1.2, -0.3)),
    ];
    for (label, cfg, (theta, phi)) in sweeps {
        let res: Result<Vec<f64>> = [50.0, 100.0, 200.0]
            .iter()
            .map(|&r| {
                let x = ObservationPoint::spherical(r / cfg.k0, theta, phi)?;
                helmholtz_residual(label, &x, h / cfg.k0, &cfg, &vc).map(|v| v + shift)
            })
            .collect();
        match res {
            Ok(v) => {
                for w in v.windows(2) {
                    let ratio = w[1] / w[0];
                    t.check(&format!("{label} residual ratio under r doubling"), (ratio - 0.25).abs(), 0.05);
                }
            }
            Err(e) => t.fail(&format!("{label} residual sweep"), &e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_points_fill_the_unit_cube() {
        let pts = weyl::<3>(4096);
        assert!(pts.iter().flatten().all(|&v| (0.0..1.0).contains(&v)));
        let mean: f64 = pts.iter().map(|p| p[1]).sum::<f64>() / pts.len() as f64;
        assert!((mean - 0.5).abs() < 1e-2);
    }

    #[test]
    fn selection_names() {
        assert_eq!(Suite::parse_selection("all").unwrap().len(), 8);
        assert_eq!(Suite::parse_selection("appendixB").unwrap(), vec![Suite::AppendixB]);
        assert!(Suite::parse_selection("nope").is_none());
    }

    #[test]
    fn perturbed_references_fail() {
        let p = Perturbation { relative: 1e-6 };
        for suite in [Suite::Residues, Suite::Oracles, Suite::AppendixB] {
            assert!(!run(suite, p).pass, "{}", suite.name());
        }
    }

    #[test]
    fn appendix_b_grid_covers_three_cases() {
        let mut seen = [0usize; 3];
        for (v, phi) in appendix_b_grid() {
            match upsilon_case(v, phi).unwrap() {
                UpsilonCase::One => seen[0] += 1,
                UpsilonCase::Two => seen[1] += 1,
                UpsilonCase::Three => seen[2] += 1,
            }
        }
        assert!(seen.iter().all(|&n| n > 0), "{seen:?}");
    }
}
