use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use qpdiff_core::components::{phase_gradient, total_field};
use qpdiff_core::verify::{complicated_config, simple_config};
use qpdiff_core::{
    classify_case, factorization_defect, make_incidence, special_points_plane, special_points_space, CaseKind,
    ComplexPoint2, IncidenceConfig, ObservationPoint, PointKind, SpecialPoint, VertexCoefficient, WaveLabel,
};

fn config() -> impl Strategy<Value = IncidenceConfig> {
    (0.1f64..50.0, 0.0f64..0.5, 0.01f64..FRAC_PI_2 - 0.01, 0.0f64..TAU)
        .prop_map(|(k0, kappa, theta0, phi0)| make_incidence(k0, kappa * k0, theta0, phi0).unwrap())
}

fn reference(case: CaseKind) -> IncidenceConfig {
    match case {
        CaseKind::Simple => simple_config(),
        _ => complicated_config(),
    }
}

fn key(sp: &SpecialPoint, swap: bool) -> (PointKind, String, [i64; 2], bool) {
    let q = |v: f64| (v * 1e9).round() as i64;
    let (label, loc) = if swap {
        (sp.label.swapped(), [sp.location[1], sp.location[0]])
    } else {
        (sp.label, sp.location)
    };
    (sp.kind, format!("{label:?}"), [q(loc[0]), q(loc[1])], sp.active)
}

fn sorted(mut v: Vec<(PointKind, String, [i64; 2], bool)>) -> Vec<(PointKind, String, [i64; 2], bool)> {
    v.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    v
}

fn enumerate(cfg: &IncidenceConfig, case: CaseKind, xt: [f64; 3]) -> Vec<SpecialPoint> {
    if xt[2] == 0.0 {
        special_points_plane(cfg, case, xt).unwrap()
    } else {
        special_points_space(cfg, case, xt).unwrap()
    }
}

fn direction(theta: f64, phi: f64) -> [f64; 3] {
    let st = theta.sin();
    let x3 = if theta == FRAC_PI_2 { 0.0 } else { theta.cos() };
    [st * phi.cos(), st * phi.sin(), x3]
}

fn case_strategy() -> impl Strategy<Value = CaseKind> {
    prop_oneof![Just(CaseKind::Simple), Just(CaseKind::Complicated)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn wavevector_identities(cfg in config()) {
        let k2 = cfg.k * cfg.k;
        let scale = k2.norm();
        prop_assert!((cfg.k1 * cfg.k1 + cfg.k2 * cfg.k2 + cfg.k3 * cfg.k3 - k2).norm() < 1e-12 * scale);
        prop_assert!((cfg.k1p * cfg.k1p + cfg.k2 * cfg.k2 - k2).norm() < 1e-12 * scale);
        prop_assert!((cfg.k2p * cfg.k2p + cfg.k1 * cfg.k1 - k2).norm() < 1e-12 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn classification_ignores_scale(cfg in config(), s in 1e-3f64..1e3) {
        let scaled = make_incidence(cfg.k0 * s, cfg.kappa * s, cfg.theta0, cfg.phi0).unwrap();
        match (classify_case(&cfg), classify_case(&scaled)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn swap_exchanges_the_wavevector(cfg in config()) {
        let swapped = make_incidence(cfg.k0, cfg.kappa, cfg.theta0, FRAC_PI_2 - cfg.phi0).unwrap();
        let via = cfg.swapped();
        let tol = 1e-12 * cfg.k.norm();
        prop_assert!((swapped.k1 - cfg.k2).norm() < tol);
        prop_assert!((swapped.k2 - cfg.k1).norm() < tol);
        prop_assert!((swapped.k1p - cfg.k2p).norm() < tol);
        prop_assert!((swapped.k2p - cfg.k1p).norm() < tol);
        prop_assert!((via.k1 - swapped.k1).norm() < tol && (via.k2p - swapped.k2p).norm() < tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn factorization_on_the_real_plane(a in -2.0f64..2.0, b in -2.0f64..2.0, case in case_strategy()) {
        let cfg = reference(case);
        let margin = 1e-3;
        let near = |v: f64| (v.abs() - 1.0).abs() < margin;
        prop_assume!(!near(a) && !near(b) && !near(a.hypot(b)));
        prop_assume!(a.abs() >= 1.0 || ((1.0 - a * a).sqrt() - b.abs()).abs() > margin);
        prop_assume!(b.abs() >= 1.0 || ((1.0 - b * b).sqrt() - a.abs()).abs() > margin);
        let d = factorization_defect(&ComplexPoint2::real(a, b), &cfg).unwrap();
        prop_assert!(d < 1e-12, "defect {d:e} at ({a}, {b})");
    }

    #[test]
    fn special_points_are_swap_covariant(theta in prop_oneof![Just(FRAC_PI_2), 0.05f64..FRAC_PI_2], phi in 0.0f64..TAU, case in case_strategy()) {
        let cfg = reference(case);
        let xt = direction(theta, phi);
        let n = xt[0].hypot(xt[1]);
        prop_assume!(xt[2] > 0.0 || (xt[0].abs() > 1e-3 * n && xt[1].abs() > 1e-3 * n));
        let pts = enumerate(&cfg, case, xt);
        let mirrored = enumerate(&cfg.swapped(), case, [xt[1], xt[0], xt[2]]);
        prop_assert_eq!(
            sorted(pts.iter().map(|s| key(s, true)).collect()),
            sorted(mirrored.iter().map(|s| key(s, false)).collect())
        );
    }

    #[test]
    fn additive_points_never_contribute(theta in prop_oneof![Just(FRAC_PI_2), 0.05f64..FRAC_PI_2], phi in 0.0f64..TAU, case in case_strategy()) {
        let cfg = reference(case);
        let xt = direction(theta, phi);
        let n = xt[0].hypot(xt[1]);
        prop_assume!(xt[2] > 0.0 || (xt[0].abs() > 1e-3 * n && xt[1].abs() > 1e-3 * n));
        for sp in enumerate(&cfg, case, xt) {
            if matches!(sp.kind, PointKind::AdditiveCrossing | PointKind::TangentialTouch) {
                prop_assert!(!sp.active, "{} active", sp.name);
            }
            if xt[2] > 0.0 && sp.active {
                prop_assert!(sp.location[0].hypot(sp.location[1]) < cfg.k0);
            }
        }
    }

    #[test]
    fn eikonal_identities(r in 1.0f64..500.0, theta in 0.01f64..FRAC_PI_2 - 0.01, phi in 0.0f64..TAU, case in case_strategy()) {
        let cfg = reference(case);
        let x = ObservationPoint::spherical(r, theta, phi).unwrap();
        for &label in WaveLabel::for_case(case) {
            let g = phase_gradient(label, &x, &cfg);
            let n2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
            prop_assert!((n2 - cfg.k0 * cfg.k0).abs() < 1e-12, "{label}: {n2}");
        }
    }

    #[test]
    fn total_field_is_swap_symmetric(r in 5.0f64..300.0, theta in 0.05f64..FRAC_PI_2 - 0.05, phi in 0.0f64..TAU, case in case_strategy()) {
        let cfg = reference(case);
        let x = ObservationPoint::spherical(r, theta, phi).unwrap();
        let vc = VertexCoefficient::unit();
        let a = total_field(&x, &cfg, &vc).unwrap().total;
        let b = total_field(&x.swapped(), &cfg.swapped(), &vc).unwrap().total;
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn dirichlet_condition_on_the_plate(a in 0.1f64..200.0, b in 0.1f64..200.0, case in case_strategy()) {
        let cfg = reference(case);
        let x = ObservationPoint::new(a, b, 0.0).unwrap();
        let f = total_field(&x, &cfg, &VertexCoefficient::unit()).unwrap();
        prop_assert!(f.total.norm() < 1e-12);
    }
}

#[test]
fn limit_points_as_the_direction_reaches_the_plane() {
    let cfg = complicated_config();
    let eps: f64 = 1e-7;
    for phi in [-0.3, -1.0, 2.5, PI + 0.4] {
        let xt = [phi.cos() * (1.0 - eps * eps).sqrt(), phi.sin() * (1.0 - eps * eps).sqrt(), eps];
        let pts = special_points_space(&cfg, CaseKind::Complicated, xt).unwrap();
        let at = |name: &str| pts.iter().find(|s| s.name == name).unwrap().location;
        let s = phi.sin().signum();
        let pd1 = at("PD1");
        let sd1 = at("SD1");
        assert!((pd1[0] + cfg.k1.re).abs() + (pd1[1] + s * cfg.k2p.re).abs() < 1e-6, "{pd1:?}");
        assert!((sd1[0] + cfg.k1p.re).abs() + (sd1[1] - s * cfg.k2.re).abs() < 1e-6, "{sd1:?}");
    }
}
