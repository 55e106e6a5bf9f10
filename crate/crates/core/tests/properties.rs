use kinegroup_core::classic::{
    classify, is_lorentz, lorentz_boost, lorentz_residual, reflection_test, GroupTag,
};
use kinegroup_core::decompose::decompose_two_way;
use kinegroup_core::isotropy::{
    direction_grid, one_way_speed, trip_report, two_way_law_check, CoordinateMap,
};
use kinegroup_core::reichenbach::{
    ellipsoid_geometry, ellipsoid_residual, epsilon_function, metric_matrix, reichenbach_element,
    two_way_map, velocity_in_set, velocity_map, ShearK, TwoWayParams,
};
use kinegroup_core::spacetime::{
    axiom_predicates, compose, composed_velocity, map_worldline, rotation_embed, velocity_of,
    AffineMap4, LinearMap4, Rotation3, UniformWorldline,
};
use kinegroup_core::SpecialParams;
use nalgebra::{Matrix4, Vector3, Vector4};
use proptest::prelude::*;

fn vec3(max: f64) -> impl Strategy<Value = Vector3<f64>> {
    prop::array::uniform3(-max..max).prop_map(Vector3::from)
}

fn unit() -> impl Strategy<Value = Vector3<f64>> {
    vec3(1.0)
        .prop_filter("not too short", |v| v.norm() > 0.1)
        .prop_map(|v| v.normalize())
}

fn rotation() -> impl Strategy<Value = Rotation3> {
    vec3(3.0).prop_map(|v| Rotation3::from_scaled_axis(&v))
}

fn params() -> impl Strategy<Value = SpecialParams> {
    prop_oneof![
        Just(SpecialParams::Galilean),
        (-1.0..1.0, -1.0..1.0).prop_map(|(a1, lambda1)| SpecialParams::Exp { a1, lambda1 }),
        (prop_oneof![-1.0..-0.05, 0.05..1.0], -1.0..1.0, -1.0..1.0)
            .prop_map(|(l, r1, r2)| SpecialParams::Power { l, r1, r2 }),
        (0.5..2.0, -1.0..1.0, -1.0..1.0, -1.0..1.0)
            .prop_map(|(c0, eta, r1, r2)| SpecialParams::Bounded { c0, eta, r1, r2 }),
    ]
}

/// Maps `f ∈ (−1, 1)` into the domain interval, keeping clear of the endpoints.
fn velocity_at(p: &SpecialParams, f: f64) -> f64 {
    let i = p.domain_interval();
    let scale = p.c0().or(p.c1()).unwrap_or(1.0);
    if f >= 0.0 {
        if i.upper.is_finite() {
            0.8 * f * i.upper
        } else {
            2.0 * f * scale
        }
    } else if i.lower.is_finite() {
        -0.8 * f * i.lower
    } else {
        2.0 * f * scale
    }
}

fn lorentz(c: f64) -> impl Strategy<Value = LinearMap4> {
    (rotation(), vec3(1.0)).prop_map(move |(r, v)| {
        let v = if v.norm() >= 0.9 {
            v * (0.9 / v.norm())
        } else {
            v
        };
        rotation_embed(&r) * lorentz_boost(&(v * c), c).unwrap()
    })
}

fn shear(c: f64) -> impl Strategy<Value = ShearK> {
    vec3(1.0).prop_map(move |k| {
        let k = if k.norm() >= 0.9 {
            k * (0.9 / k.norm())
        } else {
            k
        };
        ShearK::unscaled(k / c, c).unwrap()
    })
}

fn affine() -> impl Strategy<Value = AffineMap4> {
    (
        prop::array::uniform16(-0.5..0.5),
        prop::array::uniform4(-2.0..2.0),
    )
        .prop_map(|(m, b)| {
            AffineMap4::new(
                LinearMap4::from_matrix(Matrix4::identity() + Matrix4::from_row_slice(&m)),
                Vector4::from(b),
            )
        })
}

fn two_way() -> impl Strategy<Value = TwoWayParams> {
    (
        0.5..2.0,
        vec3(0.5),
        vec3(0.5),
        vec3(0.5),
        rotation(),
        prop::array::uniform4(-3.0..3.0),
    )
        .prop_map(|(lambda, k1, k2, velocity, rotation, b)| TwoWayParams {
            lambda,
            k1,
            k2,
            velocity,
            rotation,
            translation: Vector4::from(b),
            c: 1.0,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn special_closure_and_commutativity(p in params(), u in unit(), f1 in -1.0..1.0, f2 in -1.0..1.0) {
        let (v1, v2) = (velocity_at(&p, f1), velocity_at(&p, f2));
        let w = p.add_velocity(v1, v2).unwrap();
        prop_assume!(p.domain_interval().admits(w) && w.abs() < 10.0);
        let b1 = p.matrix(&u, v1).unwrap();
        let b2 = p.matrix(&u, v2).unwrap();
        let bw = p.matrix(&u, w).unwrap();
        let scale = kinegroup_core::spacetime::max_norm(bw.matrix()).max(1.0);
        prop_assert!((b1 * b2).max_diff(&bw) < 1e-10 * scale);
        prop_assert!((b1 * b2).max_diff(&(b2 * b1)) < 1e-10 * scale);
    }

    #[test]
    fn coefficient_functional_equations(p in params(), f1 in -1.0..1.0, f2 in -1.0..1.0) {
        let (v1, v2) = (velocity_at(&p, f1), velocity_at(&p, f2));
        let w = p.add_velocity(v1, v2).unwrap();
        prop_assume!(p.domain_interval().admits(w) && w.abs() < 10.0);
        let (c1, c2, cw) = (p.coefficients(v1).unwrap(), p.coefficients(v2).unwrap(), p.coefficients(w).unwrap());
        let a = c1.a * c2.a * (1.0 - p.m() * v1 * v2);
        prop_assert!((cw.a - a).abs() <= 1e-10 * a.abs().max(1.0));
        prop_assert!((cw.lambda - c1.lambda * c2.lambda).abs() <= 1e-10 * cw.lambda.max(1.0));
    }

    #[test]
    fn finite_endpoints_are_fixed_points(p in params()) {
        let i = p.domain_interval();
        for w in [i.lower, i.upper].into_iter().filter(|w| w.is_finite()) {
            let q = p.m() * w * w - p.l() * w + 1.0;
            prop_assert!(q.abs() < 1e-9, "endpoint {w}: {q}");
        }
    }

    #[test]
    fn left_translation_keeps_the_interval(p in params(), f0 in -1.0..1.0) {
        // h(w) = v₀ ∗ w maps the interval onto itself with positive slope
        let v0 = velocity_at(&p, f0);
        let i = p.domain_interval();
        let h = |w: f64| (v0 + w - p.l() * v0 * w) / (1.0 - p.m() * v0 * w);
        let mut prev = f64::NEG_INFINITY;
        for k in 1..100 {
            let t = k as f64 / 100.0;
            let w = if i.lower.is_finite() && i.upper.is_finite() {
                i.lower + t * i.width()
            } else {
                velocity_at(&p, 2.0 * t - 1.0) * 1.2
            };
            let hw = h(w);
            prop_assert!(i.contains(hw) || !i.contains(w), "{w} -> {hw}");
            if i.contains(w) {
                prop_assert!(hw > prev);
                prev = hw;
            }
        }
        for w in [i.lower, i.upper].into_iter().filter(|w| w.is_finite()) {
            prop_assert!((h(w) - w).abs() <= 1e-9 * w.abs().max(1.0));
        }
    }

    #[test]
    fn rapidity_is_additive(p in params(), f1 in -1.0..1.0, f2 in -1.0..1.0, r in 0.2..3.0) {
        let (v1, v2) = (velocity_at(&p, f1), velocity_at(&p, f2));
        let w = p.add_velocity(v1, v2).unwrap();
        prop_assume!(p.domain_interval().admits(w));
        let sum = p.rapidity(v1, r).unwrap() + p.rapidity(v2, r).unwrap();
        prop_assert!((p.rapidity(w, r).unwrap() - sum).abs() < 1e-9 * sum.abs().max(1.0));
    }

    #[test]
    fn isotropic_tags_pass_the_reflection_test(c0 in 0.3..3.0, f in 0.0..0.95) {
        let p = SpecialParams::lorentz(c0);
        let report = classify(&p, false).unwrap();
        prop_assert_eq!(&report.tag, &GroupTag::Lorentz { c: c0 });
        prop_assert!(reflection_test(&p, f * c0).unwrap() < 1e-10);
        let b = p.matrix(&Vector3::new(0.0, 0.6, 0.8), f * c0).unwrap();
        prop_assert!(is_lorentz(&b, c0, 1e-10));
        let g = SpecialParams::Exp { a1: 0.0, lambda1: 0.0 };
        let m = g.matrix(&Vector3::x(), 5.0 * f).unwrap();
        prop_assert_eq!(m.row(), Vector3::zeros());
        prop_assert_eq!(m.alpha(), 1.0);
    }

    #[test]
    fn lorentz_membership_survives_products(ls in prop::collection::vec(lorentz(1.5), 10)) {
        let product = ls.iter().fold(LinearMap4::identity(), |acc, l| acc * *l);
        // entries of a long product grow, so the residual is relative to |B|²
        let scale = kinegroup_core::spacetime::max_norm(product.matrix()).powi(2).max(1.0);
        prop_assert!(lorentz_residual(&product, 1.5) < 1e-12 * scale);
        // a generic inverse costs another factor of cond(B) ≈ |B|²
        prop_assert!(lorentz_residual(&product.inverse().unwrap(), 1.5) < 1e-12 * scale * scale);
    }

    #[test]
    fn velocity_of_products_follows_the_composition_law(b1 in affine(), b2 in affine()) {
        let Ok(v) = velocity_of(&b2.linear) else { return Ok(()) };
        let Ok(direct) = velocity_of(&(b2.linear * b1.linear)) else { return Ok(()) };
        let Ok(law) = composed_velocity(&v, &b1.linear) else { return Ok(()) };
        prop_assert!((direct - law).amax() <= 1e-10 * direct.amax().max(1.0));
    }

    #[test]
    fn worldlines_stay_uniform(f in affine(), base in prop::array::uniform4(-3.0..3.0), u in vec3(0.9), s in -5.0..5.0) {
        let w = UniformWorldline::new(Vector4::from(base), u);
        let Ok(img) = map_worldline(&f, &w) else { return Ok(()) };
        let e = f.apply(&w.event(s));
        let on_line = img.event(e[3] - img.base[3]);
        prop_assert!((on_line - e).amax() <= 1e-10 * e.amax().max(1.0) * img.velocity.amax().max(1.0));
    }

    #[test]
    fn predicates_compose(p1 in two_way(), p2 in two_way()) {
        // chain through a shared chart: B₂ reads the chart B₁ writes
        let p2 = TwoWayParams { k1: p1.k2, ..p2 };
        let (b1, b2) = (two_way_map(&p1).unwrap(), two_way_map(&p2).unwrap());
        prop_assert!(axiom_predicates(&b1).all() && axiom_predicates(&b2).all());
        prop_assert!(axiom_predicates(&compose(&b2, &b1)).all());
    }

    #[test]
    fn same_velocity_elements_differ_by_a_rest_map(r in rotation(), v in vec3(0.5)) {
        let b1 = lorentz_boost(&v, 1.0).unwrap();
        let b2 = rotation_embed(&r) * b1;
        let rest = b2 * b1.inverse().unwrap();
        prop_assert!(velocity_of(&rest).unwrap().norm() < 1e-12);
    }

    #[test]
    fn epsilon_stays_strictly_inside(sh in shear(1.3), r in vec3(5.0)) {
        prop_assume!(r.norm() > 1e-3);
        let e = epsilon_function(&sh, &r).unwrap();
        prop_assert!(e > 0.0 && e < 1.0);
    }

    #[test]
    fn metric_is_symmetric_and_preserved(sh in shear(0.7), l in lorentz(0.7)) {
        let g = metric_matrix(&sh);
        prop_assert_eq!(g, g.transpose());
        let r = reichenbach_element(&sh, &l).unwrap();
        let pulled = r.matrix().transpose() * g * r.matrix();
        prop_assert!((pulled - g).amax() < 1e-10);
    }

    #[test]
    fn mapped_velocities_stay_inside_the_ellipsoid(sh in shear(1.0), v in vec3(0.57)) {
        let w = velocity_map(&sh, &v).unwrap();
        prop_assert!(velocity_in_set(&sh, &w));
        prop_assert!(ellipsoid_residual(&sh, &w) < 0.0);
    }

    #[test]
    fn ellipsoid_boundary_points(sh in shear(2.0), theta in 0.0..std::f64::consts::PI, phi in 0.0..6.3) {
        let g = ellipsoid_geometry(&sh);
        prop_assert!(ellipsoid_residual(&sh, &g.point(theta, phi)).abs() < 1e-10);
    }

    #[test]
    fn reichenbach_group_closes(sh in shear(1.0), l1 in lorentz(1.0), l2 in lorentz(1.0)) {
        let prod = reichenbach_element(&sh, &l1).unwrap() * reichenbach_element(&sh, &l2).unwrap();
        prop_assert!(prod.approx_eq(&reichenbach_element(&sh, &(l1 * l2)).unwrap(), 1e-10));
        let inv = reichenbach_element(&sh, &l1.inverse().unwrap()).unwrap();
        prop_assert!((reichenbach_element(&sh, &l1).unwrap() * inv).approx_eq(&LinearMap4::identity(), 1e-10));
        let d = decompose_two_way(&prod.into(), 1.0).unwrap();
        prop_assert!(d.residual() < 1e-8, "residual {}", d.residual());
    }

    #[test]
    fn two_way_maps_obey_the_harmonic_law(p in two_way()) {
        let map = CoordinateMap::from_source_chart(&two_way_map(&p).unwrap(), &p.k1);
        let report = trip_report(&map, &direction_grid(), 1.0).unwrap();
        prop_assert!(two_way_law_check(&report, 1.0) < 1e-8);
    }

    #[test]
    fn shear_speeds_match_ellipsoid_ends(sh in shear(1.0)) {
        prop_assume!(sh.k().norm() > 1e-6);
        let g = ellipsoid_geometry(&sh);
        let (cp, cm) = one_way_speed(&CoordinateMap::shear(&sh), &g.axis, 1.0).unwrap();
        prop_assert!((cp - g.interval.upper).abs() < 1e-8);
        prop_assert!((cm + g.interval.lower).abs() < 1e-8);
    }
}
