//! Expected values from routes that do not share code with the library path.

use std::f64::consts::PI;

use kinegroup_core::classic::lorentz_boost;
use kinegroup_core::decompose::decompose_two_way;
use kinegroup_core::exec::Mode;
use kinegroup_core::isotropy::{
    one_way_speed, round_trip, round_trip_batch, sine_resync, ClosedPath, CoordinateMap,
};
use kinegroup_core::reichenbach::{
    ellipsoid_geometry, epsilon_function, reichenbach_boost, reichenbach_element, shear_matrix,
    special_two_way, two_way_map, velocity_map, ShearK, TwoWayParams,
};
use kinegroup_core::spacetime::{map_worldline, velocity_of, Rotation3, UniformWorldline};
use kinegroup_core::SpecialParams;
use nalgebra::{Matrix4, Vector3, Vector4};

fn shear(k: [f64; 3]) -> ShearK {
    ShearK::unscaled(Vector3::from(k), 1.0).unwrap()
}

/// Light out to `r` and back, timed in the resynchronized chart by pushing
/// the Minkowski events through the shear by hand.
fn exchange_fraction(k: &Vector3<f64>, r: &Vector3<f64>, c: f64) -> f64 {
    let d = r.norm();
    let image_time = |pos: &Vector3<f64>, t: f64| t + k.dot(pos);
    let depart = image_time(&Vector3::zeros(), 0.0);
    let bounce = image_time(r, d / c);
    let arrive = image_time(&Vector3::zeros(), 2.0 * d / c);
    (bounce - depart) / (arrive - depart)
}

#[test]
fn epsilon_matches_simulated_exchange() {
    for (k, r) in [
        ([0.5, 0.0, 0.0], [1.0, 0.0, 0.0]),
        ([0.2, -0.3, 0.4], [0.3, 2.0, -1.0]),
        ([-0.6, 0.1, 0.0], [-4.0, 0.5, 0.5]),
    ] {
        let sh = shear(k);
        let r = Vector3::from(r);
        let e = epsilon_function(&sh, &r).unwrap();
        assert!((e - exchange_fraction(sh.k(), &r, 1.0)).abs() < 1e-15);
    }
}

#[test]
fn boost_closed_form_equals_explicit_conjugation() {
    // K Λ K⁻¹ multiplied out with plain arrays
    let (k, v) = (0.3, 0.4);
    let alpha = 1.0 / (1.0_f64 - v * v).sqrt();
    let kk = Matrix4::new(
        1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, k, 0.0, 0.0, 1.0,
    );
    let kinv = Matrix4::new(
        1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -k, 0.0, 0.0, 1.0,
    );
    let lam = Matrix4::new(
        alpha,
        0.0,
        0.0,
        -alpha * v,
        0.0,
        1.0,
        0.0,
        0.0,
        0.0,
        0.0,
        1.0,
        0.0,
        -alpha * v,
        0.0,
        0.0,
        alpha,
    );
    let expected = kk * lam * kinv;
    let got = reichenbach_boost(&shear([k, 0.0, 0.0]), v).unwrap();
    assert!((got.matrix() - expected).amax() < 1e-15);
    // entries of the closed form
    assert!((got.matrix()[(0, 0)] - alpha * (1.0 + k * v)).abs() < 1e-15);
    assert!((got.matrix()[(3, 0)] + alpha * (1.0 - k * k) * v).abs() < 1e-15);
}

#[test]
fn determinant_of_shear_is_lambda_to_the_fourth() {
    for (k, lambda) in [
        ([0.1, 0.2, 0.3], 0.7),
        ([-0.5, 0.5, 0.0], 2.5),
        ([0.0, 0.0, 0.99], 1.0),
    ] {
        let sh = ShearK::new(Vector3::from(k), lambda, 1.0).unwrap();
        // block lower triangular: product of the diagonal
        let diag: f64 = (0..4).map(|i| shear_matrix(&sh).matrix()[(i, i)]).product();
        assert!((diag - lambda.powi(4)).abs() < 1e-14);
        assert!((shear_matrix(&sh).matrix().determinant() - diag).abs() < 1e-12);
    }
}

#[test]
fn velocity_map_agrees_with_conjugated_boost() {
    let sh = shear([0.5, 0.0, 0.0]);
    let v = Vector3::new(0.5, 0.0, 0.0);
    // points at rest in the target: x′¹ = 0 ⇔ x¹ = 0.5t in the Minkowski
    // chart; the source chart reads t̄ = t + k·r = 1.25t
    let expected = 0.5 / 1.25;
    assert!((velocity_map(&sh, &v).unwrap().x - expected).abs() < 1e-15);
    let b = reichenbach_element(&sh, &lorentz_boost(&v, 1.0).unwrap()).unwrap();
    assert!((velocity_of(&b).unwrap().x - expected).abs() < 1e-15);
}

#[test]
fn ellipsoid_from_quadratic_form() {
    // along the axis, |v| = c(1 − k·v) has roots c/(1 + ck) and −c/(1 − ck)
    let sh = shear([0.5, 0.0, 0.0]);
    let g = ellipsoid_geometry(&sh);
    let roots = (1.0 / 1.5, -1.0 / 0.5);
    assert!((g.interval.upper - roots.0).abs() < 1e-15);
    assert!((g.interval.lower - roots.1).abs() < 1e-15);
    assert!((g.centre.x - 0.5 * (roots.0 + roots.1)).abs() < 1e-15);
    assert!((g.major - 0.5 * (roots.0 - roots.1)).abs() < 1e-15);
    // widest transverse extent by brute force over the quadric
    let mut widest = 0.0_f64;
    for i in 0..=20_000 {
        let x = roots.1 + (roots.0 - roots.1) * i as f64 / 20_000.0;
        let rho2 = (1.0 - 0.5 * x).powi(2) - x * x;
        widest = widest.max(rho2.max(0.0).sqrt());
    }
    assert!((widest - g.transverse).abs() < 1e-8);
}

#[test]
fn one_way_speeds_by_pushing_null_events() {
    let sh = shear([0.5, 0.0, 0.0]);
    let k = shear_matrix(&sh);
    let out = k.apply(&Vector4::new(1.0, 0.0, 0.0, 1.0));
    let back = k.apply(&Vector4::new(-1.0, 0.0, 0.0, 1.0));
    let (cp, cm) = one_way_speed(&CoordinateMap::shear(&sh), &Vector3::x(), 1.0).unwrap();
    assert!((cp - out[0] / out[3]).abs() < 1e-15);
    assert!((cm + back[0] / back[3]).abs() < 1e-15);
    assert!((cp - 2.0 / 3.0).abs() < 1e-15 && (cm - 2.0).abs() < 1e-15);
}

#[test]
fn special_two_way_at_rest_is_newtonian_only_when_trivial() {
    use kinegroup_core::spacetime::{rest_decompose, RestDecomposition};
    let newtonian = |a1: f64, a2: f64, l: f64| {
        matches!(
            rest_decompose(&special_two_way(0.0, a1, a2, l, 1.0).unwrap(), 1e-10).unwrap(),
            RestDecomposition::Newtonian { .. }
        )
    };
    assert!(newtonian(0.4, 0.4, 1.0));
    assert!(newtonian(-0.2, -0.2, 1.0));
    assert!(!newtonian(0.4, 0.1, 1.0));
    assert!(!newtonian(0.0, 0.0, 0.9));
}

#[test]
fn lorentz_worldline_by_finite_differences() {
    let f = lorentz_boost(&Vector3::new(0.6, 0.0, 0.0), 1.0)
        .unwrap()
        .into();
    let w = UniformWorldline::new(
        Vector4::new(1.0, 2.0, 3.0, 0.5),
        Vector3::new(0.5, 0.1, 0.0),
    );
    let img = map_worldline(&f, &w).unwrap();
    let (e0, e1) = (f.apply(&w.event(0.0)), f.apply(&w.event(1.0)));
    let fd = (e1 - e0).xyz() / (e1[3] - e0[3]);
    assert!((fd - img.velocity).amax() < 1e-12);
    // relativistic addition along x: (0.5 − 0.6)/(1 − 0.3)
    assert!((img.velocity.x - (-0.1 / 0.7)).abs() < 1e-12);
}

#[test]
fn sine_resync_round_trip_converges_at_second_order() {
    let map = CoordinateMap::NonlinearResync(sine_resync(1.0).unwrap());
    // a triangle: the legs do not cancel pairwise, so quadrature error shows
    let tri = ClosedPath::polygon(&[
        Vector3::zeros(),
        Vector3::new(2.0, 0.0, 0.0),
        Vector3::new(0.5, 1.5, 0.0),
    ])
    .unwrap();
    let errs: Vec<f64> = [8, 16, 32]
        .iter()
        .map(|&n| (round_trip(&map, &tri, n, 1.0).unwrap().speed - 1.0).abs())
        .collect();
    assert!(errs[0] > 1e-6, "{errs:?}");
    assert!(
        errs[0] / errs[1] >= 3.5 && errs[1] / errs[2] >= 3.5,
        "{errs:?}"
    );
    let fine = round_trip(&map, &tri, 10_000, 1.0).unwrap().speed;
    assert!((fine - 1.0).abs() < 1e-6);
}

#[test]
fn affine_shear_triangle_round_trip() {
    let sh = shear([0.0, 0.3, 0.0]);
    let tri = ClosedPath::polygon(&[
        Vector3::new(0.2, -0.7, 0.1),
        Vector3::new(1.3, 0.4, -0.5),
        Vector3::new(-0.6, 0.9, 0.8),
    ])
    .unwrap();
    let rt = round_trip(&CoordinateMap::shear(&sh), &tri, 2, 1.0).unwrap();
    assert!((rt.speed - 1.0).abs() < 1e-8);
    // legs timed by hand: |Δr|·(1/c + k·r̂) sums to ℓ/c
    let legs: f64 = tri
        .edges()
        .map(|(a, b)| (b - a).norm() + sh.k().dot(&(b - a)))
        .sum();
    assert!((rt.time - legs).abs() < 1e-14);
}

#[test]
fn batch_modes_agree() {
    let p = TwoWayParams {
        lambda: 1.1,
        k1: Vector3::new(0.1, 0.2, -0.1),
        k2: Vector3::new(-0.3, 0.0, 0.2),
        velocity: Vector3::new(0.2, -0.1, 0.4),
        rotation: Rotation3::from_axis_angle(&Vector3::z(), 0.4),
        translation: Vector4::zeros(),
        c: 1.0,
    };
    let map = CoordinateMap::from_source_chart(&two_way_map(&p).unwrap(), &p.k1);
    let paths: Vec<ClosedPath> = (0..16)
        .map(|i| {
            let a = i as f64 * PI / 8.0;
            ClosedPath::polygon(&[
                Vector3::zeros(),
                Vector3::new(a.cos(), a.sin(), 0.3),
                Vector3::new(0.0, 0.5, 1.0),
            ])
            .unwrap()
        })
        .collect();
    let seq = round_trip_batch(&map, &paths, 2, 1.0, Mode::Sequential).unwrap();
    let par = round_trip_batch(&map, &paths, 2, 1.0, Mode::Parallel).unwrap();
    assert_eq!(seq, par);
    assert!(seq.iter().all(|r| (r.speed - 1.0).abs() < 1e-10));
}

#[test]
fn tangherlini_pair_composition_oracle() {
    // x′ = α₁(x − v₁t), t′ = t/α₁ applied twice, written out by hand
    let (v1, v2) = (0.5_f64, 0.5_f64);
    let (a1, a2) = (1.0 / (1.0 - v1 * v1).sqrt(), 1.0 / (1.0 - v2 * v2).sqrt());
    let w = v1 + v2 / (a1 * a1);
    assert!((w - 0.875).abs() < 1e-15);
    let alpha_w = 1.0 / (1.0 - w * w).sqrt();
    assert!((alpha_w - 2.065_591_117_977_289_7).abs() < 1e-12);
    assert!(((a1 * a2) - 4.0 / 3.0).abs() < 1e-15);
    let t = kinegroup_core::reichenbach::tangherlini(0.5, 1.0, 1.0).unwrap();
    let tt = kinegroup_core::spacetime::compose(&t, &t);
    assert!((tt.linear.matrix()[(0, 0)] - a1 * a2).abs() < 1e-15);
    assert!((tt.linear.matrix()[(3, 3)] - 1.0 / (a1 * a2)).abs() < 1e-15);
    assert!((velocity_of(&tt.linear).unwrap().x - w).abs() < 1e-15);
}

#[test]
fn decomposition_recovers_random_params() {
    let p = TwoWayParams {
        lambda: 0.8,
        k1: Vector3::new(-0.3, 0.25, 0.1),
        k2: Vector3::new(0.05, -0.45, 0.3),
        velocity: Vector3::new(-0.5, 0.3, 0.2),
        rotation: Rotation3::from_axis_angle(&Vector3::new(-1.0, 0.5, 2.0), 2.2),
        translation: Vector4::new(0.0, -1.0, 5.0, 2.0),
        c: 1.0,
    };
    let d = decompose_two_way(&two_way_map(&p).unwrap(), 1.0).unwrap();
    let q = d.params().unwrap();
    assert!((q.lambda - p.lambda).abs() < 1e-7);
    assert!((q.k1 - p.k1).amax() < 1e-7 && (q.k2 - p.k2).amax() < 1e-7);
    assert!((q.velocity - p.velocity).amax() < 1e-7);
    assert!((q.rotation.matrix() - p.rotation.matrix()).amax() < 1e-7);
}

#[test]
fn lorentz_case_matches_addition_of_rapidities() {
    let p = SpecialParams::lorentz(1.0);
    assert!((p.add_velocity(0.5, 0.5).unwrap() - 0.8).abs() < 1e-15);
    let sum = (0.5_f64).atanh() + (0.3_f64).atanh();
    assert!((p.add_velocity(0.5, 0.3).unwrap() - sum.tanh()).abs() < 1e-15);
}
