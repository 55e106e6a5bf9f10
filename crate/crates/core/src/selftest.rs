//! The acceptance suite as library code, shared by the `acceptance` test
//! target and `kinegroup selftest`.
//!
//! Every criterion draws from its own ChaCha8 stream seeded from the suite
//! seed, so criteria can run alone or in parallel with identical results.

use std::time::Instant;

use nalgebra::{Matrix4, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classic::{lorentz_boost, reflection_samples, reflection_test};
use crate::decompose::{decompose_tangherlini, decompose_two_way};
use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::isotropy::{
    direction_grid, one_way_speed, round_trip_speed, trip_report, two_way_law_check, ClosedPath,
    CoordinateMap, NonlinearResync,
};
use crate::reichenbach::{
    ellipsoid_geometry, ellipsoid_residual, reichenbach_element, special_two_way, tangherlini,
    two_way_map, ShearK, TwoWayParams,
};
use crate::spacetime::{
    compose, composed_velocity, map_worldline, max_norm, reciprocal_velocity, rotation_embed,
    velocity_of, AffineMap4, LinearMap4, Rotation3, SpatialVector, UniformWorldline,
};
use crate::special::{printed, Interval, SpecialParams};

pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {}: {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.seconds
        )
    }
}

type Check = fn(&mut ChaCha8Rng) -> (bool, String);

const CRITERIA: [(u8, &str, Check); 10] = [
    (1, "classification closure", closure),
    (2, "velocity addition vs matrix product", addition_oracle),
    (3, "Galileo/Lorentz reflection criterion", reflection),
    (4, "bounded form and printed inverse", bounded_inverse),
    (5, "reciprocity iff l = 0", reciprocity),
    (6, "two-way isotropy of round trips", two_way_isotropy),
    (7, "one-way speed harmonic law", harmonic_law),
    (8, "Reichenbach group vs non-group", group_membership),
    (9, "velocity ellipsoid geometry", ellipsoid),
    (10, "worldline affinity", worldline_affinity),
];

pub fn criterion_ids() -> impl Iterator<Item = u8> {
    CRITERIA.iter().map(|c| c.0)
}

pub fn run_criterion(id: u8, seed: u64) -> Result<CriterionReport> {
    let (id, name, check) = *CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::InvalidParams(format!("no criterion {id}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    let start = Instant::now();
    let (passed, detail) = check(&mut rng);
    Ok(CriterionReport {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all(seed: u64, mode: Mode) -> Vec<CriterionReport> {
    let ids: Vec<u8> = criterion_ids().collect();
    exec::map_slice(&ids, mode, |&id| {
        run_criterion(id, seed).expect("known criterion")
    })
}

pub mod limits {
    pub const CLOSURE: f64 = 1e-10;
    pub const ADDITION: f64 = 1e-10;
    pub const ISOTROPIC_REFLECTION: f64 = 1e-12;
    pub const ANISOTROPIC_REFLECTION: f64 = 1e-6;
    pub const PRINTED_INVERSE: f64 = 1e-12;
    pub const RECIPROCITY: f64 = 1e-10;
    pub const NONLINEAR_ROUND_TRIP: f64 = 1e-6;
    pub const AFFINE_ROUND_TRIP: f64 = 1e-10;
    pub const NEGATIVE_CONTROL: f64 = 1e-3;
    pub const HARMONIC: f64 = 1e-10;
    pub const FAMILY_MEMBER: f64 = 1e-7;
    pub const FAMILY_OUTSIDER: f64 = 1e-4;
    pub const ELLIPSOID_SHAPE: f64 = 1e-12;
    pub const ELLIPSOID_BOUNDARY: f64 = 1e-10;
    pub const WORLDLINE: f64 = 1e-12;
    pub const CLOSURE_SECONDS: f64 = 5.0;
    pub const ISOTROPY_SECONDS: f64 = 30.0;
}

pub mod sampling {
    //! Random draws used by the criteria.

    use super::*;

    pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
        rng.random_range(lo..hi)
    }

    /// Uniform on `±[lo, hi)`.
    pub fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
        let x = rng.random_range(lo..hi);
        if rng.random_bool(0.5) {
            x
        } else {
            -x
        }
    }

    pub fn unit_vector(rng: &mut ChaCha8Rng) -> SpatialVector {
        loop {
            let v = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let n: f64 = v.norm();
            if n > 0.1 && n <= 1.0 {
                return v / n;
            }
        }
    }

    /// A vector with norm uniform in `[0, max)`.
    pub fn ball(rng: &mut ChaCha8Rng, max: f64) -> SpatialVector {
        unit_vector(rng) * rng.random_range(0.0..max)
    }

    pub fn rotation(rng: &mut ChaCha8Rng) -> Rotation3 {
        Rotation3::from_axis_angle(
            &unit_vector(rng),
            rng.random_range(0.0..std::f64::consts::PI),
        )
    }

    pub fn special_params(rng: &mut ChaCha8Rng, case: usize) -> SpecialParams {
        match case % 4 {
            0 => SpecialParams::Galilean,
            1 => SpecialParams::Exp {
                a1: uniform(rng, -1.0, 1.0),
                lambda1: uniform(rng, -1.0, 1.0),
            },
            2 => SpecialParams::Power {
                l: signed(rng, 0.05, 1.0),
                r1: uniform(rng, -1.0, 1.0),
                r2: uniform(rng, -1.0, 1.0),
            },
            _ => SpecialParams::Bounded {
                c0: uniform(rng, 0.5, 2.0),
                eta: uniform(rng, -1.0, 1.0),
                r1: uniform(rng, -1.0, 1.0),
                r2: uniform(rng, -1.0, 1.0),
            },
        }
    }

    /// Velocity scale of a family: `c₀`, `1/|l|`, or 1.
    pub fn scale(params: &SpecialParams) -> f64 {
        params.c0().or(params.c1()).unwrap_or(1.0)
    }

    /// A velocity inside `fraction` of each finite endpoint, or within
    /// `±2·scale` on an unbounded side.
    pub fn velocity(rng: &mut ChaCha8Rng, interval: &Interval, scale: f64, fraction: f64) -> f64 {
        let lo = if interval.lower.is_finite() {
            fraction * interval.lower
        } else {
            -2.0 * scale
        };
        let hi = if interval.upper.is_finite() {
            fraction * interval.upper
        } else {
            2.0 * scale
        };
        rng.random_range(lo..hi)
    }

    /// `(v₁, v₂, v₁ ∗ v₂)` with all three well inside the domain.
    pub fn velocity_pair(rng: &mut ChaCha8Rng, params: &SpecialParams) -> (f64, f64, f64) {
        let interval = params.domain_interval();
        let s = scale(params);
        let inner = |v: f64| {
            let lo = if interval.lower.is_finite() {
                0.9 * interval.lower
            } else {
                -4.0 * s
            };
            let hi = if interval.upper.is_finite() {
                0.9 * interval.upper
            } else {
                4.0 * s
            };
            lo < v && v < hi
        };
        loop {
            let v1 = velocity(rng, &interval, s, 0.8);
            let v2 = velocity(rng, &interval, s, 0.8);
            if let Ok(w) = params.add_velocity(v1, v2) {
                if inner(w) {
                    return (v1, v2, w);
                }
            }
        }
    }

    pub fn lorentz(rng: &mut ChaCha8Rng, c: f64, max_speed: f64) -> LinearMap4 {
        let boost = lorentz_boost(&ball(rng, max_speed * c), c).expect("subluminal");
        rotation_embed(&rotation(rng)) * boost
    }

    pub fn shear(rng: &mut ChaCha8Rng, c: f64, max: f64) -> ShearK {
        ShearK::unscaled(ball(rng, max / c), c).expect("inside bound")
    }

    pub fn two_way_params(rng: &mut ChaCha8Rng, c: f64) -> TwoWayParams {
        TwoWayParams {
            lambda: uniform(rng, 0.5, 2.0),
            k1: ball(rng, 0.8 / c),
            k2: ball(rng, 0.8 / c),
            velocity: ball(rng, 0.8 * c),
            rotation: rotation(rng),
            translation: Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0)),
            c,
        }
    }

    /// A closed polygon with 3 to 5 random corners in `[−1, 1]³`.
    pub fn closed_path(rng: &mut ChaCha8Rng) -> ClosedPath {
        loop {
            let n = rng.random_range(3..=5);
            let corners: Vec<SpatialVector> = (0..n)
                .map(|_| Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)))
                .collect();
            let spread = corners.windows(2).all(|w| (w[1] - w[0]).norm() > 0.05);
            if spread {
                if let Ok(p) = ClosedPath::polygon(&corners) {
                    return p;
                }
            }
        }
    }

    /// `I + 0.5·U(−1, 1)` entries with a random translation.
    pub fn affine(rng: &mut ChaCha8Rng) -> AffineMap4 {
        let m = Matrix4::identity() + Matrix4::from_fn(|_, _| 0.5 * rng.random_range(-1.0..1.0));
        AffineMap4::new(
            LinearMap4::from_matrix(m),
            Vector4::from_fn(|_, _| rng.random_range(-2.0..2.0)),
        )
    }
}

use sampling as s;

fn closure(rng: &mut ChaCha8Rng) -> (bool, String) {
    let start = Instant::now();
    let (product, inverse) = closure_residuals(rng);
    let secs = start.elapsed().as_secs_f64();
    let ok =
        product < limits::CLOSURE && inverse < limits::CLOSURE && secs < limits::CLOSURE_SECONDS;
    (
        ok,
        format!(
            "4 cases x 1000 draws, product residual {product:.2e}, inverse residual {inverse:.2e} (limit {:.0e})",
            limits::CLOSURE
        ),
    )
}

fn closure_residuals(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let mut worst = (0.0_f64, 0.0_f64);
    for case in 0..4 {
        for _ in 0..1000 {
            let params = s::special_params(rng, case);
            let u = s::unit_vector(rng);
            let (v1, v2, w) = s::velocity_pair(rng, &params);
            let b1 = params.matrix(&u, v1).expect("inside");
            let b2 = params.matrix(&u, v2).expect("inside");
            let bw = params.matrix(&u, w).expect("inside");
            worst.0 = worst.0.max((b1 * b2).max_diff(&bw));
            let inv = params
                .matrix(&u, params.inverse_velocity(v1).expect("inside"))
                .expect("inside");
            worst.1 = worst
                .1
                .max(b1.inverse().expect("invertible").max_diff(&inv));
        }
    }
    worst
}

fn addition_oracle(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut worst = 0.0_f64;
    for case in 0..4 {
        for _ in 0..1000 {
            let params = s::special_params(rng, case);
            let u = s::unit_vector(rng);
            let (v1, v2, w) = s::velocity_pair(rng, &params);
            let product = params.matrix(&u, v1).unwrap() * params.matrix(&u, v2).unwrap();
            let v = velocity_of(&product).expect("invertible");
            worst = worst.max((v - u * w).amax());
        }
    }
    (
        worst < limits::ADDITION,
        format!(
            "4000 draws, max |v1*v2 - velocity(B1 B2)| = {worst:.2e} (limit {:.0e})",
            limits::ADDITION
        ),
    )
}

fn max_reflection(params: &SpecialParams) -> f64 {
    reflection_samples(params)
        .into_iter()
        .map(|v| reflection_test(params, v).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

fn reflection(rng: &mut ChaCha8Rng) -> (bool, String) {
    let galileo = [
        SpecialParams::Galilean,
        SpecialParams::Exp {
            a1: 0.0,
            lambda1: 0.0,
        },
    ];
    let lorentz: Vec<SpecialParams> = [0.5, 1.0, 3.0]
        .iter()
        .map(|&c0| SpecialParams::lorentz(c0))
        .collect();
    let isotropic = galileo
        .iter()
        .chain(lorentz.iter())
        .map(max_reflection)
        .fold(0.0, f64::max);
    let mut weakest = f64::INFINITY;
    for i in 0..100 {
        let p = match i % 4 {
            0 => SpecialParams::Exp {
                a1: s::signed(rng, 0.05, 1.0),
                lambda1: s::signed(rng, 0.05, 1.0),
            },
            1 => SpecialParams::Power {
                l: s::signed(rng, 0.05, 1.0),
                r1: s::signed(rng, 0.05, 1.0),
                r2: s::signed(rng, 0.05, 1.0),
            },
            2 => SpecialParams::Bounded {
                c0: s::uniform(rng, 0.5, 2.0),
                eta: s::signed(rng, 0.05, 1.0),
                r1: s::signed(rng, 0.05, 1.0),
                r2: s::signed(rng, 0.05, 1.0),
            },
            // only the scale exponents break isotropy here
            _ => SpecialParams::Bounded {
                c0: s::uniform(rng, 0.5, 2.0),
                eta: 0.0,
                r1: s::signed(rng, 0.05, 1.0),
                r2: s::signed(rng, 0.05, 1.0),
            },
        };
        weakest = weakest.min(max_reflection(&p));
    }
    (
        isotropic < limits::ISOTROPIC_REFLECTION && weakest > limits::ANISOTROPIC_REFLECTION,
        format!(
            "isotropic max {isotropic:.2e} (limit {:.0e}), anisotropic min {weakest:.2e} over 100 points (limit {:.0e})",
            limits::ISOTROPIC_REFLECTION,
            limits::ANISOTROPIC_REFLECTION
        ),
    )
}

fn bounded_inverse(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut worst = 0.0_f64;
    let mut generated = 0.0_f64;
    for _ in 0..200 {
        let params = s::special_params(rng, 3);
        let SpecialParams::Bounded { c0, eta, r1, r2 } = params else {
            unreachable!()
        };
        let v = s::velocity(rng, &params.domain_interval(), c0, 0.8);
        let fwd = printed::bounded_standard(c0, eta, r1, r2, v);
        let inv = printed::bounded_standard_inverse(c0, eta, r1, r2, v);
        worst = worst.max((fwd * inv).max_diff(&LinearMap4::identity()));
        worst = worst.max((inv * fwd).max_diff(&LinearMap4::identity()));
        let general = params.standard(v).unwrap().linear;
        generated = generated.max(general.max_diff(&fwd) / max_norm(fwd.matrix()).max(1.0));
    }
    (
        worst < limits::PRINTED_INVERSE,
        format!(
            "200 draws, max |B Binv - I| = {worst:.2e} (limit {:.0e}); printed vs general form {generated:.2e}",
            limits::PRINTED_INVERSE
        ),
    )
}

fn reciprocity(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut mismatches = 0;
    let (mut iso_worst, mut aniso_min) = (0.0_f64, f64::INFINITY);
    for i in 0..500 {
        let mut params = s::special_params(rng, i % 4);
        // a quarter of the bounded draws are Lorentz-like in l
        if let SpecialParams::Bounded { eta, .. } = &mut params {
            if i % 16 == 3 {
                *eta = 0.0;
            }
        }
        let interval = params.domain_interval();
        let scale = s::scale(&params);
        let v = loop {
            let v = s::velocity(rng, &interval, scale, 0.8);
            if v.abs() > 0.05 * scale {
                break v;
            }
        };
        let b = params.matrix(&Vector3::x(), v).unwrap();
        let w = reciprocal_velocity(&b).unwrap();
        let gap = (w.norm() - v.abs()).abs();
        let equal = gap <= limits::RECIPROCITY;
        if params.l() == 0.0 {
            iso_worst = iso_worst.max(gap);
        } else {
            aniso_min = aniso_min.min(gap);
        }
        if equal != (params.l() == 0.0) {
            mismatches += 1;
        }
    }
    (
        mismatches == 0,
        format!(
            "500 draws, {mismatches} mismatches; l = 0 max gap {iso_worst:.2e}, l != 0 min gap {aniso_min:.2e} (limit {:.0e})",
            limits::RECIPROCITY
        ),
    )
}

fn worst_round_trip(map: &CoordinateMap, paths: &[ClosedPath], n: usize, c: f64) -> f64 {
    paths
        .iter()
        .map(|p| match round_trip_speed(map, p, n, c) {
            Ok(speed) => (speed - c).abs(),
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

fn two_way_isotropy(rng: &mut ChaCha8Rng) -> (bool, String) {
    let start = Instant::now();
    let paths: Vec<ClosedPath> = (0..10).map(|_| s::closed_path(rng)).collect();
    let mut affine = 0.0_f64;
    for _ in 0..10 {
        let c = s::uniform(rng, 0.5, 2.0);
        let p = s::two_way_params(rng, c);
        let map = CoordinateMap::from_source_chart(&two_way_map(&p).unwrap(), &p.k1);
        affine = affine.max(worst_round_trip(&map, &paths, 2, c));

        let v = s::signed(rng, 0.0, 0.9 * c);
        let (a1, a2) = (s::signed(rng, 0.0, 0.9 / c), s::signed(rng, 0.0, 0.9 / c));
        let st = special_two_way(v, a1, a2, s::uniform(rng, 0.5, 2.0), c).unwrap();
        let map = CoordinateMap::from_source_chart(&st, &Vector3::new(a1, 0.0, 0.0));
        affine = affine.max(worst_round_trip(&map, &paths, 2, c));

        let t = tangherlini(s::signed(rng, 0.0, 0.9 * c), s::uniform(rng, 0.5, 2.0), c).unwrap();
        affine = affine.max(worst_round_trip(&t.into(), &paths, 2, c));

        let sh = s::shear(rng, c, 0.9);
        let r = reichenbach_element(&sh, &s::lorentz(rng, c, 0.9)).unwrap();
        let map = CoordinateMap::from_source_chart(&r.into(), sh.k());
        affine = affine.max(worst_round_trip(&map, &paths, 2, c));
    }

    // sin(x¹)/(2c) with central-difference gradients
    let c = 1.0;
    let resync = NonlinearResync::new(
        1.0,
        std::sync::Arc::new(move |r: &SpatialVector| r.x.sin() / (2.0 * c)),
        c,
    )
    .expect("valid")
    .with_domain_scale(1.0);
    let map = CoordinateMap::NonlinearResync(resync);
    let mut nonlinear_paths = vec![ClosedPath::unit_square()];
    nonlinear_paths.extend(paths.iter().cloned());
    let nonlinear = worst_round_trip(&map, &nonlinear_paths, 10_000, c);

    let mut control = 0.0_f64;
    while control == 0.0 {
        let b = s::affine(rng);
        let map = CoordinateMap::from(b);
        let devs: Vec<f64> = paths
            .iter()
            .filter_map(|p| round_trip_speed(&map, p, 2, 1.0).ok())
            .map(|speed| (speed - 1.0).abs())
            .collect();
        if devs.len() == paths.len() {
            control = devs.into_iter().fold(0.0, f64::max);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        affine < limits::AFFINE_ROUND_TRIP
            && nonlinear < limits::NONLINEAR_ROUND_TRIP
            && control > limits::NEGATIVE_CONTROL
            && secs < limits::ISOTROPY_SECONDS,
        format!(
            "affine max |c_rt - c| {affine:.2e} (limit {:.0e}), sine resync at n = 1e4 {nonlinear:.2e} (limit {:.0e}), random affine control {control:.2e} (needs > {:.0e})",
            limits::AFFINE_ROUND_TRIP,
            limits::NONLINEAR_ROUND_TRIP,
            limits::NEGATIVE_CONTROL
        ),
    )
}

fn harmonic_law(rng: &mut ChaCha8Rng) -> (bool, String) {
    let grid = direction_grid();
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let c = s::uniform(rng, 0.5, 2.0);
        let sh = ShearK::new(s::ball(rng, 0.95 / c), s::uniform(rng, 0.5, 2.0), c).unwrap();
        let report = trip_report(&CoordinateMap::shear(&sh), &grid, c).unwrap();
        worst = worst.max(two_way_law_check(&report, c));
    }
    let sh = ShearK::unscaled(Vector3::new(0.5, 0.0, 0.0), 1.0).unwrap();
    let (cp, cm) = one_way_speed(&CoordinateMap::shear(&sh), &Vector3::x(), 1.0).unwrap();
    let interval = ellipsoid_geometry(&sh).interval;
    let pair = (cp - 2.0 / 3.0).abs().max((cm - 2.0).abs());
    let ends = (cp - interval.upper).abs().max((cm + interval.lower).abs());
    (
        worst < limits::HARMONIC && pair < limits::HARMONIC && ends < limits::HARMONIC,
        format!(
            "20 shears x 26 directions, max |1/c+ + 1/c- - 2/c| {worst:.2e}; k = 0.5 e1 gives ({cp:.12}, {cm:.12}), ellipsoid ends ]{:.12}, {:.12}[",
            interval.lower, interval.upper
        ),
    )
}

fn group_membership(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut same_k = 0.0_f64;
    let mut mixed_k = f64::INFINITY;
    for _ in 0..20 {
        let c = s::uniform(rng, 0.5, 2.0);
        let sh = s::shear(rng, c, 0.8);
        let product = reichenbach_element(&sh, &s::lorentz(rng, c, 0.8)).unwrap()
            * reichenbach_element(&sh, &s::lorentz(rng, c, 0.8)).unwrap();
        let d = decompose_two_way(&product.into(), c).unwrap();
        same_k = same_k.max(if d.is_member() {
            d.residual()
        } else {
            f64::INFINITY
        });

        let other = loop {
            let o = s::shear(rng, c, 0.8);
            if (o.k() - sh.k()).norm() * c > 0.2 {
                break o;
            }
        };
        // boosts of at least 0.2c so the synchrony mismatch is visible
        let boost = |rng: &mut ChaCha8Rng| {
            let v = s::unit_vector(rng) * (c * s::uniform(rng, 0.2, 0.8));
            rotation_embed(&s::rotation(rng)) * lorentz_boost(&v, c).unwrap()
        };
        let product = reichenbach_element(&sh, &boost(rng)).unwrap()
            * reichenbach_element(&other, &boost(rng)).unwrap();
        mixed_k = mixed_k.min(decompose_two_way(&product.into(), c).unwrap().residual());
    }
    let t = tangherlini(0.5, 1.0, 1.0).unwrap();
    let double = decompose_tangherlini(&compose(&t, &t), 1.0).unwrap();
    let alpha = |v: f64| 1.0 / (1.0 - v * v).sqrt();
    (
        same_k < limits::FAMILY_MEMBER
            && mixed_k > limits::FAMILY_OUTSIDER
            && double.residual > limits::FAMILY_OUTSIDER,
        format!(
            "same k max residual {same_k:.2e} (limit {:.0e}), mixed k min residual {mixed_k:.2e}, Tangherlini double boost w = {:.6} residual {:.3e} (need > {:.0e}); alpha(w) = {:.6} vs alpha1 alpha2 = {:.6}",
            limits::FAMILY_MEMBER,
            double.velocity,
            double.residual,
            limits::FAMILY_OUTSIDER,
            alpha(double.velocity),
            alpha(0.5) * alpha(0.5)
        ),
    )
}

/// Shape values required for `c = 1`, `k = 0.5·e₁`.
pub const ELLIPSOID_EXPECTED: (f64, f64, [f64; 3], (f64, f64)) = (
    4.0 / 3.0,
    1.154_700_538_379_251_5,
    [-1.0 / 3.0, 0.0, 0.0],
    (-2.0, 2.0 / 3.0),
);

fn ellipsoid(rng: &mut ChaCha8Rng) -> (bool, String) {
    let sh = ShearK::unscaled(Vector3::new(0.5, 0.0, 0.0), 1.0).unwrap();
    let g = ellipsoid_geometry(&sh);
    let (major, transverse, centre, (lo, hi)) = ELLIPSOID_EXPECTED;
    let tol = limits::ELLIPSOID_SHAPE;
    let checks = [
        ("major", (g.major - major).abs()),
        ("transverse", (g.transverse - transverse).abs()),
        ("centre", (g.centre - Vector3::from(centre)).amax()),
        (
            "interval",
            (g.interval.lower - lo)
                .abs()
                .max((g.interval.upper - hi).abs()),
        ),
    ];
    let failing: Vec<&str> = checks
        .iter()
        .filter(|c| !(c.1 < tol))
        .map(|c| c.0)
        .collect();
    let mut boundary = 0.0_f64;
    for _ in 0..500 {
        let theta = rng.random_range(0.0..=std::f64::consts::PI);
        let phi = rng.random_range(0.0..2.0 * std::f64::consts::PI);
        boundary = boundary.max(ellipsoid_residual(&sh, &g.point(theta, phi)).abs());
    }
    (
        failing.is_empty() && boundary < limits::ELLIPSOID_BOUNDARY,
        format!(
            "major {:.15}, transverse {:.15}, centre ({:.15}, 0, 0) vs required ({:.15}, 0, 0), interval ]{}, {:.15}[; mismatched: [{}]; 500 boundary residual {boundary:.2e} (limit {:.0e})",
            g.major,
            g.transverse,
            g.centre.x,
            centre[0],
            g.interval.lower,
            g.interval.upper,
            failing.join(", "),
            limits::ELLIPSOID_BOUNDARY
        ),
    )
}

fn worldline_affinity(rng: &mut ChaCha8Rng) -> (bool, String) {
    let (mut straight, mut velocity, mut finite_diff) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut done = 0;
    while done < 1000 {
        let f = s::affine(rng);
        let w = UniformWorldline::new(
            Vector4::from_fn(|_, _| rng.random_range(-2.0..2.0)),
            s::ball(rng, 0.9),
        );
        let Ok(image) = map_worldline(&f, &w) else {
            continue;
        };
        let tangent = f.linear.apply(&w.tangent());
        // keep maps whose image clock runs at a sane rate
        if tangent[3].abs() < 0.1 {
            continue;
        }
        let Ok(predicted) = composed_velocity(&image.velocity, &f.linear) else {
            continue;
        };
        let scale = image.velocity.amax().max(1.0);
        velocity = velocity.max((predicted - w.velocity).amax() / w.velocity.amax().max(1.0));
        let events: Vec<Vector4<f64>> = [-2.0, -0.5, 1.0, 3.0]
            .iter()
            .map(|&s| f.apply(&w.event(s)))
            .collect();
        for e in &events {
            let on_line = image.event(e[3] - image.base[3]);
            straight = straight.max((on_line - e).amax() / e.amax().max(1.0));
        }
        let (e0, e1) = (events[0], events[3]);
        let fd: SpatialVector = (e1 - e0).xyz() / (e1[3] - e0[3]);
        finite_diff = finite_diff.max((fd - image.velocity).amax() / scale);
        done += 1;
    }
    (
        straight < limits::WORLDLINE && velocity < limits::WORLDLINE && finite_diff < limits::WORLDLINE,
        format!(
            "1000 maps, off-line {straight:.2e}, velocity vs composition law {velocity:.2e}, two-event difference {finite_diff:.2e} (limit {:.0e})",
            limits::WORLDLINE
        ),
    )
}
