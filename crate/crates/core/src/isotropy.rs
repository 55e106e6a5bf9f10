//! One-way and round-trip light speeds measured through coordinate maps.
//!
//! Light always travels at `c` in an underlying Minkowski chart. A
//! [`CoordinateMap`] sends that chart's events to image coordinates, and the
//! speeds reported here are distance over time in the image.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::reichenbach::{shear_matrix, ShearK};
use crate::spacetime::{AffineMap4, LinearMap4, SpatialVector};
use crate::tolerance;

pub type ScalarField = Arc<dyn Fn(&SpatialVector) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(&SpatialVector) -> SpatialVector + Send + Sync>;

/// `r = λ·r̄`, `t = λ·(t̄ + g(r̄))`.
#[derive(Clone)]
pub struct NonlinearResync {
    lambda: f64,
    g: ScalarField,
    gradient: Option<VectorField>,
    c: f64,
    domain_scale: f64,
}

impl fmt::Debug for NonlinearResync {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NonlinearResync")
            .field("lambda", &self.lambda)
            .field("c", &self.c)
            .field("analytic_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl NonlinearResync {
    pub fn new(lambda: f64, g: ScalarField, c: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParams("lambda must be positive".into()));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParams(
                "light speed must be positive and finite".into(),
            ));
        }
        Ok(Self {
            lambda,
            g,
            gradient: None,
            c,
            domain_scale: 1.0,
        })
    }

    pub fn with_gradient(mut self, gradient: VectorField) -> Self {
        self.gradient = Some(gradient);
        self
    }

    /// Length scale of the sampled region; sets the finite-difference step.
    pub fn with_domain_scale(mut self, scale: f64) -> Self {
        self.domain_scale = scale.abs().max(f64::MIN_POSITIVE);
        self
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn g(&self, r: &SpatialVector) -> f64 {
        (self.g)(r)
    }

    /// `∇g`, analytic when supplied, else central differences.
    pub fn gradient(&self, r: &SpatialVector) -> SpatialVector {
        if let Some(grad) = &self.gradient {
            return grad(r);
        }
        let h = 1e-6 * self.domain_scale;
        Vector3::from_fn(|i, _| {
            let mut e = Vector3::zeros();
            e[i] = h;
            ((self.g)(&(r + e)) - (self.g)(&(r - e))) / (2.0 * h)
        })
    }
}

#[derive(Debug, Clone)]
pub enum CoordinateMap {
    Affine(AffineMap4),
    NonlinearResync(NonlinearResync),
}

impl From<AffineMap4> for CoordinateMap {
    fn from(m: AffineMap4) -> Self {
        CoordinateMap::Affine(m)
    }
}

impl From<LinearMap4> for CoordinateMap {
    fn from(m: LinearMap4) -> Self {
        CoordinateMap::Affine(m.into())
    }
}

impl CoordinateMap {
    pub fn identity() -> Self {
        CoordinateMap::Affine(AffineMap4::identity())
    }

    /// The resynchronized chart `x = λ·K·x_M`.
    pub fn shear(sh: &ShearK) -> Self {
        CoordinateMap::Affine(shear_matrix(sh).into())
    }

    /// Measures `map` as a map out of the chart with synchrony `k_source`
    /// rather than out of the Minkowski chart itself: `map ∘ K_source`.
    pub fn from_source_chart(map: &AffineMap4, k_source: &SpatialVector) -> Self {
        let source = LinearMap4::from_blocks(
            &nalgebra::Matrix3::identity(),
            &Vector3::zeros(),
            k_source,
            1.0,
        );
        CoordinateMap::Affine(AffineMap4::new(map.linear * source, map.translation))
    }

    /// Image of an event of the Minkowski chart.
    pub fn apply(&self, x: &Vector4<f64>) -> Vector4<f64> {
        match self {
            CoordinateMap::Affine(m) => m.apply(x),
            CoordinateMap::NonlinearResync(n) => {
                let r = Vector3::new(x[0], x[1], x[2]);
                let r_img = r * n.lambda;
                Vector4::new(r_img.x, r_img.y, r_img.z, n.lambda * (x[3] + n.g(&r)))
            }
        }
    }

    /// Light speed at image position `at`, travelling along image direction `d`.
    fn local_speed(&self, at: &SpatialVector, d: &SpatialVector, c: f64) -> Result<f64> {
        match self {
            CoordinateMap::Affine(m) => affine_speed(&m.linear, d, c),
            CoordinateMap::NonlinearResync(n) => {
                let grad = n.gradient(&(at / n.lambda));
                let slowness = 1.0 / c + grad.dot(d);
                if slowness > 0.0 {
                    Ok(1.0 / slowness)
                } else {
                    Err(Error::NoLightRay)
                }
            }
        }
    }
}

/// Pulls the image ray `(d, τ)` back to the Minkowski chart and picks the
/// future-pointing null solution; the speed is `1/τ`.
fn affine_speed(b: &LinearMap4, d: &SpatialVector, c: f64) -> Result<f64> {
    let inv = b.inverse()?;
    let a = inv.apply(&Vector4::new(d.x, d.y, d.z, 0.0));
    let e = inv.apply(&Vector4::new(0.0, 0.0, 0.0, 1.0));
    let c2 = c * c;
    let (ar, at) = (a.xyz(), a[3]);
    let (er, et) = (e.xyz(), e[3]);
    let qa = er.norm_squared() - c2 * et * et;
    let qb = 2.0 * (ar.dot(&er) - c2 * at * et);
    let qc = ar.norm_squared() - c2 * at * at;
    let roots: Vec<f64> = if qa.abs() <= 1e-14 * (qb.abs() + qc.abs()) {
        if qb == 0.0 {
            vec![]
        } else {
            vec![-qc / qb]
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            vec![]
        } else {
            // numerically stable pair
            let q = -0.5 * (qb + qb.signum() * disc.sqrt());
            if q == 0.0 {
                vec![0.0]
            } else {
                vec![q / qa, qc / q]
            }
        }
    };
    roots
        .into_iter()
        .filter(|&tau| tau > 0.0 && at + tau * et > 0.0)
        .fold(None, |best: Option<f64>, tau| {
            Some(best.map_or(tau, |b| b.min(tau)))
        })
        .map(|tau| 1.0 / tau)
        .ok_or(Error::NoLightRay)
}

fn check_unit(direction: &SpatialVector) -> Result<()> {
    let norm = direction.norm();
    if (norm - 1.0).abs() > tolerance::UNIT.max(1e-12) {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

/// `(c₊, c₋)` along `±direction` at the image origin.
pub fn one_way_speed(map: &CoordinateMap, direction: &SpatialVector, c: f64) -> Result<(f64, f64)> {
    one_way_speed_at(map, &Vector3::zeros(), direction, c)
}

pub fn one_way_speed_at(
    map: &CoordinateMap,
    at: &SpatialVector,
    direction: &SpatialVector,
    c: f64,
) -> Result<(f64, f64)> {
    check_unit(direction)?;
    Ok((
        map.local_speed(at, direction, c)?,
        map.local_speed(at, &-direction, c)?,
    ))
}

/// `|1/c₊ + 1/c₋ − 2/c|`.
pub fn two_way_residual(c_plus: f64, c_minus: f64, c: f64) -> f64 {
    (1.0 / c_plus + 1.0 / c_minus - 2.0 / c).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionTrip {
    pub direction: [f64; 3],
    pub c_plus: f64,
    pub c_minus: f64,
}

impl DirectionTrip {
    /// Harmonic mean of the two one-way speeds.
    pub fn round_trip(&self) -> f64 {
        2.0 / (1.0 / self.c_plus + 1.0 / self.c_minus)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripReport {
    pub c: f64,
    pub trips: Vec<DirectionTrip>,
}

impl TripReport {
    pub fn round_trip_speeds(&self) -> Vec<f64> {
        self.trips.iter().map(DirectionTrip::round_trip).collect()
    }
}

pub fn trip_report(
    map: &CoordinateMap,
    directions: &[SpatialVector],
    c: f64,
) -> Result<TripReport> {
    let trips = directions
        .iter()
        .map(|d| {
            let (c_plus, c_minus) = one_way_speed(map, d, c)?;
            Ok(DirectionTrip {
                direction: [d.x, d.y, d.z],
                c_plus,
                c_minus,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TripReport { c, trips })
}

/// Largest `|1/c₊ + 1/c₋ − 2/c|` over the report.
pub fn two_way_law_check(report: &TripReport, c: f64) -> f64 {
    report
        .trips
        .iter()
        .map(|t| two_way_residual(t.c_plus, t.c_minus, c))
        .fold(0.0, f64::max)
}

/// The 26 unit directions towards the neighbours of a cube cell.
pub fn direction_grid() -> Vec<SpatialVector> {
    let mut out = Vec::with_capacity(26);
    for i in -1..=1 {
        for j in -1..=1 {
            for k in -1..=1 {
                if (i, j, k) != (0, 0, 0) {
                    out.push(Vector3::new(i as f64, j as f64, k as f64).normalize());
                }
            }
        }
    }
    out
}

/// A closed polygon in 3-space; the last vertex repeats the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPath {
    vertices: Vec<SpatialVector>,
}

#[derive(Serialize, Deserialize)]
struct PathJson {
    vertices: Vec<[f64; 3]>,
}

impl ClosedPath {
    pub fn new(vertices: Vec<SpatialVector>) -> Result<Self> {
        if vertices.iter().any(|v| !v.iter().all(|x| x.is_finite())) {
            return Err(Error::InvalidPath("non-finite vertex".into()));
        }
        let (Some(first), Some(last)) = (vertices.first(), vertices.last()) else {
            return Err(Error::InvalidPath("no vertices".into()));
        };
        let scale = vertices.iter().map(|v| v.amax()).fold(1.0, f64::max);
        if (first - last).amax() > tolerance::ENDPOINT * scale {
            return Err(Error::InvalidPath("first and last vertex differ".into()));
        }
        let mut distinct: Vec<&SpatialVector> = Vec::new();
        for v in &vertices {
            if !distinct
                .iter()
                .any(|d| (*d - v).amax() <= tolerance::ENDPOINT * scale)
            {
                distinct.push(v);
            }
        }
        if distinct.len() < 3 {
            return Err(Error::InvalidPath(format!(
                "{} distinct vertices, need 3",
                distinct.len()
            )));
        }
        let path = Self { vertices };
        if !(path.length() > 0.0) {
            return Err(Error::InvalidPath("zero length".into()));
        }
        Ok(path)
    }

    /// Closes `corners` by repeating the first one.
    pub fn polygon(corners: &[SpatialVector]) -> Result<Self> {
        let mut v = corners.to_vec();
        if let Some(first) = corners.first() {
            v.push(*first);
        }
        Self::new(v)
    }

    /// `[0,1]²` in the x¹x²-plane, counter-clockwise.
    pub fn unit_square() -> Self {
        Self::polygon(&[
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(1.0, 1.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
        ])
        .expect("unit square is a valid path")
    }

    pub fn vertices(&self) -> &[SpatialVector] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (SpatialVector, SpatialVector)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: PathJson = serde_json::from_str(s).map_err(|e| Error::Serde(e.to_string()))?;
        Self::new(raw.vertices.into_iter().map(Vector3::from).collect())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PathJson {
            vertices: self.vertices.iter().map(|v| [v.x, v.y, v.z]).collect(),
        })
        .expect("plain arrays serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundTrip {
    pub speed: f64,
    pub length: f64,
    pub time: f64,
    /// Largest `|∇g|` seen on the path, for nonlinear maps.
    pub max_gradient: Option<f64>,
}

/// Light sent around `path` (image coordinates), each edge split into `n`
/// steps timed with the local one-way speed at the step midpoint.
pub fn round_trip(map: &CoordinateMap, path: &ClosedPath, n: usize, c: f64) -> Result<RoundTrip> {
    if n < 2 {
        return Err(Error::InvalidParams(
            "need at least 2 samples per edge".into(),
        ));
    }
    let mut time = 0.0;
    let mut max_gradient: Option<f64> = None;
    for (a, b) in path.edges() {
        let len = (b - a).norm();
        if len == 0.0 {
            continue;
        }
        let d = (b - a) / len;
        let h = len / n as f64;
        match map {
            CoordinateMap::Affine(_) => time += len / map.local_speed(&a, &d, c)?,
            CoordinateMap::NonlinearResync(nl) => {
                let mut edge_time = 0.0;
                for i in 0..n {
                    let mid = a + d * (h * (i as f64 + 0.5));
                    let grad = nl.gradient(&(mid / nl.lambda)).norm();
                    if !(grad < 1.0 / c) {
                        return Err(Error::InvalidSynchrony {
                            norm: grad,
                            bound: 1.0 / c,
                        });
                    }
                    max_gradient = Some(max_gradient.map_or(grad, |m| m.max(grad)));
                    edge_time += h / map.local_speed(&mid, &d, c)?;
                }
                time += edge_time;
            }
        }
    }
    let length = path.length();
    Ok(RoundTrip {
        speed: length / time,
        length,
        time,
        max_gradient,
    })
}

pub fn round_trip_speed(map: &CoordinateMap, path: &ClosedPath, n: usize, c: f64) -> Result<f64> {
    Ok(round_trip(map, path, n, c)?.speed)
}

pub fn round_trip_batch(
    map: &CoordinateMap,
    paths: &[ClosedPath],
    n: usize,
    c: f64,
    mode: Mode,
) -> Result<Vec<RoundTrip>> {
    exec::map_slice(paths, mode, |p| round_trip(map, p, n, c))
        .into_iter()
        .collect()
}

/// The `g(r̄) = sin(x̄¹)/(2c)` resynchronization with its analytic gradient.
pub fn sine_resync(c: f64) -> Result<NonlinearResync> {
    Ok(NonlinearResync::new(
        1.0,
        Arc::new(move |r: &SpatialVector| r.x.sin() / (2.0 * c)),
        c,
    )?
    .with_gradient(Arc::new(move |r: &SpatialVector| {
        Vector3::new(r.x.cos() / (2.0 * c), 0.0, 0.0)
    })))
}
