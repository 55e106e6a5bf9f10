//! Deterministic parameter sweeps emitted as CSV tables.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::format::csv_row;
use crate::reichenbach::{ellipsoid_geometry, ellipsoid_residual, ShearK};
use crate::special::SpecialParams;

pub const ADDVEL_HEADER: &str = "v1,v2,v1*v2,a(v1*v2),lambda(v1*v2)";
pub const ELLIPSOID_HEADER: &str = "theta,phi,vx,vy,vz,residual";

/// `steps` evenly spaced velocities on `[v_min, v_max]`, squared into a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AddvelGrid {
    pub params: SpecialParams,
    pub v_min: f64,
    pub v_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AddvelRow {
    pub v1: f64,
    pub v2: f64,
    pub sum: f64,
    pub a: f64,
    pub lambda: f64,
}

impl AddvelRow {
    pub fn to_csv(&self) -> String {
        csv_row(&[self.v1, self.v2, self.sum, self.a, self.lambda])
    }
}

impl AddvelGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.steps == 0 {
            return Err(Error::InvalidParams("empty grid".into()));
        }
        if !(self.v_min.is_finite() && self.v_max.is_finite() && self.v_min <= self.v_max) {
            return Err(Error::InvalidParams(
                "grid bounds must be finite with v_min <= v_max".into(),
            ));
        }
        if self.steps == 1 {
            return Ok(vec![self.v_min]);
        }
        let h = (self.v_max - self.v_min) / (self.steps - 1) as f64;
        Ok((0..self.steps).map(|i| self.v_min + h * i as f64).collect())
    }
}

/// Rows in `v1`-major order. Any grid point or sum outside the domain
/// interval is an error.
pub fn addvel_sweep(grid: &AddvelGrid, mode: Mode) -> Result<Vec<AddvelRow>> {
    grid.params.validate()?;
    let points = grid.points()?;
    let interval = grid.params.domain_interval();
    for &v in &points {
        if !interval.admits(v) {
            return Err(Error::Domain {
                v,
                lower: interval.lower,
                upper: interval.upper,
            });
        }
    }
    let n = points.len();
    exec::map_range(n * n, mode, |idx| {
        let (v1, v2) = (points[idx / n], points[idx % n]);
        let sum = grid.params.add_velocity(v1, v2)?;
        let c = grid.params.coefficients(sum)?;
        Ok(AddvelRow {
            v1,
            v2,
            sum,
            a: c.a,
            lambda: c.lambda,
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EllipsoidSampling {
    /// `theta_steps × phi_steps` grid, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    Grid {
        theta_steps: usize,
        phi_steps: usize,
    },
    /// Points uniform on the sphere of directions, from a seeded generator.
    Random { points: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidRow {
    pub theta: f64,
    pub phi: f64,
    pub velocity: Vector3<f64>,
    pub residual: f64,
}

impl EllipsoidRow {
    pub fn to_csv(&self) -> String {
        let v = self.velocity;
        csv_row(&[self.theta, self.phi, v.x, v.y, v.z, self.residual])
    }
}

pub fn ellipsoid_angles(sampling: &EllipsoidSampling) -> Result<Vec<(f64, f64)>> {
    use std::f64::consts::PI;
    match *sampling {
        EllipsoidSampling::Grid {
            theta_steps,
            phi_steps,
        } => {
            if theta_steps == 0 || phi_steps == 0 {
                return Err(Error::InvalidParams("empty grid".into()));
            }
            let mut out = Vec::with_capacity(theta_steps * phi_steps);
            for i in 0..theta_steps {
                let theta = if theta_steps == 1 {
                    0.0
                } else {
                    PI * i as f64 / (theta_steps - 1) as f64
                };
                for j in 0..phi_steps {
                    out.push((theta, 2.0 * PI * j as f64 / phi_steps as f64));
                }
            }
            Ok(out)
        }
        EllipsoidSampling::Random { points, seed } => {
            if points == 0 {
                return Err(Error::InvalidParams("empty grid".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..points)
                .map(|_| {
                    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
                    let phi = rng.random_range(0.0..2.0 * PI);
                    (cos_theta.acos(), phi)
                })
                .collect())
        }
    }
}

/// Boundary points of the velocity ellipsoid with their residuals.
pub fn ellipsoid_sweep(
    sh: &ShearK,
    sampling: &EllipsoidSampling,
    mode: Mode,
) -> Result<Vec<EllipsoidRow>> {
    let angles = ellipsoid_angles(sampling)?;
    let geometry = ellipsoid_geometry(sh);
    Ok(exec::map_slice(&angles, mode, |&(theta, phi)| {
        let velocity = geometry.point(theta, phi);
        EllipsoidRow {
            theta,
            phi,
            velocity,
            residual: ellipsoid_residual(sh, &velocity),
        }
    }))
}
