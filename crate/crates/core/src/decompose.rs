//! Membership test for the two-way-isotropy family.
//!
//! Writing `B = [M, n; pᵀ, β]`, the spatial rows of `B·K₁` equal the spatial
//! rows of `λ·Λ` for a Lorentz `Λ`. That pins `(k₁, λ)` through the six
//! equations
//!
//! ```text
//! (M + n·k₁ᵀ)(M + n·k₁ᵀ)ᵀ − n·nᵀ/c² = λ²·I₃
//! ```
//!
//! which are solved by damped Gauss-Newton from `k₁ = 0`. The rest of the
//! parameters then follow linearly, and the reconstruction residual decides
//! membership.

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use crate::error::{Error, Result};
use crate::reichenbach::{two_way_map, TwoWayParams};
use crate::spacetime::{max_norm, AffineMap4, LinearMap4, Rotation3};

/// Reconstruction residual below which a map counts as a family member.
pub const MEMBERSHIP_RESIDUAL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 100;
/// Step shrink factor of the backtracking line search.
pub const DAMPING: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum TwoWayDecomposition {
    Member {
        params: TwoWayParams,
        residual: f64,
        iterations: usize,
    },
    NonMember {
        residual: f64,
        iterations: usize,
    },
}

impl TwoWayDecomposition {
    pub fn residual(&self) -> f64 {
        match self {
            Self::Member { residual, .. } | Self::NonMember { residual, .. } => *residual,
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self, Self::Member { .. })
    }

    pub fn params(&self) -> Option<&TwoWayParams> {
        match self {
            Self::Member { params, .. } => Some(params),
            Self::NonMember { .. } => None,
        }
    }
}

type Unknowns = SVector<f64, 4>;

struct Lorentz6<'a> {
    m: &'a Matrix3<f64>,
    n: &'a Vector3<f64>,
    inv_c2: f64,
}

impl Lorentz6<'_> {
    fn residual(&self, x: &Unknowns) -> SVector<f64, 6> {
        let k1 = Vector3::new(x[0], x[1], x[2]);
        let rows = self.m + self.n * k1.transpose();
        let f = rows * rows.transpose()
            - self.n * self.n.transpose() * self.inv_c2
            - Matrix3::identity() * x[3];
        upper6(&f)
    }

    fn jacobian(&self, x: &Unknowns) -> SMatrix<f64, 6, 4> {
        let mut jac = SMatrix::<f64, 6, 4>::zeros();
        let nnt = self.n * self.n.transpose();
        for j in 0..3 {
            let mej = self.m.column(j).into_owned();
            let d = mej * self.n.transpose() + self.n * mej.transpose() + nnt * (2.0 * x[j]);
            jac.set_column(j, &upper6(&d));
        }
        jac.set_column(3, &-upper6(&Matrix3::identity()));
        jac
    }
}

fn upper6(f: &Matrix3<f64>) -> SVector<f64, 6> {
    SVector::<f64, 6>::from([
        f[(0, 0)],
        f[(1, 1)],
        f[(2, 2)],
        f[(0, 1)],
        f[(0, 2)],
        f[(1, 2)],
    ])
}

/// Recovers `(λ, k₁, k₂, V, R, b)` with `B = λ·K₂·Λ·K₁⁻¹ + b`, or reports the
/// smallest reconstruction residual reached.
///
/// The residual is the max-norm of `B − rebuilt` relative to `max(1, |B|)`.
/// When `V = 0` the split between `k₁` and `k₂` is not unique; the solver
/// keeps `k₁ = 0` in that case.
pub fn decompose_two_way(b: &AffineMap4, c: f64) -> Result<TwoWayDecomposition> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParams(
            "light speed must be positive and finite".into(),
        ));
    }
    let bm = b.linear;
    let scale = max_norm(bm.matrix()).max(1.0);
    if bm.matrix().determinant().abs() <= 1e-14 * scale.powi(4) {
        return Err(Error::DegenerateMap("two-way decomposition"));
    }
    let m = bm.spatial();
    let n = bm.column();
    let system = Lorentz6 {
        m: &m,
        n: &n,
        inv_c2: 1.0 / (c * c),
    };

    let s0 = ((m * m.transpose()).trace() - n.norm_squared() / (c * c)) / 3.0;
    let mut x = Unknowns::new(0.0, 0.0, 0.0, if s0 > 0.0 { s0 } else { 1.0 });
    let mut r = system.residual(&x);
    let target = 1e-15 * scale * scale;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && r.amax() > target {
        iterations += 1;
        let jac = system.jacobian(&x);
        let Ok(step) = jac.svd(true, true).solve(&-r, 1e-13 * scale * scale) else {
            break;
        };
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-12 {
            let trial = x + step * t;
            let rt = system.residual(&trial);
            if rt.norm() < r.norm() {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
            t *= DAMPING;
        }
        if !accepted {
            break;
        }
    }

    match rebuild(b, &x, c) {
        Some((params, residual)) if residual < MEMBERSHIP_RESIDUAL => {
            Ok(TwoWayDecomposition::Member {
                params,
                residual,
                iterations,
            })
        }
        Some((_, residual)) => Ok(TwoWayDecomposition::NonMember {
            residual,
            iterations,
        }),
        None => Ok(TwoWayDecomposition::NonMember {
            residual: r.amax() / (scale * scale),
            iterations,
        }),
    }
}

fn rebuild(b: &AffineMap4, x: &Unknowns, c: f64) -> Option<(TwoWayParams, f64)> {
    let bm = &b.linear;
    let scale = max_norm(bm.matrix()).max(1.0);
    if !(x[3] > 0.0) {
        return None;
    }
    let lambda = x[3].sqrt();
    let k1 = Vector3::new(x[0], x[1], x[2]);
    let n = bm.column();
    let rows = bm.spatial() + n * k1.transpose();
    let a = rows / lambda;
    let v = -rows.try_inverse()? * n;
    let speed2 = v.norm_squared() / (c * c);
    if !(speed2 < 1.0) {
        return None;
    }
    let alpha = 1.0 / (1.0 - speed2).sqrt();
    let boost_inv = match v.try_normalize(0.0) {
        Some(u) => Matrix3::identity() + (1.0 / alpha - 1.0) * u * u.transpose(),
        None => Matrix3::identity(),
    };
    let rotation = Rotation3::nearest(&(a * boost_inv))?;

    // with y = Aᵀk₂:  λ·y = p + β·k₁ + λα·V/c²  and  λ·y·V = λα − β
    let p = bm.row();
    let beta = bm.alpha();
    let mut lhs = SMatrix::<f64, 4, 3>::zeros();
    lhs.fixed_view_mut::<3, 3>(0, 0)
        .copy_from(&(Matrix3::identity() * lambda));
    lhs.fixed_view_mut::<1, 3>(3, 0)
        .copy_from(&(v.transpose() * lambda));
    let top = p + beta * k1 + lambda * alpha * v / (c * c);
    let rhs = SVector::<f64, 4>::new(top.x, top.y, top.z, lambda * alpha - beta);
    let y: Vector3<f64> = lhs.svd(true, true).solve(&rhs, 1e-15).ok()?;
    let k2 = a.transpose().try_inverse()? * y;

    let params = TwoWayParams {
        lambda,
        k1,
        k2,
        velocity: v,
        rotation,
        translation: b.translation,
        c,
    };
    let rebuilt = two_way_map(&params).ok()?;
    let residual = rebuilt.linear.max_diff(bm) / scale;
    Some((params, residual))
}

/// Closest Tangherlini map `tangherlini(w, λ)` to `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangherliniFit {
    pub velocity: f64,
    pub lambda: f64,
    pub residual: f64,
}

impl TangherliniFit {
    pub fn is_member(&self) -> bool {
        self.residual < MEMBERSHIP_RESIDUAL
    }
}

/// Fits the Tangherlini family: `λ` from the transverse scale, `w` from the
/// velocity of `B` along `e₁`. The residual covers every entry, so any
/// off-axis velocity or non-zero synchrony row also shows up in it.
pub fn decompose_tangherlini(b: &AffineMap4, c: f64) -> Result<TangherliniFit> {
    let bm = &b.linear;
    let scale = max_norm(bm.matrix()).max(1.0);
    let lambda = 0.5 * (bm.matrix()[(1, 1)] + bm.matrix()[(2, 2)]);
    if !(lambda > 0.0) {
        return Err(Error::InvalidParams(
            "transverse scale must be positive".into(),
        ));
    }
    let velocity = crate::spacetime::velocity_of(bm)?.x;
    let residual = match crate::reichenbach::tangherlini(velocity, lambda, c) {
        Ok(fit) => fit.linear.max_diff(bm) / scale,
        Err(Error::Superluminal { .. }) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok(TangherliniFit {
        velocity,
        lambda,
        residual,
    })
}

/// `K₁` conjugation helper: the source chart of a decomposed map.
pub fn source_shear(params: &TwoWayParams) -> LinearMap4 {
    LinearMap4::from_blocks(&Matrix3::identity(), &Vector3::zeros(), &params.k1, 1.0)
}
