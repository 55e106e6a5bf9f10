//! Galilei and Lorentz boosts, their rotation–boost–rotation factorization,
//! and the Galileo/Lorentz selection criterion for special families.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spacetime::{
    max_norm, rotation_embed, velocity_of, LinearMap4, Rotation3, SpatialVector,
};
use crate::special::SpecialParams;
use crate::tolerance;

/// `[I₃, −V; 0ᵀ, 1]`.
pub fn galilei_boost(v: &SpatialVector) -> LinearMap4 {
    LinearMap4::from_blocks(&Matrix3::identity(), &-v, &Vector3::zeros(), 1.0)
}

/// The symmetric Lorentz boost: `A = I₃ + (α − 1)uuᵀ`, column `−αV`,
/// row `−(α/c²)V`, with `α = (1 − |V|²/c²)^(−1/2)`.
pub fn lorentz_boost(v: &SpatialVector, c: f64) -> Result<LinearMap4> {
    let speed = v.norm();
    if !(speed < c) || !c.is_finite() {
        return Err(Error::Superluminal { speed, limit: c });
    }
    let beta2 = (speed / c) * (speed / c);
    let alpha = 1.0 / (1.0 - beta2).sqrt();
    // (α − 1)/|V|² written to stay accurate as V → 0
    let k = if speed == 0.0 {
        0.0
    } else {
        alpha * alpha / (c * c) / (alpha + 1.0)
    };
    let spatial = Matrix3::identity() + k * v * v.transpose();
    Ok(LinearMap4::from_blocks(
        &spatial,
        &(-alpha * v),
        &(-alpha / (c * c) * v),
        alpha,
    ))
}

/// `G_c = diag(1, 1, 1, −c²)`.
pub fn minkowski_metric(c: f64) -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -c * c))
}

/// Max-norm of `BᵀG_cB − G_c`, relative to `c²` for the time entry scale.
pub fn lorentz_residual(b: &LinearMap4, c: f64) -> f64 {
    let g = minkowski_metric(c);
    let m = b.matrix();
    let mut r = m.transpose() * g * m - g;
    // rescale so all blocks are dimensionless
    for i in 0..4 {
        r[(i, 3)] /= c;
        r[(3, i)] /= c;
    }
    max_norm(&r)
}

/// Proper orthochronous Lorentz membership.
pub fn is_lorentz(b: &LinearMap4, c: f64, tol: f64) -> bool {
    lorentz_residual(b, c) <= tol && b.alpha() > 0.0 && b.spatial().determinant() > 0.0
}

/// Residual of the homogeneous Galileo shape: bottom row `(0,0,0,1)`, rotation block.
pub fn galilei_residual(b: &LinearMap4) -> f64 {
    let a = b.spatial();
    let ortho = max_norm(&(a.transpose() * a - Matrix3::identity()));
    let row = b.row().amax();
    ortho.max(row).max((b.alpha() - 1.0).abs())
}

pub fn is_galilei(b: &LinearMap4, tol: f64) -> bool {
    galilei_residual(b) <= tol && b.spatial().determinant() > 0.0
}

/// Which group a map or a family belongs to.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "tag", rename_all = "UPPERCASE")]
pub enum GroupTag {
    Galileo,
    Lorentz { c: f64 },
    Anisotropic { violations: Vec<String> },
}

impl GroupTag {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Galileo => "GALILEO",
            Self::Lorentz { .. } => "LORENTZ",
            Self::Anisotropic { .. } => "ANISOTROPIC",
        }
    }
}

/// `B = Σ_{S₁} · B(v·e₁) · Σ_{S₂}` with `B(v·e₁)` the standard boost.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationBoostRotation {
    pub left: Rotation3,
    pub speed: f64,
    pub right: Rotation3,
}

impl RotationBoostRotation {
    pub fn recompose(&self, group: &GroupTag) -> Result<LinearMap4> {
        let boost = standard_boost(group, self.speed)?;
        Ok(rotation_embed(&self.left) * boost * rotation_embed(&self.right))
    }
}

fn standard_boost(group: &GroupTag, speed: f64) -> Result<LinearMap4> {
    match group {
        GroupTag::Galileo => Ok(galilei_boost(&(Vector3::x() * speed))),
        GroupTag::Lorentz { c } => lorentz_boost(&(Vector3::x() * speed), *c),
        GroupTag::Anisotropic { .. } => Err(Error::InvalidParams(
            "factorization needs GALILEO or LORENTZ".into(),
        )),
    }
}

/// Factorizes a Galilei or Lorentz matrix. `S₂` is the smallest rotation
/// taking the velocity direction to `e₁`; at zero speed the result is
/// `(S, 0, I₃)`.
pub fn rbr_decompose(b: &LinearMap4, group: &GroupTag, tol: f64) -> Result<RotationBoostRotation> {
    let residual = match group {
        GroupTag::Galileo => galilei_residual(b),
        GroupTag::Lorentz { c } => lorentz_residual(b, *c),
        GroupTag::Anisotropic { .. } => {
            return Err(Error::InvalidParams(
                "factorization needs GALILEO or LORENTZ".into(),
            ))
        }
    };
    let oriented = b.alpha() > 0.0 && b.spatial().determinant() > 0.0;
    if residual > tol || !oriented {
        return Err(Error::NotInGroup { residual });
    }
    let v = velocity_of(b)?;
    let speed = v.norm();
    let right = if speed == 0.0 {
        Rotation3::identity()
    } else {
        Rotation3::minimal_between(&(v / speed), &Vector3::x())
    };
    let boost = standard_boost(group, speed)?;
    let left_map =
        *b.matrix() * rotation_embed(&right).transpose().matrix() * boost.inverse()?.matrix();
    let left_map = LinearMap4::from_matrix(left_map);
    let left =
        Rotation3::nearest(&left_map.spatial()).ok_or(Error::DegenerateMap("rotation factor"))?;
    let left = Rotation3::with_tolerance(*left.matrix(), tol.max(tolerance::ROTATION))?;
    Ok(RotationBoostRotation { left, speed, right })
}

/// `Σ_{S₀}ᵀ B_{e₁}(v) Σ_{S₀} − B_{e₁}(−v)` in max-norm, `S₀ = diag(−1, −1, 1)`.
pub fn reflection_test(params: &SpecialParams, v: f64) -> Result<f64> {
    let interval = params.domain_interval();
    match (interval.admits(v), interval.admits(-v)) {
        (true, true) => {}
        (false, false) => {
            return Err(Error::Domain {
                v,
                lower: interval.lower,
                upper: interval.upper,
            })
        }
        (fwd, _) => {
            let outside = if fwd { -v } else { v };
            return Err(Error::AsymmetricDomain {
                v: outside,
                lower: interval.lower,
                upper: interval.upper,
            });
        }
    }
    let forward = params.standard(v)?.linear;
    let backward = params.standard(-v)?.linear;
    let s0 = rotation_embed(&Rotation3::new(Matrix3::from_diagonal(&Vector3::new(
        -1.0, -1.0, 1.0,
    )))?);
    let reflected = s0.transpose() * forward * s0;
    Ok(reflected.max_diff(&backward))
}

/// Velocities at which [`classify`] cross-checks its decision: five points
/// spread over the largest symmetric sub-interval of the domain.
pub fn reflection_samples(params: &SpecialParams) -> Vec<f64> {
    let interval = params.domain_interval();
    let half = interval.upper.min(-interval.lower);
    let half = if half.is_finite() {
        half
    } else {
        2.0 * params.c0().or(params.c1()).unwrap_or(1.0)
    };
    [0.1, 0.3, 0.5, 0.7, 0.9].iter().map(|f| f * half).collect()
}

/// Classification outcome with its numerical cross-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub tag: GroupTag,
    pub reflection_residuals: Vec<f64>,
    /// The residuals agree with the tag (all ≤ 1e−10 iff the tag is isotropic).
    pub consistent: bool,
}

/// Decides GALILEO / LORENTZ / ANISOTROPIC from the parameters. With
/// `numeric`, parameters below `1e−12` in magnitude count as zero.
pub fn classify(params: &SpecialParams, numeric: bool) -> Result<ClassifyReport> {
    params.validate()?;
    let zero = |x: f64| {
        if numeric {
            x.abs() < tolerance::NUMERIC_ZERO
        } else {
            x == 0.0
        }
    };
    let mut violations = Vec::new();
    let mut note = |name: &str, x: f64| {
        if !zero(x) {
            violations.push(name.to_string());
        }
    };
    let isotropic = match *params {
        SpecialParams::Galilean => GroupTag::Galileo,
        SpecialParams::Exp { a1, lambda1 } => {
            note("a1", a1);
            note("lambda1", lambda1);
            GroupTag::Galileo
        }
        SpecialParams::Power { l, .. } => {
            note("l", l);
            GroupTag::Galileo
        }
        SpecialParams::Bounded { c0, eta, r1, r2 } => {
            note("eta", eta);
            note("r1", r1);
            note("r2", r2);
            GroupTag::Lorentz { c: c0 }
        }
    };
    let tag = if violations.is_empty() {
        isotropic
    } else {
        GroupTag::Anisotropic { violations }
    };
    let mut residuals = Vec::new();
    for v in reflection_samples(params) {
        match reflection_test(params, v) {
            Ok(r) => residuals.push(r),
            Err(Error::AsymmetricDomain { .. }) => residuals.push(f64::INFINITY),
            Err(e) => return Err(e),
        }
    }
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    let anisotropic = matches!(tag, GroupTag::Anisotropic { .. });
    let consistent = (max_residual > tolerance::MATRIX) == anisotropic;
    Ok(ClassifyReport {
        tag,
        reflection_residuals: residuals,
        consistent,
    })
}
