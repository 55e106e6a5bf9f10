//! Synchrony shears and the transformation families that keep the two-way
//! speed of light isotropic.
//!
//! A shear `K = [I₃, 0; kᵀ, 1]` with `|k| < 1/c` resynchronizes a Minkowski
//! chart: `x = λ·K·x̄`. Maps between two such charts have the form
//! `λ·K₂·Λ·K₁⁻¹` with `Λ` a proper orthochronous Lorentz matrix. Fixing
//! `K₁ = K₂ = K` gives the Reichenbach group `K·L·K⁻¹`, which leaves the
//! metric `G(k) = K⁻ᵀ G_c K⁻¹` invariant.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};

use crate::classic::{is_lorentz, lorentz_boost};
use crate::error::{Error, Result};
use crate::spacetime::{rotation_embed, AffineMap4, LinearMap4, Rotation3, SpatialVector};
use crate::special::Interval;
use crate::tolerance;

/// A synchrony shear `λ·[I₃, 0; kᵀ, 1]` for light speed `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearK {
    k: SpatialVector,
    lambda: f64,
    c: f64,
}

fn check_speed_limit(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(
            "light speed must be positive and finite".into(),
        ))
    }
}

fn check_synchrony(k: &SpatialVector, c: f64) -> Result<()> {
    let norm = k.norm();
    if !(norm < 1.0 / c) {
        return Err(Error::InvalidSynchrony {
            norm,
            bound: 1.0 / c,
        });
    }
    Ok(())
}

impl ShearK {
    pub fn new(k: SpatialVector, lambda: f64, c: f64) -> Result<Self> {
        check_speed_limit(c)?;
        check_synchrony(&k, c)?;
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParams("lambda must be positive".into()));
        }
        Ok(Self { k, lambda, c })
    }

    /// A unit-scale shear.
    pub fn unscaled(k: SpatialVector, c: f64) -> Result<Self> {
        Self::new(k, 1.0, c)
    }

    pub fn k(&self) -> &SpatialVector {
        &self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `K` without the conformal factor.
    fn unit_matrix(&self) -> LinearMap4 {
        shear_block(&self.k)
    }

    fn unit_inverse(&self) -> LinearMap4 {
        shear_block(&-self.k)
    }

    /// Unit vector along `k`, or `e₁` when `k = 0`.
    pub fn axis(&self) -> SpatialVector {
        let n = self.k.norm();
        if n == 0.0 {
            Vector3::x()
        } else {
            self.k / n
        }
    }
}

fn shear_block(k: &SpatialVector) -> LinearMap4 {
    LinearMap4::from_blocks(&Matrix3::identity(), &Vector3::zeros(), k, 1.0)
}

/// `λ·[I₃, 0; kᵀ, 1]`.
pub fn shear_matrix(sh: &ShearK) -> LinearMap4 {
    sh.unit_matrix().scale(sh.lambda)
}

/// Parameters of a map between two charts with isotropic two-way light speed.
///
/// The Lorentz factor is `Σ_R · Λ(V)` with `Λ(V)` the symmetric boost, so
/// its spatial block is `A = R·(I₃ + (α − 1)uuᵀ)` and satisfies
/// `AᵀA = I₃ + (α²/c²)VVᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoWayParams {
    pub lambda: f64,
    pub k1: SpatialVector,
    pub k2: SpatialVector,
    pub velocity: SpatialVector,
    pub rotation: Rotation3,
    pub translation: Vector4<f64>,
    pub c: f64,
}

/// Free parameters: λ, k₁, k₂, V, the rotation in `A`, and the translation.
pub const TWO_WAY_PARAMETER_COUNT: usize = 1 + 3 + 3 + 3 + 3 + 4;

impl TwoWayParams {
    pub fn validate(&self) -> Result<()> {
        check_speed_limit(self.c)?;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParams("lambda must be positive".into()));
        }
        check_synchrony(&self.k1, self.c)?;
        check_synchrony(&self.k2, self.c)?;
        let speed = self.velocity.norm();
        if !(speed < self.c) {
            return Err(Error::Superluminal {
                speed,
                limit: self.c,
            });
        }
        Ok(())
    }

    /// `Λ = Σ_R · Λ(V)`.
    pub fn lorentz_factor(&self) -> Result<LinearMap4> {
        Ok(rotation_embed(&self.rotation) * lorentz_boost(&self.velocity, self.c)?)
    }

    /// `α = (1 − |V|²/c²)^(−1/2)`.
    pub fn alpha(&self) -> f64 {
        1.0 / (1.0 - self.velocity.norm_squared() / (self.c * self.c)).sqrt()
    }

    /// The spatial block `A` of the Lorentz factor.
    pub fn spatial_block(&self) -> Result<Matrix3<f64>> {
        Ok(self.lorentz_factor()?.spatial())
    }
}

/// `x′ = λ·K₂·Λ·K₁⁻¹·x + b`.
pub fn two_way_map(p: &TwoWayParams) -> Result<AffineMap4> {
    p.validate()?;
    let lin = shear_block(&p.k2) * p.lorentz_factor()? * shear_block(&-p.k1);
    Ok(AffineMap4::new(lin.scale(p.lambda), p.translation))
}

/// The same map assembled entry by entry:
///
/// ```text
/// r′ = λ·A·((I₃ + V·k₁ᵀ)·r − t·V) + b
/// t′ = λ·((Aᵀk₂ − (α/c²)V − (α − k₂ᵀAV)·k₁)·r + (α − k₂ᵀAV)·t) + b⁴
/// ```
pub fn two_way_closed_form(p: &TwoWayParams) -> Result<AffineMap4> {
    p.validate()?;
    let a = p.spatial_block()?;
    let alpha = p.alpha();
    let v = p.velocity;
    let k2av = p.k2.dot(&(a * v));
    let spatial = a * (Matrix3::identity() + v * p.k1.transpose()) * p.lambda;
    let column = -(a * v) * p.lambda;
    let row = (a.transpose() * p.k2 - alpha / (p.c * p.c) * v - (alpha - k2av) * p.k1) * p.lambda;
    let time = (alpha - k2av) * p.lambda;
    Ok(AffineMap4::new(
        LinearMap4::from_blocks(&spatial, &column, &row, time),
        p.translation,
    ))
}

/// The one-directional family with `V = v·e₁`, `k₁ = a₁·e₁`, `k₂ = a₂·e₁`
/// and `A = diag(α, 1, 1)`.
pub fn special_two_way(v: f64, a1: f64, a2: f64, lambda: f64, c: f64) -> Result<AffineMap4> {
    check_speed_limit(c)?;
    if !(v.abs() < c) {
        return Err(Error::Superluminal {
            speed: v.abs(),
            limit: c,
        });
    }
    check_synchrony(&Vector3::new(a1, 0.0, 0.0), c)?;
    check_synchrony(&Vector3::new(a2, 0.0, 0.0), c)?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidParams("lambda must be positive".into()));
    }
    let alpha = 1.0 / (1.0 - (v / c) * (v / c)).sqrt();
    let la = lambda * alpha;
    let m = Matrix4::new(
        la * (1.0 + a1 * v),
        0.0,
        0.0,
        -la * v, //
        0.0,
        lambda,
        0.0,
        0.0, //
        0.0,
        0.0,
        lambda,
        0.0, //
        la * (a2 - v / (c * c) - (1.0 - a2 * v) * a1),
        0.0,
        0.0,
        la * (1.0 - a2 * v),
    );
    Ok(LinearMap4::from_matrix(m).into())
}

/// Solves the absolute-simultaneity constraint for `k₂` so that the time
/// row of the two-way map has no spatial part.
pub fn absolute_simultaneity_params(
    lambda: f64,
    k1: &SpatialVector,
    velocity: &SpatialVector,
    rotation: &Rotation3,
    translation: &Vector4<f64>,
    c: f64,
) -> Result<TwoWayParams> {
    let mut p = TwoWayParams {
        lambda,
        k1: *k1,
        k2: Vector3::zeros(),
        velocity: *velocity,
        rotation: *rotation,
        translation: *translation,
        c,
    };
    p.validate()?;
    let a = p.spatial_block()?;
    let alpha = p.alpha();
    // with y = Aᵀk₂:  (I₃ + k₁Vᵀ)·y = α·(V/c² + k₁)
    let rhs = alpha * (velocity / (c * c) + k1);
    let y = (Matrix3::identity() + k1 * velocity.transpose())
        .lu()
        .solve(&rhs)
        .ok_or(Error::DegenerateMap("absolute simultaneity constraint"))?;
    p.k2 = a
        .transpose()
        .lu()
        .solve(&y)
        .ok_or(Error::DegenerateMap("absolute simultaneity constraint"))?;
    p.validate()?;
    Ok(p)
}

/// A two-way map with `t′ ∝ t`, fixed by `λ, k₁, V, A, b`.
pub fn absolute_simultaneity_map(
    lambda: f64,
    k1: &SpatialVector,
    velocity: &SpatialVector,
    rotation: &Rotation3,
    translation: &Vector4<f64>,
    c: f64,
) -> Result<AffineMap4> {
    two_way_map(&absolute_simultaneity_params(
        lambda,
        k1,
        velocity,
        rotation,
        translation,
        c,
    )?)
}

/// `x′¹ = λα(x¹ − vt)`, `x′² = λx²`, `x′³ = λx³`, `t′ = λt/α`.
pub fn tangherlini(v: f64, lambda: f64, c: f64) -> Result<AffineMap4> {
    check_speed_limit(c)?;
    if !(v.abs() < c) {
        return Err(Error::Superluminal {
            speed: v.abs(),
            limit: c,
        });
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidParams("lambda must be positive".into()));
    }
    let alpha = 1.0 / (1.0 - (v / c) * (v / c)).sqrt();
    let m = Matrix4::new(
        lambda * alpha,
        0.0,
        0.0,
        -lambda * alpha * v, //
        0.0,
        lambda,
        0.0,
        0.0, //
        0.0,
        0.0,
        lambda,
        0.0, //
        0.0,
        0.0,
        0.0,
        lambda / alpha,
    );
    Ok(LinearMap4::from_matrix(m).into())
}

/// `K·Λ·K⁻¹`; the conformal factor of the shear is ignored.
pub fn reichenbach_element(sh: &ShearK, lorentz: &LinearMap4) -> Result<LinearMap4> {
    if !is_lorentz(lorentz, sh.c, tolerance::MATRIX) {
        return Err(Error::NotInGroup {
            residual: crate::classic::lorentz_residual(lorentz, sh.c),
        });
    }
    Ok(sh.unit_matrix() * *lorentz * sh.unit_inverse())
}

/// The boost of the Reichenbach group along `u = k/|k|` (or `e₁` for `k = 0`):
///
/// ```text
/// ( I₃ + (α(1 + kv) − 1)·uuᵀ     −αv·u    )
/// ( −α(1/c² − k²)·v·uᵀ           α(1 − kv) )
/// ```
pub fn reichenbach_boost(sh: &ShearK, v: f64) -> Result<LinearMap4> {
    let c = sh.c;
    if !(v.abs() < c) {
        return Err(Error::Superluminal {
            speed: v.abs(),
            limit: c,
        });
    }
    let u = sh.axis();
    let k = sh.k.norm();
    let alpha = 1.0 / (1.0 - (v / c) * (v / c)).sqrt();
    let spatial = Matrix3::identity() + (alpha * (1.0 + k * v) - 1.0) * u * u.transpose();
    Ok(LinearMap4::from_blocks(
        &spatial,
        &(-alpha * v * u),
        &(-alpha * (1.0 / (c * c) - k * k) * v * u),
        alpha * (1.0 - k * v),
    ))
}

/// `ε(r) = ½(1 + c·k·r/|r|)`, the outbound fraction of a round trip along `r`.
pub fn epsilon_function(sh: &ShearK, r: &SpatialVector) -> Result<f64> {
    let n = r.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroPosition);
    }
    Ok(0.5 * (1.0 + sh.c * sh.k.dot(r) / n))
}

/// `G(k) = K⁻ᵀ G_c K⁻¹ = [I₃ − c²kkᵀ, c²k; c²kᵀ, −c²]`.
pub fn metric_matrix(sh: &ShearK) -> Matrix4<f64> {
    let c2 = sh.c * sh.c;
    let k = sh.k;
    let mut g = Matrix4::zeros();
    g.fixed_view_mut::<3, 3>(0, 0)
        .copy_from(&(Matrix3::identity() - (k * k.transpose()) * c2));
    g.fixed_view_mut::<3, 1>(0, 3).copy_from(&(c2 * k));
    g.fixed_view_mut::<1, 3>(3, 0)
        .copy_from(&(c2 * k.transpose()));
    g[(3, 3)] = -c2;
    g
}

/// `(v, 1)ᵀ G(k) (v, 1) < 0`.
pub fn velocity_in_set(sh: &ShearK, v: &SpatialVector) -> bool {
    let x = Vector4::new(v.x, v.y, v.z, 1.0);
    (x.transpose() * metric_matrix(sh) * x)[(0, 0)] < 0.0
}

/// `(|v|² − c²(1 − k·v)²)/c²`: zero on the velocity ellipsoid.
pub fn ellipsoid_residual(sh: &ShearK, v: &SpatialVector) -> f64 {
    let c2 = sh.c * sh.c;
    (v.norm_squared() - c2 * (1.0 - sh.k.dot(v)).powi(2)) / c2
}

/// Shape of the boundary `|v|² = c²(1 − k·v)²` of admissible velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidGeometry {
    pub centre: SpatialVector,
    /// Unit vector along `k` (`e₁` when `k = 0`).
    pub axis: SpatialVector,
    /// Semi-axis along `k`: `c/(1 − c²|k|²)`.
    pub major: f64,
    /// Semi-axes orthogonal to `k`: `c/√(1 − c²|k|²)`.
    pub transverse: f64,
    /// Signed speeds along the axis: `c·]−1/(1 − c|k|), 1/(1 + c|k|)[`.
    pub interval: Interval,
}

pub fn ellipsoid_geometry(sh: &ShearK) -> EllipsoidGeometry {
    let c = sh.c;
    let k = sh.k.norm();
    let axis = sh.axis();
    let d = 1.0 - c * c * k * k;
    EllipsoidGeometry {
        centre: axis * (-c * c * k / d),
        axis,
        major: c / d,
        transverse: c / d.sqrt(),
        interval: Interval::new(-c / (1.0 - c * k), c / (1.0 + c * k)),
    }
}

impl EllipsoidGeometry {
    /// Boundary point at polar angle `theta` from the axis and azimuth `phi`.
    pub fn point(&self, theta: f64, phi: f64) -> SpatialVector {
        let helper = if self.axis.x.abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::y()
        };
        let e_a = self.axis.cross(&helper).normalize();
        let e_b = self.axis.cross(&e_a);
        self.centre
            + self.axis * (self.major * theta.cos())
            + (e_a * phi.cos() + e_b * phi.sin()) * (self.transverse * theta.sin())
    }
}

/// Velocity of `K·Λ·K⁻¹` when `Λ` has velocity `V`: `V/(1 + k·V)`.
pub fn velocity_map(sh: &ShearK, v: &SpatialVector) -> Result<SpatialVector> {
    let speed = v.norm();
    if !(speed < sh.c) {
        return Err(Error::Superluminal { speed, limit: sh.c });
    }
    Ok(v / (1.0 + sh.k.dot(v)))
}
