//! Block-structured 4×4 linear and affine maps of space-time.
//!
//! A linear map is stored as a full 4×4 matrix whose blocks are
//!
//! ```text
//! ( A    -A·V )
//! ( kᵀ    α   )
//! ```
//!
//! where `A` is the spatial Jacobian, `V` the velocity of the map (the
//! velocity, in source coordinates, of points at rest in target coordinates),
//! `k` the time-spatial row and `α` the time-time entry. Coordinates are
//! ordered `(x¹, x², x³, t)`.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

/// A velocity, position, direction or synchrony vector in 3-space.
pub type SpatialVector = Vector3<f64>;

/// Largest absolute entry of a matrix.
pub fn max_norm<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// A proper rotation of 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3(Matrix3<f64>);

impl Rotation3 {
    /// Validates `SᵀS = I` and `det S = +1` at the default rotation tolerance.
    pub fn new(matrix: Matrix3<f64>) -> Result<Self> {
        Self::with_tolerance(matrix, tolerance::ROTATION)
    }

    pub fn with_tolerance(matrix: Matrix3<f64>, tol: f64) -> Result<Self> {
        let orthogonality = max_norm(&(matrix.transpose() * matrix - Matrix3::identity()));
        let det = matrix.determinant();
        if !orthogonality.is_finite() || orthogonality > tol || (det - 1.0).abs() > tol {
            return Err(Error::InvalidRotation { orthogonality, det });
        }
        Ok(Self(matrix))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Rotation by `angle` (radians, right-handed) about `axis`.
    pub fn from_axis_angle(axis: &SpatialVector, angle: f64) -> Self {
        let scaled = axis.normalize() * angle;
        Self(*nalgebra::Rotation3::new(scaled).matrix())
    }

    /// Rotation from a rotation vector (axis times angle).
    pub fn from_scaled_axis(v: &SpatialVector) -> Self {
        Self(*nalgebra::Rotation3::new(*v).matrix())
    }

    /// The rotation of smallest angle carrying unit vector `from` onto unit
    /// vector `to`. Antiparallel inputs get a half turn about an axis
    /// orthogonal to `from`.
    pub fn minimal_between(from: &SpatialVector, to: &SpatialVector) -> Self {
        let a = from.normalize();
        let b = to.normalize();
        if let Some(r) = nalgebra::Rotation3::rotation_between(&a, &b) {
            return Self(*r.matrix());
        }
        // antiparallel
        let helper = if a.x.abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::z()
        };
        let axis = a.cross(&helper).normalize();
        Self::from_axis_angle(&axis, std::f64::consts::PI)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn apply(&self, v: &SpatialVector) -> SpatialVector {
        self.0 * v
    }

    pub fn compose(&self, other: &Rotation3) -> Self {
        Self(self.0 * other.0)
    }

    /// Rotation vector (axis times angle) of this rotation.
    pub fn scaled_axis(&self) -> SpatialVector {
        nalgebra::Rotation3::from_matrix_unchecked(self.0).scaled_axis()
    }

    /// Nearest rotation to an arbitrary invertible matrix (orthogonal polar factor).
    pub fn nearest(m: &Matrix3<f64>) -> Option<Self> {
        let svd = m.svd(true, true);
        let u = svd.u?;
        let vt = svd.v_t?;
        let mut r = u * vt;
        if r.determinant() < 0.0 {
            let mut u = u;
            u.column_mut(2).neg_mut();
            r = u * vt;
        }
        Some(Self(r))
    }
}

/// A linear map of space-time in block form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap4(Matrix4<f64>);

impl LinearMap4 {
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Assembles `[A, col; rowᵀ, α]`.
    pub fn from_blocks(
        spatial: &Matrix3<f64>,
        column: &SpatialVector,
        row: &SpatialVector,
        alpha: f64,
    ) -> Self {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(spatial);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(column);
        m.fixed_view_mut::<1, 3>(3, 0).copy_from(&row.transpose());
        m[(3, 3)] = alpha;
        Self(m)
    }

    /// Assembles the map from its spatial block, velocity, synchrony row and α.
    pub fn from_velocity_form(
        spatial: &Matrix3<f64>,
        velocity: &SpatialVector,
        row: &SpatialVector,
        alpha: f64,
    ) -> Self {
        Self::from_blocks(spatial, &(-(spatial * velocity)), row, alpha)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// The spatial Jacobian block `A`.
    pub fn spatial(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(0, 0).into_owned()
    }

    /// The spatial-time column `-A·V`.
    pub fn column(&self) -> SpatialVector {
        self.0.fixed_view::<3, 1>(0, 3).into_owned()
    }

    /// The time-spatial row `k`.
    pub fn row(&self) -> SpatialVector {
        self.0.fixed_view::<1, 3>(3, 0).transpose()
    }

    pub fn alpha(&self) -> f64 {
        self.0[(3, 3)]
    }

    /// `self · other`: apply `other` first.
    pub fn then_after(&self, other: &LinearMap4) -> Self {
        Self(self.0 * other.0)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.0
            .try_inverse()
            .filter(|m| m.iter().all(|x| x.is_finite()))
            .map(Self)
            .ok_or(Error::DegenerateMap("singular linear part"))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * s)
    }

    pub fn apply(&self, x: &Vector4<f64>) -> Vector4<f64> {
        self.0 * x
    }

    pub fn max_diff(&self, other: &LinearMap4) -> f64 {
        max_norm(&(self.0 - other.0))
    }

    pub fn approx_eq(&self, other: &LinearMap4, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }
}

impl std::ops::Mul for LinearMap4 {
    type Output = LinearMap4;
    fn mul(self, rhs: LinearMap4) -> LinearMap4 {
        LinearMap4(self.0 * rhs.0)
    }
}

impl std::ops::Mul for &LinearMap4 {
    type Output = LinearMap4;
    fn mul(self, rhs: &LinearMap4) -> LinearMap4 {
        LinearMap4(self.0 * rhs.0)
    }
}

/// `x ↦ B·x + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "AffineMap4Json", into = "AffineMap4Json")]
pub struct AffineMap4 {
    pub linear: LinearMap4,
    pub translation: Vector4<f64>,
}

#[derive(Serialize, Deserialize)]
struct AffineMap4Json {
    linear: [[f64; 4]; 4],
    translation: [f64; 4],
}

impl From<AffineMap4> for AffineMap4Json {
    fn from(m: AffineMap4) -> Self {
        let b = m.linear.matrix();
        let mut linear = [[0.0; 4]; 4];
        for (i, row) in linear.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = b[(i, j)];
            }
        }
        AffineMap4Json {
            linear,
            translation: [
                m.translation[0],
                m.translation[1],
                m.translation[2],
                m.translation[3],
            ],
        }
    }
}

impl From<AffineMap4Json> for AffineMap4 {
    fn from(j: AffineMap4Json) -> Self {
        let m = Matrix4::from_fn(|i, k| j.linear[i][k]);
        AffineMap4 {
            linear: LinearMap4(m),
            translation: Vector4::from(j.translation),
        }
    }
}

impl From<LinearMap4> for AffineMap4 {
    fn from(linear: LinearMap4) -> Self {
        AffineMap4::linear(linear)
    }
}

impl AffineMap4 {
    pub fn new(linear: LinearMap4, translation: Vector4<f64>) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub fn linear(linear: LinearMap4) -> Self {
        Self {
            linear,
            translation: Vector4::zeros(),
        }
    }

    pub fn identity() -> Self {
        Self::linear(LinearMap4::identity())
    }

    pub fn translation(b: Vector4<f64>) -> Self {
        Self {
            linear: LinearMap4::identity(),
            translation: b,
        }
    }

    pub fn apply(&self, x: &Vector4<f64>) -> Vector4<f64> {
        self.linear.apply(x) + self.translation
    }

    pub fn max_diff(&self, other: &AffineMap4) -> f64 {
        self.linear
            .max_diff(&other.linear)
            .max(max_norm(&(self.translation - other.translation)))
    }

    pub fn approx_eq(&self, other: &AffineMap4, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    /// Parses the `{"linear": [[..];4], "translation": [..]}` form. With
    /// `validate`, maps that fail any axiom predicate are rejected.
    pub fn from_json_str(s: &str, validate: bool) -> Result<Self> {
        let map: AffineMap4 = serde_json::from_str(s).map_err(|e| Error::Serde(e.to_string()))?;
        if map.linear.matrix().iter().any(|x| !x.is_finite())
            || map.translation.iter().any(|x| !x.is_finite())
        {
            return Err(Error::Serde("non-finite entry".into()));
        }
        if validate && !axiom_predicates(&map).all() {
            return Err(Error::InvalidParams(
                "map violates causality or orientation predicates".into(),
            ));
        }
        Ok(map)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("finite map serializes")
    }
}

/// `Σ_S`: the rotation embedded with zero velocity, zero synchrony row and α = 1.
pub fn rotation_embed(s: &Rotation3) -> LinearMap4 {
    LinearMap4::from_blocks(s.matrix(), &Vector3::zeros(), &Vector3::zeros(), 1.0)
}

fn spatial_is_singular(a: &Matrix3<f64>) -> bool {
    let scale = max_norm(a).max(f64::MIN_POSITIVE);
    let det = a.determinant();
    !det.is_finite() || det.abs() <= 1e-14 * scale * scale * scale
}

/// The velocity `V` solving `column = -A·V`.
pub fn velocity_of(b: &LinearMap4) -> Result<SpatialVector> {
    let a = b.spatial();
    if spatial_is_singular(&a) {
        return Err(Error::DegenerateMap("spatial block is singular"));
    }
    a.lu()
        .solve(&(-b.column()))
        .ok_or(Error::DegenerateMap("spatial block is singular"))
}

/// The velocity of `B⁻¹`.
pub fn reciprocal_velocity(b: &LinearMap4) -> Result<SpatialVector> {
    velocity_of(&b.inverse()?)
}

/// `second ∘ first`.
pub fn compose(second: &AffineMap4, first: &AffineMap4) -> AffineMap4 {
    AffineMap4 {
        linear: second.linear * first.linear,
        translation: second.linear.apply(&first.translation) + second.translation,
    }
}

pub fn inverse(b: &AffineMap4) -> Result<AffineMap4> {
    let inv = b.linear.inverse()?;
    Ok(AffineMap4 {
        linear: inv,
        translation: -inv.apply(&b.translation),
    })
}

/// Velocity of `B·B₁` given the velocity `v_rel` of `B` and the matrix `B₁`:
///
/// `(I₃ − A₁⁻¹ V k₁ᵀ)⁻¹ (U + α₁ A₁⁻¹ V)` with `U` the velocity of `B₁`.
///
/// Equivalently, the velocity in the source chart of `B₁` of a uniform motion
/// whose velocity in the target chart of `B₁` is `v_rel`.
pub fn composed_velocity(v_rel: &SpatialVector, first: &LinearMap4) -> Result<SpatialVector> {
    let u = velocity_of(first)?;
    let a1 = first.spatial();
    let w = a1
        .lu()
        .solve(v_rel)
        .ok_or(Error::DegenerateMap("spatial block is singular"))?;
    let lhs = Matrix3::identity() - w * first.row().transpose();
    if spatial_is_singular(&lhs) {
        return Err(Error::DegenerateMap("velocity composition is singular"));
    }
    lhs.lu()
        .solve(&(u + first.alpha() * w))
        .ok_or(Error::DegenerateMap("velocity composition is singular"))
}

/// Outcome of the causality and orientation predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// `∂t′/∂t ≠ 0` along worldlines at rest in the target.
    pub causal: bool,
    /// `∂t′/∂t = α + k·V > 0`.
    pub time_oriented: bool,
    /// `det A > 0`.
    pub space_oriented: bool,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.causal && self.time_oriented && self.space_oriented
    }
}

pub fn axiom_predicates(b: &AffineMap4) -> AxiomReport {
    let lin = &b.linear;
    let Ok(v) = velocity_of(lin) else {
        return AxiomReport {
            causal: false,
            time_oriented: false,
            space_oriented: false,
        };
    };
    let rate = lin.alpha() + lin.row().dot(&v);
    AxiomReport {
        causal: rate != 0.0 && rate.is_finite(),
        time_oriented: rate > 0.0,
        space_oriented: lin.spatial().determinant() > 0.0,
    }
}

/// Result of splitting a rest map into `T_b ∘ Σ_S`.
#[derive(Debug, Clone, PartialEq)]
pub enum RestDecomposition {
    /// `B = T_b ∘ Σ_S`.
    Newtonian {
        rotation: Rotation3,
        translation: Vector4<f64>,
    },
    /// Zero velocity, but the linear part is not an embedded rotation.
    NotNewtonian { residual: f64 },
}

/// Splits a zero-velocity map into a spatial rotation and a translation.
pub fn rest_decompose(b: &AffineMap4, tol: f64) -> Result<RestDecomposition> {
    let v = velocity_of(&b.linear)?;
    if v.norm() > tol {
        return Err(Error::NotAtRest { speed: v.norm() });
    }
    let lin = &b.linear;
    let candidate = Rotation3::nearest(&lin.spatial());
    let rotation = candidate.and_then(|r| Rotation3::with_tolerance(*r.matrix(), tol).ok());
    let residual = match &candidate {
        Some(r) => lin.max_diff(&rotation_embed(r)),
        None => f64::INFINITY,
    };
    match rotation {
        Some(rotation) if residual <= tol => Ok(RestDecomposition::Newtonian {
            rotation,
            translation: b.translation,
        }),
        _ => Ok(RestDecomposition::NotNewtonian { residual }),
    }
}

/// A uniform worldline `s ↦ base + s·(velocity, 1)`, parametrized by time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformWorldline {
    pub base: Vector4<f64>,
    pub velocity: SpatialVector,
}

impl UniformWorldline {
    pub fn new(base: Vector4<f64>, velocity: SpatialVector) -> Self {
        Self { base, velocity }
    }

    /// The event at time offset `s` from the base event.
    pub fn event(&self, s: f64) -> Vector4<f64> {
        self.base + Vector4::new(self.velocity.x, self.velocity.y, self.velocity.z, 1.0) * s
    }

    pub fn tangent(&self) -> Vector4<f64> {
        Vector4::new(self.velocity.x, self.velocity.y, self.velocity.z, 1.0)
    }
}

/// Image of a uniform worldline under an affine map.
pub fn map_worldline(f: &AffineMap4, w: &UniformWorldline) -> Result<UniformWorldline> {
    let image = f.linear.apply(&w.tangent());
    let rate = image[3];
    let scale = image.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if !rate.is_finite() || rate.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateWorldline);
    }
    Ok(UniformWorldline {
        base: f.apply(&w.base),
        velocity: SpatialVector::new(image[0], image[1], image[2]) / rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn galilei(v: &SpatialVector) -> LinearMap4 {
        LinearMap4::from_blocks(&Matrix3::identity(), &-v, &Vector3::zeros(), 1.0)
    }

    fn boost_x(v: f64) -> LinearMap4 {
        let g = 1.0 / (1.0 - v * v).sqrt();
        LinearMap4::from_matrix(Matrix4::new(
            g,
            0.0,
            0.0,
            -g * v, //
            0.0,
            1.0,
            0.0,
            0.0, //
            0.0,
            0.0,
            1.0,
            0.0, //
            -g * v,
            0.0,
            0.0,
            g,
        ))
    }

    #[test]
    fn identity_rotation_embeds_to_identity() {
        assert_eq!(
            rotation_embed(&Rotation3::identity()),
            LinearMap4::identity()
        );
    }

    #[test]
    fn quarter_turn_embeds_with_unit_alpha() {
        let s = Rotation3::from_axis_angle(&Vector3::z(), FRAC_PI_2);
        let b = rotation_embed(&s);
        assert!(max_norm(&(b.spatial() - s.matrix())) < 1e-15);
        assert_eq!(b.column(), Vector3::zeros());
        assert_eq!(b.row(), Vector3::zeros());
        assert_eq!(b.alpha(), 1.0);
        assert!((b.spatial()[(1, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_rejects_improper_and_skewed() {
        let reflect = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        assert!(matches!(
            Rotation3::new(reflect),
            Err(Error::InvalidRotation { .. })
        ));
        let skew = Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(Rotation3::new(skew).is_err());
    }

    #[test]
    fn velocity_of_reads_off_blocks() {
        assert_eq!(
            velocity_of(&LinearMap4::identity()).unwrap(),
            Vector3::zeros()
        );
        let v = velocity_of(&galilei(&Vector3::new(0.3, 0.0, 0.0))).unwrap();
        assert!((v - Vector3::new(0.3, 0.0, 0.0)).norm() < 1e-15);
        let v = velocity_of(&boost_x(0.6)).unwrap();
        assert!((v.x - 0.6).abs() < 1e-15);
    }

    #[test]
    fn velocity_of_singular_block_fails() {
        let b = LinearMap4::from_blocks(&Matrix3::zeros(), &Vector3::x(), &Vector3::zeros(), 1.0);
        assert!(matches!(velocity_of(&b), Err(Error::DegenerateMap(_))));
    }

    #[test]
    fn reciprocal_velocity_of_boost_is_reversed() {
        assert_eq!(
            reciprocal_velocity(&LinearMap4::identity()).unwrap(),
            Vector3::zeros()
        );
        let w = reciprocal_velocity(&boost_x(0.6)).unwrap();
        assert!((w - Vector3::new(-0.6, 0.0, 0.0)).norm() < 1e-14);
        assert!(reciprocal_velocity(&LinearMap4::from_matrix(Matrix4::zeros())).is_err());
    }

    #[test]
    fn compose_and_inverse_of_translations() {
        let b = AffineMap4::new(boost_x(0.3), Vector4::new(1.0, 2.0, 3.0, 4.0));
        assert_eq!(compose(&b, &AffineMap4::identity()), b);
        let t = AffineMap4::translation(Vector4::new(1.0, -2.0, 0.5, 3.0));
        let ti = inverse(&t).unwrap();
        assert_eq!(ti.translation, Vector4::new(-1.0, 2.0, -0.5, -3.0));
        assert!(compose(&ti, &t).approx_eq(&AffineMap4::identity(), 1e-15));
        assert!(compose(&inverse(&b).unwrap(), &b).approx_eq(&AffineMap4::identity(), 1e-14));
    }

    #[test]
    fn composed_velocity_galilean_and_trivial() {
        let b1 = galilei(&Vector3::new(0.2, 0.0, 0.0));
        let w = composed_velocity(&Vector3::new(0.3, 0.0, 0.0), &b1).unwrap();
        assert!((w - Vector3::new(0.5, 0.0, 0.0)).norm() < 1e-15);
        let b1 = boost_x(0.4);
        let w = composed_velocity(&Vector3::zeros(), &b1).unwrap();
        assert!((w - Vector3::new(0.4, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn composed_velocity_matches_matrix_product_for_boosts() {
        // velocity_of(B₂·B₁) with B₂ = boost(0.5), B₁ = boost(0.5): relativistic 0.8
        let product = boost_x(0.5) * boost_x(0.5);
        let oracle = velocity_of(&product).unwrap();
        assert!((oracle.x - 0.8).abs() < 1e-14);
        let w = composed_velocity(&Vector3::new(0.5, 0.0, 0.0), &boost_x(0.5)).unwrap();
        assert!((w - oracle).norm() < 1e-14);
    }

    #[test]
    fn predicates_of_identity_and_time_reversal() {
        assert!(axiom_predicates(&AffineMap4::identity()).all());
        let rev =
            LinearMap4::from_matrix(Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0)));
        let r = axiom_predicates(&rev.into());
        assert!(r.causal);
        assert!(!r.time_oriented);
        assert!(r.space_oriented);
        for i in 0..40 {
            let v = -0.99 + 0.05 * i as f64;
            assert!(axiom_predicates(&boost_x(v).into()).all(), "v = {v}");
        }
    }

    #[test]
    fn rest_decompose_round_trip() {
        let s = Rotation3::from_axis_angle(&Vector3::new(1.0, 2.0, -0.5), 0.7);
        let b = Vector4::new(0.1, -0.2, 3.0, 1.5);
        let map = compose(&AffineMap4::translation(b), &rotation_embed(&s).into());
        match rest_decompose(&map, 1e-10).unwrap() {
            RestDecomposition::Newtonian {
                rotation,
                translation,
            } => {
                assert!(max_norm(&(rotation.matrix() - s.matrix())) < 1e-12);
                assert_eq!(translation, b);
            }
            other => panic!("expected Newtonian, got {other:?}"),
        }
    }

    #[test]
    fn rest_decompose_rejects_conjugated_rotation_and_moving_maps() {
        let k = Vector3::new(0.3, -0.1, 0.2);
        let kmat = LinearMap4::from_blocks(&Matrix3::identity(), &Vector3::zeros(), &k, 1.0);
        let s = Rotation3::from_axis_angle(&Vector3::z(), 0.9);
        let conj = kmat * rotation_embed(&s) * kmat.inverse().unwrap();
        assert!(velocity_of(&conj).unwrap().norm() < 1e-15);
        assert!(matches!(
            rest_decompose(&conj.into(), 1e-10).unwrap(),
            RestDecomposition::NotNewtonian { .. }
        ));
        assert!(matches!(
            rest_decompose(&boost_x(0.2).into(), 1e-10),
            Err(Error::NotAtRest { .. })
        ));
    }

    #[test]
    fn worldline_images() {
        let w = UniformWorldline::new(
            Vector4::new(1.0, 2.0, 3.0, 4.0),
            Vector3::new(0.1, 0.2, 0.3),
        );
        assert_eq!(map_worldline(&AffineMap4::identity(), &w).unwrap(), w);
        let g = galilei(&Vector3::new(0.5, -0.1, 0.0));
        let img = map_worldline(&g.into(), &w).unwrap();
        assert!((img.velocity - Vector3::new(-0.4, 0.3, 0.3)).norm() < 1e-15);
        // a map sending the worldline's tangent to a purely spatial vector
        let flat = LinearMap4::from_blocks(
            &Matrix3::identity(),
            &Vector3::zeros(),
            &Vector3::new(-10.0, 0.0, 0.0),
            1.0,
        );
        let w = UniformWorldline::new(Vector4::zeros(), Vector3::new(0.1, 0.0, 0.0));
        assert!(matches!(
            map_worldline(&flat.into(), &w),
            Err(Error::DegenerateWorldline)
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let map = AffineMap4::new(boost_x(0.25), Vector4::new(1.0, 0.0, -1.0, 2.0));
        let s = serde_json::to_string(&map).unwrap();
        assert!(s.contains("\"linear\"") && s.contains("\"translation\""));
        let back = AffineMap4::from_json_str(&s, true).unwrap();
        assert_eq!(back, map);
        let rev =
            r#"{"linear":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,-1]],"translation":[0,0,0,0]}"#;
        assert!(AffineMap4::from_json_str(rev, false).is_ok());
        assert!(AffineMap4::from_json_str(rev, true).is_err());
        assert!(AffineMap4::from_json_str("{\"linear\": 3}", false).is_err());
    }
}
