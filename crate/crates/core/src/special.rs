//! One-parameter groups of special transformations along a direction `u`.
//!
//! Every special matrix has the shape
//!
//! ```text
//! λ(v) · ( I₃ + (a(v) − 1)·u·uᵀ    −a(v)·v·u     )
//!        ( m·a(v)·v·uᵀ              a(v)·(1 − lv) )
//! ```
//!
//! with `m ≤ 0` and `l` constants of the group, and `a`, `λ` fixed by the
//! case of the classification:
//!
//! | case      | m        | l          | a(v)                                 | λ(v)              |
//! |-----------|----------|------------|--------------------------------------|-------------------|
//! | Galilean  | 0        | 0          | 1                                    | 1                 |
//! | Exp       | 0        | 0          | `exp(a₁v)`                           | `exp(λ₁v)`        |
//! | Power     | 0        | `l ≠ 0`    | `(1 − lv)^r₁`                        | `(1 − lv)^r₂`     |
//! | Bounded   | `−1/c₀²` | `2η/c₀`    | `q₁^(r₁−½) / q₂^(r₁+½)`              | `(q₁/q₂)^r₂`      |
//!
//! where `β = v/c₀`, `q₁ = 1 + p̄β`, `q₂ = 1 − pβ`, `p = √(1+η²) + η` and
//! `p̄ = √(1+η²) − η`.
//!
//! The velocities compose by `v₁ ∗ v₂ = (v₁ + v₂ − l·v₁v₂) / (1 − m·v₁v₂)`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacetime::{rotation_embed, AffineMap4, LinearMap4, Rotation3, SpatialVector};
use crate::tolerance;

fn default_c0() -> f64 {
    1.0
}

/// Parameters of one classified family. The case tag is explicit: a tiny
/// `m` is never silently promoted to a different case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum SpecialParams {
    /// `m = 0`, `l = 0`, `a = λ = 1`.
    Galilean,
    /// `m = 0`, `l = 0`, exponential coefficients.
    Exp {
        #[serde(default)]
        a1: f64,
        #[serde(default)]
        lambda1: f64,
    },
    /// `m = 0`, `l ≠ 0` (a zero `l` degenerates to the Galilean law).
    Power {
        #[serde(default)]
        l: f64,
        #[serde(default)]
        r1: f64,
        #[serde(default)]
        r2: f64,
    },
    /// `m = −1/c₀² < 0`.
    Bounded {
        #[serde(default = "default_c0")]
        c0: f64,
        #[serde(default)]
        eta: f64,
        #[serde(default)]
        r1: f64,
        #[serde(default)]
        r2: f64,
    },
}

/// An open velocity interval; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower < upper);
        Self { lower, upper }
    }

    pub fn real_line() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower < v && v < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Distance from an endpoint below which velocities are rejected.
    fn margin(&self) -> f64 {
        let w = self.width();
        if w.is_finite() {
            tolerance::ENDPOINT * w
        } else {
            let finite = [self.lower, self.upper]
                .into_iter()
                .filter(|x| x.is_finite())
                .fold(1.0_f64, |m, x| m.max(x.abs()));
            tolerance::ENDPOINT * finite
        }
    }

    /// `v` lies inside, away from the endpoints by the rejection margin.
    pub fn admits(&self, v: f64) -> bool {
        let margin = self.margin();
        v.is_finite() && self.lower + margin < v && v < self.upper - margin
    }

    fn check(&self, v: f64) -> Result<()> {
        if self.admits(v) {
            Ok(())
        } else {
            Err(Error::Domain {
                v,
                lower: self.lower,
                upper: self.upper,
            })
        }
    }
}

/// Coefficient functions of a special matrix at one velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a: f64,
    pub lambda: f64,
    /// `α̂ = a·(1 − lv)`.
    pub alpha_hat: f64,
    /// `b = m·a`; the bottom-left block is `b·v·uᵀ`.
    pub b: f64,
}

impl Coefficients {
    /// `f(v) = α̂/a = 1 − lv`.
    pub fn f(&self) -> f64 {
        self.alpha_hat / self.a
    }

    /// `g(v) = b/a = m`.
    pub fn g(&self) -> f64 {
        self.b / self.a
    }
}

fn check_unit(u: &SpatialVector) -> Result<()> {
    let norm = u.norm();
    if (norm - 1.0).abs() > tolerance::UNIT || !norm.is_finite() {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

impl SpecialParams {
    pub fn bounded(c0: f64, eta: f64, r1: f64, r2: f64) -> Self {
        Self::Bounded { c0, eta, r1, r2 }
    }

    /// The special Lorentz family with limit speed `c0`.
    pub fn lorentz(c0: f64) -> Self {
        Self::Bounded {
            c0,
            eta: 0.0,
            r1: 0.0,
            r2: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} must be finite")))
            }
        };
        match *self {
            Self::Galilean => Ok(()),
            Self::Exp { a1, lambda1 } => {
                finite("a1", a1)?;
                finite("lambda1", lambda1)
            }
            Self::Power { l, r1, r2 } => {
                finite("l", l)?;
                finite("r1", r1)?;
                finite("r2", r2)
            }
            Self::Bounded { c0, eta, r1, r2 } => {
                finite("eta", eta)?;
                finite("r1", r1)?;
                finite("r2", r2)?;
                if !(c0 > 0.0 && c0.is_finite()) {
                    return Err(Error::InvalidParams(
                        "c0 must be positive and finite".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn case_name(&self) -> &'static str {
        match self {
            Self::Galilean => "galilean",
            Self::Exp { .. } => "exp",
            Self::Power { .. } => "power",
            Self::Bounded { .. } => "bounded",
        }
    }

    /// `m`, with units of inverse velocity squared.
    pub fn m(&self) -> f64 {
        match *self {
            Self::Bounded { c0, .. } => -1.0 / (c0 * c0),
            _ => 0.0,
        }
    }

    /// `l`, with units of inverse velocity.
    pub fn l(&self) -> f64 {
        match *self {
            Self::Power { l, .. } => l,
            Self::Bounded { c0, eta, .. } => 2.0 * eta / c0,
            _ => 0.0,
        }
    }

    pub fn c0(&self) -> Option<f64> {
        match *self {
            Self::Bounded { c0, .. } => Some(c0),
            _ => None,
        }
    }

    /// `c₁ = 1/|l|` for the power case with `l ≠ 0`.
    pub fn c1(&self) -> Option<f64> {
        match *self {
            Self::Power { l, .. } if l != 0.0 => Some(1.0 / l.abs()),
            _ => None,
        }
    }

    /// `(p, p̄)`; both equal 1 outside the bounded case.
    pub fn p_pair(&self) -> (f64, f64) {
        match *self {
            Self::Bounded { eta, .. } => {
                let root = eta.hypot(1.0);
                // p·p̄ = 1; take the larger one directly to avoid cancellation
                if eta >= 0.0 {
                    let p = root + eta;
                    (p, 1.0 / p)
                } else {
                    let pb = root - eta;
                    (1.0 / pb, pb)
                }
            }
            _ => (1.0, 1.0),
        }
    }

    pub fn domain_interval(&self) -> Interval {
        match *self {
            Self::Galilean | Self::Exp { .. } => Interval::real_line(),
            Self::Power { l, .. } => {
                if l > 0.0 {
                    Interval::new(f64::NEG_INFINITY, 1.0 / l)
                } else if l < 0.0 {
                    Interval::new(1.0 / l, f64::INFINITY)
                } else {
                    Interval::real_line()
                }
            }
            Self::Bounded { c0, .. } => {
                let (p, pb) = self.p_pair();
                Interval::new(-c0 * p, c0 * pb)
            }
        }
    }

    pub fn coefficients(&self, v: f64) -> Result<Coefficients> {
        self.domain_interval().check(v)?;
        let l = self.l();
        let (a, lambda) = match *self {
            Self::Galilean => (1.0, 1.0),
            Self::Exp { a1, lambda1 } => ((a1 * v).exp(), (lambda1 * v).exp()),
            Self::Power { r1, r2, .. } => {
                let ln_f = (-l * v).ln_1p();
                ((r1 * ln_f).exp(), (r2 * ln_f).exp())
            }
            Self::Bounded { c0, r1, r2, .. } => {
                let (p, pb) = self.p_pair();
                let beta = v / c0;
                let ln_q1 = (pb * beta).ln_1p();
                let ln_q2 = (-p * beta).ln_1p();
                let a = ((r1 - 0.5) * ln_q1 - (r1 + 0.5) * ln_q2).exp();
                let lambda = (r2 * (ln_q1 - ln_q2)).exp();
                (a, lambda)
            }
        };
        Ok(Coefficients {
            a,
            lambda,
            alpha_hat: a * (1.0 - l * v),
            b: self.m() * a,
        })
    }

    /// The special matrix `B_u(v)`.
    pub fn matrix(&self, u: &SpatialVector, v: f64) -> Result<LinearMap4> {
        check_unit(u)?;
        let c = self.coefficients(v)?;
        let uut = u * u.transpose();
        let spatial = (Matrix3::identity() + (c.a - 1.0) * uut) * c.lambda;
        let column = u * (-c.a * v * c.lambda);
        let row = u * (c.b * v * c.lambda);
        Ok(LinearMap4::from_blocks(
            &spatial,
            &column,
            &row,
            c.alpha_hat * c.lambda,
        ))
    }

    /// The standard form along `e₁`, generated from the general matrix.
    pub fn standard(&self, v: f64) -> Result<AffineMap4> {
        Ok(self.matrix(&Vector3::x(), v)?.into())
    }

    /// Inverse of the standard form, as the standard form at the inverse velocity.
    pub fn standard_inverse(&self, v: f64) -> Result<AffineMap4> {
        self.domain_interval().check(v)?;
        self.standard(self.inverse_velocity(v)?)
    }

    /// `v₁ ∗ v₂`.
    pub fn add_velocity(&self, v1: f64, v2: f64) -> Result<f64> {
        let interval = self.domain_interval();
        interval.check(v1)?;
        interval.check(v2)?;
        Ok((v1 + v2 - self.l() * v1 * v2) / (1.0 - self.m() * v1 * v2))
    }

    /// The group inverse `w` with `v ∗ w = 0`.
    pub fn inverse_velocity(&self, v: f64) -> Result<f64> {
        self.domain_interval().check(v)?;
        Ok(-v / (1.0 - self.l() * v))
    }

    /// Additive parameter of the group: `rapidity(v₁ ∗ v₂) = rapidity(v₁) + rapidity(v₂)`.
    ///
    /// * bounded: `(r/2)·ln(q₁/q₂)`, so that `r = 1, η = 0` gives `artanh(v/c₀)`;
    /// * power: `r·ln(1 − lv)`;
    /// * Galilean and exp: `r·v`.
    pub fn rapidity(&self, v: f64, r: f64) -> Result<f64> {
        if r == 0.0 || !r.is_finite() {
            return Err(Error::ZeroScale);
        }
        self.domain_interval().check(v)?;
        Ok(match *self {
            Self::Galilean | Self::Exp { .. } => r * v,
            Self::Power { l: 0.0, .. } => r * v,
            Self::Power { l, .. } => r * (-l * v).ln_1p(),
            Self::Bounded { c0, .. } => {
                let (p, pb) = self.p_pair();
                let beta = v / c0;
                0.5 * r * ((pb * beta).ln_1p() - (-p * beta).ln_1p())
            }
        })
    }

    pub fn rapidity_inverse(&self, s: f64, r: f64) -> Result<f64> {
        if r == 0.0 || !r.is_finite() {
            return Err(Error::ZeroScale);
        }
        let v = match *self {
            Self::Galilean | Self::Exp { .. } => s / r,
            Self::Power { l: 0.0, .. } => s / r,
            Self::Power { l, .. } => -(s / r).exp_m1() / l,
            Self::Bounded { c0, .. } => {
                let (p, pb) = self.p_pair();
                // (1 + p̄β)/(1 − pβ) = R  ⇒  β = (R − 1)/(p̄ + R·p)
                let x = 2.0 * s / r;
                let big_r = x.exp();
                c0 * x.exp_m1() / (pb + big_r * p)
            }
        };
        if !v.is_finite() {
            return Err(Error::Domain {
                v,
                lower: self.domain_interval().lower,
                upper: self.domain_interval().upper,
            });
        }
        Ok(v)
    }

    /// Checks `|W| = |V|` for the reciprocal velocity `W` at sampled velocities.
    pub fn reciprocity_check(&self) -> bool {
        self.reciprocity_samples().into_iter().all(|v| {
            let b = self.matrix(&Vector3::x(), v).expect("sample inside domain");
            let w = crate::spacetime::reciprocal_velocity(&b).expect("special matrices invert");
            (w.norm() - v.abs()).abs() <= tolerance::MATRIX * v.abs().max(1.0)
        })
    }

    /// Interior sample velocities spread over the domain interval.
    pub fn reciprocity_samples(&self) -> Vec<f64> {
        let interval = self.domain_interval();
        let scale = self.c0().or(self.c1()).unwrap_or(1.0);
        let fractions = [0.1, 0.3, 0.5, 0.7, 0.9];
        let mut out = Vec::with_capacity(10);
        for f in fractions {
            let hi = if interval.upper.is_finite() {
                f * interval.upper
            } else {
                2.0 * f * scale
            };
            let lo = if interval.lower.is_finite() {
                f * interval.lower
            } else {
                -2.0 * f * scale
            };
            out.push(hi);
            out.push(lo);
        }
        out
    }
}

/// `Σ_S · B_u(v) · Σ_Sᵀ`, checked against `B_{Su}(v)`.
pub fn conjugate_rotation(
    s: &Rotation3,
    params: &SpecialParams,
    u: &SpatialVector,
    v: f64,
) -> Result<LinearMap4> {
    let sigma = rotation_embed(s);
    let conj = sigma * params.matrix(u, v)? * sigma.transpose();
    let direct = params.matrix(&s.apply(u), v)?;
    let residual = conj.max_diff(&direct);
    if residual > tolerance::MATRIX {
        return Err(Error::NotInGroup { residual });
    }
    Ok(conj)
}

/// The one-parameter group with a common null eigenvector: the Lorentz
/// boost along `e₁` scaled by `((1+β)/(1−β))^s`.
pub fn bogoslovsky(s: f64, v: f64, c0: f64) -> Result<AffineMap4> {
    let params = SpecialParams::Bounded {
        c0,
        eta: 0.0,
        r1: 0.0,
        r2: s,
    };
    params.validate()?;
    params.standard(v)
}

/// Literal transcriptions of the explicit coordinate forms, kept as
/// independent cross-checks of the matrices generated by
/// [`SpecialParams::matrix`]. They are never used to build maps.
pub mod printed {
    use nalgebra::Matrix4;

    use crate::spacetime::LinearMap4;

    fn ratio(beta: f64, p: f64, pb: f64) -> f64 {
        (1.0 + pb * beta) / (1.0 - p * beta)
    }

    fn p_pair(eta: f64) -> (f64, f64) {
        let root = (1.0 + eta * eta).sqrt();
        (root + eta, root - eta)
    }

    /// Bounded standard form along `e₁`, written coordinate by coordinate.
    pub fn bounded_standard(c0: f64, eta: f64, r1: f64, r2: f64, v: f64) -> LinearMap4 {
        let (p, pb) = p_pair(eta);
        let beta = v / c0;
        let q = ratio(beta, p, pb);
        let root = (1.0 - 2.0 * eta * beta - beta * beta).sqrt();
        let lead = q.powf(r1 + r2) / root;
        let side = q.powf(r2);
        LinearMap4::from_matrix(Matrix4::new(
            lead,
            0.0,
            0.0,
            -lead * v, //
            0.0,
            side,
            0.0,
            0.0, //
            0.0,
            0.0,
            side,
            0.0, //
            -lead * v / (c0 * c0),
            0.0,
            0.0,
            lead * (1.0 - 2.0 * eta * beta),
        ))
    }

    /// Inverse of [`bounded_standard`] as printed, reading `c₀` for the `c`
    /// of the time equation.
    pub fn bounded_standard_inverse(c0: f64, eta: f64, r1: f64, r2: f64, v: f64) -> LinearMap4 {
        let (p, pb) = p_pair(eta);
        let beta = v / c0;
        let q = ratio(beta, p, pb);
        let root = (1.0 - 2.0 * eta * beta - beta * beta).sqrt();
        let lead = q.powf(-(r1 + r2)) / root;
        let side = q.powf(-r2);
        LinearMap4::from_matrix(Matrix4::new(
            lead * (1.0 - 2.0 * eta * beta),
            0.0,
            0.0,
            lead * v, //
            0.0,
            side,
            0.0,
            0.0, //
            0.0,
            0.0,
            side,
            0.0, //
            lead * v / (c0 * c0),
            0.0,
            0.0,
            lead,
        ))
    }

    /// Exponential standard form along `e₁`.
    pub fn exp_standard(a1: f64, lambda1: f64, v: f64) -> LinearMap4 {
        let lead = ((lambda1 + a1) * v).exp();
        let side = (lambda1 * v).exp();
        LinearMap4::from_matrix(Matrix4::new(
            lead,
            0.0,
            0.0,
            -lead * v, //
            0.0,
            side,
            0.0,
            0.0, //
            0.0,
            0.0,
            side,
            0.0, //
            0.0,
            0.0,
            0.0,
            lead,
        ))
    }

    /// Power-law standard form along `e₁` exactly as printed: `(x¹ + vt)` in
    /// the first row and a bare `(1 − lv)` on `x³`. Both disagree with the
    /// general matrix, which gives `(x¹ − vt)` and `(1 − lv)^r₂`.
    pub fn power_standard_as_printed(l: f64, r1: f64, r2: f64, v: f64) -> LinearMap4 {
        let f = 1.0 - l * v;
        let lead = f.powf(r1 + r2);
        LinearMap4::from_matrix(Matrix4::new(
            lead,
            0.0,
            0.0,
            lead * v, //
            0.0,
            f.powf(r2),
            0.0,
            0.0, //
            0.0,
            0.0,
            f,
            0.0, //
            0.0,
            0.0,
            0.0,
            f.powf(1.0 + r1 + r2),
        ))
    }

    /// The common-null-eigenvector boost, written coordinate by coordinate.
    pub fn bogoslovsky(s: f64, v: f64, c: f64) -> LinearMap4 {
        let beta = v / c;
        let q = ((1.0 + beta) / (1.0 - beta)).powf(s);
        let g = 1.0 / (1.0 - beta * beta).sqrt();
        LinearMap4::from_matrix(Matrix4::new(
            q * g,
            0.0,
            0.0,
            -q * g * v, //
            0.0,
            q,
            0.0,
            0.0, //
            0.0,
            0.0,
            q,
            0.0, //
            -q * g * v / (c * c),
            0.0,
            0.0,
            q * g,
        ))
    }
}
