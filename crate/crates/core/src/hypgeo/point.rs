use std::cmp::Ordering;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{GeometryError, Scalar};

/// Which model of the hyperbolic plane a value is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Upper half-plane `{y > 0}`; absolute is `ℝ ∪ {∞}`.
    HalfPlane,
    /// Poincaré disk `{|z| < 1}`; absolute is the unit circle, stored as an angle.
    Disk,
}

/// A point on the absolute.
///
/// `Real` and `Infinity` live in the half-plane model, `Angle` (in `[0, 2π)`) in
/// the disk model. The disk point `1` corresponds to `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint<T> {
    Real(T),
    Infinity,
    Angle(T),
}

impl<T: Scalar> BoundaryPoint<T> {
    pub fn angle(theta: T) -> Self {
        let tau = T::TAU();
        let mut t = theta % tau;
        if t < T::zero() {
            t = t + tau;
        }
        if t >= tau {
            t = T::zero();
        }
        BoundaryPoint::Angle(t)
    }

    pub fn model(&self) -> Model {
        match self {
            BoundaryPoint::Real(_) | BoundaryPoint::Infinity => Model::HalfPlane,
            BoundaryPoint::Angle(_) => Model::Disk,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    /// Finite half-plane coordinate, if any.
    pub fn real(&self) -> Option<T> {
        match *self {
            BoundaryPoint::Real(x) => Some(x),
            _ => None,
        }
    }

    pub fn to_model(&self, model: Model) -> Self {
        match (self, model) {
            (BoundaryPoint::Angle(t), Model::HalfPlane) => {
                let half = *t / T::lit(2.0);
                if half.abs() < T::epsilon() || (T::PI() - half).abs() < T::epsilon() {
                    BoundaryPoint::Infinity
                } else {
                    // Cayley transform on the circle: e^{iθ} ↦ −cot(θ/2)
                    BoundaryPoint::Real(-half.cos() / half.sin())
                }
            }
            (BoundaryPoint::Real(x), Model::Disk) => {
                BoundaryPoint::angle(T::lit(2.0) * T::one().atan2(-*x))
            }
            (BoundaryPoint::Infinity, Model::Disk) => BoundaryPoint::Angle(T::zero()),
            _ => *self,
        }
    }

    /// Linear order on `ℝ ∪ {∞}` (∞ greatest), or on angles for disk points.
    /// This is the cyclic order of the absolute cut at ∞ (resp. angle 0).
    pub fn order_key(&self) -> (u8, T) {
        match *self {
            BoundaryPoint::Real(x) => (0, x),
            BoundaryPoint::Infinity => (1, T::zero()),
            BoundaryPoint::Angle(t) => (0, t),
        }
    }

    pub fn cmp_order(&self, other: &Self) -> Ordering {
        let (a, x) = self.order_key();
        let (b, y) = other.order_key();
        a.cmp(&b).then(x.partial_cmp(&y).unwrap_or(Ordering::Equal))
    }

    /// Whether two boundary points coincide up to the degeneracy guard.
    pub fn coincides(&self, other: &Self) -> bool {
        let tol = T::degeneracy_tol();
        match (self.to_model(Model::HalfPlane), other.to_model(Model::HalfPlane)) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            (BoundaryPoint::Real(a), BoundaryPoint::Real(b)) => {
                (a - b).abs() <= tol * T::one().max(a.abs()).max(b.abs())
            }
            (BoundaryPoint::Real(a), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Real(a)) => a.abs() > T::one() / tol,
            _ => unreachable!("converted to half-plane"),
        }
    }
}

/// A point strictly inside the model domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint<T> {
    pub x: T,
    pub y: T,
    pub model: Model,
}

impl<T: Scalar> ModelPoint<T> {
    pub fn new(model: Model, x: T, y: T) -> Result<Self, GeometryError> {
        let inside = match model {
            Model::HalfPlane => y > T::zero() && x.is_finite() && y.is_finite(),
            Model::Disk => x * x + y * y < T::one(),
        };
        if inside {
            Ok(Self { x, y, model })
        } else {
            Err(GeometryError::InvalidPoint)
        }
    }

    /// Half-plane point. Panics if `y <= 0`.
    pub fn halfplane(x: T, y: T) -> Self {
        Self::new(Model::HalfPlane, x, y).expect("half-plane point needs y > 0")
    }

    /// Disk point. Panics if `|z| >= 1`.
    pub fn disk(x: T, y: T) -> Self {
        Self::new(Model::Disk, x, y).expect("disk point needs |z| < 1")
    }

    /// The origin of the model: `i` in the half-plane, `0` in the disk.
    pub fn origin(model: Model) -> Self {
        match model {
            Model::HalfPlane => Self { x: T::zero(), y: T::one(), model },
            Model::Disk => Self { x: T::zero(), y: T::zero(), model },
        }
    }

    pub fn complex(&self) -> Complex<T> {
        Complex::new(self.x, self.y)
    }

    pub(crate) fn from_complex(z: Complex<T>, model: Model) -> Self {
        Self { x: z.re, y: z.im, model }
    }

    pub fn to_model(&self, model: Model) -> Self {
        let i = Complex::new(T::zero(), T::one());
        let one = Complex::new(T::one(), T::zero());
        match (self.model, model) {
            (Model::Disk, Model::HalfPlane) => {
                let z = self.complex();
                Self::from_complex(i * (one + z) / (one - z), model)
            }
            (Model::HalfPlane, Model::Disk) => {
                let w = self.complex();
                Self::from_complex((w - i) / (w + i), model)
            }
            _ => *self,
        }
    }

    pub fn halfplane_view(&self) -> Self {
        self.to_model(Model::HalfPlane)
    }
}
