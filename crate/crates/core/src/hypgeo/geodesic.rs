use std::cmp::Ordering;

use super::{BoundaryPoint, GeometryError, Isometry, Model, ModelPoint, Scalar};

/// A complete geodesic, stored by its two endpoints on the absolute.
///
/// Endpoints are kept in increasing order (`∞` last in the half-plane, angles
/// ascending in the disk). Both lie in the same model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic<T> {
    pub e1: BoundaryPoint<T>,
    pub e2: BoundaryPoint<T>,
}

impl<T: Scalar> Geodesic<T> {
    pub fn new(a: BoundaryPoint<T>, b: BoundaryPoint<T>) -> Result<Self, GeometryError> {
        if a.model() != b.model() {
            return Err(GeometryError::ModelMismatch);
        }
        if a.coincides(&b) {
            return Err(GeometryError::DegenerateQuadruple);
        }
        Ok(Self::new_unchecked(a, b))
    }

    pub(crate) fn new_unchecked(a: BoundaryPoint<T>, b: BoundaryPoint<T>) -> Self {
        if a.cmp_order(&b) == Ordering::Greater {
            Self { e1: b, e2: a }
        } else {
            Self { e1: a, e2: b }
        }
    }

    /// Half-plane geodesic with finite endpoints.
    pub fn semicircle(p: T, q: T) -> Result<Self, GeometryError> {
        Self::new(BoundaryPoint::Real(p), BoundaryPoint::Real(q))
    }

    /// Half-plane vertical line `Re z = p`.
    pub fn vertical(p: T) -> Self {
        Self::new_unchecked(BoundaryPoint::Real(p), BoundaryPoint::Infinity)
    }

    pub fn model(&self) -> Model {
        self.e1.model()
    }

    pub fn to_model(&self, model: Model) -> Self {
        Self::new_unchecked(self.e1.to_model(model), self.e2.to_model(model))
    }

    /// The geodesic through two distinct interior points, in the model of `p`.
    pub fn through(p: &ModelPoint<T>, q: &ModelPoint<T>) -> Result<Self, GeometryError> {
        let (a, b) = (p.halfplane_view(), q.halfplane_view());
        let dx = a.x - b.x;
        let scale = T::one().max(a.x.abs()).max(b.x.abs());
        let g = if dx.abs() <= T::degeneracy_tol() * scale {
            if (a.y - b.y).abs() <= T::degeneracy_tol() * scale {
                return Err(GeometryError::DegenerateQuadruple);
            }
            Self::vertical((a.x + b.x) / T::lit(2.0))
        } else {
            let two = T::lit(2.0);
            let c = (a.x * a.x + a.y * a.y - b.x * b.x - b.y * b.y) / (two * dx);
            let r = ((a.x - c) * (a.x - c) + a.y * a.y).sqrt();
            Self::semicircle(c - r, c + r)?
        };
        Ok(g.to_model(p.model))
    }

    /// Orientation-preserving isometry taking `e1 ↦ 0` and `e2 ↦ ∞`. Under it
    /// the geodesic becomes the imaginary axis.
    pub fn frame(&self) -> Isometry<T> {
        Isometry::frame(self.e1, self.e2).expect("non-degenerate geodesic")
    }

    /// Signed distance from `p`. Positive on the side holding the arc that
    /// runs from `e1` to `e2` in increasing order.
    pub fn signed_distance(&self, p: &ModelPoint<T>) -> T {
        let w = self.frame().apply_point(&p.halfplane_view());
        (w.x / w.y).asinh()
    }

    pub fn distance_to(&self, p: &ModelPoint<T>) -> T {
        self.signed_distance(p).abs()
    }

    /// Which side of the geodesic `p` lies on: `1`, `-1`, or `0` on it.
    pub fn side(&self, p: &ModelPoint<T>) -> i8 {
        let s = self.signed_distance(p);
        if s.abs() <= T::identity_tol() {
            0
        } else if s > T::zero() {
            1
        } else {
            -1
        }
    }

    pub fn contains(&self, p: &ModelPoint<T>) -> bool {
        self.side(p) == 0
    }

    /// Whether the geodesic separates `p` from `q`.
    pub fn separates(&self, p: &ModelPoint<T>, q: &ModelPoint<T>) -> bool {
        self.side(p) * self.side(q) < 0
    }

    /// Whether a boundary point lies strictly inside the arc `(e1, e2)` taken in
    /// increasing order; that arc bounds the positive side.
    pub fn arc_contains(&self, x: &BoundaryPoint<T>) -> bool {
        let h = x.to_model(self.model());
        self.e1.cmp_order(&h) == Ordering::Less && h.cmp_order(&self.e2) == Ordering::Less
    }

    /// Point on the geodesic at arc length `t` from the frame base point,
    /// moving toward `e2`.
    pub fn point_at(&self, t: T) -> ModelPoint<T> {
        let f = self.frame();
        let w = ModelPoint::halfplane(T::zero(), t.exp());
        f.inverse().apply_point(&w).to_model(self.model())
    }

    /// Arc-length parameter of the projection of `p`, inverse of [`point_at`].
    ///
    /// [`point_at`]: Geodesic::point_at
    pub fn parameter_of(&self, p: &ModelPoint<T>) -> T {
        let w = self.frame().apply_point(&p.halfplane_view());
        (w.x * w.x + w.y * w.y).sqrt().ln()
    }

    /// Closest point on the geodesic to `p`.
    pub fn closest_point(&self, p: &ModelPoint<T>) -> ModelPoint<T> {
        let t = self.parameter_of(p);
        self.point_at(t).to_model(p.model)
    }

    /// The geodesic through `p` meeting this one at a right angle.
    pub fn perpendicular_through(&self, p: &ModelPoint<T>) -> Self {
        let f = self.frame();
        let w = f.apply_point(&p.halfplane_view());
        let rho = (w.x * w.x + w.y * w.y).sqrt();
        let perp = Self::new_unchecked(BoundaryPoint::Real(-rho), BoundaryPoint::Real(rho));
        f.inverse().apply_geodesic(&perp).to_model(p.model)
    }

    /// Whether the two geodesics meet in the interior.
    pub fn crosses(&self, other: &Self) -> bool {
        let a = self.to_model(Model::HalfPlane);
        let b = other.to_model(Model::HalfPlane);
        let lt = |x: &BoundaryPoint<T>, y: &BoundaryPoint<T>| {
            x.cmp_order(y) == Ordering::Less && !x.coincides(y)
        };
        (lt(&a.e1, &b.e1) && lt(&b.e1, &a.e2) && lt(&a.e2, &b.e2))
            || (lt(&b.e1, &a.e1) && lt(&a.e1, &b.e2) && lt(&b.e2, &a.e2))
    }

    /// Whether the geodesics share an endpoint.
    pub fn asymptotic_to(&self, other: &Self) -> bool {
        let b = other.to_model(self.model());
        self.e1.coincides(&b.e1)
            || self.e1.coincides(&b.e2)
            || self.e2.coincides(&b.e1)
            || self.e2.coincides(&b.e2)
    }
}
