use num_complex::Complex;

use super::{BoundaryPoint, Geodesic, GeometryError, Model, ModelPoint, Scalar};

/// Isometry of the half-plane: `z ↦ M(s(z))` with `M` a real unimodular
/// Möbius map and `s(z) = −z̄` when `reflect` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub reflect: bool,
}

impl<T: Scalar> Isometry<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self { a: o, b: z, c: z, d: o, reflect: false }
    }

    /// Builds from an arbitrary real matrix with nonzero determinant. A negative
    /// determinant is absorbed into the reflection flag.
    pub fn from_matrix(a: T, b: T, c: T, d: T, reflect: bool) -> Result<Self, GeometryError> {
        let det = a * d - b * c;
        if !(det.abs() > T::zero()) || !det.is_finite() {
            return Err(GeometryError::DegenerateQuadruple);
        }
        let (a, c, reflect) = if det < T::zero() { (-a, -c, !reflect) } else { (a, c, reflect) };
        let s = det.abs().sqrt();
        Ok(Self { a: a / s, b: b / s, c: c / s, d: d / s, reflect })
    }

    /// `z ↦ λz + μ` with `λ > 0`.
    pub fn affine(lambda: T, mu: T) -> Self {
        Self::from_matrix(lambda, mu, T::zero(), T::one(), false).expect("λ > 0")
    }

    pub fn is_orientation_preserving(&self) -> bool {
        !self.reflect
    }

    fn mobius_ext(&self, x: BoundaryPoint<T>) -> BoundaryPoint<T> {
        match x {
            BoundaryPoint::Infinity => {
                if self.c == T::zero() {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Real(self.a / self.c)
                }
            }
            BoundaryPoint::Real(x) => {
                let den = self.c * x + self.d;
                if den == T::zero() {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Real((self.a * x + self.b) / den)
                }
            }
            BoundaryPoint::Angle(_) => unreachable!("half-plane only"),
        }
    }

    /// Image of a boundary point, returned in the model of the input.
    pub fn apply_boundary(&self, p: BoundaryPoint<T>) -> BoundaryPoint<T> {
        let model = p.model();
        let h = match p.to_model(Model::HalfPlane) {
            BoundaryPoint::Real(x) if self.reflect => BoundaryPoint::Real(-x),
            other => other,
        };
        self.mobius_ext(h).to_model(model)
    }

    /// Image of an interior point, returned in the model of the input.
    pub fn apply_point(&self, p: &ModelPoint<T>) -> ModelPoint<T> {
        let model = p.model;
        let mut z = p.halfplane_view().complex();
        if self.reflect {
            z = Complex::new(-z.re, z.im);
        }
        let num = z * self.a + self.b;
        let den = z * self.c + self.d;
        let w = num / den;
        // keep strictly inside even after rounding
        let w = Complex::new(w.re, w.im.max(T::min_positive_value()));
        ModelPoint::from_complex(w, Model::HalfPlane).to_model(model)
    }

    pub fn apply_geodesic(&self, g: &Geodesic<T>) -> Geodesic<T> {
        Geodesic::new_unchecked(self.apply_boundary(g.e1), self.apply_boundary(g.e2))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        // s ∘ [[a,b],[c,d]] = [[a,−b],[−c,d]] ∘ s
        let (a2, b2, c2, d2) = if self.reflect {
            (other.a, -other.b, -other.c, other.d)
        } else {
            (other.a, other.b, other.c, other.d)
        };
        let a = self.a * a2 + self.b * c2;
        let b = self.a * b2 + self.b * d2;
        let c = self.c * a2 + self.d * c2;
        let d = self.c * b2 + self.d * d2;
        Self::from_matrix(a, b, c, d, self.reflect ^ other.reflect).expect("unimodular product")
    }

    pub fn inverse(&self) -> Self {
        // (M s)^{-1} = s M^{-1} = (M^{-1})' s
        let (a, b, c, d) = (self.d, -self.b, -self.c, self.a);
        if self.reflect {
            Self { a, b: -b, c: -c, d, reflect: true }
        } else {
            Self { a, b, c, d, reflect: false }
        }
    }

    /// Sends `(0, 1, ∞)` to the given triple.
    fn from_standard(p: [BoundaryPoint<T>; 3]) -> Result<Self, GeometryError> {
        // inverse of z ↦ ((z−z1)(z2−z3))/((z−z3)(z2−z1)), written per ∞-case
        let h = p.map(|x| x.to_model(Model::HalfPlane));
        let (o, z) = (T::one(), T::zero());
        let (a, b, c, d) = match h {
            [BoundaryPoint::Infinity, BoundaryPoint::Real(z2), BoundaryPoint::Real(z3)] => {
                // f(z) = (z2−z3)/(z−z3)
                (z, z2 - z3, o, -z3)
            }
            [BoundaryPoint::Real(z1), BoundaryPoint::Infinity, BoundaryPoint::Real(z3)] => {
                // f(z) = (z−z1)/(z−z3)
                (o, -z1, o, -z3)
            }
            [BoundaryPoint::Real(z1), BoundaryPoint::Real(z2), BoundaryPoint::Infinity] => {
                // f(z) = (z−z1)/(z2−z1)
                (o, -z1, z, z2 - z1)
            }
            [BoundaryPoint::Real(z1), BoundaryPoint::Real(z2), BoundaryPoint::Real(z3)] => {
                // f = [[z2−z3, −z1(z2−z3)],[z2−z1, −z3(z2−z1)]]
                (z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))
            }
            _ => return Err(GeometryError::DegenerateQuadruple),
        };
        // invert as a plain Möbius map; a negative determinant becomes a reflection
        Self::from_matrix(d, -b, -c, a, false)
    }

    /// The unique isometry mapping `src[k]` to `dst[k]` on the absolute. It
    /// reverses orientation when the two triples have opposite cyclic order.
    pub fn from_boundary_triples(
        src: [BoundaryPoint<T>; 3],
        dst: [BoundaryPoint<T>; 3],
    ) -> Result<Self, GeometryError> {
        for t in [&src, &dst] {
            if t[0].coincides(&t[1]) || t[1].coincides(&t[2]) || t[0].coincides(&t[2]) {
                return Err(GeometryError::DegenerateQuadruple);
            }
        }
        let s = Self::from_standard(src)?;
        let d = Self::from_standard(dst)?;
        Ok(d.compose(&s.inverse()))
    }

    /// Orientation-preserving map sending `from ↦ 0` and `to ↦ ∞`, with the
    /// midpoint of the counterclockwise-positive arc `from → to` sent to `1`.
    pub fn frame(from: BoundaryPoint<T>, to: BoundaryPoint<T>) -> Result<Self, GeometryError> {
        let f = from.to_model(Model::HalfPlane);
        let t = to.to_model(Model::HalfPlane);
        let third = match (f, t) {
            (BoundaryPoint::Real(a), BoundaryPoint::Real(b)) if a < b => {
                BoundaryPoint::Real((a + b) / T::lit(2.0))
            }
            (BoundaryPoint::Real(_), BoundaryPoint::Real(_)) => BoundaryPoint::Infinity,
            (BoundaryPoint::Real(a), BoundaryPoint::Infinity) => BoundaryPoint::Real(a + T::one()),
            (BoundaryPoint::Infinity, BoundaryPoint::Real(b)) => BoundaryPoint::Real(b - T::one()),
            _ => return Err(GeometryError::DegenerateQuadruple),
        };
        let zero = BoundaryPoint::Real(T::zero());
        let one = BoundaryPoint::Real(T::one());
        Self::from_boundary_triples([f, third, t], [zero, one, BoundaryPoint::Infinity])
    }

    /// Reflection in a geodesic.
    pub fn reflection(g: &Geodesic<T>) -> Self {
        let h = g.to_model(Model::HalfPlane);
        match (h.e1, h.e2) {
            (BoundaryPoint::Real(p), BoundaryPoint::Real(q)) => {
                let c = (p + q) / T::lit(2.0);
                // z ↦ c + r²/(z̄ − c), written in w = −z̄
                Self::from_matrix(c, p * q, T::one(), c, true).expect("non-degenerate geodesic")
            }
            (BoundaryPoint::Real(p), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Real(p)) => {
                Self::from_matrix(T::one(), T::lit(2.0) * p, T::zero(), T::one(), true).unwrap()
            }
            _ => unreachable!("geodesic endpoints are distinct"),
        }
    }

    /// Hyperbolic translation by `t` along `g`, moving points toward `g.e2`.
    pub fn translation(g: &Geodesic<T>, t: T) -> Self {
        let f = Self::frame(g.e1, g.e2).expect("non-degenerate geodesic");
        let dil = Self::affine(t.exp(), T::zero());
        f.inverse().compose(&dil).compose(&f)
    }
}
