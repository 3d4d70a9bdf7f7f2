use std::sync::OnceLock;

use super::{BoundaryPoint, Geodesic, GeometryError, Isometry, Model, ModelPoint, Scalar};

fn diff<T: Scalar>(p: &BoundaryPoint<T>, q: &BoundaryPoint<T>) -> Option<T> {
    match (p, q) {
        (BoundaryPoint::Real(x), BoundaryPoint::Real(y)) => Some(*x - *y),
        _ => None,
    }
}

fn check_quadruple<T: Scalar>(pts: &[BoundaryPoint<T>; 4]) -> Result<[BoundaryPoint<T>; 4], GeometryError> {
    let m = pts[0].model();
    if pts.iter().any(|p| p.model() != m) {
        return Err(GeometryError::ModelMismatch);
    }
    let h = pts.map(|p| p.to_model(Model::HalfPlane));
    for i in 0..4 {
        for j in i + 1..4 {
            if h[i].coincides(&h[j]) {
                return Err(GeometryError::DegenerateQuadruple);
            }
        }
    }
    Ok(h)
}

/// Product of finite factors; a factor involving `∞` is dropped, which is the
/// limit since `∞` appears once upstairs and once downstairs.
fn ratio<T: Scalar>(num: [Option<T>; 2], den: [Option<T>; 2]) -> T {
    let n = num.iter().flatten().fold(T::one(), |acc, v| acc * *v);
    let d = den.iter().flatten().fold(T::one(), |acc, v| acc * *v);
    n / d
}

/// `R̄(a,b,c,d) = ((c−a)(d−b)) / ((c−b)(d−a))`.
pub fn cross_ratio_rbar<T: Scalar>(
    a: BoundaryPoint<T>,
    b: BoundaryPoint<T>,
    c: BoundaryPoint<T>,
    d: BoundaryPoint<T>,
) -> Result<T, GeometryError> {
    let [a, b, c, d] = check_quadruple(&[a, b, c, d])?;
    Ok(ratio([diff(&c, &a), diff(&d, &b)], [diff(&c, &b), diff(&d, &a)]))
}

/// `R(a,b,c,d) = −((b−a)(d−c)) / ((b−c)(d−a))`, equal to `R̄ − 1` but
/// accurate when small.
pub fn cross_ratio_r_points<T: Scalar>(
    a: BoundaryPoint<T>,
    b: BoundaryPoint<T>,
    c: BoundaryPoint<T>,
    d: BoundaryPoint<T>,
) -> Result<T, GeometryError> {
    let [a, b, c, d] = check_quadruple(&[a, b, c, d])?;
    Ok(-ratio([diff(&b, &a), diff(&d, &c)], [diff(&b, &c), diff(&d, &a)]))
}

/// Cross-ratio `R(γ, γ')` of two geodesics.
///
/// The endpoints are arranged in cyclic order so that disjoint geodesics give a
/// positive value, `R = 1/sinh²(d/2)`. Crossing geodesics give a value in
/// `[−2, −1)`: of the two orderings `R̄` and `1/R̄`, the one with `|R̄| ≤ 1`.
pub fn cross_ratio_r<T: Scalar>(g1: &Geodesic<T>, g2: &Geodesic<T>) -> Result<T, GeometryError> {
    let g2 = g2.to_model(g1.model());
    if g1.asymptotic_to(&g2) {
        return Err(GeometryError::DegenerateQuadruple);
    }
    if g1.crosses(&g2) {
        let rb = cross_ratio_rbar(g1.e1, g1.e2, g2.e1, g2.e2)?;
        let rb = if rb.abs() > T::one() { T::one() / rb } else { rb };
        return Ok(rb - T::one());
    }
    if g1.arc_contains(&g2.e1) {
        // cyclically e1, x, y, e2; restart at e2
        cross_ratio_r_points(g1.e2, g1.e1, g2.e1, g2.e2)
    } else if g2.arc_contains(&g1.e1) {
        // x < e1 < e2 < y: walking up from e2 meets y before x
        cross_ratio_r_points(g1.e1, g1.e2, g2.e2, g2.e1)
    } else {
        cross_ratio_r_points(g1.e1, g1.e2, g2.e1, g2.e2)
    }
}

/// Hyperbolic distance between interior points of the same model.
pub fn point_distance<T: Scalar>(p: &ModelPoint<T>, q: &ModelPoint<T>) -> Result<T, GeometryError> {
    if p.model != q.model {
        return Err(GeometryError::ModelMismatch);
    }
    let two = T::lit(2.0);
    let (dx, dy) = (p.x - q.x, p.y - q.y);
    let e = (dx * dx + dy * dy).sqrt();
    let s = match p.model {
        Model::HalfPlane => e / (two * (p.y * q.y).sqrt()),
        Model::Disk => {
            let np = T::one() - p.x * p.x - p.y * p.y;
            let nq = T::one() - q.x * q.x - q.y * q.y;
            e / (np * nq).sqrt()
        }
    };
    Ok(two * s.asinh())
}

/// Distance between two geodesics, with a flag for crossing ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicDistance<T> {
    pub value: T,
    pub crossing: bool,
}

/// Infimum distance between geodesics: `0` when they cross or share an
/// endpoint, `2·asinh(1/√R)` otherwise.
pub fn geodesic_distance<T: Scalar>(g1: &Geodesic<T>, g2: &Geodesic<T>) -> GeodesicDistance<T> {
    if g1.crosses(g2) {
        return GeodesicDistance { value: T::zero(), crossing: true };
    }
    match cross_ratio_r(g1, g2) {
        Ok(r) if r > T::zero() => GeodesicDistance {
            value: T::lit(2.0) * (T::one() / r.sqrt()).asinh(),
            crossing: false,
        },
        _ => GeodesicDistance { value: T::zero(), crossing: false },
    }
}

/// Distance of a pair of geodesics with cross-ratio `1`: `2·asinh(1)`.
pub fn scale_constant<T: Scalar>() -> T {
    static D0: OnceLock<f64> = OnceLock::new();
    let d0 = *D0.get_or_init(|| {
        let s = 2f64.sqrt();
        let g1 = Geodesic::semicircle(-s - 1.0, -s + 1.0).unwrap();
        let g2 = Geodesic::semicircle(s - 1.0, s + 1.0).unwrap();
        geodesic_distance(&g1, &g2).value
    });
    T::lit(d0)
}

/// Geodesic distance in units of [`scale_constant`].
pub fn scaled_distance<T: Scalar>(g1: &Geodesic<T>, g2: &Geodesic<T>) -> GeodesicDistance<T> {
    let d = geodesic_distance(g1, g2);
    GeodesicDistance { value: d.value / scale_constant::<T>(), crossing: d.crossing }
}

/// Image of `g` under reflection in `mirror`.
pub fn reflect_geodesic<T: Scalar>(g: &Geodesic<T>, mirror: &Geodesic<T>) -> Geodesic<T> {
    let m = mirror.to_model(g.model());
    Isometry::reflection(&m).apply_geodesic(g).to_model(g.model())
}

/// The unique geodesic orthogonal to two disjoint geodesics, with its feet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonPerpendicular<T> {
    pub geodesic: Geodesic<T>,
    /// Foot on the first geodesic.
    pub foot1: ModelPoint<T>,
    /// Foot on the second geodesic.
    pub foot2: ModelPoint<T>,
}

pub fn common_perpendicular<T: Scalar>(
    g1: &Geodesic<T>,
    g2: &Geodesic<T>,
) -> Result<CommonPerpendicular<T>, GeometryError> {
    let model = g1.model();
    let g2 = g2.to_model(model);
    if g1.crosses(&g2) {
        return Err(GeometryError::CrossingGeodesics);
    }
    if g1.asymptotic_to(&g2) {
        return Err(GeometryError::DegenerateQuadruple);
    }
    let f = g1.frame();
    let img = f.apply_geodesic(&g2.to_model(Model::HalfPlane));
    let (s, t) = match (img.e1, img.e2) {
        (BoundaryPoint::Real(s), BoundaryPoint::Real(t)) => (s, t),
        _ => return Err(GeometryError::DegenerateQuadruple),
    };
    let st = s * t;
    let rho = st.sqrt();
    let re = T::lit(2.0) * st / (s + t);
    let im = (st - re * re).max(T::zero()).sqrt().max(T::min_positive_value());
    let inv = f.inverse();
    let perp = Geodesic::new_unchecked(BoundaryPoint::Real(-rho), BoundaryPoint::Real(rho));
    Ok(CommonPerpendicular {
        geodesic: inv.apply_geodesic(&perp).to_model(model),
        foot1: inv.apply_point(&ModelPoint::halfplane(T::zero(), rho)).to_model(model),
        foot2: inv.apply_point(&ModelPoint::halfplane(re, im)).to_model(model),
    })
}

/// The geodesic through `p` orthogonal to `g`.
pub fn perpendicular_through<T: Scalar>(p: &ModelPoint<T>, g: &Geodesic<T>) -> Geodesic<T> {
    g.perpendicular_through(p)
}

/// Foot of the perpendicular from `p` to `g`.
pub fn closest_point<T: Scalar>(g: &Geodesic<T>, p: &ModelPoint<T>) -> ModelPoint<T> {
    g.closest_point(p)
}

/// Objects that can be re-expressed in another model via the Cayley transform.
pub trait ConvertModel: Sized {
    fn convert_model(&self, target: Model) -> Self;
}

impl<T: Scalar> ConvertModel for BoundaryPoint<T> {
    fn convert_model(&self, target: Model) -> Self {
        self.to_model(target)
    }
}

impl<T: Scalar> ConvertModel for ModelPoint<T> {
    fn convert_model(&self, target: Model) -> Self {
        self.to_model(target)
    }
}

impl<T: Scalar> ConvertModel for Geodesic<T> {
    fn convert_model(&self, target: Model) -> Self {
        self.to_model(target)
    }
}
