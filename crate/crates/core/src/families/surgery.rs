use crate::hypgeo::{common_perpendicular, point_distance};

use super::{FamilyError, G, P};

/// Segments `s_i = [α_{2i−1}, α_{2i}]` cut from the curves, and a permutation
/// of their `2k` endpoints. The replacement `s̄_i` is the geodesic segment from
/// `π(α_{2i−1})` to `π(α_{2i})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurgerySpec {
    pub curves: Vec<G>,
    pub segments: Vec<[P; 2]>,
    /// `permutation[j]` is the endpoint index that replaces endpoint `j`.
    pub permutation: Vec<usize>,
}

impl SurgerySpec {
    /// Segments given by arc-length parameters on each curve.
    pub fn from_parameters(curves: Vec<G>, params: &[(f64, f64)], permutation: Vec<usize>) -> Self {
        let segments = curves.iter().zip(params).map(|(g, &(a, b))| [g.point_at(a), g.point_at(b)]).collect();
        Self { curves, segments, permutation }
    }

    fn endpoints(&self) -> Vec<P> {
        self.segments.iter().flat_map(|s| [s[0], s[1]]).collect()
    }

    fn validate(&self) -> Result<(), FamilyError> {
        let k = self.segments.len();
        if self.curves.len() != k {
            return Err(FamilyError::MalformedSpec(format!("{} curves for {k} segments", self.curves.len())));
        }
        if self.permutation.len() != 2 * k {
            return Err(FamilyError::MalformedSpec(format!(
                "permutation has {} entries, expected {}",
                self.permutation.len(),
                2 * k
            )));
        }
        let mut seen = vec![false; 2 * k];
        for &p in &self.permutation {
            if p >= 2 * k || std::mem::replace(&mut seen[p], true) {
                return Err(FamilyError::MalformedSpec("permutation is not a bijection".into()));
            }
        }
        for (i, (g, s)) in self.curves.iter().zip(&self.segments).enumerate() {
            if s.iter().any(|p| !on_curve(g, p)) {
                return Err(FamilyError::MalformedSpec(format!("segment {i} is not on its curve")));
            }
        }
        Ok(())
    }
}

/// Euclidean incidence in the half-plane; stays meaningful for points deep
/// toward the absolute, where hyperbolic residuals blow up.
fn on_curve(g: &G, p: &P) -> bool {
    use crate::hypgeo::BoundaryPoint::{Infinity, Real};
    let g = g.to_model(crate::hypgeo::Model::HalfPlane);
    let p = p.halfplane_view();
    match (g.e1, g.e2) {
        (Real(a), Real(b)) => {
            let (c, r) = ((a + b) / 2.0, (b - a).abs() / 2.0);
            ((p.x - c).hypot(p.y) - r).abs() <= 1e-9 * r.max(1.0)
        }
        (Real(a), Infinity) | (Infinity, Real(a)) => (p.x - a).abs() <= 1e-9 * a.abs().max(1.0),
        _ => false,
    }
}

/// `Δ(s, s̄) = Σ|s̄_i| − Σ|s_i|` with geodesic replacement segments.
pub fn surgery_increment(spec: &SurgerySpec) -> Result<f64, FamilyError> {
    spec.validate()?;
    let ends = spec.endpoints();
    let mut delta = 0.0;
    for (i, s) in spec.segments.iter().enumerate() {
        let a = ends[spec.permutation[2 * i]];
        let b = ends[spec.permutation[2 * i + 1]];
        delta += point_distance(&a, &b)? - point_distance(&s[0], &s[1])?;
    }
    Ok(delta)
}

/// Length of `g` inside the closed disc of radius `t` about a point at
/// distance `h` from it: `2·acosh(cosh t / cosh h)`, in log form.
fn chord(h: f64, t: f64) -> f64 {
    if h >= t {
        return 0.0;
    }
    let ln_cosh = |x: f64| x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2;
    let ln_y = ln_cosh(t) - ln_cosh(h);
    let inv_y2 = (-2.0 * ln_y).exp();
    2.0 * (ln_y + (1.0 + (1.0 - inv_y2).max(0.0).sqrt()).ln())
}

/// Extra length of the wrong pairing `(x₁′, x₂″), (x₁″, x₂′)` over the correct
/// one `(x₁′, x₁″), (x₂′, x₂″)`, where the four ends run in cyclic order.
///
/// Lengths are compared inside a disc of radius `T` about the midpoint of the
/// common perpendicular; `T` doubles until the difference moves by less than 1e-6.
pub fn wrong_pairing_surplus(g1: &G, g2: &G) -> Result<f64, FamilyError> {
    let cp = common_perpendicular(g1, g2)?;
    let mid = {
        let axis = cp.geodesic;
        let (t1, t2) = (axis.parameter_of(&cp.foot1), axis.parameter_of(&cp.foot2));
        axis.point_at((t1 + t2) / 2.0)
    };
    let g2 = g2.to_model(g1.model());
    // cyclic order x₁′, x₁″, x₂′, x₂″
    let (x1a, x1b) = super::solve::order_from(&g2.e2, g1);
    let (x2a, x2b) = super::solve::order_from(&x1b, &g2);
    let wrong = [G::new(x1a, x2b)?, G::new(x1b, x2a)?];
    let h = |g: &G| g.distance_to(&mid);
    let (h1, h2, w1, w2) = (h(g1), h(&g2), h(&wrong[0]), h(&wrong[1]));
    let surplus = |t: f64| chord(w1, t) + chord(w2, t) - chord(h1, t) - chord(h2, t);
    let mut t = h1.max(h2).max(w1).max(w2) + 4.0;
    let mut prev = surplus(t);
    for _ in 0..40 {
        t *= 2.0;
        let cur = surplus(t);
        if (cur - prev).abs() < 1e-6 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(FamilyError::ConvergenceFailure)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::hypgeo::{cross_ratio_r, geodesic_distance};

    fn pair(x: f64) -> (G, G) {
        (G::semicircle(-x - 1.0, -x + 1.0).unwrap(), G::semicircle(x - 1.0, x + 1.0).unwrap())
    }

    #[test]
    fn identity_surgery_is_zero() {
        let (a, b) = pair(3.0);
        let spec = SurgerySpec::from_parameters(vec![a, b], &[(-2.0, 1.0), (0.5, 3.0)], vec![0, 1, 2, 3]);
        assert_relative_eq!(surgery_increment(&spec).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn malformed_permutation() {
        let (a, b) = pair(3.0);
        let spec = SurgerySpec::from_parameters(vec![a, b], &[(-2.0, 1.0), (0.5, 3.0)], vec![0, 0, 2, 3]);
        assert!(matches!(surgery_increment(&spec), Err(FamilyError::MalformedSpec(_))));
    }

    #[test]
    fn symmetric_swap_matches_limit() {
        let (a, b) = pair(20.0);
        let d = geodesic_distance(&a, &b).value;
        let far = 30.0;
        let pa = [a.point_at(-far), a.point_at(far)];
        let pb = [b.point_at(-far), b.point_at(far)];
        // pair the ends that face each other: those near −19 and 19 are the inner ones
        let inner_a = if pa[0].x > pa[1].x { 0 } else { 1 };
        let inner_b = if pb[0].x < pb[1].x { 0 } else { 1 };
        let perm = vec![inner_a, 2 + inner_b, 1 - inner_a, 3 - inner_b];
        let spec = SurgerySpec { curves: vec![a, b], segments: vec![pa, pb], permutation: perm };
        let delta = surgery_increment(&spec).unwrap();
        assert!(delta >= 2.0 * d - 8.0 * 2f64.ln() - 0.1, "{delta} vs {d}");
    }

    #[test]
    fn surplus_is_two_log_inverse_r() {
        let (a, b) = pair(100.0);
        let r = cross_ratio_r(&a, &b).unwrap();
        let s = wrong_pairing_surplus(&a, &b).unwrap();
        assert_relative_eq!(s, 2.0 * (1.0 / r).ln(), epsilon = 1e-5);
        let s2 = wrong_pairing_surplus(&b, &a).unwrap();
        assert_relative_eq!(s, s2, epsilon = 1e-9);
    }

    #[test]
    fn surplus_rejects_crossing() {
        let a = G::semicircle(-1.0, 1.0).unwrap();
        let b = G::semicircle(0.0, 2.0).unwrap();
        assert!(wrong_pairing_surplus(&a, &b).is_err());
    }
}
