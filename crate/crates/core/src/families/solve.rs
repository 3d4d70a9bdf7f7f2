use std::f64::consts::TAU;

use crate::hypgeo::{cross_ratio_r, BoundaryPoint, Geodesic, Isometry, Model, ModelPoint};

use super::FamilyError;

type B = BoundaryPoint<f64>;
type G = Geodesic<f64>;

/// Disk angle of a boundary point.
pub(crate) fn theta(p: &B) -> f64 {
    match p.to_model(Model::Disk) {
        BoundaryPoint::Angle(t) => t,
        _ => unreachable!(),
    }
}

/// Clockwise angular distance from `from` to `to`, in `[0, 2π)`.
pub(crate) fn cw(from: &B, to: &B) -> f64 {
    (theta(from) - theta(to)).rem_euclid(TAU)
}

/// Midpoint of the clockwise arc from `x` to `y`.
pub(crate) fn arc_mid(x: &B, y: &B) -> B {
    BoundaryPoint::angle(theta(x) - cw(x, y) / 2.0).to_model(Model::HalfPlane)
}

/// Sorts the two ends of `g` by clockwise distance from `x`.
pub(crate) fn order_from(x: &B, g: &G) -> (B, B) {
    if cw(x, &g.e1) <= cw(x, &g.e2) {
        (g.e1, g.e2)
    } else {
        (g.e2, g.e1)
    }
}

/// The geodesic `(u, v)` inside the free arc `(x, y)` with
/// `R((u,v), (y,z)) = R((u,v), (t,x)) = alpha`.
///
/// `left = [t, x]` and `right = [y, z]` are the neighbours on either side of
/// the arc, listed so that `t, x, y, z` run in one cyclic direction. Returns the
/// ends ordered `u` (next to `x`) then `v`.
pub fn solve_double_crossratio_ends(left: [B; 2], right: [B; 2], alpha: f64) -> Result<(B, B), FamilyError> {
    check_alpha(alpha)?;
    let [t, x] = left.map(|p| p.to_model(Model::HalfPlane));
    let [y, z] = right.map(|p| p.to_model(Model::HalfPlane));
    let g = G::new(t, x)?;
    let gp = G::new(y, z)?;
    let r = cross_ratio_r(&g, &gp)?;
    if g.crosses(&gp) || r <= 0.0 {
        return Err(FamilyError::NoSolution);
    }
    // normal form: t, x, y, z ↦ −b, −a, a, b with ab = 1 and b − a = 2√R
    let a = (r + 1.0).sqrt() - r.sqrt();
    let b = 1.0 / a;
    let m = Isometry::from_boundary_triples([t, x, y], [B::Real(-b), B::Real(-a), B::Real(a)])?;
    let w = b - a;
    let disc = (w * w * (alpha + 2.0).powi(2) + 4.0 * alpha * alpha).sqrt();
    // αρ² + ρ(b−a)(α+2) − α = 0, rationalized to avoid cancellation
    let rho = 2.0 * alpha / (w * (alpha + 2.0) + disc);
    if !(rho < a * (1.0 - 1e-12)) {
        return Err(FamilyError::NoSolution);
    }
    let inv = m.inverse();
    Ok((inv.apply_boundary(B::Real(-rho)), inv.apply_boundary(B::Real(rho))))
}

/// Geodesic form of [`solve_double_crossratio_ends`].
pub fn solve_double_crossratio(left: [B; 2], right: [B; 2], alpha: f64) -> Result<G, FamilyError> {
    let (u, v) = solve_double_crossratio_ends(left, right, alpha)?;
    Ok(G::new(u, v)?)
}

/// The geodesic with `R = alpha` against `g`, sharing with it the
/// perpendicular dropped from `origin`, on the side of `g` away from `origin`.
pub fn solve_crossratio_perpendicular(g: &G, alpha: f64, origin: &ModelPoint<f64>) -> Result<G, FamilyError> {
    let side = -g.side(origin);
    if side == 0 {
        return Err(FamilyError::NoSolution);
    }
    solve_crossratio_perpendicular_toward(g, alpha, origin, side)
}

/// As [`solve_crossratio_perpendicular`] but placed on the given side of `g`
/// (`1` is the side bounded by the arc from `e1` up to `e2`). Works when
/// `origin` lies on `g`.
pub fn solve_crossratio_perpendicular_toward(
    g: &G,
    alpha: f64,
    origin: &ModelPoint<f64>,
    side: i8,
) -> Result<G, FamilyError> {
    check_alpha(alpha)?;
    let g = g.to_model(Model::HalfPlane);
    let axis = g.perpendicular_through(&origin.halfplane_view());
    let d = 2.0 * (1.0 / alpha.sqrt()).asinh();
    let forward = g.arc_contains(&axis.e2) == (side > 0);
    let shift = Isometry::translation(&axis, if forward { d } else { -d });
    Ok(shift.apply_geodesic(&g))
}

fn check_alpha(alpha: f64) -> Result<(), FamilyError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(FamilyError::ParameterOutOfRange(format!("alpha = {alpha} outside (0, 1)")))
    }
}
