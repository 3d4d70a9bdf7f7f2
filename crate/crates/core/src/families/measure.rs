use rayon::prelude::*;
use serde::Serialize;

use crate::hypgeo::{geodesic_distance, Geodesic, Isometry, ModelPoint};

use super::{FamilyError, SignedGeodesicFamily, P};

/// Largest distance from a sampled point of the disc `B(center, window_radius)`
/// to the nearest family curve.
///
/// Samples are area-uniform in the hyperbolic disc: radius from the inverse
/// area law, angle from the golden-ratio sequence.
pub fn density_radius(
    family: &SignedGeodesicFamily,
    center: &P,
    window_radius: f64,
    samples: usize,
) -> Result<f64, FamilyError> {
    if family.is_empty() {
        return Err(FamilyError::EmptyFamily);
    }
    if !(window_radius >= 0.0) || samples == 0 {
        return Err(FamilyError::ParameterOutOfRange("window_radius ≥ 0 and samples ≥ 1".into()));
    }
    let c = center.halfplane_view();
    // moves i to the center
    let to_center = Isometry::affine(c.y, c.x);
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let worst = (0..samples)
        .into_par_iter()
        .map(|k| {
            let u = (k as f64 + 0.5) / samples as f64;
            let r = (1.0 + u * (window_radius.cosh() - 1.0)).acosh();
            let phi = std::f64::consts::TAU * (k as f64 * golden).fract();
            // point at distance r from the disk origin, carried to the half-plane
            let rho = (r / 2.0).tanh();
            let p = ModelPoint::disk(rho * phi.cos(), rho * phi.sin()).halfplane_view();
            let p = to_center.apply_point(&p);
            family.geodesics.iter().map(|g| g.distance_to(&p)).fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayTerm {
    pub index: usize,
    pub center: f64,
    pub radius: f64,
    /// The closed-form approximation `−ln(2·2r / ((X+1+x+r)(X−1+x−r)))`.
    pub rho_formula: f64,
    /// `geodesic_distance(O₀⁻, O_i)`.
    pub rho_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayProfile {
    pub terms: Vec<DecayTerm>,
    pub beta: f64,
    pub x: f64,
    /// `X^(−2β+1)`.
    pub bound: f64,
    /// `Σ exp(−β ϱ_i)` with the exact distances.
    pub sum: f64,
    /// The same sum with the closed-form approximation.
    pub sum_formula: f64,
}

/// Distances from `O₀⁻` (radius 1 at `−X`) to semicircles `O_i` packed between
/// the imaginary axis and `O₀⁺` (radius 1 at `X`).
pub fn decay_profile(semicircles: &[(f64, f64)], x: f64, beta: f64) -> Result<DecayProfile, FamilyError> {
    if !(beta > 1.0) {
        return Err(FamilyError::HypothesisViolated(format!("beta = {beta} must exceed 1")));
    }
    if !(x > 1.0) {
        return Err(FamilyError::HypothesisViolated(format!("X = {x} must exceed 1")));
    }
    let mut order: Vec<usize> = (0..semicircles.len()).collect();
    order.sort_by(|&a, &b| semicircles[a].0.total_cmp(&semicircles[b].0));
    for (k, &i) in order.iter().enumerate() {
        let (c, r) = semicircles[i];
        if !(r > 0.0 && r <= 0.5) {
            return Err(FamilyError::HypothesisViolated(format!("radius {r} of semicircle {i} not in (0, 1/2]")));
        }
        if !(c - r >= 0.0 && c + r <= x - 1.0) {
            return Err(FamilyError::HypothesisViolated(format!(
                "semicircle {i} leaves the strip between the axis and O₀⁺"
            )));
        }
        if let Some(&j) = order.get(k + 1) {
            let (c2, r2) = semicircles[j];
            if c + r > c2 - r2 {
                return Err(FamilyError::HypothesisViolated(format!("semicircles {i} and {j} overlap")));
            }
        }
    }
    let o0 = Geodesic::semicircle(-x - 1.0, -x + 1.0)?;
    let mut terms = Vec::with_capacity(semicircles.len());
    for (index, &(c, r)) in semicircles.iter().enumerate() {
        let oi = Geodesic::semicircle(c - r, c + r)?;
        let rho_formula = -((2.0 * 2.0 * r) / ((x + 1.0 + c + r) * (x - 1.0 + c - r))).ln();
        let rho_distance = geodesic_distance(&o0, &oi).value;
        terms.push(DecayTerm { index, center: c, radius: r, rho_formula, rho_distance });
    }
    let sum = terms.iter().map(|t| (-beta * t.rho_distance).exp()).sum();
    let sum_formula = terms.iter().map(|t| (-beta * t.rho_formula).exp()).sum();
    Ok(DecayProfile { terms, beta, x, bound: x.powf(-2.0 * beta + 1.0), sum, sum_formula })
}
