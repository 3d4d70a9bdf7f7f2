//! Geodesical families: Constructions 1 and 2, verification, surgery
//! increments, density and decay measurements.

mod construct;
mod measure;
mod solve;
mod surgery;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypgeo::{cross_ratio_r, BoundaryPoint, Geodesic, GeometryError, Model, ModelPoint};

pub use construct::{arc_signs, construct1, construct1_with, construct2, Construct1Options, DEFAULT_HORIZON};
pub use measure::{decay_profile, density_radius, DecayProfile, DecayTerm};
pub use solve::{
    solve_crossratio_perpendicular, solve_crossratio_perpendicular_toward, solve_double_crossratio,
    solve_double_crossratio_ends,
};
pub use surgery::{surgery_increment, wrong_pairing_surplus, SurgerySpec};

pub(crate) use solve::theta;

type B = BoundaryPoint<f64>;
type G = Geodesic<f64>;
type P = ModelPoint<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("root finder did not converge")]
    ConvergenceFailure,
    #[error("no geodesic satisfies the placement conditions")]
    NoSolution,
    #[error("malformed surgery: {0}")]
    MalformedSpec(String),
    #[error("family is empty")]
    EmptyFamily,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub alpha: f64,
    pub eta: f64,
    /// Depth for Construction 1, step count for Construction 2.
    pub depth: u32,
}

impl FamilyParams {
    pub fn validate(&self) -> Result<(), FamilyError> {
        for (name, v) in [("alpha", self.alpha), ("eta", self.eta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(FamilyError::ParameterOutOfRange(format!("{name} = {v} outside (0, 1)")));
            }
        }
        Ok(())
    }

    /// Values above 0.2 leave the small-parameter regime the constructions target.
    pub fn warnings(&self) -> Vec<String> {
        [("alpha", self.alpha), ("eta", self.eta)]
            .iter()
            .filter(|(_, v)| *v > 0.2)
            .map(|(n, v)| format!("{n} = {v} is above 0.2; families may fail verification"))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    C1,
    C2,
    Custom,
}

/// A finite list of disjoint geodesics with a chess-board sign on the regions
/// they cut out.
///
/// The sign of a point is `base_sign` times `(−1)` to the number of geodesics
/// separating it from `base_point`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedGeodesicFamily {
    /// Geodesics in the half-plane model.
    pub geodesics: Vec<G>,
    pub base_point: P,
    pub base_sign: i8,
    /// The arc the next Construction 2 step would fill.
    pub selected_arc: Option<(B, B)>,
    pub params: FamilyParams,
    pub construction: Construction,
}

impl SignedGeodesicFamily {
    pub fn custom(geodesics: Vec<G>, base_point: P, base_sign: i8) -> Self {
        Self {
            geodesics: geodesics.into_iter().map(|g| g.to_model(Model::HalfPlane)).collect(),
            base_point: base_point.halfplane_view(),
            base_sign,
            selected_arc: None,
            params: FamilyParams { alpha: f64::NAN, eta: f64::NAN, depth: 0 },
            construction: Construction::Custom,
        }
    }

    pub fn len(&self) -> usize {
        self.geodesics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.geodesics.is_empty()
    }

    /// Region sign at `p`, or `None` when `p` lies on a family geodesic.
    pub fn sign(&self, p: &P) -> Option<i8> {
        let p = p.halfplane_view();
        let mut s = self.base_sign;
        for g in &self.geodesics {
            let a = g.side(&p);
            if a == 0 {
                return None;
            }
            if a != g.side(&self.base_point) {
                s = -s;
            }
        }
        Some(s)
    }

    /// Endpoints in clockwise order (decreasing disk angle), tagged by owner.
    pub fn ends_clockwise(&self) -> Vec<(B, usize)> {
        let mut ends: Vec<(f64, B, usize)> = self
            .geodesics
            .iter()
            .enumerate()
            .flat_map(|(i, g)| [(theta(&g.e1), g.e1, i), (theta(&g.e2), g.e2, i)])
            .collect();
        ends.sort_by(|a, b| b.0.total_cmp(&a.0));
        ends.into_iter().map(|(_, p, i)| (p, i)).collect()
    }

    /// Pairs of curves with consecutive ends on the absolute.
    pub fn neighbors(&self) -> Vec<(usize, usize)> {
        let ends = self.ends_clockwise();
        let n = ends.len();
        let mut out: Vec<(usize, usize)> = (0..n)
            .filter_map(|i| {
                let (a, b) = (ends[i].1, ends[(i + 1) % n].1);
                (a != b).then_some((a.min(b), a.max(b)))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Outcome of a pairwise scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub max_pairwise_r: f64,
    pub argmax: Option<(usize, usize)>,
    pub crossings: usize,
    pub pass: bool,
}

/// Checks that no two geodesics cross and every pairwise `R` is below `threshold`.
pub fn verify_geodesical(family: &SignedGeodesicFamily, threshold: f64) -> VerifyReport {
    let gs = &family.geodesics;
    let (max_r, argmax, crossings) = (0..gs.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::NEG_INFINITY, None, 0usize);
            for j in i + 1..gs.len() {
                if gs[i].crosses(&gs[j]) {
                    best.2 += 1;
                    continue;
                }
                let r = cross_ratio_r(&gs[i], &gs[j]).unwrap_or(f64::INFINITY);
                if r > best.0 {
                    best = (r, Some((i, j)), best.2);
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, None, 0),
            |a, b| {
                let c = a.2 + b.2;
                // ties resolved toward the lower index pair for determinism
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1 && b.1.is_some()) {
                    (b.0, b.1, c)
                } else {
                    (a.0, a.1, c)
                }
            },
        );
    let max_r = if argmax.is_some() { max_r } else { 0.0 };
    VerifyReport { max_pairwise_r: max_r, argmax, crossings, pass: crossings == 0 && max_r < threshold }
}

#[cfg(test)]
mod tests;
