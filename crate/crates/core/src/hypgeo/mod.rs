//! Hyperbolic plane primitives: boundary points, geodesics, isometries,
//! cross-ratios and distances in the half-plane and disk models.

mod geodesic;
mod isometry;
mod ops;
mod point;
mod scalar;


use thiserror::Error;

pub use geodesic::Geodesic;
pub use isometry::Isometry;
pub use ops::{
    closest_point, common_perpendicular, cross_ratio_r, cross_ratio_r_points, cross_ratio_rbar, geodesic_distance,
    perpendicular_through, point_distance, reflect_geodesic, scale_constant, scaled_distance, CommonPerpendicular,
    ConvertModel, GeodesicDistance,
};
pub use point::{BoundaryPoint, Model, ModelPoint};
pub use scalar::Scalar;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum GeometryError {
    #[error("boundary points coincide")]
    DegenerateQuadruple,
    #[error("arguments live in different models")]
    ModelMismatch,
    #[error("geodesics cross")]
    CrossingGeodesics,
    #[error("point is not inside the model domain")]
    InvalidPoint,
}
