//! Geodesical families on the Lobachevsky plane, `{p,q}` tessellations and
//! Cayley trees, and Ising Gibbs sampling under foliated boundary conditions.

pub mod families;
pub mod gibbs;
pub mod hypgeo;
pub mod io;
pub mod tiling;
pub mod treestates;

pub use hypgeo::Scalar;

pub type BoundaryPoint64 = hypgeo::BoundaryPoint<f64>;
pub type ModelPoint64 = hypgeo::ModelPoint<f64>;
pub type Geodesic64 = hypgeo::Geodesic<f64>;
pub type Isometry64 = hypgeo::Isometry<f64>;

pub type BoundaryPoint32 = hypgeo::BoundaryPoint<f32>;
pub type ModelPoint32 = hypgeo::ModelPoint<f32>;
pub type Geodesic32 = hypgeo::Geodesic<f32>;
pub type Isometry32 = hypgeo::Isometry<f32>;
