use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the geometry is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only for values the type cannot hold at all.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Separation below which two boundary points are treated as coincident.
    fn degeneracy_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Absolute tolerance for geometric identities (incidence, orthogonality).
    fn identity_tol() -> Self {
        Self::lit(1e-9).max(Self::epsilon().sqrt() * Self::lit(4.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
