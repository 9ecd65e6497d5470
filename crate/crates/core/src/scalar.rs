use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the geometry is generic over (`f32` or `f64`).
///
/// The associated constants are the default tolerances for the type; they
/// seed [`Tolerances::default`](crate::Tolerances).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    const EPS_GEOM: f64;
    const EPS_ANGLE: f64;
    const REFINE_TOL: f64;

    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EPS_GEOM: f64 = 1e-9;
    const EPS_ANGLE: f64 = 1e-7;
    const REFINE_TOL: f64 = 1e-12;
}

impl Scalar for f32 {
    const EPS_GEOM: f64 = 1e-4;
    const EPS_ANGLE: f64 = 1e-3;
    const REFINE_TOL: f64 = 1e-6;
}
