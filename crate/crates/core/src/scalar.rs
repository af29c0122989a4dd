//! Floating-point scalar abstraction.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Scalar type the whole crate is generic over. Implemented by `f32` and
/// `f64`; the supertraits cover arithmetic, π, and conversion of the literal
/// constants appearing in closed-form expressions.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal from a formula into this scalar.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("formula constant must be representable")
    }

    /// `e^{iθ}` over this scalar.
    fn cis(theta: Self) -> Complex<Self> {
        Complex::from_polar(Self::one(), theta)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}
