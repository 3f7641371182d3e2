//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the library can be instantiated with.
///
/// Structural and derived tolerances are carried by the type so that
/// generic code can pick defaults that are meaningful at its precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + Sum + 'static
{
    /// Default tolerance for structural checks (hermiticity, unit trace, orthogonality).
    fn structural_tol() -> Self;

    /// Default tolerance for derived quantities (round trips, composite checks).
    fn derived_tol() -> Self;

    /// Converts an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn structural_tol() -> Self {
        1e-10
    }
    fn derived_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn structural_tol() -> Self {
        1e-4
    }
    fn derived_tol() -> Self {
        1e-3
    }
}

/// Complex number over a [`Real`] scalar.
pub type C<R> = Complex<R>;

#[inline]
pub(crate) fn c<R: Real>(re: R) -> C<R> {
    Complex::new(re, R::zero())
}
