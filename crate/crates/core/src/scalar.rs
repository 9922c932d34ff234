//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Display, LowerExp};

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the toolkit is generic over: `f32` or `f64`.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + FloatConst + Display + LowerExp + Send + Sync
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }

    /// Converts a tolerance stated for double precision into one that is
    /// meaningful for this scalar, scaling by the ratio of machine epsilons.
    fn tol(x: f64) -> Self {
        let eps = Self::default_epsilon().to_f64().unwrap_or(f64::EPSILON);
        Self::lit(x * (eps / f64::EPSILON))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `exp(i·theta)`.
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Squared modulus without the `Float` bound num-complex asks for.
pub fn abs2<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

pub fn modulus<T: Real>(z: Complex<T>) -> T {
    abs2(z).sqrt()
}
