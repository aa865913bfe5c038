//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar the engine is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal; every `Real` can represent (an approximation of) any finite `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the engine scalar.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

/// `e^{i theta}`.
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> Cx<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Wraps an angle into `(-pi/2, pi/2]`, i.e. reduces it modulo `pi`.
pub fn wrap_half_turn<T: Real>(angle: T) -> T {
    let pi = T::PI();
    let half = pi / T::two();
    let mut a = angle - pi * (angle / pi).round();
    if a <= -half {
        a = a + pi;
    } else if a > half {
        a = a - pi;
    }
    a
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_full_turn<T: Real>(angle: T) -> T {
    let tau = T::PI() * T::two();
    let mut a = angle - tau * (angle / tau).round();
    if a <= -T::PI() {
        a = a + tau;
    } else if a > T::PI() {
        a = a - tau;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wraps_modulo_pi() {
        assert!((wrap_half_turn(PI + 0.1) - 0.1).abs() < 1e-15);
        assert!((wrap_half_turn(-0.1 - 3.0 * PI) + 0.1).abs() < 1e-14);
        assert!((wrap_half_turn(PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert!((wrap_full_turn(2.0 * PI + 0.3) - 0.3).abs() < 1e-15);
        assert!((wrap_full_turn(-PI) - PI).abs() < 1e-15);
    }

    #[test]
    fn literals_round_trip() {
        assert_eq!(f32::lit(0.5), 0.5f32);
        assert_eq!(f64::lit(1e-12), 1e-12);
    }
}
