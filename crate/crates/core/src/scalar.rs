//! Real scalar abstraction: the whole engine is generic over `f32`/`f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar the numerical kernels are parametrized over.
///
/// Everything is expressed through `num_traits::Float` plus a handful of
/// helpers that have no generic counterpart (normal sampling, f64 literals).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Draw one standard-normal variate.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Convert an `f64` constant, saturating on overflow (only relevant for `f32`).
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(|| {
            if x > 0.0 {
                Self::max_value()
            } else {
                Self::min_value()
            }
        })
    }

    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

/// Shorthand for the complex type built over a [`Scalar`].
pub type C<T> = Complex<T>;

/// `log(2 cosh z)` without overflow for large `|Re z|`.
///
/// Uses `log 2cosh z = |Re z|-part + log(1 + e^{-2z'})` with `z'` the
/// half-plane reflection of `z`; `cosh` is even so the reflection is exact.
/// The principal branch is taken per factor.
pub fn log_two_cosh<T: Scalar>(z: C<T>) -> C<T> {
    let zp = if z.re >= T::zero() { z } else { -z };
    zp + ((-(zp + zp)).exp() + T::one()).ln()
}

/// `tanh z` stable for large `|Re z|` (the textbook ratio overflows
/// past `Re z ~ 355` in f64).
pub fn tanh_stable<T: Scalar>(z: C<T>) -> C<T> {
    if z.re >= T::zero() {
        let e = (-(z + z)).exp(); // |e| <= 1
        let one = C::new(T::one(), T::zero());
        (one - e) / (one + e)
    } else {
        -tanh_stable(-z)
    }
}

/// Wrap an angle difference into (-pi, pi]; used to compare log-amplitudes
/// whose imaginary parts are only meaningful modulo 2 pi.
pub fn wrap_angle<T: Scalar>(x: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut r = x % two_pi;
    if r > T::PI() {
        r = r - two_pi;
    }
    if r <= -T::PI() {
        r = r + two_pi;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_two_cosh_matches_naive_small() {
        let z = C::new(0.3, -1.2);
        let naive = (2.0 * z.cosh().re).hypot(2.0 * z.cosh().im).ln();
        let stable = log_two_cosh(z);
        assert!((stable.re - naive).abs() < 1e-12);
    }

    #[test]
    fn log_two_cosh_huge_argument_finite() {
        let z = C::new(2000.0, 0.7);
        let v = log_two_cosh(z);
        assert!(v.re.is_finite() && v.im.is_finite());
        // log 2cosh z ~ z - log ... ~ Re z for huge Re z
        assert!((v.re - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn tanh_stable_matches_naive() {
        let z = C::new(-0.8, 0.4);
        let d = tanh_stable(z) - z.tanh();
        assert!(d.norm() < 1e-14);
        let big = C::new(500.0, 1.0);
        let t = tanh_stable(big);
        assert!((t - C::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn wrap_angle_range() {
        for k in -6..=6 {
            let x = 0.37 + (k as f64) * std::f64::consts::TAU;
            assert!((wrap_angle(x) - 0.37).abs() < 1e-9);
        }
    }
}
