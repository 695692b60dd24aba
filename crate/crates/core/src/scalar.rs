//! Scalar abstractions shared by the exact and floating layers.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, One, ToPrimitive, Zero};
#[cfg(test)]
use num_traits::Signed;

/// Ring element usable as a polynomial coefficient.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// floating point: f32 or f64
pub trait FloatScalar:
    Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static
{
}
impl FloatScalar for f32 {}
impl FloatScalar for f64 {}

/// Coefficients that can be rounded to an unevaluated float pair `hi + lo`.
pub trait ToFloatPair {
    fn to_float_pair<T: FloatScalar>(&self) -> DoubleDouble<T>;
}

impl ToFloatPair for BigRational {
    fn to_float_pair<T: FloatScalar>(&self) -> DoubleDouble<T> {
        let hi64 = self.to_f64().unwrap_or(f64::NAN);
        let lo64 = BigRational::from_float(hi64)
            .map(|h| (self - h).to_f64().unwrap_or(0.0))
            .unwrap_or(0.0);
        split_f64(hi64, lo64)
    }
}

impl ToFloatPair for BigInt {
    fn to_float_pair<T: FloatScalar>(&self) -> DoubleDouble<T> {
        BigRational::from_integer(self.clone()).to_float_pair()
    }
}

impl ToFloatPair for f64 {
    fn to_float_pair<T: FloatScalar>(&self) -> DoubleDouble<T> {
        split_f64(*self, 0.0)
    }
}

fn split_f64<T: FloatScalar>(hi64: f64, lo64: f64) -> DoubleDouble<T> {
    let hi = T::from_f64(hi64).unwrap_or_else(T::nan);
    let rest = (hi64 - hi.to_f64().unwrap_or(0.0)) + lo64;
    let lo = T::from_f64(rest).unwrap_or_else(T::zero);
    DoubleDouble::renormalize(hi, lo)
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
///
/// Arithmetic uses error-free transformations, so a chain of operations
/// behaves as if carried out in roughly twice the working precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleDouble<T> {
    pub hi: T,
    pub lo: T,
}

#[inline]
fn two_sum<T: Float>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod<T: Float>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl<T: FloatScalar> DoubleDouble<T> {
    pub fn new(value: T) -> Self {
        Self {
            hi: value,
            lo: T::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::new(T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one())
    }

    #[inline]
    fn renormalize(hi: T, lo: T) -> Self {
        let s = hi + lo;
        let err = lo - (s - hi);
        Self { hi: s, lo: err }
    }

    #[inline]
    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        Self::renormalize(s, e + self.lo + other.lo)
    }

    #[inline]
    pub fn mul(self, other: Self) -> Self {
        let (p, e) = two_prod(self.hi, other.hi);
        Self::renormalize(p, e + self.hi * other.lo + self.lo * other.hi)
    }

    #[inline]
    pub fn mul_scalar(self, other: T) -> Self {
        let (p, e) = two_prod(self.hi, other);
        Self::renormalize(p, e + self.lo * other)
    }

    pub fn value(self) -> T {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_prod_recovers_rounding_error() {
        let a = 1.0 + f64::EPSILON;
        let b = 1.0 - f64::EPSILON;
        let (p, e) = two_prod(a, b);
        // exact product is 1 - eps^2
        assert_eq!(p, 1.0);
        assert_eq!(e, -f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn cancellation_survives_in_double_double() {
        let big = DoubleDouble::new(1e16_f64);
        let sum = big.add(DoubleDouble::new(1.0)).add(DoubleDouble::new(-1e16));
        assert_eq!(sum.value(), 1.0);
    }

    #[test]
    fn rational_split_keeps_tail() {
        let third = BigRational::new(1.into(), 3.into());
        let dd: DoubleDouble<f64> = third.to_float_pair();
        assert!(dd.lo != 0.0);
        let back = BigRational::from_float(dd.hi).unwrap() + BigRational::from_float(dd.lo).unwrap();
        let err = (back - third).abs().to_f64().unwrap();
        assert!(err < 1e-32);
    }

    #[test]
    fn f32_pairs_are_consistent() {
        let dd: DoubleDouble<f32> = 0.1_f64.to_float_pair();
        assert!((dd.hi as f64 + dd.lo as f64 - 0.1).abs() < 1e-15);
    }
}
