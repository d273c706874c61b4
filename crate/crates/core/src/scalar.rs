//! Scalar abstraction shared by every exact and floating-point routine.
//!
//! The combinatorial sums in this crate are evaluated over any field that
//! implements [`Scalar`]: `f32`/`f64` for quick numerics and
//! [`BigRational`] when identities must hold bit-exactly.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// A field element usable by the moment and Weingarten machinery.
pub trait Scalar:
    Num + Signed + Clone + Debug + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_bigint(value: &BigInt) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("i64 fits") / Self::from_i64(den).expect("i64 fits")
    }

    fn from_u64_lossy(value: u64) -> Self {
        Self::from_u64(value).expect("u64 fits")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Integer power with a possibly negative exponent.
    fn powi(&self, exp: i32) -> Self {
        let pos = num_traits::pow(self.clone(), exp.unsigned_abs() as usize);
        if exp >= 0 {
            pos
        } else {
            Self::one() / pos
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_bigint(value: &BigInt) -> Self {
        value.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_bigint(value: &BigInt) -> Self {
        value.to_f32().unwrap_or(f32::NAN)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_bigint(value: &BigInt) -> Self {
        BigRational::from_integer(value.clone())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64_lossy(&self) -> f64 {
        ratio_to_f64(self)
    }
}

/// Converts a big rational to the nearest-ish `f64`, also when numerator and
/// denominator individually overflow `f64`.
pub fn ratio_to_f64(value: &BigRational) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    if let Some(v) = value.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    let num_bits = value.numer().bits() as i64;
    let den_bits = value.denom().bits() as i64;
    // Keep ~60 significant bits from each side before dividing.
    let shift_num = (num_bits - 60).max(0);
    let shift_den = (den_bits - 60).max(0);
    let n = (value.numer() >> shift_num as usize).to_f64().unwrap_or(f64::NAN);
    let d = (value.denom() >> shift_den as usize).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi((shift_num - shift_den) as i32)
}

/// `base^exp` for integers, as a scalar.
pub fn int_pow<T: Scalar>(base: u64, exp: u32) -> T {
    num_traits::pow(T::from_u64_lossy(base), exp as usize)
}
