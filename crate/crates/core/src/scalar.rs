//! Scalar abstraction for the floating-point formulas.
//!
//! The closed-form bounds, probability constants and root finders are written
//! once against [`Scalar`] and instantiated for `f32` and `f64`. Quantities that
//! must be exact (matching counts, weight averages, exact tails) use
//! `BigUint`/`BigRational` instead.

use core::fmt::{Debug, Display};
use core::iter::Sum;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive, Zero};

/// A real floating-point scalar usable by the generic formulas in this crate.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Scalar")
    }

    #[inline]
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize is representable in every Scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `ln Γ(n + 1) = ln n!` by direct summation; fine for the moderate `n` used here.
pub fn ln_factorial<T: Scalar>(n: u64) -> T {
    (2..=n).map(|k| T::of(k as f64).ln()).sum()
}

/// `ln C(n, k)`, `-inf` when `k > n`.
pub fn ln_binomial<T: Scalar>(n: u64, k: u64) -> T {
    if k > n {
        return T::neg_infinity();
    }
    let k = k.min(n - k);
    // ln C(n,k) = sum_{i=1..k} ln((n-k+i)/i)
    (1..=k)
        .map(|i| (T::of((n - k + i) as f64) / T::of(i as f64)).ln())
        .sum()
}

/// Natural logarithm of an arbitrarily large unsigned integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Converts an exact rational to the nearest representable scalar.
pub fn rational_to<T: Scalar>(x: &BigRational) -> T {
    if x.is_zero() {
        return T::zero();
    }
    // Scale numerator and denominator down together so both fit in f64.
    let num = x.numer();
    let den = x.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift_n = (nb - 900).max(0) as u64;
    let shift_d = (db - 900).max(0) as u64;
    let n = (num >> shift_n).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift_d).to_f64().unwrap_or(f64::NAN);
    let scale = (shift_n as f64 - shift_d as f64) * std::f64::consts::LN_2;
    T::of(n / d * scale.exp())
}

/// Exact rational from an `f64` (every finite double is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Exact rational denoted by the shortest decimal that round-trips to `x`,
/// so that `0.2` reads as `1/5` rather than its binary approximation.
pub fn rational_from_decimal(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let text = format!("{x:e}");
    let (mantissa, exp) = text.split_once('e')?;
    let exp: i64 = exp.parse().ok()?;
    let negative = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches('-');
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let mut q = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        q = -q;
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rationals() {
        let fifth = rational_from_decimal(0.2).unwrap();
        assert_eq!(fifth, BigRational::new(BigInt::from(1), BigInt::from(5)));
        assert_eq!(
            rational_from_decimal(-1250.0).unwrap(),
            BigRational::from_integer(BigInt::from(-1250))
        );
        assert_eq!(
            rational_from_decimal(0.0).unwrap(),
            BigRational::from_integer(BigInt::from(0))
        );
        assert!(rational_from_decimal(f64::NAN).is_none());
    }

    #[test]
    fn ln_binomial_matches_small_values() {
        let v: f64 = ln_binomial(10, 3);
        assert!((v - 120f64.ln()).abs() < 1e-12);
        assert_eq!(ln_binomial::<f64>(3, 5), f64::NEG_INFINITY);
        let v32: f32 = ln_binomial(10, 3);
        assert!((v32 - 120f32.ln()).abs() < 1e-5);
    }

    #[test]
    fn ln_biguint_large() {
        let x = BigUint::from(2u32).pow(3000);
        assert!((ln_biguint(&x) - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_biguint(&BigUint::from(280u32)) - 280f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rational_conversion() {
        let r = BigRational::new(BigInt::from(5), BigInt::from(210));
        let v: f64 = rational_to(&r);
        assert!((v - 5.0 / 210.0).abs() < 1e-16);
    }
}
