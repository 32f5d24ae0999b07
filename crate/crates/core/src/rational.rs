//! Exact rationals backed by arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

pub type Rational = num_rational::BigRational;

/// `num / den` in canonical form. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_usize(x: usize) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Smallest integer `>= r`, for nonnegative `r`.
pub fn ceil_usize(r: &Rational) -> usize {
    r.ceil().to_integer().to_usize().expect("nonnegative value fitting usize")
}

/// Largest integer `<= r`, for nonnegative `r`.
pub fn floor_usize(r: &Rational) -> usize {
    r.floor().to_integer().to_usize().expect("nonnegative value fitting usize")
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators, 1 for an empty input.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()))
}
