//! Exact rational scalars.
//!
//! Coefficients everywhere in the crate are arbitrary-precision rationals;
//! [`Rational`] is `num_rational`'s `BigRational`, which keeps values reduced
//! and sign-normalised (denominator always positive).

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

/// The integer `n` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// The fraction `n / d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
