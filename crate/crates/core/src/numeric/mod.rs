//! Exact scalars, dyadic interval enclosures and p-adic valuations.
//!
//! Exact rationals are [`num_rational::BigRational`]; everything else in the
//! crate is built on top of that type. Infinite series never run in exact
//! arithmetic: their terms are generated exactly, rounded outward onto a
//! dyadic grid and closed off with an exact tail majorant from
//! [`geometric_tail_bound`].

mod dyadic;
mod enclosure;
mod tail;
mod valuation;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use dyadic::{Dyadic, Rounding};
pub use enclosure::Enclosure;
pub use tail::{enclosure_sum, geometric_tail_bound, truncation_index, TailWeight};
pub use valuation::{p_adic_valuation, Valuation};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type BigRat = num_rational::BigRational;

/// `numer / denom` from machine integers.
pub fn rat(numer: i64, denom: i64) -> BigRat {
    BigRat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int<T: Into<BigInt>>(value: T) -> BigRat {
    BigRat::from_integer(value.into())
}

/// `base^exp` for any integer exponent. Panics on `0^negative`.
pub fn rat_pow(base: &BigRat, exp: i64) -> BigRat {
    if exp == 0 {
        return BigRat::one();
    }
    let magnitude = exp.unsigned_abs();
    let numer = num_traits::pow::Pow::pow(base.numer(), magnitude);
    let denom = num_traits::pow::Pow::pow(base.denom(), magnitude);
    if exp > 0 {
        BigRat::new(numer, denom)
    } else {
        assert!(!numer.is_zero(), "zero raised to a negative power");
        BigRat::new(denom, numer)
    }
}

/// Integer power of a machine integer as a big integer.
pub fn int_pow(base: u64, exp: u64) -> BigInt {
    num_traits::pow::Pow::pow(BigInt::from(base), exp)
}

/// Returns the integer if `x` has denominator one.
pub fn as_integer(x: &BigRat) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// Number of bits in `|x|` (0 for zero).
pub fn bit_length(x: &BigInt) -> u64 {
    x.abs().bits()
}
