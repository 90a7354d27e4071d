use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Rounding};
use super::enclosure::Enclosure;
use super::{rat_pow, BigRat};
use crate::error::{Error, Result};

/// Weight `w(k)` multiplying `r^k` in a geometric-type tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailWeight {
    /// `w(k) = 1`
    Unit,
    /// `w(k) = k`
    Linear,
    /// `w(k) = k r^(extra k)`, i.e. a linear weight on the ratio `r^(1 + extra)`.
    LinearPower { extra: u32 },
}

/// Exact upper bound on `|sum_{k > n} c w(k) r^k|` for `0 < r < 1`.
///
/// Uses `sum_{k>N} r^k = r^(N+1) / (1 - r)` and
/// `sum_{k>N} k r^k = r^(N+1) ((N+1)(1-r) + r) / (1-r)^2`.
pub fn geometric_tail_bound(c: &BigRat, r: &BigRat, n: u64, weight: TailWeight) -> Result<BigRat> {
    if !r.is_positive() || *r >= BigRat::one() {
        return Err(Error::Domain(format!("tail ratio {r} outside (0, 1)")));
    }
    if c.is_zero() {
        return Ok(BigRat::zero());
    }
    let (ratio, linear) = match weight {
        TailWeight::Unit => (r.clone(), false),
        TailWeight::Linear => (r.clone(), true),
        TailWeight::LinearPower { extra } => (rat_pow(r, 1 + extra as i64), true),
    };
    let one = BigRat::one();
    let first = rat_pow(&ratio, n as i64 + 1);
    let gap = &one - &ratio;
    let sum = if linear {
        let n1 = BigRat::from_integer(BigInt::from(n) + 1);
        first * (n1 * &gap + &ratio) / (&gap * &gap)
    } else {
        first / gap
    };
    Ok(c.abs() * sum)
}

/// Smallest `N` with `tail(N) < 2^-(bits + 8)`, for a tail bound that is
/// nonincreasing in `N` and tends to zero.
pub fn truncation_index<F>(bits: u32, mut tail: F) -> Result<u64>
where
    F: FnMut(u64) -> Result<BigRat>,
{
    let target = BigRat::new(BigInt::one(), BigInt::one() << (bits as u64 + 8));
    let mut hi = 1u64;
    while tail(hi)? >= target {
        hi = hi
            .checked_mul(2)
            .filter(|&h| h < (1 << 40))
            .ok_or_else(|| Error::Precision("series tail never drops below target".into()))?;
    }
    if tail(0)? < target {
        return Ok(0);
    }
    let mut lo = 0u64; // tail(lo) >= target, tail(hi) < target
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail(mid)? < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Encloses `sum(terms) + t` for an unknown `|t| <= tail`.
///
/// Terms are exact rationals; each is bracketed on a grid 32 bits finer than
/// the target, so the result has width at most
/// `2 tail + count * 2^-(bits+32) + 2^(1-bits)`.
pub fn enclosure_sum<I>(terms: I, tail: &BigRat, bits: u32) -> Result<Enclosure>
where
    I: IntoIterator<Item = BigRat>,
{
    if bits == 0 {
        return Err(Error::Config("precision must be a positive number of bits".into()));
    }
    if tail.is_negative() {
        return Err(Error::Domain("tail majorant must be nonnegative".into()));
    }
    let fine = bits as u64 + 32;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for term in terms {
        let (q, r) = (term.numer() << fine).div_mod_floor(term.denom());
        if !r.is_zero() {
            hi += &q + 1u32;
        } else {
            hi += &q;
        }
        lo += q;
    }
    let sum = Enclosure::new(
        Dyadic::new(lo, -(fine as i64)),
        Dyadic::new(hi, -(fine as i64)),
        bits,
    )?;
    let r = Dyadic::from_rational(tail, fine as u32, Rounding::Up);
    let widened = Enclosure::new(sum.lo() - &r, sum.hi() + &r, bits)?;
    Ok(widened.rounded(bits))
}
