use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Signed;

use super::dyadic::{Dyadic, Rounding};
use super::BigRat;
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with dyadic endpoints that is guaranteed to
/// contain some real quantity.
///
/// `precision_bits` records the absolute grid `2^-precision_bits` the
/// endpoints were rounded to. Binary operations keep the smaller of the two
/// precisions. Additions, subtractions and products of enclosures are exact on
/// the endpoints; only conversions from rationals and explicit
/// [`Enclosure::rounded`] calls move endpoints, and they always move outward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!(
                "enclosure endpoints out of order: {lo} > {hi}"
            )));
        }
        Ok(Enclosure {
            lo,
            hi,
            precision_bits,
        })
    }

    pub fn point(value: Dyadic, precision_bits: u32) -> Self {
        Enclosure {
            lo: value.clone(),
            hi: value,
            precision_bits,
        }
    }

    pub fn zero(precision_bits: u32) -> Self {
        Self::point(Dyadic::zero(), precision_bits)
    }

    /// Smallest grid interval `[floor(x), ceil(x)]` on `2^-bits Z`.
    pub fn from_rational(x: &BigRat, bits: u32) -> Self {
        Enclosure {
            lo: Dyadic::from_rational(x, bits, Rounding::Down),
            hi: Dyadic::from_rational(x, bits, Rounding::Up),
            precision_bits: bits,
        }
    }

    pub fn from_integer(x: &BigInt, bits: u32) -> Self {
        Self::point(Dyadic::from_integer(x.clone()), bits)
    }

    /// Interval with the given `f64` endpoints (exact: every finite double is
    /// dyadic). The precision is recorded as 52 bits.
    pub fn from_f64_bounds(lo: f64, hi: f64) -> Result<Self> {
        let conv = |v: f64| {
            Dyadic::from_f64(v).ok_or_else(|| Error::Domain(format!("non-finite bound {v}")))
        };
        Self::new(conv(lo)?, conv(hi)?, 52)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// True when the width is at most `2^-bits`.
    pub fn width_below(&self, bits: i64) -> bool {
        match self.width().magnitude_exponent() {
            None => true,
            Some(e) => e < -bits,
        }
    }

    pub fn contains(&self, x: &BigRat) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then(|| Enclosure {
            lo,
            hi,
            precision_bits: self.precision_bits.max(other.precision_bits),
        })
    }

    /// Enclosure of `|x|`.
    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let hi = (&self.lo.abs()).max(&self.hi).clone();
            Enclosure {
                lo: Dyadic::zero(),
                hi,
                precision_bits: self.precision_bits,
            }
        }
    }

    /// Exact product interval.
    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = products.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Enclosure {
            lo,
            hi,
            precision_bits: self.precision_bits.min(other.precision_bits),
        }
    }

    /// Product with an exact rational, rounded outward to `2^-bits`.
    pub fn mul_rational(&self, r: &BigRat, bits: u32) -> Enclosure {
        let a = &self.lo.to_rational() * r;
        let b = &self.hi.to_rational() * r;
        let (lo, hi) = if r.is_negative() { (b, a) } else { (a, b) };
        Enclosure {
            lo: Dyadic::from_rational(&lo, bits, Rounding::Down),
            hi: Dyadic::from_rational(&hi, bits, Rounding::Up),
            precision_bits: bits,
        }
    }

    /// Product with an exact integer; no rounding needed.
    pub fn mul_integer(&self, k: &BigInt) -> Enclosure {
        self.mul(&Enclosure::from_integer(k, self.precision_bits))
    }

    /// Quotient, rounded outward to `2^-bits`. The divisor must not contain 0.
    pub fn div(&self, other: &Enclosure, bits: u32) -> Result<Enclosure> {
        if other.contains_zero() {
            return Err(Error::Domain("division by an enclosure containing 0".into()));
        }
        let (a, b) = (self.lo.to_rational(), self.hi.to_rational());
        let (c, d) = (other.lo.to_rational(), other.hi.to_rational());
        let quotients = [&a / &c, &a / &d, &b / &c, &b / &d];
        let lo = quotients.iter().min().expect("nonempty");
        let hi = quotients.iter().max().expect("nonempty");
        Ok(Enclosure {
            lo: Dyadic::from_rational(lo, bits, Rounding::Down),
            hi: Dyadic::from_rational(hi, bits, Rounding::Up),
            precision_bits: bits,
        })
    }

    /// Endpoints rounded outward onto `2^-bits Z`.
    pub fn rounded(&self, bits: u32) -> Enclosure {
        Enclosure {
            lo: self.lo.round_to(bits, Rounding::Down),
            hi: self.hi.round_to(bits, Rounding::Up),
            precision_bits: bits,
        }
    }

    /// Widens by `±r` (for `r >= 0`), rounding outward to the current
    /// precision.
    pub fn widen(&self, radius: &BigRat) -> Enclosure {
        let bits = self.precision_bits;
        let r = Dyadic::from_rational(radius, bits, Rounding::Up);
        Enclosure {
            lo: &self.lo - &r,
            hi: &self.hi + &r,
            precision_bits: bits,
        }
    }

    /// Enclosure of `log2(x)`; requires `lo > 0`. Accurate to a few ulps of
    /// `f64`, which is ample for exponent tables.
    pub fn log2(&self) -> Result<Enclosure> {
        let (lo, _) = self
            .lo
            .log2_bounds()
            .ok_or_else(|| Error::Precision("log of an enclosure that is not positive".into()))?;
        let (_, hi) = self.hi.log2_bounds().expect("hi >= lo > 0");
        Self::from_f64_bounds(lo, hi)
    }

    /// Enclosure of `log_base(x)` for positive `x` and `base > 1`.
    pub fn log_base(&self, base: &Enclosure) -> Result<Enclosure> {
        let num = self.log2()?;
        let den = base.log2()?;
        if !den.is_strictly_positive() {
            return Err(Error::Domain("logarithm base must exceed 1".into()));
        }
        num.div(&den, 64)
    }

    /// Decimal rendering of the endpoints, rounded outward.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (
            self.lo.to_decimal(digits, Rounding::Down),
            self.hi.to_decimal(digits, Rounding::Up),
        )
    }

    pub fn midpoint_f64(&self) -> f64 {
        (&self.lo + &self.hi).to_f64_lossy() / 2.0
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;

    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
            precision_bits: self.precision_bits.min(rhs.precision_bits),
        }
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;

    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
            precision_bits: self.precision_bits.min(rhs.precision_bits),
        }
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;

    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
            precision_bits: self.precision_bits,
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(12);
        write!(f, "[{lo}, {hi}]")
    }
}
