use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BigRat;

/// Direction for rounding onto a dyadic grid or a decimal string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Exact binary fraction `mantissa * 2^exponent`.
///
/// Normalized so the mantissa is odd (or the value is zero with exponent 0),
/// which makes the derived equality and hashing value-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_integer<T: Into<BigInt>>(value: T) -> Self {
        Self::new(value.into(), 0)
    }

    /// Exact conversion; every finite `f64` is dyadic.
    pub fn from_f64(value: f64) -> Option<Self> {
        if !value.is_finite() {
            return None;
        }
        if value == 0.0 {
            return Some(Self::zero());
        }
        let bits = value.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Self::new(BigInt::from(mant) * sign, exp))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn to_rational(&self) -> BigRat {
        if self.exponent >= 0 {
            BigRat::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRat::new(
                self.mantissa.clone(),
                BigInt::one() << self.exponent.unsigned_abs(),
            )
        }
    }

    /// Rounds `x` onto the grid `2^-bits Z`.
    pub fn from_rational(x: &BigRat, bits: u32, rounding: Rounding) -> Self {
        let scaled = x.numer() << bits as u64;
        let q = match rounding {
            Rounding::Down => scaled.div_floor(x.denom()),
            Rounding::Up => scaled.div_ceil(x.denom()),
        };
        Self::new(q, -(bits as i64))
    }

    /// Rounds onto the grid `2^-bits Z`; exact when already on it.
    pub fn round_to(&self, bits: u32, rounding: Rounding) -> Self {
        let target = -(bits as i64);
        if self.exponent >= target {
            return self.clone();
        }
        let shift = (target - self.exponent) as u64;
        let divisor = BigInt::one() << shift;
        let q = match rounding {
            Rounding::Down => self.mantissa.div_floor(&divisor),
            Rounding::Up => self.mantissa.div_ceil(&divisor),
        };
        Self::new(q, target)
    }

    /// Index of the highest set bit of the value, i.e. `floor(log2 |x|)`.
    /// `None` for zero.
    pub fn magnitude_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mantissa.bits() as i64 - 1 + self.exponent)
        }
    }

    /// Lower and upper `f64` bounds on `log2(self)` for a positive value.
    pub(crate) fn log2_bounds(&self) -> Option<(f64, f64)> {
        if !self.is_positive() {
            return None;
        }
        let len = self.mantissa.bits();
        let (top, shift) = if len > 53 {
            (&self.mantissa >> (len - 53), (len - 53) as i64)
        } else {
            (self.mantissa.clone(), 0)
        };
        let top = top.to_u64()?;
        let offset = (shift + self.exponent) as f64;
        // top and top + 1 are both exact in f64 (top < 2^53).
        let lower = widen_down((top as f64).log2(), 2) + offset;
        let upper_top = if shift == 0 { top } else { top + 1 };
        let upper = widen_up((upper_top as f64).log2(), 2) + offset;
        Some((widen_down(lower, 1), widen_up(upper, 1)))
    }

    /// Scientific-notation decimal string with `digits` significant digits,
    /// rounded in the given direction, e.g. `2.744e0` or `-1.25e-3`.
    pub fn to_decimal(&self, digits: usize, rounding: Rounding) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let negative = self.is_negative();
        // Rounding |x| down rounds x up when x is negative.
        let magnitude_rounding = match (negative, rounding) {
            (false, r) => r,
            (true, Rounding::Down) => Rounding::Up,
            (true, Rounding::Up) => Rounding::Down,
        };
        let x = self.abs().to_rational();
        let bit_exp = self.magnitude_exponent().unwrap_or(0);
        let mut e10 = (bit_exp as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let lower = BigInt::from(10u32).pow(digits as u32 - 1);
        let upper = &lower * 10u32;
        let (scaled_int, e10) = loop {
            let shift = digits as i64 - 1 - e10;
            let scaled = &x * super::rat_pow(&super::rat(10, 1), shift);
            let rounded = match magnitude_rounding {
                Rounding::Down => scaled.floor().to_integer(),
                Rounding::Up => scaled.ceil().to_integer(),
            };
            if rounded >= upper {
                // Up-rounding can carry into one more digit.
                if rounded == upper && scaled <= BigRat::from_integer(upper.clone()) {
                    break (lower.clone(), e10 + 1);
                }
                e10 += 1;
            } else if rounded < lower {
                e10 -= 1;
            } else {
                break (rounded, e10);
            }
        };
        let text = scaled_int.to_string();
        let (head, tail) = text.split_at(1);
        let tail = tail.trim_end_matches('0');
        let sign = if negative { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// Nearest-ish `f64`, for diagnostics only.
    pub fn to_f64_lossy(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mantissa.bits();
        let (top, shift) = if len > 60 {
            (&self.mantissa >> (len - 60), (len - 60) as i64)
        } else {
            (self.mantissa.clone(), 0)
        };
        let mut value = top.to_f64().unwrap_or(f64::NAN);
        let mut e = (shift + self.exponent).clamp(-4000, 4000);
        // scale in steps so intermediate powers of two stay representable
        while e != 0 {
            let step = e.clamp(-1000, 1000);
            value *= 2f64.powi(step as i32);
            e -= step;
        }
        value
    }
}

fn widen_down(x: f64, steps: usize) -> f64 {
    (0..steps).fold(x, |v, _| v.next_down())
}

fn widen_up(x: f64, steps: usize) -> f64 {
    (0..steps).fold(x, |v, _| v.next_up())
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mantissa.sign(), other.mantissa.sign()) {
            (a, b) if a != b => return sign_rank(a).cmp(&sign_rank(b)),
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &rhs.mantissa << (rhs.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20, Rounding::Down))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn normalizes_trailing_zeros() {
        let d = Dyadic::new(BigInt::from(12), -4);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), -2);
        assert_eq!(d.to_rational(), rat(3, 4));
    }

    #[test]
    fn rounding_brackets_value() {
        let x = rat(1, 3);
        let lo = Dyadic::from_rational(&x, 10, Rounding::Down);
        let hi = Dyadic::from_rational(&x, 10, Rounding::Up);
        assert!(lo.to_rational() < x && x < hi.to_rational());
        assert_eq!(&hi - &lo, Dyadic::new(BigInt::one(), -10));

        let neg = rat(-1, 3);
        let lo = Dyadic::from_rational(&neg, 4, Rounding::Down);
        assert_eq!(lo.to_rational(), rat(-6, 16));
    }

    #[test]
    fn ordering_across_exponents() {
        let a = Dyadic::new(BigInt::from(3), -1);
        let b = Dyadic::new(BigInt::from(1), 0);
        assert!(a > b);
        assert!(-&a < -&b);
        assert!(Dyadic::zero() < b);
    }

    #[test]
    fn f64_roundtrip_is_exact() {
        for v in [0.1, -3.75, 1e-300, 2.0f64.powi(60)] {
            let d = Dyadic::from_f64(v).unwrap();
            assert_eq!(d.to_f64_lossy(), v);
        }
    }

    #[test]
    fn decimal_strings_round_outward() {
        let third = Dyadic::from_rational(&rat(1, 3), 64, Rounding::Down);
        assert_eq!(third.to_decimal(5, Rounding::Down), "3.3333e-1");
        assert_eq!(third.to_decimal(5, Rounding::Up), "3.3334e-1");
        let eleven = Dyadic::from_integer(11);
        assert_eq!(eleven.to_decimal(3, Rounding::Up), "1.1e1");
        let neg = Dyadic::from_rational(&rat(-2, 3), 64, Rounding::Down);
        assert_eq!(neg.to_decimal(3, Rounding::Down), "-6.67e-1");
        assert_eq!(neg.to_decimal(3, Rounding::Up), "-6.66e-1");
        let almost_one = Dyadic::new(BigInt::from(1023), -10);
        assert_eq!(almost_one.to_decimal(2, Rounding::Up), "1e0");
    }

    #[test]
    fn log2_bounds_bracket() {
        let d = Dyadic::from_integer(BigInt::from(3) << 200u32);
        let (lo, hi) = d.log2_bounds().unwrap();
        let exact = 200.0 + 3f64.log2();
        assert!(lo <= exact && exact <= hi);
        assert!(hi - lo < 1e-12);
        assert!(Dyadic::zero().log2_bounds().is_none());
    }
}
