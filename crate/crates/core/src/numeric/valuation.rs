use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::BigRat;

/// Exponent of a base `p >= 2` in a rational number. Zero has valuation +∞,
/// represented by `order == None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Valuation {
    base: u64,
    order: Option<i64>,
}

impl Valuation {
    pub fn finite(base: u64, order: i64) -> Self {
        Valuation {
            base,
            order: Some(order),
        }
    }

    pub fn infinite(base: u64) -> Self {
        Valuation { base, order: None }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// The exponent, or `None` for +∞.
    pub fn value(&self) -> Option<i64> {
        self.order
    }

    pub fn is_infinite(&self) -> bool {
        self.order.is_none()
    }

    /// `self >= bound` with +∞ above every integer.
    pub fn at_least(&self, bound: i64) -> bool {
        self.order.is_none_or(|v| v >= bound)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        assert_eq!(self.base, rhs.base, "valuations in different bases");
        let order = match (self.order, rhs.order) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Valuation {
            base: self.base,
            order,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.base != other.base {
            return None;
        }
        Some(match (self.order, other.order) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(&b),
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "+inf"),
        }
    }
}

fn multiplicity(x: &BigInt, p: &BigInt) -> i64 {
    let mut count = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        rest = q;
        count += 1;
    }
}

/// Largest `e` with `p^e` dividing `x`: negative when `p` divides the
/// denominator, +∞ for `x = 0`. For composite `p` this is the exponent of `p`
/// itself, which is additive only when `p` is prime.
///
/// Panics if `p < 2`.
pub fn p_adic_valuation(x: &BigRat, p: u64) -> Valuation {
    assert!(p >= 2, "valuation base must be at least 2");
    if x.is_zero() {
        return Valuation::infinite(p);
    }
    let base = BigInt::from(p);
    let up = multiplicity(x.numer(), &base);
    let down = multiplicity(x.denom(), &base);
    Valuation::finite(p, up - down)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(p_adic_valuation(&rat(3, 4), 2).value(), Some(-2));
        assert_eq!(p_adic_valuation(&rat(8, 1), 2).value(), Some(3));
        assert_eq!(p_adic_valuation(&rat(21, 1), 2).value(), Some(0));
        assert!(p_adic_valuation(&rat(0, 1), 7).is_infinite());
    }

    #[test]
    fn infinity_dominates() {
        assert!(Valuation::infinite(3).at_least(i64::MAX));
        assert!(Valuation::infinite(3) > Valuation::finite(3, 10));
        assert!((Valuation::infinite(3) + Valuation::finite(3, -4)).is_infinite());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn additive_on_products(
            a in -100_000i64..100_000, b in 1i64..100_000,
            c in -100_000i64..100_000, d in 1i64..100_000,
            p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
        ) {
            let x = rat(a, b);
            let y = rat(c, d);
            let lhs = p_adic_valuation(&(&x * &y), p);
            let rhs = p_adic_valuation(&x, p) + p_adic_valuation(&y, p);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
