use num_traits::Zero;

use super::poly::RatPoly;
use crate::error::{Error, Result};
use crate::numeric::BigRat;

/// Reduced quotient `num / den` of polynomials with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: RatPoly,
    den: RatPoly,
}

impl RatFunc {
    /// Cancels the common factor and normalizes the denominator to be monic.
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: RatPoly::one(),
            });
        }
        let (num, den) = if num.certified_coprime(&den) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let inv = den.leading_coeff().expect("nonzero").recip();
        Ok(RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &BigRat) -> Option<BigRat> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// True when the numerator degree is below the denominator degree.
    pub fn is_proper(&self) -> bool {
        self.num.degree() < self.den.degree() || self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn cancels_common_factors() {
        let common = RatPoly::from_integers(&[1, 1]);
        let num = &common * &RatPoly::from_integers(&[2, 0, 1]);
        let den = &common * &RatPoly::from_integers(&[-6, 3]);
        let f = RatFunc::new(num, den).unwrap();
        assert_eq!(f.den(), &RatPoly::from_integers(&[-2, 1]));
        assert_eq!(f.num(), &RatPoly::new(vec![rat(2, 3), rat(0, 1), rat(1, 3)]));
        assert_eq!(f.eval(&rat(2, 1)), None);
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(RatFunc::new(RatPoly::one(), RatPoly::zero()).is_err());
    }
}
