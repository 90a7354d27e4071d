use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::numeric::BigRat;

/// Dense polynomial `sum_i c_i x^i` with exact rational coefficients.
///
/// Trailing zero coefficients are stripped, so the zero polynomial has an
/// empty coefficient list and no degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        Self::new(vec![c])
    }

    /// `c x^degree`
    pub fn monomial(c: BigRat, degree: usize) -> Self {
        let mut coeffs = vec![BigRat::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(BigRat::one(), 1)
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRat::from_integer(BigInt::from(c))).collect())
    }

    /// `a + b x`
    pub fn linear(a: BigRat, b: BigRat) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigRat {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&BigRat> {
        self.coeffs.last()
    }

    /// Horner evaluation in integers: with `x = u/v` and `L` the lcm of the
    /// coefficient denominators, `sum (L c_i) u^i v^(d-i) / (L v^d)`.
    pub fn eval(&self, x: &BigRat) -> BigRat {
        if self.is_zero() {
            return BigRat::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let (u, v) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut v_pow = BigInt::one();
        for (i, c) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                v_pow *= v;
            }
            acc = acc * u + c.numer() * (&lcm / c.denom()) * &v_pow;
        }
        BigRat::new(acc, lcm * v_pow)
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `x^k p(x)`
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    /// `p(c x)`
    pub fn compose_scale(&self, c: &BigRat) -> Self {
        let mut power = BigRat::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &power);
            power *= c;
        }
        Self::new(coeffs)
    }

    /// Ordinary derivative `d/dx`.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Scaled so the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[d].recip();
        let mut rem = self.coeffs.clone();
        let Some(top) = self.degree().filter(|&t| t >= d) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![BigRat::zero(); top - d + 1];
        for i in (0..=top - d).rev() {
            let c = &rem[i + d] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * b;
            }
            quot[i] = c;
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// True when a gcd modulo a large prime certifies that `self` and `other`
    /// share no factor. `false` means "not certified", not "not coprime".
    ///
    /// Valid because, for a prime dividing neither leading coefficient of the
    /// denominator-cleared polynomials, the modular gcd has degree at least
    /// that of the true gcd.
    pub fn certified_coprime(&self, other: &RatPoly) -> bool {
        const PRIMES: [u64; 3] = [(1 << 61) - 1, 4_611_686_018_427_387_847, 2_305_843_009_213_693_921];
        let (Some(a), Some(b)) = (self.cleared(), other.cleared()) else {
            return false;
        };
        PRIMES.iter().any(|&m| {
            let (ra, rb) = (reduce_mod(&a, m), reduce_mod(&b, m));
            match (ra.last(), rb.last()) {
                (Some(&la), Some(&lb)) if la != 0 && lb != 0 => gcd_degree_mod(ra, rb, m) == 0,
                _ => false,
            }
        })
    }

    /// Integer coefficients of `L p(x)`, `L` the lcm of the denominators.
    fn cleared(&self) -> Option<Vec<BigInt>> {
        if self.is_zero() {
            return None;
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Some(self.coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
    }

    /// Sum of absolute values of the coefficients; bounds `|p(x)|` on
    /// `|x| <= 1`.
    pub fn l1_norm(&self) -> BigRat {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

fn reduce_mod(coeffs: &[BigInt], m: u64) -> Vec<u64> {
    let m_big = BigInt::from(m);
    coeffs
        .iter()
        .map(|c| {
            let r = c.mod_floor(&m_big);
            r.iter_u64_digits().next().unwrap_or(0)
        })
        .collect()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, m - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of the gcd over `Z/m` (`m` prime) of two nonzero polynomials.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, m: u64) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lead_inv = inv_mod(*b.last().expect("nonempty"), m);
        while a.len() >= b.len() {
            let c = mul_mod(*a.last().expect("nonempty"), lead_inv, m);
            let shift = a.len() - b.len();
            for (j, &bj) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + m - mul_mod(c, bj, m)) % m;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
}

impl Add for &RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::new(coeffs)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use proptest::prelude::*;

    #[test]
    fn difference_of_squares() {
        let a = RatPoly::from_integers(&[-1, 1]);
        let b = RatPoly::from_integers(&[1, 1]);
        assert_eq!(&a * &b, RatPoly::from_integers(&[-1, 0, 1]));
    }

    #[test]
    fn zero_polynomial() {
        let z = RatPoly::zero();
        assert_eq!(z.degree(), None);
        assert_eq!(z.eval(&rat(7, 3)), BigRat::zero());
        assert_eq!(RatPoly::from_integers(&[0, 0, 0]), z);
    }

    #[test]
    fn compose_and_shift() {
        let p = RatPoly::from_integers(&[1, 2, 3]);
        let c = rat(1, 2);
        let composed = p.compose_scale(&c);
        assert_eq!(composed.eval(&rat(5, 1)), p.eval(&rat(5, 2)));
        assert_eq!(p.shift_up(2).eval(&rat(3, 1)), p.eval(&rat(3, 1)) * rat(9, 1));
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let common = RatPoly::from_integers(&[-2, 1]);
        let a = &common * &RatPoly::from_integers(&[1, 1]);
        let b = &common * &RatPoly::from_integers(&[3, 0, 1]);
        assert_eq!(a.gcd(&b), common);
    }

    fn small_poly() -> impl Strategy<Value = RatPoly> {
        prop::collection::vec((-20i64..20, 1i64..6), 0..6).prop_map(|cs| {
            RatPoly::new(cs.into_iter().map(|(a, b)| rat(a, b)).collect())
        })
    }

    #[test]
    fn coprimality_certificate() {
        let a = RatPoly::new(vec![rat(1, 3), rat(-2, 5), rat(1, 1)]);
        let b = RatPoly::from_integers(&[7, 0, 0, 1]);
        assert!(a.certified_coprime(&b));
        let common = RatPoly::from_integers(&[-2, 1]);
        assert!(!(&common * &a).certified_coprime(&(&common * &b)));
    }

    proptest! {
        #[test]
        fn division_identity(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree() || r.is_zero());
        }

        #[test]
        fn evaluation_is_a_ring_map(a in small_poly(), b in small_poly(), x in -5i64..5) {
            let x = rat(x, 3);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a - &b).eval(&x), a.eval(&x) - b.eval(&x));
        }

        #[test]
        fn certificate_implies_trivial_gcd(a in small_poly(), b in small_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            if a.certified_coprime(&b) {
                prop_assert_eq!(a.gcd(&b).degree(), Some(0));
            }
        }
    }
}
