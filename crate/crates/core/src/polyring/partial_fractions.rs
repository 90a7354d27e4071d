use num_traits::{One, Zero};

use super::poly::RatPoly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::numeric::{rat_int, BigRat};
use crate::qcore::QParam;

/// The residue function `R_n(T; q) = T^n (T q^(1-n); q)_n / (qT; q)_(n+1)^2`
/// in factored form: the numerator roots `T = q^(n-1-i)` (`i < n`) plus
/// `T = 0` of order `n`, and a double pole at each `T = q^-j`, `1 <= j <= n+1`.
///
/// `q^(1-n)` has a positive power of `p` in it, which is an exact rational at
/// `q = 1/p`, so the expansion needs no Laurent machinery.
struct FactoredResidue<'a> {
    n: usize,
    qp: &'a QParam,
}

impl FactoredResidue<'_> {
    /// Coefficients `c_i` of the numerator factors `(1 - c_i T)`.
    fn numerator_scales(&self) -> Vec<BigRat> {
        (0..self.n as i64)
            .map(|i| self.qp.q_pow(i + 1 - self.n as i64))
            .collect()
    }

    fn numerator(&self) -> RatPoly {
        self.numerator_scales()
            .iter()
            .fold(RatPoly::monomial(BigRat::one(), self.n), |acc, c| {
                &acc * &RatPoly::linear(BigRat::one(), -c)
            })
    }

    /// `(1 - q^j T)^2`
    fn pole_factor(&self, j: usize) -> RatPoly {
        RatPoly::linear(BigRat::one(), -self.qp.q_pow(j as i64)).pow(2)
    }

    fn denominator(&self) -> RatPoly {
        (1..=self.n + 1).fold(RatPoly::one(), |acc, j| &acc * &self.pole_factor(j))
    }

    fn value_at(&self, t: &BigRat) -> Option<BigRat> {
        let mut num = num_traits::pow::Pow::pow(t, self.n as u32);
        for c in self.numerator_scales() {
            num *= BigRat::one() - c * t;
        }
        let mut den = BigRat::one();
        for j in 1..=self.n + 1 {
            let f = BigRat::one() - self.qp.q_pow(j as i64) * t;
            den *= &f * &f;
        }
        (!den.is_zero()).then(|| num / den)
    }

    /// `d_(2,j)` and `d_(1,j)` at the pole `T0 = q^-j = p^j`.
    ///
    /// With `H_j(T) = R_n(T) (1 - q^j T)^2`, `d_(2,j) = H_j(T0)` and
    /// `d_(1,j) = -q^-j H_j'(T0)`; the derivative comes from the logarithmic
    /// derivative of the linear factors, so nothing is expanded.
    fn coefficients_at(&self, j: usize) -> (BigRat, BigRat) {
        let t0 = self.qp.q_pow(-(j as i64));
        let one = BigRat::one();
        let mut value = num_traits::pow::Pow::pow(&t0, self.n as u32);
        let mut log_deriv = rat_int(self.n as u64) / &t0;
        for c in self.numerator_scales() {
            let f = &one - &c * &t0;
            log_deriv -= &c / &f;
            value *= f;
        }
        for i in (1..=self.n + 1).filter(|&i| i != j) {
            let qi = self.qp.q_pow(i as i64);
            let f = &one - &qi * &t0;
            log_deriv += (&qi + &qi) / &f;
            value /= &f * &f;
        }
        let d1 = -(self.qp.q_pow(-(j as i64)) * &value * log_deriv);
        (value, d1)
    }
}

/// `R_n(T; q)` expanded as a reduced rational function in `T`.
pub fn residue_r(n: usize, qp: &QParam) -> RatFunc {
    let f = FactoredResidue { n, qp };
    RatFunc::new(f.numerator(), f.denominator()).expect("denominator is nonzero")
}

/// `R_n(t; q)` evaluated directly from the factored form (`None` at a pole).
pub fn residue_r_at(n: usize, qp: &QParam, t: &BigRat) -> Option<BigRat> {
    FactoredResidue { n, qp }.value_at(t)
}

/// Coefficients of
/// `R_n(T; q) = sum_{s=1,2} sum_{j=1}^{n+1} d_(s,j) / (1 - q^j T)^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub n: usize,
    /// `d_(1,j)` for `j = 1..=n+1` (index `j - 1`)
    pub d1: Vec<BigRat>,
    /// `d_(2,j)` for `j = 1..=n+1`
    pub d2: Vec<BigRat>,
}

impl PartialFractions {
    /// Recombines the terms over the common denominator `(qT; q)_(n+1)^2`.
    pub fn recombine(&self, qp: &QParam) -> Result<RatFunc> {
        let f = FactoredResidue { n: self.n, qp };
        let full = f.denominator();
        let mut numerator = RatPoly::zero();
        for j in 1..=self.n + 1 {
            let (others, rem) = full.div_rem(&f.pole_factor(j));
            debug_assert!(rem.is_zero());
            let simple = RatPoly::linear(BigRat::one(), -qp.q_pow(j as i64));
            let local = &RatPoly::constant(self.d2[j - 1].clone())
                + &simple.scale(&self.d1[j - 1]);
            numerator = &numerator + &(&others * &local);
        }
        RatFunc::new(numerator, full)
    }
}

/// Partial fraction decomposition of `r`, which must equal `R_n(T; q)`.
///
/// The poles are known in advance (double poles at `T = q^-j`), so the
/// coefficients come straight from
/// `d_(s,j) = (-1)^s q^(js) (d/dT)^(2-s) [R_n(T) (T - q^-j)^2]` at `T = q^-j`.
/// The decomposition is then recombined and compared with `r` exactly; a
/// mismatch is reported as a consistency failure.
pub fn partial_fractions_double_poles(r: &RatFunc, qp: &QParam, n: usize) -> Result<PartialFractions> {
    if *r != residue_r(n, qp) {
        return Err(Error::Precondition(format!(
            "rational function is not R_{n}(T; q) at p = {}",
            qp.p()
        )));
    }
    let f = FactoredResidue { n, qp };
    let (d2, d1) = (1..=n + 1).map(|j| f.coefficients_at(j)).unzip();
    let pf = PartialFractions { n, d1, d2 };
    if pf.recombine(qp)? != *r {
        return Err(Error::Consistency(format!(
            "partial fractions of R_{n} do not recombine at p = {}",
            qp.p()
        )));
    }
    Ok(pf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn qp(p: u64) -> QParam {
        QParam::new(p).unwrap()
    }

    #[test]
    fn r0_is_a_pure_double_pole() {
        let q2 = qp(2);
        let r = residue_r(0, &q2);
        let pf = partial_fractions_double_poles(&r, &q2, 0).unwrap();
        assert_eq!(pf.d2, vec![rat(1, 1)]);
        assert_eq!(pf.d1, vec![rat(0, 1)]);
    }

    #[test]
    fn residue_function_is_proper() {
        for n in 0..=6 {
            let f = FactoredResidue { n, qp: &qp(3) };
            assert_eq!(f.numerator().degree(), Some(2 * n));
            assert_eq!(f.denominator().degree(), Some(2 * n + 2));
            assert!(residue_r(n, &qp(3)).is_proper());
        }
    }

    #[test]
    fn factored_value_matches_expansion() {
        let q2 = qp(2);
        for n in 0..=5 {
            let r = residue_r(n, &q2);
            for t in [rat(1, 3), rat(-2, 1), rat(5, 7)] {
                assert_eq!(r.eval(&t), residue_r_at(n, &q2, &t));
            }
        }
    }

    /// Independent route: `G(T) = R_n(T) (T - q^-j)^2` as an expanded
    /// quotient `num / (q^(2j) rest)`, differentiated with the quotient rule,
    /// then `d_(s,j) = (-1)^s q^(js) G^(2-s)(q^-j)`.
    fn expanded_coefficients(n: usize, qp: &QParam) -> (Vec<BigRat>, Vec<BigRat>) {
        let f = FactoredResidue { n, qp };
        let num = f.numerator();
        let (mut d1, mut d2) = (Vec::new(), Vec::new());
        for j in 1..=n + 1 {
            let (rest, _) = f.denominator().div_rem(&f.pole_factor(j));
            let rest = rest.scale(&qp.q_pow(2 * j as i64));
            let t0 = qp.q_pow(-(j as i64));
            let g = num.eval(&t0) / rest.eval(&t0);
            let dg = (num.derivative().eval(&t0) * rest.eval(&t0)
                - num.eval(&t0) * rest.derivative().eval(&t0))
                / (rest.eval(&t0) * rest.eval(&t0));
            d2.push(qp.q_pow(2 * j as i64) * g);
            d1.push(-(qp.q_pow(j as i64) * dg));
        }
        (d1, d2)
    }

    #[test]
    fn factored_derivative_matches_quotient_rule() {
        for p in [2u64, 3, 5] {
            let qp = qp(p);
            for n in 0..=10 {
                let pf = partial_fractions_double_poles(&residue_r(n, &qp), &qp, n).unwrap();
                let (d1, d2) = expanded_coefficients(n, &qp);
                assert_eq!(pf.d1, d1, "n={n} p={p}");
                assert_eq!(pf.d2, d2, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn recombination_is_exact() {
        for p in [2u64, 3, 5] {
            let qp = qp(p);
            for n in 0..=10 {
                let r = residue_r(n, &qp);
                let pf = partial_fractions_double_poles(&r, &qp, n).unwrap();
                assert_eq!(pf.recombine(&qp).unwrap(), r);
            }
        }
    }

    #[test]
    fn invariant_under_uncancelled_input() {
        // Multiplying numerator and denominator by a common factor does not
        // change the (normalized) input, hence not the coefficients.
        let q3 = qp(3);
        let f = FactoredResidue { n: 3, qp: &q3 };
        let extra = RatPoly::from_integers(&[7, -2, 1]);
        let padded = RatFunc::new(&f.numerator() * &extra, &f.denominator() * &extra).unwrap();
        let a = partial_fractions_double_poles(&padded, &q3, 3).unwrap();
        let b = partial_fractions_double_poles(&residue_r(3, &q3), &q3, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_other_functions() {
        let q2 = qp(2);
        let r = residue_r(2, &q2);
        assert!(matches!(
            partial_fractions_double_poles(&r, &q2, 3),
            Err(Error::Precondition(_))
        ));
    }
}
