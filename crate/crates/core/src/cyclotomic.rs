//! Cyclotomic polynomials over the integers and the denominator-clearing
//! factors built from them.
//!
//! `Phi_d` is obtained by exact division,
//! `Phi_d(x) = (x^d - 1) / prod_{e | d, e < d} Phi_e(x)`, never through complex
//! roots of unity. Results are memoized process-wide.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::int_pow;

/// Polynomial with big-integer coefficients, lowest degree first, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `x^m - 1`
    pub fn x_pow_minus_one(m: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[0] = -BigInt::one();
        coeffs[m] += 1;
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Exact division by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let d = divisor.degree()?;
        if !divisor.coeffs[d].is_one() {
            return None;
        }
        let Some(top) = self.degree() else {
            return Some(self.clone());
        };
        if top < d {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); top - d + 1];
        for i in (0..=top - d).rev() {
            let c = rem[i + d].clone();
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * b;
            }
            quot[i] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }
}

type Cache = Mutex<HashMap<u64, Arc<IntPoly>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn divisors(d: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= d {
        if d % i == 0 {
            small.push(i);
            if i != d / i {
                large.push(d / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The `d`-th cyclotomic polynomial.
pub fn cyclotomic_poly(d: u64) -> Result<Arc<IntPoly>> {
    if d < 1 {
        return Err(Error::Domain("cyclotomic index must be at least 1".into()));
    }
    if let Some(hit) = cache().lock().expect("cache poisoned").get(&d) {
        return Ok(Arc::clone(hit));
    }
    // Computed outside the lock; concurrent misses produce identical values.
    let mut poly = IntPoly::x_pow_minus_one(d as usize);
    for e in divisors(d).into_iter().filter(|&e| e < d) {
        let phi = cyclotomic_poly(e)?;
        poly = poly.div_exact_monic(&phi).ok_or_else(|| {
            Error::Consistency(format!("Phi_{e} does not divide x^{d} - 1 exactly"))
        })?;
    }
    let poly = Arc::new(poly);
    let mut guard = cache().lock().expect("cache poisoned");
    Ok(Arc::clone(guard.entry(d).or_insert(poly)))
}

/// `lcm{p^j - 1 : 1 <= j <= n}` (one for `n = 0`).
pub fn lcm_p_powers_minus_one(n: usize, p: u64) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, j| acc.lcm(&(int_pow(p, j) - 1u32)))
}

/// `d_n(p) = prod_{d=1}^n Phi_d(p)`, which equals `lcm{p^j - 1 : j <= n}`.
///
/// The lcm identity is cross-checked on every call in debug builds and on
/// every sixteenth `n` otherwise; a mismatch panics.
pub fn d_n_value(n: usize, p: u64) -> BigInt {
    let x = BigInt::from(p);
    let value = (1..=n as u64).fold(BigInt::one(), |acc, d| {
        acc * cyclotomic_poly(d).expect("d >= 1").eval(&x)
    });
    if cfg!(debug_assertions) || n % 16 == 0 {
        assert_eq!(
            value,
            lcm_p_powers_minus_one(n, p),
            "d_{n}({p}) differs from lcm of p^j - 1"
        );
    }
    value
}

/// `e_n = p^floor(n^2/4) d_n(p)^2`.
pub fn clearing_factor_e(n: usize, p: u64) -> BigInt {
    let d = d_n_value(n, p);
    int_pow(p, (n * n / 4) as u64) * &d * &d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn totient(mut m: u64) -> u64 {
        let mut result = m;
        let mut f = 2;
        while f * f <= m {
            if m % f == 0 {
                while m % f == 0 {
                    m /= f;
                }
                result -= result / f;
            }
            f += 1;
        }
        if m > 1 {
            result -= result / m;
        }
        result
    }

    fn ints(cs: &[i64]) -> IntPoly {
        IntPoly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn small_cases() {
        assert_eq!(*cyclotomic_poly(1).unwrap(), ints(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(6).unwrap(), ints(&[1, -1, 1]));
        assert_eq!(*cyclotomic_poly(12).unwrap(), ints(&[1, 0, -1, 0, 1]));
        assert!(cyclotomic_poly(0).is_err());
    }

    #[test]
    fn degree_is_totient_and_constant_is_unit() {
        for d in 1..=100u64 {
            let phi = cyclotomic_poly(d).unwrap();
            assert_eq!(phi.degree(), Some(totient(d) as usize), "d={d}");
            let c0 = &phi.coeffs()[0];
            assert!(c0 == &BigInt::one() || c0 == &-BigInt::one());
        }
    }

    #[test]
    fn products_over_divisors_give_x_pow_minus_one() {
        for m in 1..=60u64 {
            let product = divisors(m)
                .into_iter()
                .fold(ints(&[1]), |acc, d| acc.mul(&cyclotomic_poly(d).unwrap()));
            assert_eq!(product, IntPoly::x_pow_minus_one(m as usize), "m={m}");
        }
    }

    #[test]
    fn d_n_examples() {
        assert_eq!(d_n_value(0, 2), BigInt::one());
        assert_eq!(d_n_value(3, 2), BigInt::from(21));
        assert_eq!(clearing_factor_e(0, 5), BigInt::one());
        assert_eq!(clearing_factor_e(1, 2), BigInt::one());
        // e_2 = 2^1 * (1 * 3)^2
        assert_eq!(clearing_factor_e(2, 2), BigInt::from(18));
    }

    #[test]
    fn d_n_equals_lcm() {
        for p in [2u64, 3, 5] {
            for n in 0..=40 {
                assert_eq!(d_n_value(n, p), lcm_p_powers_minus_one(n, p), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn e_n_divisible_by_d_n_squared() {
        for n in 0..=20 {
            let d = d_n_value(n, 3);
            assert!(clearing_factor_e(n, 3).is_multiple_of(&(&d * &d)));
        }
    }

    #[test]
    fn cache_is_shared_across_threads() {
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| cyclotomic_poly(210).unwrap()))
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }
}
