//! The polynomials `A_n`, `B_n`, `C_n` solving the Hermite-Padé problem
//!
//! ```text
//! F_n(z) = A_n(z) + B_n(z) log_q z = 0          at z = 1, p, ..., p^n
//! A_n(z) f_1(z) + B_n(z) f_2(z) - C_n(z) = O(z^-(n+1))
//! ```
//!
//! with `f_1(z) = sum_k q^k / (z - q^k)` and `f_2(z) = sum_k k q^k / (z - q^k)`,
//! and the integer approximants derived from them.
//!
//! All three polynomials come from closed forms in the weights
//! `w_{k,i} = c_k e_i / (p^i - p^k)`, where `c_k` are the coefficients of
//! [`jacobi_r`] and `e_i` those of `(qt; q)_n`. Writing `r_k` and `s_k` for the
//! row and column sums of `w`, the coefficient of `x^m` in `A_n` is
//! `r_m - s_m`, and `C_n` needs the same differences, so each polynomial is
//! built in `O(n^2)` operations.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cyclotomic::{clearing_factor_e, lcm_p_powers_minus_one};
use crate::error::{Error, Result};
use crate::numeric::{as_integer, enclosure_sum, geometric_tail_bound, rat, rat_int, rat_pow};
use crate::numeric::{truncation_index, BigRat, Enclosure, TailWeight};
use crate::polyring::RatPoly;
use crate::qcore::{p_binomial, p_pochhammer, q_pochhammer, QParam};
use crate::qjacobi::{little_qjacobi, QJacobiParams};

/// Coefficient tables shared by `A_n`, `B_n` and `C_n`.
///
/// Everything is kept as integer numerators over a few common denominators:
/// `r_k - s_k = p^shift X_k / d_n(p)` and `beta_k = p^(-n^2) Y_k`.
struct Tables {
    x: Vec<BigInt>,
    y: Vec<BigInt>,
    shift: i64,
    /// `d_n(p)` and `d_n(p) / (p^j - 1)` for `j = 0..=n` (entry 0 unused)
    lcm: BigInt,
    cofactor: Vec<BigInt>,
}

/// `p^(k(k+1)/2 - nk + i(i+1)/2 - ni - min(i, k))`, the `p`-power of `w_{k,i}`.
fn weight_exponent(n: i64, k: i64, i: i64) -> i64 {
    k * (k + 1) / 2 - n * k + i * (i + 1) / 2 - n * i - k.min(i)
}

fn tables(n: usize, qp: &QParam) -> Tables {
    let p = qp.p();
    let n_i = n as i64;
    let lcm = lcm_p_powers_minus_one(n, p);
    let cofactor: Vec<BigInt> = (0..=n as u64)
        .map(|j| if j == 0 { BigInt::zero() } else { &lcm / (qp.p_pow(j) - 1u32) })
        .collect();
    let bin_n: Vec<BigInt> = (0..=n_i).map(|k| p_binomial(n_i, k, p)).collect();
    let bin_nk: Vec<BigInt> = (0..=n_i).map(|k| p_binomial(n_i + k, k, p)).collect();
    let shift = (0..=n_i)
        .flat_map(|k| (0..=n_i).filter(move |&i| i != k).map(move |i| weight_exponent(n_i, k, i)))
        .min()
        .unwrap_or(0);
    // w_{k,i} = (-1)^(k+i) sgn(i-k) [n k][n+k k][n i] p^E / (p^|i-k| - 1)
    let mut x = vec![BigInt::zero(); n + 1];
    for k in 0..=n {
        let ck = &bin_n[k] * &bin_nk[k];
        for i in (0..=n).filter(|&i| i != k) {
            let mut w = &ck * &bin_n[i] * &cofactor[k.abs_diff(i)]
                * qp.p_pow((weight_exponent(n_i, k as i64, i as i64) - shift) as u64);
            if ((k + i) % 2 == 1) != (i < k) {
                w = -w;
            }
            x[k] += &w;
            x[i] -= w;
        }
    }
    let y = (0..=n)
        .map(|k| &bin_n[k] * &bin_n[k] * &bin_nk[k] * qp.p_pow(((n - k) * (n - k)) as u64))
        .collect();
    Tables { x, y, shift, lcm, cofactor }
}

fn scaled(num: BigInt, den: &BigInt, p_exp: i64, qp: &QParam) -> BigRat {
    BigRat::new(num, den.clone()) * qp.q_pow(-p_exp)
}

/// `B_n(x) = sum_k p^(k^2 - 2kn) [n k]_p^2 [n+k k]_p x^k`.
pub fn poly_b(n: usize, qp: &QParam) -> RatPoly {
    let n_i = n as i64;
    let p = qp.p();
    RatPoly::new(
        (0..=n_i)
            .map(|k| {
                let bin = p_binomial(n_i, k, p);
                rat_int(&bin * &bin * p_binomial(n_i + k, k, p)) * qp.q_pow(2 * k * n_i - k * k)
            })
            .collect(),
    )
}

/// `A_n(x) = sum_k c_k sum_{i != k} e_i (x^k - x^i) / (p^i - p^k)`.
pub fn poly_a(n: usize, qp: &QParam) -> RatPoly {
    a_from_tables(&tables(n, qp), qp)
}

fn a_from_tables(t: &Tables, qp: &QParam) -> RatPoly {
    RatPoly::new(t.x.iter().map(|x| scaled(x.clone(), &t.lcm, t.shift, qp)).collect())
}

/// Closed form of `C_n`, of degree at most `n - 1`:
/// `sum_k (r_k - s_k) S_k(x) + beta_k T_k(x)` with
/// `S_k = sum_{t<k} p^(k-t) x^t / (p^(k-t) - 1)` and
/// `T_k = sum_{t<k} p^(k-t) x^t / (p^(k-t) - 1)^2`.
pub fn poly_c(n: usize, qp: &QParam) -> RatPoly {
    c_from_tables(n, &tables(n, qp), qp)
}

fn c_from_tables(n: usize, t: &Tables, qp: &QParam) -> RatPoly {
    // over the common denominator d_n^2:
    // p^shift X_k p^j (d_n / gap) + p^(-n^2) Y_k p^j (d_n / gap)^2, j = k - t
    let den = &t.lcm * &t.lcm;
    let coeffs = (0..n)
        .map(|deg| {
            let mut s1 = BigInt::zero();
            let mut s2 = BigInt::zero();
            for k in deg + 1..=n {
                let j = k - deg;
                let pj = qp.p_pow(j as u64);
                let cof = &t.cofactor[j];
                s1 += &t.x[k] * &pj * cof;
                s2 += &t.y[k] * pj * cof * cof;
            }
            scaled(s1, &den, t.shift, qp) + scaled(s2, &den, -((n * n) as i64), qp)
        })
        .collect();
    RatPoly::new(coeffs)
}

/// `A_n(p^l)` with each `(x^k - x^i) / (p^i - p^k)` collapsed to an integer
/// before multiplying by the weights.
pub fn poly_a_at_p_power(n: usize, l: usize, qp: &QParam) -> BigRat {
    let n_i = n as i64;
    let p = qp.p();
    let bin_n: Vec<BigInt> = (0..=n_i).map(|k| p_binomial(n_i, k, p)).collect();
    let exps: Vec<i64> = (0..=n_i).map(|k| k * (k + 1) / 2 - n_i * k).collect();
    let low = 2 * exps.iter().min().copied().unwrap_or(0);
    let powers: Vec<BigInt> = (0..=n as u64).map(|k| qp.p_pow(k)).collect();
    let lifted: Vec<BigInt> = (0..=n as u64).map(|k| qp.p_pow(k * l as u64)).collect();
    let mut total = BigInt::zero();
    for k in 0..=n {
        let ck = &bin_n[k] * p_binomial(n_i + k as i64, k as i64, p);
        for i in (0..=n).filter(|&i| i != k) {
            let grouped = (&lifted[k] - &lifted[i]) / (&powers[i] - &powers[k]);
            let term = &ck * &bin_n[i] * grouped * qp.p_pow((exps[k] + exps[i] - low) as u64);
            if (k + i) % 2 == 1 {
                total -= term;
            } else {
                total += term;
            }
        }
    }
    rat_int(total) * qp.q_pow(-low)
}

/// True iff `A_n(p^l) - l B_n(p^l) = 0` for `l = 0..=n`, since
/// `log_q p^l = -l`.
pub fn f_root_check(n: usize, qp: &QParam) -> bool {
    let b = poly_b(n, qp);
    (0..=n).into_par_iter().all(|l| {
        let x = rat_int(qp.p_pow(l as u64));
        poly_a_at_p_power(n, l, qp) - rat_int(l as u64) * b.eval(&x) == BigRat::zero()
    })
}

/// `F_n(q^k) = sum_{l<k} P_n(q^(k-l-1); 1, 1 | q) (q^(l+1); q)_n`.
pub fn f_on_grid(n: usize, k: u64, qp: &QParam) -> BigRat {
    let legendre = little_qjacobi(&QJacobiParams::unit(n, qp.clone())).expect("a = 1 is admissible");
    let k = k as i64;
    (0..k)
        .map(|l| legendre.eval(&qp.q_pow(k - l - 1)) * q_pochhammer(&qp.q_pow(l + 1), qp, n))
        .sum()
}

/// `F_n(q^k) = A_n(q^k) + k B_n(q^k)` from the polynomials.
pub fn f_via_polys(a: &RatPoly, b: &RatPoly, k: u64, qp: &QParam) -> BigRat {
    let x = qp.q_pow(k as i64);
    a.eval(&x) + rat_int(k) * b.eval(&x)
}

/// Closed form of `sum_{k >= 0} q^(k(s+1)) F_n(q^k)`:
/// `(p; p)_n / p^(n^2+n+1) * q^s (q^(s-n+1); q)_n / (q^(s+1); q)_(n+1)^2`.
pub fn mellin_f(n: usize, s: u64, qp: &QParam) -> BigRat {
    let n_i = n as i64;
    let s_i = s as i64;
    let lead = rat_int(p_pochhammer(qp, n)) * qp.q_pow(n_i * n_i + n_i + 1);
    let den = q_pochhammer(&qp.q_pow(s_i + 1), qp, n + 1);
    lead * qp.q_pow(s_i) * q_pochhammer(&qp.q_pow(s_i - n_i + 1), qp, n) / (&den * &den)
}

/// Encloses `sum_{k >= 0} q^(k(s+1)) F_n(q^k)` by direct summation.
pub fn mellin_lattice_sum(n: usize, s: u64, qp: &QParam, bits: u32) -> Result<Enclosure> {
    let a = poly_a(n, qp);
    let b = poly_b(n, qp);
    let ratio = qp.q_pow(s as i64 + 1);
    // |F_n(q^k)| <= |A|_1 + k |B|_1
    let (alpha, beta) = (a.l1_norm(), b.l1_norm());
    let tail = |big_n: u64| -> Result<BigRat> {
        Ok(geometric_tail_bound(&alpha, &ratio, big_n, TailWeight::Unit)?
            + geometric_tail_bound(&beta, &ratio, big_n, TailWeight::Linear)?)
    };
    let last = truncation_index(bits, tail)?;
    let bound = tail(last)?;
    let terms = (0..=last).map(|k| rat_pow(&ratio, k as i64) * f_via_polys(&a, &b, k, qp));
    enclosure_sum(terms, &bound, bits)
}

/// `sum_{k=1}^{n-1} k / (p^k - 1)`.
pub fn harmonic_correction(n: usize, qp: &QParam) -> BigRat {
    (1..n as u64)
        .map(|k| rat_int(k) / rat_int(qp.p_pow(k) - 1u32))
        .sum()
}

/// One approximant with everything needed to audit it.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproximantRecord {
    pub n: usize,
    pub qp: QParam,
    pub a_poly: RatPoly,
    pub b_poly: RatPoly,
    pub c_poly: RatPoly,
    pub a_star: BigRat,
    pub b_star: BigRat,
    pub e: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    /// `b zeta_q(2) - a`, filled in by [`crate::zetaq::error_term`].
    pub error: Option<Enclosure>,
}

/// Builds `a_n* / b_n*` and the cleared integers `a_n = e_n a_n*`,
/// `b_n = e_n b_n*`. Non-integrality is reported as an error, never
/// rounded away.
pub fn approximant(n: usize, qp: &QParam) -> Result<ApproximantRecord> {
    let t = tables(n, qp);
    let a_poly = a_from_tables(&t, qp);
    let b_poly = poly_b(n, qp);
    let c_poly = c_from_tables(n, &t, qp);
    let x = rat_int(qp.p_pow(n as u64));
    let b_star = b_poly.eval(&x);
    let a_star = &b_star * harmonic_correction(n, qp) + c_poly.eval(&x);
    let e = clearing_factor_e(n, qp.p());
    let e_rat = rat_int(e.clone());
    let a = as_integer(&(&e_rat * &a_star)).ok_or(Error::Integrality { n, p: qp.p(), what: "a_n" })?;
    let b = as_integer(&(&e_rat * &b_star)).ok_or(Error::Integrality { n, p: qp.p(), what: "b_n" })?;
    if !b.is_positive() {
        return Err(Error::Consistency(format!("b_{n} = {b} is not positive")));
    }
    Ok(ApproximantRecord {
        n,
        qp: qp.clone(),
        a_poly,
        b_poly,
        c_poly,
        a_star,
        b_star,
        e,
        a,
        b,
        error: None,
    })
}

/// Encloses `A_n(z) f_1(z) + B_n(z) f_2(z) - C_n(z)` at `z = p^m`.
///
/// Any `m >= 1` keeps `z` off the lattice `{q^k : k >= 0}`; `m = 0` hits the
/// pole at `k = 0`. The result is an absolute enclosure at `bits` bits.
pub fn pade_remainder(n: usize, m: u32, qp: &QParam, bits: u32) -> Result<Enclosure> {
    if m == 0 {
        return Err(Error::Domain("z = 1 is a pole of f_1 and f_2".into()));
    }
    let z = rat_int(qp.p_pow(m as u64));
    let a_z = poly_a(n, qp).eval(&z);
    let b_z = poly_b(n, qp).eval(&z);
    let c_z = poly_c(n, qp).eval(&z);
    // q^k / (z - q^k) <= q^k / (z - 1)
    let scale = (&z - BigRat::one()).recip();
    let (alpha, beta) = (a_z.abs() * &scale, b_z.abs() * &scale);
    let q = qp.q().clone();
    let tail = |big_n: u64| -> Result<BigRat> {
        Ok(geometric_tail_bound(&alpha, &q, big_n, TailWeight::Unit)?
            + geometric_tail_bound(&beta, &q, big_n, TailWeight::Linear)?)
    };
    let last = truncation_index(bits, tail)?;
    let bound = tail(last)?;
    let terms = (0..=last)
        .map(|k| {
            let x = qp.q_pow(k as i64);
            &x * (&a_z + rat_int(k) * &b_z) / (&z - &x)
        })
        .chain(std::iter::once(-c_z));
    enclosure_sum(terms, &bound, bits)
}

/// `p`-adic lower bound promised for the denominators: `-floor(n^2/4)`.
pub fn denominator_bound(n: usize) -> i64 {
    -((n * n / 4) as i64)
}

/// `(p^2 + 3p + 1) / (p - 1)^2`, the constant `C_1`.
pub fn c1_closed_form(p: u64) -> BigRat {
    let p = p as i64;
    rat(p * p + 3 * p + 1, (p - 1) * (p - 1))
}
