//! Little q-Jacobi polynomials `P_n(x; a, b | q)`.
//!
//! Two independent constructions are provided: the terminating basic
//! hypergeometric sum and the Rodrigues formula. The Rodrigues route is
//! limited to `a = q^alpha`, `b = q^beta` with nonnegative integers `alpha`,
//! `beta`, where the infinite-product ratio collapses to a polynomial.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{enclosure_sum, geometric_tail_bound, rat_int, rat_pow, truncation_index};
use crate::numeric::{BigRat, Enclosure, TailWeight};
use crate::polyring::RatPoly;
use crate::qcore::{p_binomial, pochhammer, Base, QDerivative, QParam};

/// Degree and parameters of a little q-Jacobi polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QJacobiParams {
    pub n: usize,
    pub a: BigRat,
    pub b: BigRat,
    pub qp: QParam,
}

impl QJacobiParams {
    /// `P_n(x; 1, 1 | q)`, the case used by the approximants.
    pub fn unit(n: usize, qp: QParam) -> Self {
        QJacobiParams {
            n,
            a: BigRat::one(),
            b: BigRat::one(),
            qp,
        }
    }
}

/// `sum_k (q^-n; q)_k (ab q^(n+1); q)_k / ((q; q)_k (aq; q)_k) q^k x^k`.
pub fn little_qjacobi(params: &QJacobiParams) -> Result<RatPoly> {
    let QJacobiParams { n, a, b, qp } = params;
    let q = qp.q();
    let n_i = *n as i64;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut term = BigRat::one();
    coeffs.push(term.clone());
    for k in 0..n_i {
        // ratio of consecutive summands, k -> k+1
        let den_a = BigRat::one() - a * qp.q_pow(k + 1);
        if den_a.is_zero() {
            return Err(Error::Domain(format!(
                "(aq; q)_{} vanishes for a = {a}",
                k + 1
            )));
        }
        let num = (BigRat::one() - qp.q_pow(k - n_i)) * (BigRat::one() - a * b * qp.q_pow(n_i + 1 + k));
        let den = (BigRat::one() - qp.q_pow(k + 1)) * den_a;
        term = term * num / den * q;
        coeffs.push(term.clone());
    }
    Ok(RatPoly::new(coeffs))
}

/// `(c x; q)_m` as a polynomial in `x`.
fn shifted_pochhammer_poly(c: &BigRat, qp: &QParam, m: usize) -> RatPoly {
    (0..m as i64).fold(RatPoly::one(), |acc, j| {
        &acc * &RatPoly::linear(BigRat::one(), -(c * qp.q_pow(j)))
    })
}

/// Right-hand side of the Rodrigues formula at `alpha = beta = 0`:
/// `q^(n(n-1)/2) (1-q)^n / (q; q)_n * D_p^n[(qx; q)_n x^n]`.
pub fn rodrigues_rhs(n: usize, qp: &QParam) -> RatPoly {
    rodrigues(n, 0, 0, qp).expect("alpha = beta = 0 always divides exactly")
}

/// `P_n(x; q^alpha, q^beta | q)` from the Rodrigues formula, dividing
/// `(qx; q)_beta x^alpha` out of the right-hand side exactly.
pub fn rodrigues(n: usize, alpha: u32, beta: u32, qp: &QParam) -> Result<RatPoly> {
    let q = qp.q();
    let inner = shifted_pochhammer_poly(q, qp, beta as usize + n).shift_up(alpha as usize + n);
    let derived = inner.q_derivative_n(qp, Base::P, n)?;
    let n_i = n as i64;
    let constant = qp.q_pow(n_i * alpha as i64 + n_i * (n_i - 1) / 2)
        * rat_pow(&(BigRat::one() - q), n_i)
        / pochhammer(&qp.q_pow(alpha as i64 + 1), q, n);
    let rhs = derived.scale(&constant);
    let divisor = shifted_pochhammer_poly(q, qp, beta as usize).shift_up(alpha as usize);
    let (quot, rem) = rhs.div_rem(&divisor);
    if !rem.is_zero() {
        return Err(Error::Consistency(format!(
            "Rodrigues right-hand side not divisible by (qx;q)_{beta} x^{alpha}"
        )));
    }
    Ok(quot)
}

/// `z -> P_n(pz; 1, 1 | q)`, the polynomial entering the remainder function.
pub fn jacobi_r(n: usize, qp: &QParam) -> RatPoly {
    little_qjacobi(&QJacobiParams::unit(n, qp.clone()))
        .expect("a = 1 never makes (aq; q)_k vanish")
        .compose_scale(&qp.p_rat())
}

/// Closed-form coefficients of [`jacobi_r`]:
/// `(-1)^k p^(k(k+1)/2 - nk) [n k]_p [n+k k]_p`.
pub fn jacobi_r_coefficient(n: usize, k: usize, qp: &QParam) -> BigRat {
    let (n_i, k_i) = (n as i64, k as i64);
    let mag = rat_int(p_binomial(n_i, k_i, qp.p()) * p_binomial(n_i + k_i, k_i, qp.p()))
        * rat_pow(&qp.p_rat(), k_i * (k_i + 1) / 2 - n_i * k_i);
    if k % 2 == 1 {
        -mag
    } else {
        mag
    }
}

/// Upper bound on `prod_{j >= 1} (1 + x q^j)` for `x >= 0`.
fn product_bound(x: &BigRat, qp: &QParam) -> BigRat {
    let one = BigRat::one();
    let mut j = 1i64;
    let mut prod = one.clone();
    loop {
        // prod_{i > j-1}(1 + x q^i) <= 1 / (1 - sum_{i >= j} x q^i) once the sum is < 1
        let rest = x * qp.q_pow(j) / (&one - qp.q());
        if rest < rat_int(1) / rat_int(2) {
            return prod / (&one - rest);
        }
        prod *= &one + x * qp.q_pow(j);
        j += 1;
    }
}

/// Lower bound on `(q; q)_inf`.
fn q_infinite_lower(qp: &QParam) -> BigRat {
    let one = BigRat::one();
    let mut prod = one.clone();
    let mut j = 1i64;
    loop {
        let rest = qp.q_pow(j) / (&one - qp.q());
        if rest < rat_int(1) / rat_int(4) {
            return prod * (&one - rest);
        }
        prod *= &one - qp.q_pow(j);
        j += 1;
    }
}

/// Encloses `sum_{k >= 0} (bq; q)_k / (q; q)_k (aq)^k P_n(q^k; a, b | q) q^(km)`.
///
/// The orthogonality relation makes this zero for `m < n`. Requires
/// `|a| q^(1+m) < 1` for convergence.
pub fn orthogonality_defect(
    n: usize,
    m: usize,
    a: &BigRat,
    b: &BigRat,
    qp: &QParam,
    precision_bits: u32,
) -> Result<Enclosure> {
    let poly = little_qjacobi(&QJacobiParams {
        n,
        a: a.clone(),
        b: b.clone(),
        qp: qp.clone(),
    })?;
    let ratio = a.abs() * qp.q_pow(1 + m as i64);
    if ratio >= BigRat::one() {
        return Err(Error::Domain(format!("orthogonality sum diverges for a = {a}")));
    }
    // |(bq;q)_k / (q;q)_k| <= prod(1 + |b| q^j) / (q;q)_inf and |P_n(q^k)| <= l1 norm
    let c = product_bound(&b.abs(), qp) / q_infinite_lower(qp) * poly.l1_norm();
    let tail = |big_n: u64| geometric_tail_bound(&c, &ratio, big_n, TailWeight::Unit);
    let last = truncation_index(precision_bits, tail)?;
    let bound = tail(last)?;
    let q = qp.q();
    let bq = b * q;
    let aq = a * q;
    let mut weight = BigRat::one();
    let mut terms = Vec::with_capacity(last as usize + 1);
    for k in 0..=last as i64 {
        if k > 0 {
            weight = weight * (BigRat::one() - &bq * qp.q_pow(k - 1)) / (BigRat::one() - qp.q_pow(k)) * &aq;
        }
        let x = qp.q_pow(k);
        terms.push(&weight * poly.eval(&x) * qp.q_pow(k * m as i64));
    }
    enclosure_sum(terms, &bound, precision_bits)
}
