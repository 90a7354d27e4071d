//! Enclosures of `zeta_q(1)`, `zeta_q(2)` and the error `|b_n zeta_q(2) - a_n|`.
//!
//! The error is computed along independent routes:
//!
//! * definition: `b_n * zeta_q(2) - a_n` from an enclosure of `zeta_q(2)`
//!   carried with `bitlen(b_n)` guard bits;
//! * remainder series: `e_n sum_{k >= 1} F_n(q^k) / (p^(n+k) - 1)`;
//! * double lattice sum (small `n` only, see [`double_integral_check`]).
//!
//! Precision is always absolute: an enclosure at `bits` has endpoints on the
//! grid `2^-bits`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cyclotomic::{clearing_factor_e, d_n_value};
use crate::error::{Error, Result};
use crate::hermite_pade::ApproximantRecord;
use crate::numeric::{bit_length, enclosure_sum, geometric_tail_bound, rat_int, rat_pow};
use crate::numeric::{truncation_index, BigRat, Enclosure, TailWeight};
use crate::qcore::{q_pochhammer, QParam};
use crate::qjacobi::{little_qjacobi, QJacobiParams};

/// `sum_{k >= 1} k^(s-1) q^k / (1 - q^k)` for `s` in `{1, 2}`.
///
/// The tail after `N` is majorized by `1/(1-q) sum_{k > N} k^(s-1) q^k`.
pub fn zeta_q(s: u32, qp: &QParam, bits: u32) -> Result<Enclosure> {
    let weight = match s {
        1 => TailWeight::Unit,
        2 => TailWeight::Linear,
        _ => return Err(Error::Domain(format!("zeta_q is only provided for s = 1, 2, got {s}"))),
    };
    lambert_series(qp, 1, weight, bits)
}

/// `sum_{k >= 1} k q^(rk) / (1 - q^k)`; `r = 1` is `zeta_q(2)`.
pub fn zeta_q_r_variant(r: u32, qp: &QParam, bits: u32) -> Result<Enclosure> {
    if r == 0 {
        return Err(Error::Domain("the shifted series needs r >= 1".into()));
    }
    lambert_series(qp, r, TailWeight::Linear, bits)
}

fn lambert_series(qp: &QParam, r: u32, weight: TailWeight, bits: u32) -> Result<Enclosure> {
    let one = BigRat::one();
    let c = (&one - qp.q()).recip();
    let ratio = qp.q_pow(r as i64);
    let tail = |n: u64| geometric_tail_bound(&c, &ratio, n, weight);
    let last = truncation_index(bits, tail)?.max(1);
    let bound = tail(last)?;
    let linear = weight != TailWeight::Unit;
    // q^(rk) / (1 - q^k) = 1 / (p^((r-1)k) (p^k - 1)); left unreduced
    let terms = (1..=last).map(|k| {
        let den = qp.p_pow((r as u64 - 1) * k) * (qp.p_pow(k) - 1u32);
        let num = if linear { BigInt::from(k) } else { BigInt::one() };
        BigRat::new_raw(num, den)
    });
    enclosure_sum(terms, &bound, bits)
}

/// `sum_{i=1}^{r-1} q^i / (1 - q^i)^2`, the exact gap `zeta_q(2) - variant(r)`.
pub fn variant_gap(r: u32, qp: &QParam) -> BigRat {
    (1..r as i64)
        .map(|i| {
            let gap = BigRat::one() - qp.q_pow(i);
            qp.q_pow(i) / (&gap * &gap)
        })
        .sum()
}

/// True iff `zeta_q(2) - variant(r)` overlaps the exact gap and both series
/// enclosures are narrower than `2^-48`.
pub fn variant_identity_check(r: u32, qp: &QParam, bits: u32) -> Result<bool> {
    let full = zeta_q(2, qp, bits)?;
    let shifted = zeta_q_r_variant(r, qp, bits)?;
    let narrow = full.width_below(48) && shifted.width_below(48);
    Ok(narrow && (&full - &shifted).contains(&variant_gap(r, qp)))
}

/// `e_n (q;q)_n^2 q^(n+1) q^(3n(n+1)/2) / ((1-q)^2 (q^(n+1); q)_(n+1))`.
pub fn upper_bound_21(n: usize, qp: &QParam) -> BigRat {
    let n_i = n as i64;
    let qq = q_pochhammer(qp.q(), qp, n);
    let gap = BigRat::one() - qp.q();
    rat_int(clearing_factor_e(n, qp.p())) * &qq * &qq * qp.q_pow(n_i + 1 + 3 * n_i * (n_i + 1) / 2)
        / (&gap * &gap * q_pochhammer(&qp.q_pow(n_i + 1), qp, n + 1))
}

/// How many bits of absolute precision an error enclosure is computed with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionPolicy {
    /// `ceil(1.9 n^2 log2 p) + 64`, doubled until the enclosure is positive.
    Auto,
    Fixed(u32),
}

impl PrecisionPolicy {
    pub fn bits_for(self, n: usize, p: u64) -> u32 {
        match self {
            PrecisionPolicy::Fixed(bits) => bits,
            PrecisionPolicy::Auto => auto_bits(n, p),
        }
    }
}

/// `ceil(1.9 n^2 log2 p) + 64`.
pub fn auto_bits(n: usize, p: u64) -> u32 {
    let scaled = 1.9 * (n * n) as f64 * (p as f64).log2();
    scaled.ceil() as u32 + 64
}

/// The error of one approximant together with its exponent columns.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRecord {
    pub n: usize,
    pub qp: QParam,
    /// `|b_n zeta_q(2) - a_n|`
    pub err: Enclosure,
    pub bound21: BigRat,
    /// `log_p(err) / n^2`, absent for `n = 0`
    pub log_p_err_over_n2: Option<Enclosure>,
    /// `log_{b_n}(err)`, absent when `b_n = 1`
    pub log_bn_err: Option<Enclosure>,
}

impl ErrorRecord {
    /// `err.hi <= bound21`
    pub fn within_bound(&self) -> bool {
        self.err.hi().to_rational() <= self.bound21
    }
}

/// `b zeta_q(2) - a` with `bitlen(b)` guard bits on `zeta_q(2)`.
pub fn error_by_definition(record: &ApproximantRecord, bits: u32) -> Result<Enclosure> {
    let guard = bit_length(&record.b) as u32 + 2;
    let zeta = zeta_q(2, &record.qp, bits + guard)?;
    let product = zeta.mul_integer(&record.b);
    let shifted = &product - &Enclosure::from_integer(&record.a, bits + guard);
    Ok(shifted.rounded(bits))
}

/// `e_n sum_{k >= 1} F_n(q^k) / (p^(n+k) - 1)` with `F_n = A_n + k B_n` on the
/// lattice.
///
/// Tail in `k`: `F_n(q^k) = sum_{l<k} P_n(q^(k-l-1)) (q^(l+1); q)_n` has `k`
/// terms, each bounded by the l1 norm of `P_n(.; 1, 1 | q)` since the
/// arguments lie in `(0, 1]` and the Pochhammer factors in `[0, 1]`. With
/// `1/(p^(n+k) - 1) <= 2 q^(n+k)` the tail is `2 e_n q^n |P_n|_1 sum k q^k`.
///
/// Inside the window, the monomial `e_n (a_j + k b_j) q^(kj) / (p^(n+k) - 1)`
/// is skipped when a bit-length bound puts it below `2^-(bits+40)`; each
/// skipped monomial adds that amount to the error radius.
pub fn error_by_series(record: &ApproximantRecord, bits: u32) -> Result<Enclosure> {
    let qp = &record.qp;
    let n = record.n;
    let e = rat_int(record.e.clone());
    let legendre = little_qjacobi(&QJacobiParams::unit(n, qp.clone()))?;
    let c = rat_int(2) * &e * qp.q_pow(n as i64) * legendre.l1_norm();
    let q = qp.q().clone();
    let tail = |k: u64| geometric_tail_bound(&c, &q, k, TailWeight::Linear);
    let last = truncation_index(bits, tail)?.max(1);
    let degree = record.a_poly.coeffs().len().max(record.b_poly.coeffs().len());
    // e_n a_j = ea_j / den and e_n b_j = eb_j / den over one common denominator
    let den = (0..degree).fold(BigInt::one(), |acc, j| {
        acc.lcm(record.a_poly.coeff(j).denom()).lcm(record.b_poly.coeff(j).denom())
    });
    let scale = |x: BigRat| -> BigInt { (x * rat_int(den.clone())).to_integer() };
    let ea: Vec<BigInt> = (0..degree).map(|j| scale(&e * record.a_poly.coeff(j))).collect();
    let eb: Vec<BigInt> = (0..degree).map(|j| scale(&e * record.b_poly.coeff(j))).collect();
    let den_bits = bit_length(&den) as i64;
    let size = |x: &BigInt| if x.is_zero() { i64::MIN / 4 } else { bit_length(x) as i64 - den_bits + 1 };
    let (size_a, size_b): (Vec<i64>, Vec<i64>) = (ea.iter().map(size).collect(), eb.iter().map(size).collect());
    // q^m <= 2^(-m floor(log2 p))
    let log_p_low = bit_length(&BigInt::from(qp.p())) as i64 - 1;
    let cutoff = -(bits as i64 + 40);
    let results: Vec<(BigRat, u64)> = (1..=last)
        .into_par_iter()
        .map(|k| {
            let k_i = k as i64;
            let k_bits = bit_length(&BigInt::from(k)) as i64;
            let kept: Vec<usize> = (0..degree)
                .filter(|&j| {
                    // |e (a_j + k b_j)| q^(kj) 2 q^(n+k)
                    let coeff_bits = size_a[j].max(size_b[j] + k_bits) + 1;
                    let decay = log_p_low * (k_i * j as i64 + n as i64 + k_i);
                    coeff_bits + 1 - decay >= cutoff
                })
                .collect();
            let skipped = (degree - kept.len()) as u64;
            let Some(&top) = kept.last() else {
                return (BigRat::zero(), skipped);
            };
            // sum_j c_j p^(k(top - j)) over p^(k top)
            let step = qp.p_pow(k);
            let mut num = BigInt::zero();
            let mut power = BigInt::one();
            for j in (0..=top).rev() {
                if kept.contains(&j) {
                    num += (&ea[j] + &eb[j] * k) * &power;
                }
                power *= &step;
            }
            let full_den = &den * qp.p_pow(k * top as u64) * (qp.p_pow(n as u64 + k) - 1u32);
            (BigRat::new_raw(num, full_den), skipped)
        })
        .collect();
    let skipped: u64 = results.iter().map(|(_, s)| s).sum();
    let dropped = rat_int(skipped) * rat_pow(&rat_int(2), cutoff);
    let bound = tail(last)? + dropped;
    enclosure_sum(results.into_iter().map(|(t, _)| t), &bound, bits)
}

/// Builds the error record for `record`.
///
/// The definitional and series enclosures must intersect; disjointness is a
/// [`Error::Consistency`] failure. Under [`PrecisionPolicy::Auto`] the
/// precision is doubled (at most four times) until `err.lo > 0`; a fixed
/// precision that cannot separate the error from zero is a
/// [`Error::Precision`] failure.
pub fn error_term(record: &ApproximantRecord, policy: PrecisionPolicy) -> Result<ErrorRecord> {
    let mut bits = policy.bits_for(record.n, record.qp.p());
    let mut attempts = 0;
    loop {
        let err = combined_error(record, bits)?;
        if err.is_strictly_positive() {
            return finish_record(record, err);
        }
        attempts += 1;
        if policy != PrecisionPolicy::Auto || attempts > 4 {
            return Err(Error::Precision(format!(
                "error enclosure for n = {}, p = {} contains 0 at {bits} bits",
                record.n,
                record.qp.p()
            )));
        }
        bits *= 2;
    }
}

fn combined_error(record: &ApproximantRecord, bits: u32) -> Result<Enclosure> {
    let (definition, series) = rayon::join(
        || error_by_definition(record, bits),
        || error_by_series(record, bits),
    );
    let (definition, series) = (definition?, series?);
    definition.intersect(&series).map(|e| e.abs()).ok_or_else(|| {
        Error::Consistency(format!(
            "error routes disagree for n = {}, p = {}: {definition} vs {series}",
            record.n,
            record.qp.p()
        ))
    })
}

fn finish_record(record: &ApproximantRecord, err: Enclosure) -> Result<ErrorRecord> {
    let n = record.n;
    let p_enc = Enclosure::from_integer(&BigInt::from(record.qp.p()), 64);
    let log_p_err_over_n2 = if n == 0 {
        None
    } else {
        Some(err.log_base(&p_enc)?.mul_rational(&BigRat::new(BigInt::one(), BigInt::from(n * n)), 64))
    };
    let log_bn_err = if record.b > BigInt::one() {
        Some(err.log_base(&Enclosure::from_integer(&record.b, 64))?)
    } else {
        None
    };
    Ok(ErrorRecord {
        n,
        qp: record.qp.clone(),
        err,
        bound21: upper_bound_21(n, &record.qp),
        log_p_err_over_n2,
        log_bn_err,
    })
}

/// `(qx; q)_n x^n` at `x = q^k`.
fn lattice_weight(n: usize, k: u64, qp: &QParam) -> BigRat {
    let x = qp.q_pow(k as i64);
    q_pochhammer(&(qp.q() * &x), qp, n) * rat_pow(&x, n as i64)
}

/// `(qx; q)_n x^n (qy; q)_n y^n / prod_{j=0}^n (p^(n+j) - qxy)` at
/// `x = q^k`, `y = q^m`.
pub fn double_integrand(n: usize, k: u64, m: u64, qp: &QParam) -> BigRat {
    let qxy = qp.q_pow(1 + k as i64 + m as i64);
    let den: BigRat = (0..=n as u64).map(|j| rat_int(qp.p_pow(n as u64 + j)) - &qxy).product();
    lattice_weight(n, k, qp) * lattice_weight(n, m, qp) / den
}

/// Encloses `e_n q^(n+1) sum_{k,m >= 0} q^(k+m) integrand(q^k, q^m)`.
///
/// Every sampled integrand value must be strictly positive; a nonpositive
/// sample is a [`Error::Consistency`] failure. The weights are at most
/// `q^(kn)` and the denominator at least `prod_j (p^(n+j) - q)`, so the
/// terms with `max(k, m) > K` sum to at most
/// `2 e_n q^(n+1) c r^(K+1) / (1-r)^2`, with `r = q^(n+1)`.
pub fn double_integral(n: usize, qp: &QParam, bits: u32) -> Result<Enclosure> {
    let e = rat_int(clearing_factor_e(n, qp.p()));
    let lead = &e * qp.q_pow(n as i64 + 1);
    let c: BigRat = (0..=n as u64)
        .map(|j| rat_int(qp.p_pow(n as u64 + j)) - qp.q())
        .product::<BigRat>()
        .recip();
    let r = qp.q_pow(n as i64 + 1);
    let gap = BigRat::one() - &r;
    let tail = |big_k: u64| -> Result<BigRat> {
        Ok(rat_int(2) * &lead * &c * rat_pow(&r, big_k as i64 + 1) / (&gap * &gap))
    };
    let last = truncation_index(bits, tail)?;
    let bound = tail(last)?;
    let rows: Vec<Vec<BigRat>> = (0..=last)
        .into_par_iter()
        .map(|k| {
            (0..=last)
                .map(|m| {
                    let v = double_integrand(n, k, m, qp);
                    if v > BigRat::zero() {
                        Ok(&lead * qp.q_pow((k + m) as i64) * v)
                    } else {
                        Err(Error::Consistency(format!(
                            "double integrand not positive at (q^{k}, q^{m}) for n = {n}"
                        )))
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    enclosure_sum(rows.into_iter().flatten(), &bound, bits)
}

/// True iff the double lattice sum overlaps the error enclosure.
pub fn double_integral_check(record: &ErrorRecord, bits: u32) -> Result<bool> {
    let double = double_integral(record.n, &record.qp, bits)?;
    Ok(double.overlaps(&record.err))
}

/// Reference limits for the exponent columns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceConstants {
    /// `3 / pi^2`, limit of `log_p d_n / n^2`
    pub d_n: f64,
    /// `6 / pi^2 + 1/4`, limit of `log_p e_n / n^2`
    pub e_n: f64,
    /// `(24 + 5 pi^2) / (4 pi^2)`, limit of `log_p b_n / n^2`
    pub b_n: f64,
    /// `6 / pi^2 - 5/4`, limit of `log_p err / n^2`
    pub err: f64,
    /// `-(5 pi^2 - 24) / (5 pi^2 + 24)`, limit of `log_{b_n} err`
    pub log_bn_err: f64,
    /// `10 pi^2 / (5 pi^2 - 24)`, the resulting irrationality measure bound
    pub mu_bound: f64,
    /// `4.07869374`, the previously known bound, reported for comparison
    pub prior_bound: f64,
}

impl ReferenceConstants {
    pub fn new() -> Self {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        ReferenceConstants {
            d_n: 3.0 / pi2,
            e_n: 6.0 / pi2 + 0.25,
            b_n: (24.0 + 5.0 * pi2) / (4.0 * pi2),
            err: 6.0 / pi2 - 1.25,
            log_bn_err: -(5.0 * pi2 - 24.0) / (5.0 * pi2 + 24.0),
            mu_bound: 10.0 * pi2 / (5.0 * pi2 - 24.0),
            prior_bound: 4.078_693_74,
        }
    }
}

impl Default for ReferenceConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// One row of the exponent table.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticsRow {
    pub n: usize,
    pub log_p_dn_over_n2: Enclosure,
    pub log_p_en_over_n2: Enclosure,
    pub log_p_bn_over_n2: Enclosure,
    pub log_p_err_over_n2: Enclosure,
    pub log_bn_err: Enclosure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticsReport {
    pub p: u64,
    pub rows: Vec<AsymptoticsRow>,
    pub references: ReferenceConstants,
}

/// Exponent columns for `n = 1..=n_max`, computed in parallel and returned
/// in order of `n`.
pub fn asymptotics_report(qp: &QParam, n_max: usize, policy: PrecisionPolicy) -> Result<AsymptoticsReport> {
    if n_max < 2 {
        return Err(Error::Config(format!("asymptotics need n_max >= 2, got {n_max}")));
    }
    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| asymptotics_row(n, qp, policy))
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticsReport {
        p: qp.p(),
        rows,
        references: ReferenceConstants::new(),
    })
}

/// Exponent columns for a single `n >= 1`.
pub fn asymptotics_row(n: usize, qp: &QParam, policy: PrecisionPolicy) -> Result<AsymptoticsRow> {
    let record = crate::hermite_pade::approximant(n, qp)?;
    let error = error_term(&record, policy)?;
    let p_enc = Enclosure::from_integer(&BigInt::from(qp.p()), 64);
    let inv_n2 = BigRat::new(BigInt::one(), BigInt::from(n * n));
    let scaled_log = |x: &BigInt| -> Result<Enclosure> {
        Ok(Enclosure::from_integer(x, 64).log_base(&p_enc)?.mul_rational(&inv_n2, 64))
    };
    let missing = || Error::Precision(format!("no logarithm of the error at n = {n}"));
    Ok(AsymptoticsRow {
        n,
        log_p_dn_over_n2: scaled_log(&d_n_value(n, qp.p()))?,
        log_p_en_over_n2: scaled_log(&record.e)?,
        log_p_bn_over_n2: scaled_log(&record.b)?,
        log_p_err_over_n2: error.log_p_err_over_n2.ok_or_else(missing)?,
        log_bn_err: error.log_bn_err.ok_or_else(missing)?,
    })
}
