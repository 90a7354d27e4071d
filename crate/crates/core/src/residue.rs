//! The partial-fraction ledger of
//!
//! ```text
//! S_n(q) = sum_{l >= 0} q^l R_n(q^l; q),
//! R_n(T; q) = T^n (T q^(1-n); q)_n / (qT; q)_(n+1)^2.
//! ```
//!
//! Expanding `R_n` in partial fractions with coefficients `d_(s,j)` and
//! summing over the lattice gives
//!
//! ```text
//! S_n = Z_1 zeta_q(1) + Z_2 zeta_q(2) - D_1 - D_2,
//! ```
//!
//! where `Z_s = sum_j d_(s,j) q^-j` and `D_s` collects the finite remainders.
//! The linear independence of `1, zeta_q(1), zeta_q(2)` forces `Z_1 = 0`, and
//! comparing with the error series identifies `Z_2` and `D_1 + D_2` with
//! scaled copies of `b_n*` and `a_n*`.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hermite_pade::approximant;
use crate::numeric::{bit_length, enclosure_sum, geometric_tail_bound, p_adic_valuation, rat_int};
use crate::numeric::{truncation_index, BigRat, Enclosure, TailWeight};
use crate::polyring::{partial_fractions_double_poles, residue_r, residue_r_at};
use crate::qcore::{p_pochhammer, q_binomial, q_pochhammer, Base, QParam};
use crate::zetaq::zeta_q;

/// Exact partial-fraction data for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueData {
    pub n: usize,
    pub qp: QParam,
    /// `d_(1,j)`, `j = 1..=n+1`
    pub d1: Vec<BigRat>,
    /// `d_(2,j)`, `j = 1..=n+1`
    pub d2: Vec<BigRat>,
    /// `sum_j d_(1,j) q^-j sum_{l<j} q^l / (1 - q^l)`
    pub big_d1: BigRat,
    /// `sum_j d_(2,j) q^-j sum_{l<j} q^l / (1 - q^l)^2`
    pub big_d2: BigRat,
    /// coefficient of `zeta_q(2)`
    pub zeta2_coeff: BigRat,
    /// coefficient of `zeta_q(1)`; always zero
    pub zeta1_coeff: BigRat,
}

/// `p^(n^2+2n+1) / (p; p)_n`, the factor relating `S_n` to `b_n* zeta - a_n*`.
pub fn ledger_scale(n: usize, qp: &QParam) -> BigRat {
    rat_int(qp.p_pow((n * n + 2 * n + 1) as u64)) / rat_int(p_pochhammer(qp, n))
}

/// Computes the ledger; a nonzero `zeta_q(1)` coefficient is a
/// [`Error::Consistency`] failure.
pub fn residue_data(n: usize, qp: &QParam) -> Result<ResidueData> {
    let pf = partial_fractions_double_poles(&residue_r(n, qp), qp, n)?;
    let one = BigRat::one();
    let mut zeta1_coeff = BigRat::zero();
    let mut zeta2_coeff = BigRat::zero();
    let mut big_d1 = BigRat::zero();
    let mut big_d2 = BigRat::zero();
    let mut simple = BigRat::zero();
    let mut squared = BigRat::zero();
    for j in 1..=n + 1 {
        let scale = qp.q_pow(-(j as i64));
        let a = &pf.d1[j - 1] * &scale;
        let b = &pf.d2[j - 1] * &scale;
        big_d1 += &a * &simple;
        big_d2 += &b * &squared;
        zeta1_coeff += a;
        zeta2_coeff += b;
        // extend the inner sums to l = j
        let ql = qp.q_pow(j as i64);
        let gap = &one - &ql;
        simple += &ql / &gap;
        squared += &ql / (&gap * &gap);
    }
    if !zeta1_coeff.is_zero() {
        return Err(Error::Consistency(format!(
            "coefficient of zeta_q(1) is {zeta1_coeff} for n = {n}, p = {}",
            qp.p()
        )));
    }
    Ok(ResidueData {
        n,
        qp: qp.clone(),
        d1: pf.d1,
        d2: pf.d2,
        big_d1,
        big_d2,
        zeta2_coeff,
        zeta1_coeff,
    })
}

/// True iff `Z_2 = scale b_n*` and `D_1 + D_2 = scale a_n*` exactly.
pub fn ledger_matches_approximant(data: &ResidueData) -> Result<bool> {
    let rec = approximant(data.n, &data.qp)?;
    let scale = ledger_scale(data.n, &data.qp);
    Ok(data.zeta2_coeff == &scale * &rec.b_star && &data.big_d1 + &data.big_d2 == scale * rec.a_star)
}

/// `ceil(3n^2/4) + 2n + 1`
pub fn valuation_target(n: usize) -> i64 {
    ((3 * n * n).div_ceil(4) + 2 * n + 1) as i64
}

/// True iff both `D_1` and `D_2` are divisible by `p^(ceil(3n^2/4) + 2n + 1)`
/// (zero counts as divisible).
pub fn valuation_claim_check(data: &ResidueData) -> bool {
    let p = data.qp.p();
    let target = valuation_target(data.n);
    p_adic_valuation(&data.big_d1, p).at_least(target) && p_adic_valuation(&data.big_d2, p).at_least(target)
}

/// Outcome of comparing the lattice series `S_n` with the ledger value.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesComparison {
    pub series: Enclosure,
    pub target: Enclosure,
    pub passed: bool,
    /// Why the check failed, if it did.
    pub diagnostic: Option<String>,
}

/// Encloses `sum_{l >= 0} q^l R_n(q^l)`.
///
/// For `l < n` the numerator vanishes. For `l >= n` every numerator factor
/// lies in `(0, 1)` and `(q^(l+1); q)_(n+1) >= (q; q)_(n+1)`, so the terms are
/// at most `r^l / (q; q)_(n+1)^2` with `r = q^(n+1)`.
pub fn sn_series(n: usize, qp: &QParam, bits: u32) -> Result<Enclosure> {
    let floor = q_pochhammer(qp.q(), qp, n + 1);
    let c = (&floor * &floor).recip();
    let r = qp.q_pow(n as i64 + 1);
    let tail = |big_n: u64| geometric_tail_bound(&c, &r, big_n, TailWeight::Unit);
    let last = truncation_index(bits, tail)?.max(n as u64);
    let bound = tail(last)?;
    let terms = (0..=last).map(|l| {
        let t = qp.q_pow(l as i64);
        let value = residue_r_at(n, qp, &t).expect("lattice points q^l, l >= 0, are not poles");
        t * value
    });
    enclosure_sum(terms, &bound, bits)
}

/// Compares the series with `p^(n^2+2n+1) (b_n* zeta_q(2) - a_n*) / (p;p)_n`.
///
/// Passing needs overlapping enclosures that are both narrower than `2^-32`;
/// a too-coarse precision fails with a width diagnostic instead of an error.
pub fn sn_series_check(n: usize, qp: &QParam, bits: u32) -> Result<SeriesComparison> {
    let series = sn_series(n, qp, bits)?;
    let rec = approximant(n, qp)?;
    let scale = ledger_scale(n, qp);
    let zeta_factor = &scale * &rec.b_star;
    let guard = bit_length(&zeta_factor.numer().clone()) as u32 + 2;
    let zeta = zeta_q(2, qp, bits + guard)?;
    let target = (&zeta.mul_rational(&zeta_factor, bits + guard)
        - &Enclosure::from_rational(&(scale * rec.a_star), bits + guard))
        .rounded(bits);
    let narrow = series.width_below(32) && target.width_below(32);
    let overlap = series.overlaps(&target);
    let diagnostic = match (narrow, overlap) {
        (true, true) => None,
        (false, _) => Some(format!(
            "enclosure widths {} and {} not below 2^-32 at {bits} bits",
            series.width(),
            target.width()
        )),
        (true, false) => Some(format!("series {series} and ledger value {target} are disjoint")),
    };
    Ok(SeriesComparison {
        series,
        target,
        passed: diagnostic.is_none(),
        diagnostic,
    })
}

/// The q-binomial identity
/// `sum_j q^(j^2-2nj) [n+j n]_q [n j]_q^2 (n + sum_{k<=n+j} 1/(1-q^k)
///  - 3 sum_{k<=j} 1/(1-q^k) + 2 sum_{k<=n-j} q^k/(1-q^k)) = 0`, exactly.
pub fn q_binomial_identity_check(n: usize, qp: &QParam) -> bool {
    let one = BigRat::one();
    let inv: Vec<BigRat> = (0..=2 * n as i64)
        .scan(BigRat::zero(), |acc, k| {
            if k > 0 {
                *acc += (&one - qp.q_pow(k)).recip();
            }
            Some(acc.clone())
        })
        .collect();
    let ratio: Vec<BigRat> = (0..=n as i64)
        .scan(BigRat::zero(), |acc, k| {
            if k > 0 {
                *acc += qp.q_pow(k) / (&one - qp.q_pow(k));
            }
            Some(acc.clone())
        })
        .collect();
    let n_i = n as i64;
    let total: BigRat = (0..=n)
        .map(|j| {
            let j_i = j as i64;
            let nj = q_binomial(n_i, j_i, Base::Q, qp);
            let weight = qp.q_pow(j_i * j_i - 2 * n_i * j_i) * q_binomial(n_i + j_i, n_i, Base::Q, qp) * &nj * &nj;
            let bracket = rat_int(n as u64) + &inv[n + j] - rat_int(3) * &inv[j] + rat_int(2) * &ratio[n - j];
            weight * bracket
        })
        .sum();
    total.is_zero()
}

fn harmonic(m: usize) -> BigRat {
    (1..=m as u64).map(|k| BigRat::new(BigInt::one(), BigInt::from(k))).sum()
}

/// The `q -> 1` limit of the q-binomial identity:
/// `sum_j C(n+j, n) C(n, j)^2 (H(n+j) + 2 H(n-j) - 3 H(j)) = 0`.
pub fn harmonic_identity_check(n: usize) -> bool {
    let h: Vec<BigRat> = (0..=2 * n).map(harmonic).collect();
    let total: BigRat = (0..=n)
        .map(|j| {
            let c = binomial(BigInt::from(n + j), BigInt::from(n)) * binomial(BigInt::from(n), BigInt::from(j)).pow(2);
            rat_int(c) * (&h[n + j] + rat_int(2) * &h[n - j] - rat_int(3) * &h[j])
        })
        .sum();
    total.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn qp(p: u64) -> QParam {
        QParam::new(p).unwrap()
    }

    #[test]
    fn degree_zero_ledger() {
        let d = residue_data(0, &qp(2)).unwrap();
        assert_eq!(d.d2, vec![rat(1, 1)]);
        assert_eq!(d.d1, vec![rat(0, 1)]);
        assert!(d.big_d1.is_zero() && d.big_d2.is_zero());
        assert_eq!(d.zeta2_coeff, rat(2, 1));
        assert!(valuation_claim_check(&d));
        assert!(ledger_matches_approximant(&d).unwrap());
    }

    #[test]
    fn ledger_identities() {
        for p in [2u64, 3] {
            let qp = qp(p);
            for n in 0..=10 {
                let d = residue_data(n, &qp).unwrap();
                assert!(ledger_matches_approximant(&d).unwrap(), "n={n} p={p}");
                assert!(valuation_claim_check(&d), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn valuation_targets() {
        assert_eq!(valuation_target(0), 1);
        assert_eq!(valuation_target(1), 4);
        assert_eq!(valuation_target(2), 8);
        assert_eq!(valuation_target(3), 14);
    }

    #[test]
    fn series_matches_ledger() {
        let c0 = sn_series_check(0, &qp(2), 64).unwrap();
        assert!(c0.passed, "{c0:?}");
        assert!((c0.series.midpoint_f64() - 5.488_066).abs() < 1e-5);
        for p in [2u64, 3] {
            for n in 0..=8 {
                let c = sn_series_check(n, &qp(p), 96).unwrap();
                assert!(c.passed, "n={n} p={p}: {:?}", c.diagnostic);
            }
        }
    }

    #[test]
    fn coarse_precision_is_a_soft_failure() {
        let c = sn_series_check(2, &qp(2), 8).unwrap();
        assert!(!c.passed);
        assert!(c.diagnostic.unwrap().contains("widths"));
    }

    #[test]
    fn q_binomial_small_cases() {
        assert!(q_binomial_identity_check(0, &qp(2)));
        assert!(q_binomial_identity_check(1, &qp(2)));
        for p in [2u64, 3, 5] {
            for n in 0..=12 {
                assert!(q_binomial_identity_check(n, &qp(p)), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn harmonic_identity() {
        // n = 2 by hand: 9/2 + 10 - 29/2
        let h = harmonic;
        let n2 = rat(3, 1) * h(2) + rat(12, 1) * (h(3) - h(1)) + rat(6, 1) * (h(4) - rat(3, 1) * h(2));
        assert!(n2.is_zero());
        for n in 0..=50 {
            assert!(harmonic_identity_check(n), "n={n}");
        }
    }

    #[test]
    fn perturbed_identity_fails() {
        // dropping the factor 2 must break the harmonic identity
        let n = 3;
        let h: Vec<BigRat> = (0..=2 * n).map(harmonic).collect();
        let total: BigRat = (0..=n)
            .map(|j| {
                let c = binomial(BigInt::from(n + j), BigInt::from(n)) * binomial(BigInt::from(n), BigInt::from(j)).pow(2);
                rat_int(c) * (&h[n + j] + &h[n - j] - rat_int(3) * &h[j])
            })
            .sum();
        assert!(!total.is_zero());
    }
}
