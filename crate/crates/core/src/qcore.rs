//! q-calculus on the lattice `{q^i : i in Z}` at `q = 1/p`.
//!
//! Conventions:
//!
//! * `(a; x)_n = prod_{j<n} (1 - a x^j)`.
//! * `D_q f(x) = (f(x) - f(qx)) / (x (1 - q))` and `D_p` likewise with `p`.
//! * The q-integral carries **no** `(1 - q)` factor:
//!   `int_0^{q^i} f d_qx = sum_{k >= i} q^k f(q^k)`, and
//!   `int_{q^j}^{q^i} = int_0^{q^i} - int_0^{q^j}`. Most references include the
//!   factor; every formula in this crate is written without it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{enclosure_sum, rat_int, rat_pow, truncation_index, BigRat, Enclosure};
use crate::polyring::RatPoly;

/// The base pair `(p, q = 1/p)` for an integer `p >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QParam {
    p: u64,
    q: BigRat,
}

impl QParam {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::Domain(format!("p must be an integer >= 2, got {p}")));
        }
        Ok(QParam {
            p,
            q: BigRat::new(BigInt::one(), BigInt::from(p)),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> &BigRat {
        &self.q
    }

    pub fn p_rat(&self) -> BigRat {
        rat_int(self.p)
    }

    /// `q^i` for any integer `i` (so `q^-i = p^i`).
    pub fn q_pow(&self, i: i64) -> BigRat {
        rat_pow(&self.q, i)
    }

    /// `p^i` for `i >= 0` as an integer.
    pub fn p_pow(&self, i: u64) -> BigInt {
        crate::numeric::int_pow(self.p, i)
    }
}

/// `(a; base)_n`; the empty product is one.
pub fn pochhammer(a: &BigRat, base: &BigRat, n: usize) -> BigRat {
    let mut acc = BigRat::one();
    let mut factor = a.clone();
    for _ in 0..n {
        acc *= BigRat::one() - &factor;
        factor *= base;
    }
    acc
}

/// `(a; q)_n` at `q = 1/p`.
pub fn q_pochhammer(a: &BigRat, qp: &QParam, n: usize) -> BigRat {
    pochhammer(a, qp.q(), n)
}

/// `(p; p)_n = prod_{j=1}^n (1 - p^j)` as an integer.
pub fn p_pochhammer(qp: &QParam, n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, j| acc * (BigInt::one() - qp.p_pow(j)))
}

/// Which base a q-binomial or q-derivative is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Q,
    P,
}

/// Gaussian binomial `[n, k]_p` at integer `p`, an integer. Zero outside
/// `0 <= k <= n`.
pub fn p_binomial(n: i64, k: i64, p: u64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigInt::one();
    for i in 1..=k {
        // partial products are themselves Gaussian binomials, so the division is exact
        acc *= crate::numeric::int_pow(p, n - k + i) - 1u32;
        acc /= crate::numeric::int_pow(p, i) - 1u32;
    }
    acc
}

/// `[n, k]_x = (x;x)_n / ((x;x)_k (x;x)_(n-k))` for `x = q` or `x = p`.
///
/// Out-of-range `k` (negative or above `n`) gives zero rather than an error,
/// so sums over `k` may run past the natural range.
pub fn q_binomial(n: i64, k: i64, base: Base, qp: &QParam) -> BigRat {
    let pb = p_binomial(n, k, qp.p());
    match base {
        Base::P => BigRat::from_integer(pb),
        // [n,k]_q = q^{k(n-k)} [n,k]_p
        Base::Q if pb.is_zero() => BigRat::zero(),
        Base::Q => qp.q_pow(k * (n - k)) * BigRat::from_integer(pb),
    }
}

/// Samples `f(q^i)` on a finite stretch of the lattice, keyed by the
/// exponent `i`.
///
/// Reading outside the stored samples is an error unless the function was
/// built in zero-extension mode, where it reads as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFunction {
    values: BTreeMap<i64, BigRat>,
    zero_extended: bool,
}

impl GridFunction {
    pub fn new(values: BTreeMap<i64, BigRat>) -> Self {
        GridFunction {
            values,
            zero_extended: false,
        }
    }

    /// Samples `f(q^i)` for `i` in `lo..=hi`.
    pub fn sample<F>(lo: i64, hi: i64, qp: &QParam, mut f: F) -> Self
    where
        F: FnMut(&BigRat) -> BigRat,
    {
        let values = (lo..=hi).map(|i| (i, f(&qp.q_pow(i)))).collect();
        Self::new(values)
    }

    pub fn from_poly(poly: &RatPoly, lo: i64, hi: i64, qp: &QParam) -> Self {
        Self::sample(lo, hi, qp, |x| poly.eval(x))
    }

    /// Same samples, read as zero everywhere else.
    pub fn zero_extended(mut self) -> Self {
        self.zero_extended = true;
        self
    }

    pub fn is_zero_extended(&self) -> bool {
        self.zero_extended
    }

    /// `(i_min, i_max)`, or `None` when empty.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.values.keys().next()?;
        let hi = *self.values.keys().next_back()?;
        Some((lo, hi))
    }

    /// `f(q^i)`.
    pub fn at(&self, i: i64) -> Result<BigRat> {
        match self.values.get(&i) {
            Some(v) => Ok(v.clone()),
            None if self.zero_extended => Ok(BigRat::zero()),
            None => Err(Error::Support { index: i }),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRat)> {
        self.values.iter().map(|(&i, v)| (i, v))
    }
}

/// The difference operators `D_q` and `D_p`.
pub trait QDerivative: Sized + Clone {
    fn q_derivative(&self, qp: &QParam, base: Base) -> Result<Self>;

    /// `n`-fold application.
    fn q_derivative_n(&self, qp: &QParam, base: Base, n: usize) -> Result<Self> {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.q_derivative(qp, base)?;
        }
        Ok(f)
    }
}

fn scale_of(qp: &QParam, base: Base) -> BigRat {
    match base {
        Base::Q => qp.q().clone(),
        Base::P => qp.p_rat(),
    }
}

impl QDerivative for RatPoly {
    /// `x^m -> [m]_c x^(m-1)` with `[m]_c = (1 - c^m) / (1 - c)`.
    fn q_derivative(&self, qp: &QParam, base: Base) -> Result<Self> {
        let c = scale_of(qp, base);
        let one = BigRat::one();
        let denom = (&one - &c).recip();
        let mut power = c.clone();
        let mut coeffs = Vec::with_capacity(self.coeffs().len().saturating_sub(1));
        for a in self.coeffs().iter().skip(1) {
            coeffs.push(a * (&one - &power) * &denom);
            power *= &c;
        }
        Ok(RatPoly::new(coeffs))
    }
}

impl QDerivative for GridFunction {
    /// Pointwise `(f(x) - f(cx)) / (x (1 - c))` at `x = q^i`. `D_q` needs the
    /// sample at `q^(i+1)` and `D_p` the one at `q^(i-1)`; without zero
    /// extension the support shrinks by one point, with it the support grows
    /// by one.
    fn q_derivative(&self, qp: &QParam, base: Base) -> Result<Self> {
        let Some((lo, hi)) = self.support() else {
            return Ok(self.clone());
        };
        let step: i64 = match base {
            Base::Q => 1,
            Base::P => -1,
        };
        let c = scale_of(qp, base);
        let denom = BigRat::one() - &c;
        let range = match (self.zero_extended, base) {
            (false, Base::Q) => lo..=hi - 1,
            (false, Base::P) => lo + 1..=hi,
            (true, Base::Q) => lo - 1..=hi,
            (true, Base::P) => lo..=hi + 1,
        };
        let mut values = BTreeMap::new();
        for i in range {
            let diff = self.at(i)? - self.at(i + step)?;
            values.insert(i, diff / (qp.q_pow(i) * &denom));
        }
        Ok(GridFunction {
            values,
            zero_extended: self.zero_extended,
        })
    }
}

/// Lower endpoint of a q-integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerLimit {
    Zero,
    /// `q^j`
    Lattice(i64),
}

/// `int_{lower}^{q^upper} f(x) d_qx` as an exact finite sum (no `(1-q)`
/// factor).
///
/// From `q^j` to `q^i` this is `sum_{k=i}^{j-1} q^k f(q^k)` (negated when
/// `j < i`). From zero the sum runs to infinity, so `f` must be
/// zero-extended; use [`q_integral_series`] for genuinely infinite sums.
pub fn q_integral(f: &GridFunction, lower: LowerLimit, upper: i64, qp: &QParam) -> Result<BigRat> {
    let term = |k: i64| -> Result<BigRat> { Ok(qp.q_pow(k) * f.at(k)?) };
    match lower {
        LowerLimit::Lattice(j) if j >= upper => (upper..j).map(term).sum(),
        LowerLimit::Lattice(j) => (j..upper).map(term).sum::<Result<BigRat>>().map(|s| -s),
        LowerLimit::Zero => {
            let last = f.support().map_or(upper - 1, |(_, hi)| hi);
            if !f.is_zero_extended() {
                return Err(Error::Support { index: last.max(upper - 1) + 1 });
            }
            (upper..=last).map(term).sum()
        }
    }
}

/// Encloses `int_0^{q^start} f d_qx = sum_{k >= start} q^k f(q^k)`.
///
/// `sample(k)` returns `f(q^k)`; `tail(N)` must bound
/// `|sum_{k > N} q^k f(q^k)|` and decrease to zero.
pub fn q_integral_series<F, T>(
    mut sample: F,
    start: u64,
    mut tail: T,
    qp: &QParam,
    bits: u32,
) -> Result<Enclosure>
where
    F: FnMut(u64) -> BigRat,
    T: FnMut(u64) -> Result<BigRat>,
{
    let n = truncation_index(bits, &mut tail)?.max(start);
    let bound = tail(n)?;
    enclosure_sum(
        (start..=n).map(|k| qp.q_pow(k as i64) * sample(k)),
        &bound,
        bits,
    )
}

/// Checks the q-Leibniz rule
/// `D_q^n (fg)(x) = sum_k [n,k]_q (D_q^k f)(x) (D_q^(n-k) g)(q^k x)`
/// as an exact polynomial identity.
pub fn q_leibniz_check(f: &RatPoly, g: &RatPoly, n: usize, qp: &QParam) -> bool {
    let lhs = (f * g)
        .q_derivative_n(qp, Base::Q, n)
        .expect("polynomial q-derivatives are total");
    let mut rhs = RatPoly::zero();
    for k in 0..=n {
        let df = f.q_derivative_n(qp, Base::Q, k).expect("total");
        let dg = g
            .q_derivative_n(qp, Base::Q, n - k)
            .expect("total")
            .compose_scale(&qp.q_pow(k as i64));
        let coeff = q_binomial(n as i64, k as i64, Base::Q, qp);
        rhs = &rhs + &(&df * &dg).scale(&coeff);
    }
    lhs == rhs
}

/// Checks summation by parts,
/// `sum_k q^k f(q^k) D_p g(q^k) = -q sum_k q^k g(q^k) D_q f(q^k)`,
/// summed over `k >= 0`.
///
/// Both functions must be zero-extended (so the sums are finite) and either
/// `f(1) = 0` or `g(p) = 0`.
pub fn summation_by_parts_check(f: &GridFunction, g: &GridFunction, qp: &QParam) -> Result<bool> {
    if !f.is_zero_extended() || !g.is_zero_extended() {
        return Err(Error::Precondition(
            "summation by parts needs finitely supported (zero-extended) grid functions".into(),
        ));
    }
    if !f.at(0)?.is_zero() && !g.at(-1)?.is_zero() {
        return Err(Error::Precondition(
            "summation by parts needs f(1) = 0 or g(p) = 0".into(),
        ));
    }
    let dp_g = g.q_derivative(qp, Base::P)?;
    let dq_f = f.q_derivative(qp, Base::Q)?;
    let last = [f.support(), g.support()]
        .into_iter()
        .flatten()
        .map(|(_, hi)| hi)
        .max()
        .unwrap_or(0)
        .max(0)
        + 1;
    let mut lhs = BigRat::zero();
    let mut rhs = BigRat::zero();
    for k in 0..=last {
        let qk = qp.q_pow(k);
        lhs += &qk * f.at(k)? * dp_g.at(k)?;
        rhs += &qk * g.at(k)? * dq_f.at(k)?;
    }
    Ok(lhs == -(qp.q() * rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use proptest::prelude::*;

    fn qp(p: u64) -> QParam {
        QParam::new(p).unwrap()
    }

    #[test]
    fn rejects_small_p() {
        assert!(QParam::new(1).is_err());
        assert!(QParam::new(0).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        let q2 = qp(2);
        assert_eq!(q_pochhammer(q2.q(), &q2, 2), rat(3, 8));
        assert_eq!(q_pochhammer(&rat(17, 5), &q2, 0), rat(1, 1));
        assert_eq!(q_pochhammer(&rat(1, 1), &qp(3), 4), rat(0, 1));
    }

    #[test]
    fn binomial_examples() {
        let q2 = qp(2);
        assert_eq!(q_binomial(2, 1, Base::P, &q2), rat(3, 1));
        assert_eq!(q_binomial(7, 0, Base::P, &q2), rat(1, 1));
        assert_eq!(q_binomial(2, 1, Base::Q, &q2), rat(3, 2));
        assert_eq!(q_binomial(3, 4, Base::Q, &q2), rat(0, 1));
        assert_eq!(q_binomial(3, -1, Base::P, &q2), rat(0, 1));
    }

    #[test]
    fn binomial_matches_pochhammer_definition() {
        for p in [2u64, 3, 5] {
            let qp = qp(p);
            for n in 0..=30i64 {
                for k in 0..=n {
                    let qb = q_binomial(n, k, Base::Q, &qp);
                    let pb = q_binomial(n, k, Base::P, &qp);
                    assert_eq!(qb, qp.q_pow(k * (n - k)) * &pb, "n={n} k={k} p={p}");
                    if n <= 12 {
                        let def = |m: i64| q_pochhammer(qp.q(), &qp, m as usize);
                        assert_eq!(qb, def(n) / (def(k) * def(n - k)));
                    }
                }
            }
        }
    }

    #[test]
    fn polynomial_q_derivative() {
        let q2 = qp(2);
        let x2 = RatPoly::from_integers(&[0, 0, 1]);
        assert_eq!(
            x2.q_derivative(&q2, Base::Q).unwrap(),
            RatPoly::monomial(rat(3, 2), 1)
        );
        assert!(RatPoly::constant(rat(5, 1))
            .q_derivative(&q2, Base::Q)
            .unwrap()
            .is_zero());
        // D_p x^3 = (1 + p + p^2) x^2
        let x3 = RatPoly::from_integers(&[0, 0, 0, 1]);
        assert_eq!(
            x3.q_derivative(&qp(3), Base::P).unwrap(),
            RatPoly::monomial(rat(13, 1), 2)
        );
    }

    #[test]
    fn grid_derivative_matches_polynomial_derivative() {
        let q3 = qp(3);
        let poly = RatPoly::from_integers(&[4, -1, 0, 2]);
        let grid = GridFunction::from_poly(&poly, -2, 6, &q3);
        for base in [Base::Q, Base::P] {
            let dg = grid.q_derivative(&q3, base).unwrap();
            let dp = poly.q_derivative(&q3, base).unwrap();
            for (i, v) in dg.iter() {
                assert_eq!(v, &dp.eval(&q3.q_pow(i)));
            }
        }
    }

    #[test]
    fn grid_derivative_reports_missing_point() {
        let q2 = qp(2);
        let grid = GridFunction::from_poly(&RatPoly::x(), 0, 0, &q2);
        let d = grid.q_derivative(&q2, Base::Q).unwrap();
        assert!(d.support().is_none());
        assert_eq!(d.q_derivative(&q2, Base::Q).unwrap(), d);
        assert_eq!(grid.at(1), Err(Error::Support { index: 1 }));
    }

    /// `D_q^n 1/(p^n - q^(l+1) x)` on the lattice against its closed form.
    #[test]
    fn iterated_derivative_of_simple_pole() {
        for p in [2u64, 3] {
            let qp = qp(p);
            for n in 0..=5usize {
                for l in 0..=3i64 {
                    let pn = rat_int(qp.p_pow(n as u64));
                    let c = qp.q_pow(l + 1);
                    let grid = GridFunction::sample(0, 12, &qp, |x| (&pn - &c * x).recip());
                    let d = grid.q_derivative_n(&qp, Base::Q, n).unwrap();
                    for k in 0..=(12 - n as i64) {
                        let x = qp.q_pow(k);
                        let mut denom = rat_pow(&(BigRat::one() - qp.q()), n as i64);
                        for j in 0..=n as u64 {
                            denom *= rat_int(qp.p_pow(n as u64 + j)) - &x * &c;
                        }
                        let num = qp.q_pow(l * n as i64)
                            * q_pochhammer(qp.q(), &qp, n)
                            * rat_int(qp.p_pow((n * n.saturating_sub(1) / 2) as u64));
                        assert_eq!(d.at(k).unwrap(), num / denom, "p={p} n={n} l={l} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn integral_examples() {
        let q2 = qp(2);
        // int_q^1 t^0 d_qt = 1
        let one = GridFunction::sample(0, 5, &q2, |_| rat(1, 1));
        assert_eq!(q_integral(&one, LowerLimit::Lattice(1), 0, &q2).unwrap(), rat(1, 1));
        // int_{q^3}^1 t^-1 d_qt = 3
        let inv = GridFunction::sample(0, 5, &q2, |x| x.recip());
        assert_eq!(q_integral(&inv, LowerLimit::Lattice(3), 0, &q2).unwrap(), rat(3, 1));
        assert_eq!(q_integral(&inv, LowerLimit::Lattice(0), 0, &q2).unwrap(), rat(0, 1));
        // reversed limits flip the sign
        assert_eq!(q_integral(&inv, LowerLimit::Lattice(0), 3, &q2).unwrap(), rat(-3, 1));
        assert_eq!(
            q_integral(&inv, LowerLimit::Lattice(9), 0, &q2),
            Err(Error::Support { index: 6 })
        );
        assert!(q_integral(&inv, LowerLimit::Zero, 0, &q2).is_err());
    }

    #[test]
    fn power_integral_closed_form() {
        // int_x^1 t^m d_qt = (1 - x^(m+1)) / (1 - q^(m+1)) for m != -1
        let q3 = qp(3);
        for m in -4i64..=4 {
            if m == -1 {
                continue;
            }
            let f = GridFunction::sample(0, 10, &q3, |t| rat_pow(t, m));
            for j in 0..=10 {
                let x = q3.q_pow(j);
                let expected = (BigRat::one() - rat_pow(&x, m + 1)) / (BigRat::one() - q3.q_pow(m + 1));
                assert_eq!(q_integral(&f, LowerLimit::Lattice(j), 0, &q3).unwrap(), expected);
            }
        }
    }

    #[test]
    fn telescoping_integral_of_derivative() {
        // int_0^1 D_q P d_qx = (P(1) - P(0)) / (1 - q) without the (1-q) factor
        let q2 = qp(2);
        for deg in 0..=10i64 {
            let poly = RatPoly::new((0..=deg).map(|i| rat(i * i - 3, i + 1)).collect());
            let d = poly.q_derivative(&q2, Base::Q).unwrap();
            let tail = d.l1_norm();
            let enc = q_integral_series(
                |k| d.eval(&q2.q_pow(k as i64)),
                0,
                |n| Ok(&tail * q2.q_pow(n as i64 + 1) / (BigRat::one() - q2.q())),
                &q2,
                80,
            )
            .unwrap();
            let expected =
                (poly.eval(&rat(1, 1)) - poly.eval(&rat(0, 1))) / (BigRat::one() - q2.q());
            assert!(enc.contains(&expected), "deg {deg}");
            assert!(enc.width_below(70));
        }
    }

    #[test]
    fn leibniz_examples() {
        let q2 = qp(2);
        assert!(q_leibniz_check(&RatPoly::x(), &RatPoly::x(), 1, &q2));
        assert!(q_leibniz_check(&RatPoly::from_integers(&[1, 2, 3]), &RatPoly::from_integers(&[5, 0, 7]), 0, &q2));
    }

    #[test]
    fn summation_by_parts_examples() {
        let q2 = qp(2);
        let zero = GridFunction::sample(-1, 5, &q2, |_| rat(0, 1)).zero_extended();
        let g = GridFunction::sample(-1, 20, &q2, |x| x.clone()).zero_extended();
        assert!(summation_by_parts_check(&zero, &g, &q2).unwrap());
        let f = GridFunction::sample(-1, 40, &q2, |x| BigRat::one() - x).zero_extended();
        assert!(summation_by_parts_check(&f, &g, &q2).unwrap());
        // neither boundary condition holds
        let bad = GridFunction::sample(-1, 10, &q2, |_| rat(1, 1)).zero_extended();
        assert!(matches!(
            summation_by_parts_check(&bad, &g, &q2),
            Err(Error::Precondition(_))
        ));
    }

    fn small_poly() -> impl Strategy<Value = RatPoly> {
        prop::collection::vec((-9i64..9, 1i64..4), 0..=6)
            .prop_map(|cs| RatPoly::new(cs.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn leibniz_holds(f in small_poly(), g in small_poly(), n in 0usize..=4, p in 2u64..=3) {
            prop_assert!(q_leibniz_check(&f, &g, n, &qp(p)));
        }

        #[test]
        fn pochhammer_splits(n in 0usize..8, m in 0usize..8, a in -5i64..5, p in 2u64..=5) {
            let qp = qp(p);
            let a = rat(a, 3);
            let shifted = &a * qp.q_pow(n as i64);
            prop_assert_eq!(
                q_pochhammer(&a, &qp, n + m),
                q_pochhammer(&a, &qp, n) * q_pochhammer(&shifted, &qp, m)
            );
        }

        #[test]
        fn summation_by_parts_random(
            fv in prop::collection::vec(-6i64..6, 1..12),
            gv in prop::collection::vec(-6i64..6, 1..12),
            kill_f in any::<bool>(),
            p in 2u64..=3,
        ) {
            let qp = qp(p);
            let mut f: BTreeMap<i64, BigRat> = fv.iter().enumerate().map(|(i, &v)| (i as i64 - 1, rat(v, 1))).collect();
            let mut g: BTreeMap<i64, BigRat> = gv.iter().enumerate().map(|(i, &v)| (i as i64 - 1, rat(v, 1))).collect();
            if kill_f { f.insert(0, rat(0, 1)); } else { g.insert(-1, rat(0, 1)); }
            let f = GridFunction::new(f).zero_extended();
            let g = GridFunction::new(g).zero_extended();
            prop_assert!(summation_by_parts_check(&f, &g, &qp).unwrap());
        }
    }
}
