//! `qpade verify`: every invariant of the construction as a pass/fail line.

use qpade_core::cyclotomic::{clearing_factor_e, d_n_value, lcm_p_powers_minus_one};
use qpade_core::hermite_pade::{
    approximant, denominator_bound, f_root_check, mellin_f, mellin_lattice_sum, ApproximantRecord,
};
use qpade_core::numeric::{p_adic_valuation, rat_int, BigRat};
use qpade_core::qjacobi::{little_qjacobi, orthogonality_defect, rodrigues_rhs, QJacobiParams};
use qpade_core::residue::{
    q_binomial_identity_check, harmonic_identity_check, ledger_matches_approximant, residue_data, sn_series_check,
    valuation_claim_check,
};
use qpade_core::zetaq::{
    double_integral_check, error_term, variant_gap, zeta_q, zeta_q_r_variant, ErrorRecord, PrecisionPolicy,
};
use qpade_core::{Error, QParam};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{RunConfig, Suite};
use crate::failure::Failure;
use crate::output::{emit, TextLine};

/// Caps for the checks whose cost grows quickly with `n`.
const MOMENT_SUM_MAX_N: usize = 8;
const RODRIGUES_MAX_N: usize = 15;
const ORTHOGONALITY_MAX_N: usize = 12;
const SERIES_MAX_N: usize = 15;
const DOUBLE_SUM_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Imprecise,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub check: &'static str,
    pub anchor: &'static str,
    pub n: Option<String>,
    pub p: Option<String>,
    pub status: Status,
    pub detail: String,
}

impl TextLine for Check {
    fn text_line(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Imprecise => "IMPRECISE",
        };
        let mut at = String::new();
        if let Some(n) = &self.n {
            at.push_str(&format!(" n={n}"));
        }
        if let Some(p) = &self.p {
            at.push_str(&format!(" p={p}"));
        }
        format!("{status:<9} {}: {}{at} ({}) {}", self.suite, self.check, self.anchor, self.detail)
            .trim_end()
            .to_string()
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub passed: String,
    pub failed: String,
    pub imprecise: String,
}

impl TextLine for Summary {
    fn text_line(&self) -> String {
        format!("summary: {} passed, {} failed, {} imprecise", self.passed, self.failed, self.imprecise)
    }
}

struct Ctx<'a> {
    suite: &'static str,
    config: &'a RunConfig,
}

impl Ctx<'_> {
    fn check(&self, check: &'static str, anchor: &'static str, n: Option<usize>, p: Option<u64>, outcome: Outcome) -> Check {
        let (status, detail) = match outcome {
            Outcome::Pass(d) => (Status::Pass, d),
            Outcome::Fail(d) => (Status::Fail, d),
            Outcome::Imprecise(d) => (Status::Imprecise, d),
        };
        Check {
            suite: self.suite,
            check,
            anchor,
            n: n.map(|n| n.to_string()),
            p: p.map(|p| p.to_string()),
            status,
            detail,
        }
    }

    fn pairs(&self, max_n: usize) -> Vec<(usize, u64)> {
        (0..=max_n.min(self.config.n_max))
            .flat_map(|n| self.config.p_list.iter().map(move |&p| (n, p)))
            .collect()
    }

    /// Bits for the fixed-width enclosure checks.
    fn bits(&self, default: u32) -> u32 {
        match self.config.precision {
            PrecisionPolicy::Auto => default,
            PrecisionPolicy::Fixed(b) => b,
        }
    }
}

enum Outcome {
    Pass(String),
    Fail(String),
    Imprecise(String),
}

impl Outcome {
    fn exact(ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Outcome::Pass(String::new())
        } else {
            Outcome::Fail(detail.into())
        }
    }

    fn from_error(e: Error) -> Self {
        match e {
            Error::Precision(_) => Outcome::Imprecise(e.to_string()),
            _ => Outcome::Fail(e.to_string()),
        }
    }

    fn from_result(r: Result<bool, Error>, detail: impl Into<String>) -> Self {
        match r {
            Ok(ok) => Outcome::exact(ok, detail),
            Err(e) => Outcome::from_error(e),
        }
    }
}

fn qp(p: u64) -> QParam {
    QParam::new(p).expect("validated p >= 2")
}

fn integrality(ctx: &Ctx) -> Vec<Check> {
    ctx.pairs(ctx.config.n_max)
        .par_iter()
        .flat_map_iter(|&(n, p)| {
            let qp = qp(p);
            let mut out = Vec::new();
            let lcm = d_n_value(n, p) == lcm_p_powers_minus_one(n, p);
            out.push(ctx.check(
                "d_n(p) equals lcm of p^j - 1",
                "product of cyclotomic values",
                Some(n),
                Some(p),
                Outcome::exact(lcm, "cyclotomic product differs from the lcm"),
            ));
            match approximant(n, &qp) {
                Ok(rec) => {
                    out.push(ctx.check(
                        "a_n and b_n are integers",
                        "clearing factor e_n = p^floor(n^2/4) d_n(p)^2",
                        Some(n),
                        Some(p),
                        Outcome::Pass(format!("b_n has {} digits", rec.b.to_string().len())),
                    ));
                    out.push(ctx.check(
                        "p-adic denominators of B_n(p^n), e_n C_n(p^n) / d_n^2",
                        "power of p needed is at most floor(n^2/4)",
                        Some(n),
                        Some(p),
                        denominators(&rec),
                    ));
                }
                Err(e) => out.push(ctx.check(
                    "a_n and b_n are integers",
                    "clearing factor e_n = p^floor(n^2/4) d_n(p)^2",
                    Some(n),
                    Some(p),
                    Outcome::from_error(e),
                )),
            }
            out
        })
        .collect()
}

fn denominators(rec: &ApproximantRecord) -> Outcome {
    let p = rec.qp.p();
    let x = rat_int(rec.qp.p_pow(rec.n as u64));
    let bound = denominator_bound(rec.n);
    let d = rat_int(d_n_value(rec.n, p));
    let e = rat_int(clearing_factor_e(rec.n, p));
    let vb = p_adic_valuation(&rec.b_poly.eval(&x), p);
    let vc = p_adic_valuation(&(e * rec.c_poly.eval(&x) / (&d * &d)), p);
    Outcome::exact(
        vb.at_least(bound) && vc.at_least(bound),
        format!("valuations {vb} and {vc}, need >= {bound}"),
    )
}

fn identities(ctx: &Ctx) -> Vec<Check> {
    let mut out: Vec<Check> = ctx
        .pairs(ctx.config.n_max)
        .par_iter()
        .map(|&(n, p)| {
            ctx.check(
                "q-binomial identity",
                "sum over j of q-binomial products times harmonic-type brackets vanishes",
                Some(n),
                Some(p),
                Outcome::exact(q_binomial_identity_check(n, &qp(p)), "sum is nonzero"),
            )
        })
        .collect();
    out.extend((0..=ctx.config.n_max).into_par_iter().map(|n| {
        ctx.check(
            "harmonic identity",
            "q -> 1 limit of the q-binomial identity",
            Some(n),
            None,
            Outcome::exact(harmonic_identity_check(n), "sum is nonzero"),
        )
    }).collect::<Vec<_>>());
    let bits = ctx.bits(96);
    for &p in &ctx.config.p_list {
        out.extend((1..=6u32).into_par_iter().map(|r| {
            ctx.check("shifted series identity", "zeta_q(2) minus sum k q^(rk)/(1-q^k)", None, Some(p), variant(r, p, bits))
        }).collect::<Vec<_>>());
    }
    out
}

fn variant(r: u32, p: u64, bits: u32) -> Outcome {
    let qp = qp(p);
    let (full, shifted) = match (zeta_q(2, &qp, bits), zeta_q_r_variant(r, &qp, bits)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::from_error(e),
    };
    if !(full.width_below(48) && shifted.width_below(48)) {
        return Outcome::Imprecise(format!("r = {r}: enclosures wider than 2^-48 at {bits} bits"));
    }
    if (&full - &shifted).contains(&variant_gap(r, &qp)) {
        Outcome::Pass(format!("r = {r}"))
    } else {
        Outcome::Fail(format!("r = {r}: difference misses the exact gap"))
    }
}

fn orthogonality(ctx: &Ctx) -> Vec<Check> {
    let bits = ctx.bits(64);
    ctx.pairs(ctx.config.n_max)
        .par_iter()
        .flat_map_iter(|&(n, p)| {
            let qp = qp(p);
            let mut out = vec![
                ctx.check(
                    "F_n vanishes at 1, p, ..., p^n",
                    "A_n(p^l) = l B_n(p^l)",
                    Some(n),
                    Some(p),
                    Outcome::exact(f_root_check(n, &qp), "nonzero value on the grid"),
                ),
                ctx.check(
                    "moments of F_n vanish below n",
                    "closed-form Mellin transform",
                    Some(n),
                    Some(p),
                    Outcome::exact((0..n as u64).all(|s| mellin_f(n, s, &qp) == BigRat::from_integer(0.into())), "a low moment is nonzero"),
                ),
            ];
            if n <= MOMENT_SUM_MAX_N {
                out.push(ctx.check(
                    "lattice moment sums match the closed form",
                    "sum q^(k(s+1)) F_n(q^k)",
                    Some(n),
                    Some(p),
                    moment_sums(n, &qp, bits),
                ));
            }
            if n <= RODRIGUES_MAX_N {
                let explicit = little_qjacobi(&QJacobiParams::unit(n, qp.clone()));
                out.push(ctx.check(
                    "Rodrigues formula equals explicit sum",
                    "little q-Jacobi polynomial, a = b = 1",
                    Some(n),
                    Some(p),
                    Outcome::from_result(explicit.map(|e| e == rodrigues_rhs(n, &qp)), "polynomials differ"),
                ));
            }
            if (1..=ORTHOGONALITY_MAX_N).contains(&n) {
                out.push(ctx.check(
                    "little q-Jacobi orthogonality",
                    "weighted lattice sums against x^m, m < n",
                    Some(n),
                    Some(p),
                    jacobi_orthogonality(n, &qp, bits),
                ));
            }
            out
        })
        .collect()
}

fn moment_sums(n: usize, qp: &QParam, bits: u32) -> Outcome {
    for s in 0..=n as u64 + 3 {
        let enc = match mellin_lattice_sum(n, s, qp, bits) {
            Ok(e) => e,
            Err(e) => return Outcome::from_error(e),
        };
        if !enc.width_below(32) {
            return Outcome::Imprecise(format!("s = {s}: width not below 2^-32"));
        }
        if !enc.contains(&mellin_f(n, s, qp)) {
            return Outcome::Fail(format!("s = {s}: enclosure {enc} misses the closed form"));
        }
    }
    Outcome::Pass(String::new())
}

fn jacobi_orthogonality(n: usize, qp: &QParam, bits: u32) -> Outcome {
    let one = BigRat::from_integer(1.into());
    for m in 0..n {
        let enc = match orthogonality_defect(n, m, &one, &one, qp, bits) {
            Ok(e) => e,
            Err(e) => return Outcome::from_error(e),
        };
        if !enc.width_below(32) {
            return Outcome::Imprecise(format!("m = {m}: width not below 2^-32"));
        }
        if !enc.contains_zero() {
            return Outcome::Fail(format!("m = {m}: {enc} excludes 0"));
        }
    }
    Outcome::Pass(String::new())
}

fn residues(ctx: &Ctx) -> Vec<Check> {
    let bits = ctx.bits(96);
    ctx.pairs(ctx.config.n_max)
        .par_iter()
        .flat_map_iter(|&(n, p)| {
            let qp = qp(p);
            let mut out = Vec::new();
            match residue_data(n, &qp) {
                Ok(data) => {
                    out.push(ctx.check(
                        "coefficient of zeta_q(1) vanishes",
                        "partial fractions of R_n(T; q)",
                        Some(n),
                        Some(p),
                        Outcome::Pass(String::new()),
                    ));
                    out.push(ctx.check(
                        "ledger reproduces b_n* and a_n*",
                        "scale p^(n^2+2n+1) / (p;p)_n",
                        Some(n),
                        Some(p),
                        Outcome::from_result(ledger_matches_approximant(&data), "ledger differs from the approximant"),
                    ));
                    if n >= 1 {
                        out.push(ctx.check(
                            "p-divisibility of D_1, D_2",
                            "power p^(ceil(3n^2/4)+2n+1)",
                            Some(n),
                            Some(p),
                            Outcome::exact(valuation_claim_check(&data), "valuation below the claimed power"),
                        ));
                    }
                }
                Err(e) => out.push(ctx.check(
                    "coefficient of zeta_q(1) vanishes",
                    "partial fractions of R_n(T; q)",
                    Some(n),
                    Some(p),
                    Outcome::from_error(e),
                )),
            }
            if n <= SERIES_MAX_N {
                let outcome = match sn_series_check(n, &qp, bits) {
                    Ok(c) if c.passed => Outcome::Pass(String::new()),
                    Ok(c) => {
                        let d = c.diagnostic.unwrap_or_default();
                        if d.contains("widths") {
                            Outcome::Imprecise(d)
                        } else {
                            Outcome::Fail(d)
                        }
                    }
                    Err(e) => Outcome::from_error(e),
                };
                out.push(ctx.check("lattice series S_n matches the ledger", "sum q^l R_n(q^l; q)", Some(n), Some(p), outcome));
            }
            out
        })
        .collect()
}

fn asymptotics(ctx: &Ctx) -> Vec<Check> {
    let mut out = Vec::new();
    for &p in &ctx.config.p_list {
        let qp = qp(p);
        let records: Vec<Result<ErrorRecord, Error>> = (0..=ctx.config.n_max)
            .into_par_iter()
            .map(|n| approximant(n, &qp).and_then(|rec| error_term(&rec, ctx.config.precision)))
            .collect();
        let mut previous: Option<&ErrorRecord> = None;
        for (n, rec) in records.iter().enumerate() {
            let rec = match rec {
                Ok(r) => r,
                Err(e) => {
                    out.push(ctx.check("error enclosure", "b_n zeta_q(2) - a_n", Some(n), Some(p), Outcome::from_error(e.clone())));
                    previous = None;
                    continue;
                }
            };
            let (lo, hi) = rec.err.to_decimal_pair(12);
            out.push(ctx.check(
                "error is nonzero",
                "b_n zeta_q(2) - a_n never vanishes",
                Some(n),
                Some(p),
                Outcome::exact(rec.err.is_strictly_positive(), "enclosure touches 0"),
            ));
            out.push(ctx.check(
                "error below the closed-form bound",
                "e_n (q;q)_n^2 q^(n+1) q^(3n(n+1)/2) / ((1-q)^2 (q^(n+1);q)_(n+1))",
                Some(n),
                Some(p),
                Outcome::exact(rec.within_bound(), format!("err in [{lo}, {hi}] exceeds {}", rec.bound21)),
            ));
            if n >= 3 {
                if let Some(prev) = previous {
                    out.push(ctx.check(
                        "error decreases",
                        "err_n < err_(n-1) for n >= 2",
                        Some(n),
                        Some(p),
                        Outcome::exact(rec.err.hi() < prev.err.hi(), "upper endpoint did not decrease"),
                    ));
                }
            }
            previous = Some(rec);
        }
        let doubles: Vec<Check> = records
            .par_iter()
            .enumerate()
            .take(DOUBLE_SUM_MAX_N + 1)
            .filter_map(|(n, rec)| rec.as_ref().ok().map(|r| (n, r)))
            .map(|(n, rec)| {
                ctx.check(
                    "double lattice sum agrees",
                    "double q-integral form of the error",
                    Some(n),
                    Some(p),
                    Outcome::from_result(double_integral_check(rec, rec.err.precision_bits()), "enclosures disjoint"),
                )
            })
            .collect();
        out.extend(doubles);
    }
    out
}

fn run_suite(suite: Suite, config: &RunConfig) -> Vec<Check> {
    let ctx = |name| Ctx { suite: name, config };
    match suite {
        Suite::Integrality => integrality(&ctx("integrality")),
        Suite::Identities => identities(&ctx("identities")),
        Suite::Orthogonality => orthogonality(&ctx("orthogonality")),
        Suite::Residues => residues(&ctx("residues")),
        Suite::Asymptotics => asymptotics(&ctx("asymptotics")),
        Suite::All => [
            Suite::Integrality,
            Suite::Identities,
            Suite::Orthogonality,
            Suite::Residues,
            Suite::Asymptotics,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, config))
        .collect(),
    }
}

pub fn run(config: &RunConfig, suite: Suite) -> Result<(), Failure> {
    let checks = run_suite(suite, config);
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let (failed, imprecise) = (count(Status::Fail), count(Status::Imprecise));
    let summary = Summary {
        passed: count(Status::Pass).to_string(),
        failed: failed.to_string(),
        imprecise: imprecise.to_string(),
    };
    emit(config.format, "verify", &checks, Some(summary))?;
    if failed > 0 {
        Err(Failure::Identity(format!("{failed} check(s) failed")))
    } else if imprecise > 0 {
        Err(Failure::Precision(format!("{imprecise} check(s) were not decided at this precision")))
    } else {
        Ok(())
    }
}
