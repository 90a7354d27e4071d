use qpade_core::hermite_pade::approximant;
use qpade_core::numeric::{Enclosure, Rounding};
use qpade_core::zetaq::error_term;
use qpade_core::QParam;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::RunConfig;
use crate::failure::Failure;
use crate::output::{emit, NoMeta, TextLine, DIGITS};

#[derive(Debug, Serialize)]
pub struct TableRow {
    pub n: String,
    pub p: String,
    pub a: String,
    pub b: String,
    pub e: String,
    pub a_star: String,
    pub b_star: String,
    pub bits: String,
    pub err_lo: String,
    pub err_hi: String,
    pub bound: String,
    pub bound_decimal: String,
    pub log_p_err_over_n2_lo: Option<String>,
    pub log_p_err_over_n2_hi: Option<String>,
    pub log_bn_err_lo: Option<String>,
    pub log_bn_err_hi: Option<String>,
}

impl TextLine for TableRow {
    fn text_line(&self) -> String {
        format!(
            "n={} p={} a={} b={} err=[{}, {}] bound={}",
            self.n, self.p, self.a, self.b, self.err_lo, self.err_hi, self.bound
        )
    }
}

fn split(e: &Option<Enclosure>, digits: usize) -> (Option<String>, Option<String>) {
    match e {
        Some(e) => {
            let (lo, hi) = e.to_decimal_pair(digits);
            (Some(lo), Some(hi))
        }
        None => (None, None),
    }
}

fn row(n: usize, p: u64, config: &RunConfig) -> Result<TableRow, Failure> {
    let qp = QParam::new(p)?;
    let rec = approximant(n, &qp)?;
    let err = error_term(&rec, config.precision)?;
    let (err_lo, err_hi) = err.err.to_decimal_pair(DIGITS);
    let (lp_lo, lp_hi) = split(&err.log_p_err_over_n2, 10);
    let (lb_lo, lb_hi) = split(&err.log_bn_err, 10);
    let bound_decimal = qpade_core::numeric::Dyadic::from_rational(&err.bound21, 128, Rounding::Up)
        .to_decimal(DIGITS, Rounding::Up);
    Ok(TableRow {
        n: n.to_string(),
        p: p.to_string(),
        a: rec.a.to_string(),
        b: rec.b.to_string(),
        e: rec.e.to_string(),
        a_star: rec.a_star.to_string(),
        b_star: rec.b_star.to_string(),
        bits: err.err.precision_bits().to_string(),
        err_lo,
        err_hi,
        bound: err.bound21.to_string(),
        bound_decimal,
        log_p_err_over_n2_lo: lp_lo,
        log_p_err_over_n2_hi: lp_hi,
        log_bn_err_lo: lb_lo,
        log_bn_err_hi: lb_hi,
    })
}

/// Rows ordered by `n`, then `p`.
pub fn rows(config: &RunConfig) -> Result<Vec<TableRow>, Failure> {
    let pairs: Vec<(usize, u64)> = (0..=config.n_max)
        .flat_map(|n| config.p_list.iter().map(move |&p| (n, p)))
        .collect();
    pairs.par_iter().map(|&(n, p)| row(n, p, config)).collect()
}

pub fn run(config: &RunConfig) -> Result<(), Failure> {
    let rows = rows(config)?;
    emit::<_, NoMeta>(config.format, "table", &rows, None)?;
    Ok(())
}
