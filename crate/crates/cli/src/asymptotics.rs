use qpade_core::numeric::Enclosure;
use qpade_core::zetaq::{asymptotics_report, ReferenceConstants};
use qpade_core::QParam;
use serde::Serialize;

use crate::args::RunConfig;
use crate::failure::Failure;
use crate::output::{emit, TextLine};

const DIGITS: usize = 10;

#[derive(Debug, Serialize)]
pub struct ExponentRow {
    pub n: String,
    pub p: String,
    pub log_p_dn_over_n2_lo: String,
    pub log_p_dn_over_n2_hi: String,
    pub log_p_en_over_n2_lo: String,
    pub log_p_en_over_n2_hi: String,
    pub log_p_bn_over_n2_lo: String,
    pub log_p_bn_over_n2_hi: String,
    pub log_p_err_over_n2_lo: String,
    pub log_p_err_over_n2_hi: String,
    pub log_bn_err_lo: String,
    pub log_bn_err_hi: String,
}

impl TextLine for ExponentRow {
    fn text_line(&self) -> String {
        format!(
            "n={} p={} d_n={}..{} e_n={}..{} b_n={}..{} err={}..{} log_bn_err={}..{}",
            self.n,
            self.p,
            self.log_p_dn_over_n2_lo,
            self.log_p_dn_over_n2_hi,
            self.log_p_en_over_n2_lo,
            self.log_p_en_over_n2_hi,
            self.log_p_bn_over_n2_lo,
            self.log_p_bn_over_n2_hi,
            self.log_p_err_over_n2_lo,
            self.log_p_err_over_n2_hi,
            self.log_bn_err_lo,
            self.log_bn_err_hi
        )
    }
}

/// Limits the exponent columns are compared against.
#[derive(Debug, Serialize)]
pub struct References {
    pub d_n: String,
    pub e_n: String,
    pub b_n: String,
    pub err: String,
    pub log_bn_err: String,
    pub mu_bound: String,
    pub prior_bound: String,
}

/// `lo..hi` on the grid `10^-digits`, rounded away from `x`.
fn outward(x: f64, digits: usize) -> String {
    let scale = 10f64.powi(digits as i32);
    let (lo, hi) = ((x * scale).floor() / scale, (x * scale).ceil() / scale);
    format!("{lo:.digits$}..{hi:.digits$}")
}

impl From<ReferenceConstants> for References {
    fn from(r: ReferenceConstants) -> Self {
        References {
            d_n: outward(r.d_n, 5),
            e_n: outward(r.e_n, 5),
            b_n: outward(r.b_n, 5),
            err: outward(r.err, 5),
            log_bn_err: outward(r.log_bn_err, 5),
            mu_bound: outward(r.mu_bound, 4),
            prior_bound: format!("{:.8}", r.prior_bound),
        }
    }
}

impl TextLine for References {
    fn text_line(&self) -> String {
        format!(
            "reference d_n={} e_n={} b_n={} err={} log_bn_err={} mu_bound={} prior_bound={}",
            self.d_n, self.e_n, self.b_n, self.err, self.log_bn_err, self.mu_bound, self.prior_bound
        )
    }
}

fn pair(e: &Enclosure) -> (String, String) {
    e.to_decimal_pair(DIGITS)
}

pub fn run(config: &RunConfig) -> Result<(), Failure> {
    if config.n_max < 2 {
        return Err(Failure::Usage(format!(
            "asymptotics need --n-max >= 2, got {}",
            config.n_max
        )));
    }
    let mut by_p = Vec::new();
    for &p in &config.p_list {
        by_p.push(asymptotics_report(&QParam::new(p)?, config.n_max, config.precision)?);
    }
    let mut rows = Vec::new();
    for n in 1..=config.n_max {
        for report in &by_p {
            let r = &report.rows[n - 1];
            let (d_lo, d_hi) = pair(&r.log_p_dn_over_n2);
            let (e_lo, e_hi) = pair(&r.log_p_en_over_n2);
            let (b_lo, b_hi) = pair(&r.log_p_bn_over_n2);
            let (x_lo, x_hi) = pair(&r.log_p_err_over_n2);
            let (l_lo, l_hi) = pair(&r.log_bn_err);
            rows.push(ExponentRow {
                n: n.to_string(),
                p: report.p.to_string(),
                log_p_dn_over_n2_lo: d_lo,
                log_p_dn_over_n2_hi: d_hi,
                log_p_en_over_n2_lo: e_lo,
                log_p_en_over_n2_hi: e_hi,
                log_p_bn_over_n2_lo: b_lo,
                log_p_bn_over_n2_hi: b_hi,
                log_p_err_over_n2_lo: x_lo,
                log_p_err_over_n2_hi: x_hi,
                log_bn_err_lo: l_lo,
                log_bn_err_hi: l_hi,
            });
        }
    }
    let refs = References::from(ReferenceConstants::new());
    if config.format == crate::args::Format::Csv {
        // CSV has no room for metadata; references go to stderr
        eprintln!("{}", refs.text_line());
    }
    emit(config.format, "asymptotics", &rows, Some(refs))?;
    Ok(())
}
