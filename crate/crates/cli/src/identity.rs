use qpade_core::residue::{q_binomial_identity_check, harmonic_identity_check};
use qpade_core::zetaq::variant_gap;
use qpade_core::QParam;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::RunConfig;
use crate::failure::Failure;
use crate::output::{emit, NoMeta, TextLine};

#[derive(Debug, Serialize)]
pub struct IdentityRow {
    pub n: String,
    pub p: String,
    pub q_binomial_identity: bool,
    pub harmonic_identity: bool,
    /// `sum_{i=1}^{n} q^i / (1 - q^i)^2`, the gap between `zeta_q(2)` and the
    /// series shifted by `r = n + 1`
    pub shifted_series_gap: String,
}

impl TextLine for IdentityRow {
    fn text_line(&self) -> String {
        format!(
            "n={} p={} q_binomial_identity={} harmonic_identity={} shifted_series_gap={}",
            self.n, self.p, self.q_binomial_identity, self.harmonic_identity, self.shifted_series_gap
        )
    }
}

pub fn run(config: &RunConfig) -> Result<(), Failure> {
    let pairs: Vec<(usize, u64)> = (0..=config.n_max)
        .flat_map(|n| config.p_list.iter().map(move |&p| (n, p)))
        .collect();
    let rows: Vec<IdentityRow> = pairs
        .par_iter()
        .map(|&(n, p)| {
            let qp = QParam::new(p).expect("validated p >= 2");
            IdentityRow {
                n: n.to_string(),
                p: p.to_string(),
                q_binomial_identity: q_binomial_identity_check(n, &qp),
                harmonic_identity: harmonic_identity_check(n),
                shifted_series_gap: variant_gap(n as u32 + 1, &qp).to_string(),
            }
        })
        .collect();
    emit::<_, NoMeta>(config.format, "identity", &rows, None)?;
    let bad = rows
        .iter()
        .filter(|r| !(r.q_binomial_identity && r.harmonic_identity))
        .count();
    if bad > 0 {
        return Err(Failure::Identity(format!("{bad} row(s) violate an identity")));
    }
    Ok(())
}
