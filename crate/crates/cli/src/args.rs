use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpade_core::zetaq::PrecisionPolicy;

#[derive(Debug, Parser)]
#[command(name = "qpade", version, about = "Hermite-Padé approximants to zeta_q(2) at q = 1/p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximants a_n, b_n and their errors, one row per (n, p)
    Table(Common),
    /// Check the exact identities and error bounds
    Verify(VerifyArgs),
    /// Growth exponents of d_n, e_n, b_n and the error
    Asymptotics(Common),
    /// Per-(n, p) status of the q-binomial, harmonic and shifted-series identities
    Identity(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Comma-separated list of integers p >= 2
    #[arg(long = "p", value_delimiter = ',', default_value = "2", value_parser = parse_p)]
    pub p: Vec<u64>,

    /// Largest index n
    #[arg(long = "n-max", allow_negative_numbers = true)]
    pub n_max: i64,

    /// Absolute precision in bits, or "auto"
    #[arg(long, default_value = "auto")]
    pub bits: Bits,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,

    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Integrality,
    Identities,
    Orthogonality,
    Residues,
    Asymptotics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bits(pub PrecisionPolicy);

impl FromStr for Bits {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Bits(PrecisionPolicy::Auto));
        }
        match s.parse::<u32>() {
            Ok(b) if b > 0 => Ok(Bits(PrecisionPolicy::Fixed(b))),
            _ => Err(format!("expected a positive bit count or \"auto\", got {s:?}")),
        }
    }
}

fn parse_p(s: &str) -> Result<u64, String> {
    match s.trim().parse::<u64>() {
        Ok(p) if p >= 2 => Ok(p),
        _ => Err(format!("p must be an integer >= 2, got {s:?}")),
    }
}

/// Validated run settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// sorted, without duplicates
    pub p_list: Vec<u64>,
    pub n_max: usize,
    pub precision: PrecisionPolicy,
    pub format: Format,
}

impl TryFrom<&Common> for RunConfig {
    type Error = String;

    fn try_from(c: &Common) -> Result<Self, String> {
        let n_max = usize::try_from(c.n_max).map_err(|_| format!("--n-max must be >= 0, got {}", c.n_max))?;
        let mut p_list = c.p.clone();
        p_list.sort_unstable();
        p_list.dedup();
        if p_list.is_empty() {
            return Err("--p needs at least one value".into());
        }
        Ok(RunConfig {
            p_list,
            n_max,
            precision: c.bits.0,
            format: c.format,
        })
    }
}
