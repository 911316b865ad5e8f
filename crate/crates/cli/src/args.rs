//! Command-line grammar and parsing of the compact value syntaxes.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lambda_forge::{suite::DEFAULT_SEED, BaseSpace, Error, Rat, Result, ScalarDomain, SplitElement, TruncSeries};
use lambda_forge::scalar::parse_rat;

#[derive(Debug, Parser)]
#[command(name = "lambda-forge", version, about = "Exact lambda-ring calculus on K_0 of products of projective spaces")]
pub struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Seed for randomized checks; printed in every output.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The polynomials chi_1..chi_n in the Chern classes.
    ChiTable {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Universal polynomials for lambda^n(xy) or lambda^m(lambda^n x).
    UniversalPoly {
        #[arg(long, value_enum, default_value_t = UniversalKind::Product)]
        kind: UniversalKind,
        #[arg(long)]
        n: usize,
        /// Outer degree for the plethysm kind.
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Composition of additive operations given by their series.
    #[command(allow_negative_numbers = true)]
    StarCompose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 8)]
        truncation: usize,
    },
    /// Expansion of an operation in the gamma generators.
    #[command(allow_negative_numbers = true)]
    GammaExpand {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 4)]
        weight: u32,
        /// Treat `f` as a multiplicative class instead of an additive operation.
        #[arg(long)]
        multiplicative: bool,
    },
    /// Sum of a_n log^n(1+U)/n!, or its inverse with --inverse.
    #[command(allow_negative_numbers = true)]
    Sigma {
        /// Sequence a_0,a_1,... (or a series with --inverse).
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 8)]
        truncation: usize,
        #[arg(long)]
        inverse: bool,
    },
    /// Mittag-Leffler status, lim and lim^1 of a tower.
    TowerAnalyze {
        #[arg(long, value_enum)]
        kind: TowerKindArg,
        /// Coefficient group, e.g. Z, Q, Z/4, F5^2, Z^2+Z/2; repeat for a product.
        #[arg(long, required = true)]
        group: Vec<String>,
        /// Shift the tower by j levels.
        #[arg(long)]
        shift: Option<u32>,
        #[arg(long, default_value_t = 8)]
        truncation: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Solve (1+U) g' = f, over Z (through --depth levels) or F_p.
    #[command(allow_negative_numbers = true)]
    OmegaLift {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 8)]
        truncation: usize,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Eigenprojector pi_n, its inverse-operator phi_{n,k}, and their identities.
    #[command(allow_negative_numbers = true)]
    StableProjectors {
        #[arg(long, default_value_t = 0)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        k: i64,
        /// Number of levels below zero.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        truncation: usize,
    },
    /// Decide whether a multiplicative endomorphism series is (1+U)^k.
    #[command(allow_negative_numbers = true)]
    ClassifyEndo {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 12)]
        truncation: usize,
    },
    /// Exact verification of an identity; exit code 1 on failure.
    #[command(subcommand)]
    Verify(Verify),
    /// All acceptance criteria with their time budgets.
    SuiteAll {
        /// Only these criteria, e.g. 1,4,8.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum UniversalKind {
    Product,
    Plethysm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TowerKindArg {
    Omega,
    Factorial,
}

#[derive(Debug, Args)]
pub struct Sweep {
    /// Largest projective dimension of a sweep.
    #[arg(long)]
    pub d_max: Option<u32>,
    /// Twist range `lo..hi`, inclusive.
    #[arg(long, allow_hyphen_values = true)]
    pub m_range: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// chi(P^d, O(m)) = C(m+d, d) by Hirzebruch-Riemann-Roch; sweep with --d-max.
    #[command(allow_negative_numbers = true)]
    Hrr {
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        m: i64,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Adams-Riemann-Roch for P^d -> pt on O(m); sweep with --d-max.
    #[command(allow_negative_numbers = true)]
    Arr {
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        m: i64,
        #[arg(long, value_delimiter = ',')]
        k_set: Vec<u32>,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Grothendieck-Riemann-Roch for the projection forgetting the last factor.
    Grr {
        #[arg(long)]
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Push to a point instead (only for a single factor).
        #[arg(long)]
        to_point: bool,
    },
    /// Special lambda-ring identities on x, y up to --d.
    LambdaAxioms {
        #[arg(long)]
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 4)]
        d: usize,
    },
    /// chi_n(Omega_{X x P^1 / X}) identity for n, on X.
    OmegaChi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        space: String,
    },
    /// ch(Psi^k x) = k^j ch_j(x) in each degree.
    #[command(allow_negative_numbers = true)]
    AdamsEigen {
        #[arg(long)]
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        k: i64,
    },
}

/// `lo..hi` (also `lo:hi`), inclusive.
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .or_else(|| s.split_once(':'))
        .ok_or_else(|| Error::Parse(format!("range '{s}' must look like lo..hi")))?;
    let p = |x: &str| {
        x.trim()
            .trim_start_matches('=')
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad range bound '{x}'")))
    };
    let (lo, hi) = (p(a)?, p(b)?);
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

pub fn parse_rats(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(|x| parse_rat(x.trim())).collect()
}

/// `psi:k` for `(1+U)^k`, otherwise comma-separated coefficients of
/// `U^0, U^1, ...`. The result has order `n`, padded with zeros.
pub fn parse_series(s: &str, n: usize, prime: Option<u64>) -> Result<TruncSeries> {
    let s = s.trim();
    let domain = match prime {
        Some(p) => ScalarDomain::modulo(p)?,
        None => ScalarDomain::Rationals,
    };
    if let Some(k) = s.strip_prefix("psi:") {
        let k = k.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in '{s}'")))?;
        return settle(TruncSeries::binomial_power(ScalarDomain::Integers, k, n), prime.is_none(), domain);
    }
    let mut c = parse_rats(s)?;
    c.resize(n + 1, Rat::from_integer(0.into()));
    let f = TruncSeries::new(domain.clone(), c)?;
    settle(f, prime.is_none(), domain)
}

/// Integral inputs live over Z unless a prime was given.
fn settle(f: TruncSeries, integral_ok: bool, domain: ScalarDomain) -> Result<TruncSeries> {
    if integral_ok {
        if let Ok(z) = f.with_domain(ScalarDomain::Integers) {
            return Ok(z);
        }
    }
    f.with_domain(domain)
}

pub fn parse_space(s: &str) -> Result<BaseSpace> {
    s.parse()
}

/// Integral classes stay over Z; anything with a fraction is read over Q.
pub fn parse_element(space: &BaseSpace, s: &str) -> Result<SplitElement> {
    SplitElement::parse(space, ScalarDomain::Integers, s)
        .or_else(|_| SplitElement::parse(space, ScalarDomain::Rationals, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-6..6").unwrap(), (-6, 6));
        assert_eq!(parse_range("0:3").unwrap(), (0, 3));
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn series_syntax() {
        let f = parse_series("psi:2", 4, None).unwrap();
        assert_eq!(f.to_strings(), ["1", "2", "1", "0", "0"]);
        assert_eq!(f.domain(), &ScalarDomain::Integers);
        let g = parse_series("1, 1/2", 2, None).unwrap();
        assert_eq!(g.domain(), &ScalarDomain::Rationals);
        let h = parse_series("0,3,4", 2, Some(3)).unwrap();
        assert_eq!(h.to_strings(), ["0", "0", "1"]);
        assert!(parse_series("1,x", 2, None).is_err());
    }
}
