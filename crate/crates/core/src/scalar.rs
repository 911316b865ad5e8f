//! Exact scalar domains.
//!
//! Every scalar is stored as a [`BigRational`]; the [`ScalarDomain`] decides
//! which rationals are admissible and how they are reduced. `IntegersMod(m)`
//! keeps canonical representatives in `0..m`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ScalarDomain {
    Integers,
    Rationals,
    IntegersMod { m: u64 },
    IntegersLocalized { primes: BTreeSet<u64> },
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarDomain::Integers => write!(f, "Z"),
            ScalarDomain::Rationals => write!(f, "Q"),
            ScalarDomain::IntegersMod { m } => write!(f, "Z/{m}"),
            ScalarDomain::IntegersLocalized { primes } => {
                let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                write!(f, "Z[1/{}]", ps.join(","))
            }
        }
    }
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_big(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

/// Decimal rendering: `"p"` for integers, `"p/q"` otherwise.
pub fn rat_to_string(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact scalar: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(rat_big(s.parse().map_err(|_| bad())?)),
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Strip all factors of the listed primes; the remainder is what a
/// localisation cannot invert.
fn strip_primes(n: &BigInt, primes: &BTreeSet<u64>) -> BigInt {
    let mut n = n.abs();
    for &p in primes {
        let p = BigInt::from(p);
        while !n.is_zero() && (&n % &p).is_zero() {
            n /= &p;
        }
    }
    n
}

impl ScalarDomain {
    pub fn localized(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let d = ScalarDomain::IntegersLocalized {
            primes: primes.into_iter().collect(),
        };
        d.validate()?;
        Ok(d)
    }

    /// `Z[1/k]`: localisation at the prime divisors of `k`.
    pub fn invert(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidDomain(format!("cannot localise at {k}")));
        }
        let mut primes = BTreeSet::new();
        let mut n = k;
        let mut p = 2;
        while n > 1 {
            if n % p == 0 {
                primes.insert(p);
                n /= p;
            } else {
                p += 1;
            }
        }
        Ok(ScalarDomain::IntegersLocalized { primes })
    }

    pub fn modulo(m: u64) -> Result<Self> {
        let d = ScalarDomain::IntegersMod { m };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ScalarDomain::IntegersMod { m } if *m < 2 => {
                Err(Error::InvalidDomain(format!("modulus {m} must be at least 2")))
            }
            ScalarDomain::IntegersLocalized { primes } => {
                match primes.iter().find(|p| !is_prime(**p)) {
                    Some(p) => Err(Error::InvalidDomain(format!("{p} is not prime"))),
                    None => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    /// Characteristic zero domains embed in Q; `IntegersMod` does not.
    pub fn is_char_zero(&self) -> bool {
        !matches!(self, ScalarDomain::IntegersMod { .. })
    }

    pub fn contains(&self, q: &Rat) -> bool {
        match self {
            ScalarDomain::Integers => q.is_integer(),
            ScalarDomain::Rationals => true,
            ScalarDomain::IntegersMod { m } => {
                q.is_integer() && !q.is_negative() && q.numer() < &BigInt::from(*m)
            }
            ScalarDomain::IntegersLocalized { primes } => strip_primes(q.denom(), primes).is_one(),
        }
    }

    /// Map a rational into the domain, if it has a well-defined image.
    pub fn normalize(&self, q: Rat) -> Result<Rat> {
        match self {
            ScalarDomain::IntegersMod { m } => {
                let m = BigInt::from(*m);
                let den = q.denom().mod_floor(&m);
                let inv = mod_inverse(&den, &m).ok_or_else(|| Error::NotInDomain {
                    value: rat_to_string(&q),
                    domain: self.to_string(),
                })?;
                Ok(rat_big((q.numer() * inv).mod_floor(&m)))
            }
            _ if self.contains(&q) => Ok(q),
            _ => Err(Error::NotInDomain {
                value: rat_to_string(&q),
                domain: self.to_string(),
            }),
        }
    }

    /// Reduce the result of a ring operation on two domain elements.
    /// Only `IntegersMod` needs work; the other domains are closed.
    pub fn reduce(&self, q: Rat) -> Rat {
        match self {
            ScalarDomain::IntegersMod { m } => {
                debug_assert!(q.is_integer());
                rat_big(q.numer().mod_floor(&BigInt::from(*m)))
            }
            _ => q,
        }
    }

    pub fn is_unit(&self, q: &Rat) -> bool {
        match self {
            ScalarDomain::Integers => q.is_integer() && q.numer().abs().is_one(),
            ScalarDomain::Rationals => !q.is_zero(),
            ScalarDomain::IntegersMod { m } => q.numer().gcd(&BigInt::from(*m)).is_one(),
            ScalarDomain::IntegersLocalized { primes } => {
                !q.is_zero() && strip_primes(q.numer(), primes).is_one()
            }
        }
    }

    pub fn inv(&self, q: &Rat) -> Result<Rat> {
        if !self.is_unit(q) {
            return Err(Error::NotAUnit {
                value: rat_to_string(q),
                domain: self.to_string(),
            });
        }
        match self {
            ScalarDomain::IntegersMod { m } => {
                let m = BigInt::from(*m);
                Ok(rat_big(mod_inverse(q.numer(), &m).expect("unit")))
            }
            _ => Ok(q.recip()),
        }
    }

    /// Exact division of `q` by the integer `n` inside the domain.
    pub fn div_int(&self, q: &Rat, n: &BigInt) -> Result<Rat> {
        let fail = || Error::NonInvertibleDenominator {
            value: rat_to_string(q),
            divisor: n.to_string(),
            domain: self.to_string(),
        };
        if n.is_zero() {
            return Err(fail());
        }
        match self {
            ScalarDomain::IntegersMod { m } => {
                let m = BigInt::from(*m);
                let inv = mod_inverse(&n.mod_floor(&m), &m).ok_or_else(fail)?;
                Ok(rat_big((q.numer() * inv).mod_floor(&m)))
            }
            _ => {
                let r = q / rat_big(n.clone());
                if self.contains(&r) {
                    Ok(r)
                } else {
                    Err(fail())
                }
            }
        }
    }

    pub fn from_int(&self, n: i64) -> Rat {
        self.reduce(rat(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> Rat {
        self.reduce(rat_big(n))
    }

    pub fn zero(&self) -> Rat {
        Rat::zero()
    }

    pub fn one(&self) -> Rat {
        self.reduce(Rat::one())
    }

    pub fn add(&self, a: &Rat, b: &Rat) -> Rat {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Rat) -> Rat {
        self.reduce(-a)
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Generalised binomial coefficient `C(c, j)` for integer `c` of any sign.
pub fn binomial(c: &BigInt, j: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j {
        num *= c - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Generalised binomial coefficient `C(c, j)` for rational `c`.
pub fn binomial_rat(c: &Rat, j: u64) -> Rat {
    let mut acc = Rat::one();
    for i in 0..j {
        acc = acc * (c - rat(i as i64)) / rat(i as i64 + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn small_int(q: &Rat) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_must_be_at_least_two() {
        assert!(ScalarDomain::modulo(1).is_err());
        assert!(ScalarDomain::modulo(6).is_ok());
    }

    #[test]
    fn localized_division() {
        let d = ScalarDomain::invert(6).unwrap();
        assert_eq!(d.div_int(&rat(1), &BigInt::from(12)).unwrap(), ratio(1, 12));
        assert!(d.div_int(&rat(1), &BigInt::from(5)).is_err());
        assert!(d.is_unit(&rat(18)));
        assert!(!d.is_unit(&rat(10)));
        assert!(ScalarDomain::localized([4]).is_err());
    }

    #[test]
    fn mod_normalisation() {
        let d = ScalarDomain::modulo(6).unwrap();
        assert_eq!(d.normalize(rat(-1)).unwrap(), rat(5));
        assert_eq!(d.normalize(ratio(1, 5)).unwrap(), rat(5));
        assert!(d.normalize(ratio(1, 2)).is_err());
        assert!(!d.is_unit(&rat(4)));
        assert_eq!(d.inv(&rat(5)).unwrap(), rat(5));
    }

    #[test]
    fn integer_units() {
        let z = ScalarDomain::Integers;
        assert!(z.inv(&rat(2)).is_err());
        assert_eq!(z.inv(&rat(-1)).unwrap(), rat(-1));
        assert!(z.div_int(&rat(6), &BigInt::from(4)).is_err());
        assert_eq!(z.div_int(&rat(6), &BigInt::from(3)).unwrap(), rat(2));
    }

    #[test]
    fn generalised_binomials() {
        assert_eq!(binomial(&BigInt::from(5), 2), BigInt::from(10));
        assert_eq!(binomial(&BigInt::from(-1), 3), BigInt::from(-1));
        assert_eq!(binomial(&BigInt::from(-2), 2), BigInt::from(3));
        assert_eq!(binomial_rat(&ratio(1, 2), 2), ratio(-1, 8));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rat(" -3/6 ").unwrap(), ratio(-1, 2));
        assert_eq!(rat_to_string(&ratio(4, 2)), "2");
        assert_eq!(rat_to_string(&ratio(-1, 2)), "-1/2");
        assert!(parse_rat("1/0").is_err());
    }
}
