//! Truncated univariate power series `A[[U]] / (U^{N+1})`.
//!
//! `U` stands for `[O(1)] - 1`; the binomial basis `(1+U)^j` is the basis in
//! which Adams operations are diagonal.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{binomial, parse_rat, rat, rat_to_string, Rat, ScalarDomain};

/// A power series kept modulo `U^{N+1}`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    domain: ScalarDomain,
    coeffs: Vec<Rat>,
}

fn check_domains(a: &ScalarDomain, b: &ScalarDomain) -> Result<()> {
    if a != b {
        return Err(Error::DomainMismatch(a.to_string(), b.to_string()));
    }
    Ok(())
}

impl TruncSeries {
    /// Builds `a_0 + a_1 U + ... + a_N U^N`, mapping each coefficient into
    /// the domain.
    pub fn new(domain: ScalarDomain, coeffs: Vec<Rat>) -> Result<Self> {
        domain.validate()?;
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least a_0".into()));
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| domain.normalize(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncSeries { domain, coeffs })
    }

    pub fn from_ints(domain: ScalarDomain, coeffs: &[i64]) -> Result<Self> {
        Self::new(domain, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(domain: ScalarDomain, order: usize) -> Self {
        TruncSeries {
            domain,
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    pub fn constant(domain: ScalarDomain, c: Rat, order: usize) -> Result<Self> {
        let mut coeffs = vec![Rat::zero(); order + 1];
        coeffs[0] = c;
        Self::new(domain, coeffs)
    }

    pub fn one(domain: ScalarDomain, order: usize) -> Self {
        let mut s = Self::zero(domain, order);
        s.coeffs[0] = s.domain.one();
        s
    }

    /// `c U^j` (zero if `j > order`).
    pub fn monomial(domain: ScalarDomain, j: usize, c: Rat, order: usize) -> Result<Self> {
        let mut coeffs = vec![Rat::zero(); order + 1];
        if j <= order {
            coeffs[j] = c;
        }
        Self::new(domain, coeffs)
    }

    /// `(1+U)^k` for any integer `k`; the series of the Adams operation `Psi^k`.
    pub fn binomial_power(domain: ScalarDomain, k: i64, order: usize) -> Self {
        let k = BigInt::from(k);
        let coeffs = (0..=order)
            .map(|j| domain.from_bigint(binomial(&k, j as u64)))
            .collect();
        TruncSeries { domain, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `U^n`; zero beyond the truncation.
    pub fn coeff(&self, n: usize) -> Rat {
        self.coeffs.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncSeries {
            domain: self.domain.clone(),
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Same coefficients viewed in another domain (e.g. Z -> Q).
    pub fn with_domain(&self, domain: ScalarDomain) -> Result<Self> {
        Self::new(domain, self.coeffs.clone())
    }

    fn common_order(&self, other: &Self) -> Result<usize> {
        check_domains(&self.domain, &other.domain)?;
        if self.order() != other.order() {
            log::warn!(
                "mixing truncation orders {} and {}; truncating to the minimum",
                self.order(),
                other.order()
            );
        }
        Ok(self.order().min(other.order()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.common_order(other)?;
        let coeffs = (0..=n)
            .map(|i| self.domain.add(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Ok(TruncSeries {
            domain: self.domain.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            domain: self.domain.clone(),
            coeffs: self.coeffs.iter().map(|c| self.domain.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Result<Self> {
        let c = self.domain.normalize(c.clone())?;
        Ok(TruncSeries {
            domain: self.domain.clone(),
            coeffs: self.coeffs.iter().map(|a| self.domain.mul(a, &c)).collect(),
        })
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.common_order(other)?;
        let mut coeffs = vec![Rat::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        let coeffs = coeffs.into_iter().map(|c| self.domain.reduce(c)).collect();
        Ok(TruncSeries {
            domain: self.domain.clone(),
            coeffs,
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.domain.clone(), self.order());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse; needs `a_0` to be a unit of the domain.
    pub fn invert(&self) -> Result<Self> {
        let d = &self.domain;
        let inv0 = d.inv(&self.coeffs[0])?;
        let mut out: Vec<Rat> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = Rat::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out.push(d.reduce(-(acc * &inv0)));
        }
        Ok(TruncSeries {
            domain: d.clone(),
            coeffs: out,
        })
    }

    /// `df/dU`; the order drops by one.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(self.domain.clone(), 0);
        }
        let coeffs = (1..=n)
            .map(|i| self.domain.reduce(&self.coeffs[i] * rat(i as i64)))
            .collect();
        TruncSeries {
            domain: self.domain.clone(),
            coeffs,
        }
    }

    /// `exp(f)` for `f(0) = 0`, via `n e_n = sum_k k f_k e_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::BadConstantTerm {
                expected: "0".into(),
                found: rat_to_string(&self.coeffs[0]),
            });
        }
        let d = &self.domain;
        let mut out = vec![d.one()];
        for n in 1..self.coeffs.len() {
            let mut acc = Rat::zero();
            for k in 1..=n {
                acc += rat(k as i64) * &self.coeffs[k] * &out[n - k];
            }
            out.push(d.div_int(&d.reduce(acc), &BigInt::from(n))?);
        }
        Ok(TruncSeries {
            domain: d.clone(),
            coeffs: out,
        })
    }

    /// `log(f)` for a series `f = 1 + g`, `g(0) = 0`.
    pub fn log1p(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::BadConstantTerm {
                expected: "1".into(),
                found: rat_to_string(&self.coeffs[0]),
            });
        }
        let d = &self.domain;
        let n = self.order();
        let mut out = vec![Rat::zero(); n + 1];
        if n == 0 {
            return Ok(TruncSeries {
                domain: d.clone(),
                coeffs: out,
            });
        }
        let logder = self.derivative().mul(&self.truncate(n - 1).invert()?)?;
        for i in 1..=n {
            out[i] = d.div_int(&logder.coeffs[i - 1], &BigInt::from(i))?;
        }
        Ok(TruncSeries {
            domain: d.clone(),
            coeffs: out,
        })
    }

    /// `f(g)` for `g(0) = 0`, by Horner's rule.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::BadConstantTerm {
                expected: "0".into(),
                found: rat_to_string(&g.coeffs[0]),
            });
        }
        let n = self.common_order(g)?;
        let g = g.truncate(n);
        let mut acc = Self::zero(self.domain.clone(), n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = acc.mul(&g)?;
            acc.coeffs[0] = self.domain.add(&acc.coeffs[0], c);
        }
        Ok(acc)
    }

    /// Coordinates `alpha_j` with `f = sum_j alpha_j (1+U)^j mod U^{N+1}`.
    pub fn to_binomial_basis(&self) -> Vec<Rat> {
        let n = self.order();
        let mut out = vec![Rat::zero(); n + 1];
        // U^m = sum_j C(m, j) (-1)^(m-j) (1+U)^j
        for (m, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mut b = BigInt::one();
            for j in 0..=m {
                let term = c * Rat::from_integer(b.clone());
                if (m - j) % 2 == 0 {
                    out[j] += term;
                } else {
                    out[j] -= term;
                }
                b = b * BigInt::from(m - j) / BigInt::from(j + 1);
            }
        }
        out.into_iter().map(|a| self.domain.reduce(a)).collect()
    }

    /// `sum alpha_j (1+U)^j` truncated at `order`. Exponents may exceed the
    /// order; negative exponents need `allow_negative`.
    pub fn from_binomial_basis(
        domain: ScalarDomain,
        terms: &[(i64, Rat)],
        order: usize,
        allow_negative: bool,
    ) -> Result<Self> {
        let mut coeffs = vec![Rat::zero(); order + 1];
        for (j, alpha) in terms {
            if *j < 0 && !allow_negative {
                return Err(Error::NegativeExponent(*j));
            }
            if alpha.is_zero() {
                continue;
            }
            // C(j, i+1) = C(j, i) (j - i) / (i + 1)
            let mut b = BigInt::one();
            for (i, c) in coeffs.iter_mut().enumerate() {
                if b.is_zero() {
                    break;
                }
                *c += alpha * Rat::from_integer(b.clone());
                b = b * BigInt::from(*j - i as i64) / BigInt::from(i as i64 + 1);
            }
        }
        Self::new(domain, coeffs)
    }

    /// Convenience wrapper for a dense coefficient array `alpha_0..alpha_M`.
    pub fn from_binomial_coords(domain: ScalarDomain, alpha: &[Rat], order: usize) -> Result<Self> {
        let terms: Vec<(i64, Rat)> = alpha
            .iter()
            .enumerate()
            .map(|(j, a)| (j as i64, a.clone()))
            .collect();
        Self::from_binomial_basis(domain, &terms, order, false)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_to_string).collect()
    }

    pub fn from_strings(domain: ScalarDomain, items: &[String]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, coeffs)
    }

    pub fn from_json(domain: ScalarDomain, value: &serde_json::Value) -> Result<Self> {
        let items: Vec<String> = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("series must be an array of strings: {e}")))?;
        Self::from_strings(domain, &items)
    }
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&rat_to_string(c))?;
        }
        seq.end()
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = rat_to_string(c);
            parts.push(match i {
                0 => cs,
                _ => {
                    let mono = if i == 1 { "U".to_string() } else { format!("U^{i}") };
                    if c.is_one() {
                        mono
                    } else {
                        format!("{cs}*{mono}")
                    }
                }
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(U^{})", parts.join(" + "), self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use proptest::prelude::*;

    const Z: ScalarDomain = ScalarDomain::Integers;
    const Q: ScalarDomain = ScalarDomain::Rationals;

    fn ints(c: &[i64]) -> TruncSeries {
        TruncSeries::from_ints(Z, c).unwrap()
    }

    #[test]
    fn binomial_square() {
        let f = ints(&[1, 1, 0]);
        assert_eq!(f.mul(&f).unwrap(), ints(&[1, 2, 1]));
    }

    #[test]
    fn geometric_inverse() {
        for n in [1, 5, 12] {
            let mut c = vec![0; n + 1];
            c[0] = 1;
            c[1] = -1;
            let geo = ints(&vec![1; n + 1]);
            assert_eq!(ints(&c).mul(&geo).unwrap(), TruncSeries::one(Z, n));
        }
    }

    #[test]
    fn binomial_product_expands_to_choose_five() {
        let a = TruncSeries::binomial_power(Z, 2, 5);
        let b = TruncSeries::binomial_power(Z, 3, 5);
        // direct expansion of (1+U)^5
        let expected: Vec<i64> = vec![1, 5, 10, 10, 5, 1];
        assert_eq!(a.mul(&b).unwrap(), ints(&expected));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(ints(&[1, 1, 0, 0]).invert().unwrap(), ints(&[1, -1, 1, -1]));
        let z2 = ScalarDomain::invert(2).unwrap();
        let f = TruncSeries::from_ints(z2.clone(), &[2, -2, 0]).unwrap();
        let g = f.invert().unwrap();
        assert_eq!(g.coeffs(), &[ratio(1, 2), ratio(1, 2), ratio(1, 2)]);
        assert_eq!(f.mul(&g).unwrap(), TruncSeries::one(z2, 2));
        assert!(matches!(ints(&[2, -2, 0]).invert(), Err(Error::NotAUnit { .. })));
    }

    #[test]
    fn mercator_and_round_trip() {
        let f = TruncSeries::from_ints(Q, &[1, 1, 0, 0]).unwrap();
        let l = f.log1p().unwrap();
        assert_eq!(l.coeffs(), &[rat(0), rat(1), ratio(-1, 2), ratio(1, 3)]);
        assert_eq!(l.exp().unwrap(), f);
    }

    #[test]
    fn second_log_power() {
        let l = TruncSeries::from_ints(Q, &[1, 1, 0, 0, 0]).unwrap().log1p().unwrap();
        let p2 = l.mul(&l).unwrap().scale(&ratio(1, 2)).unwrap();
        assert_eq!(
            p2.coeffs(),
            &[rat(0), rat(0), ratio(1, 2), ratio(-1, 2), ratio(11, 24)]
        );
    }

    #[test]
    fn exp_rejects_constant_term_and_integers() {
        assert!(TruncSeries::from_ints(Q, &[1, 1]).unwrap().exp().is_err());
        assert!(matches!(
            ints(&[1, 1, 0]).log1p(),
            Err(Error::NonInvertibleDenominator { .. })
        ));
    }

    #[test]
    fn binomial_basis_examples() {
        assert_eq!(ints(&[0, 1, 0]).to_binomial_basis(), vec![rat(-1), rat(1), rat(0)]);
        let b = TruncSeries::binomial_power(Z, 5, 5).to_binomial_basis();
        assert_eq!(b, vec![rat(0), rat(0), rat(0), rat(0), rat(0), rat(1)]);
        assert_eq!(ints(&[0, 0, 1]).to_binomial_basis(), vec![rat(1), rat(-2), rat(1)]);
    }

    #[test]
    fn from_binomial_basis_examples() {
        let s = TruncSeries::from_binomial_basis(Z, &[(6, rat(1))], 2, false).unwrap();
        assert_eq!(s, ints(&[1, 6, 15]));
        let s = TruncSeries::from_binomial_basis(Z, &[(0, rat(1))], 3, false).unwrap();
        assert_eq!(s, TruncSeries::one(Z, 3));
        assert!(TruncSeries::from_binomial_basis(Z, &[(-1, rat(1))], 3, false).is_err());
        let s = TruncSeries::from_binomial_basis(Z, &[(-1, rat(1))], 3, true).unwrap();
        assert_eq!(s, ints(&[1, -1, 1, -1]));
    }

    #[test]
    fn mixed_domains_rejected() {
        let a = ints(&[1, 1]);
        let b = TruncSeries::from_ints(Q, &[1, 1]).unwrap();
        assert!(matches!(a.mul(&b), Err(Error::DomainMismatch(..))));
    }

    #[test]
    fn mixed_orders_truncate_down() {
        let a = ints(&[1, 1, 1, 1]);
        let b = ints(&[1, 1]);
        assert_eq!(a.mul(&b).unwrap().order(), 1);
    }

    #[test]
    fn mod_arithmetic_wraps() {
        let d = ScalarDomain::modulo(4).unwrap();
        let f = TruncSeries::from_ints(d.clone(), &[3, 3]).unwrap();
        assert_eq!(f.mul(&f).unwrap(), TruncSeries::from_ints(d, &[1, 2]).unwrap());
    }

    #[test]
    fn json_is_array_of_strings() {
        let f = TruncSeries::new(Q, vec![rat(1), ratio(-1, 2)]).unwrap();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v, serde_json::json!(["1", "-1/2"]));
        assert_eq!(TruncSeries::from_json(Q, &v).unwrap(), f);
    }

    fn series(order: usize) -> impl Strategy<Value = TruncSeries> {
        prop::collection::vec(-20i64..20, order + 1).prop_map(|c| ints(&c))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in series(8), b in series(8), c in series(8)) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn binomial_basis_round_trip(c in prop::collection::vec(-50i64..50, 1..65)) {
            let f = ints(&c);
            let alpha = f.to_binomial_basis();
            prop_assert_eq!(TruncSeries::from_binomial_coords(Z, &alpha, f.order()).unwrap(), f.clone());
            let g = TruncSeries::new(Z, alpha.clone()).unwrap();
            let back = TruncSeries::from_binomial_coords(Z, g.coeffs(), g.order()).unwrap();
            prop_assert_eq!(back.to_binomial_basis(), g.coeffs().to_vec());
        }

        #[test]
        fn inverse_is_exact(mut c in prop::collection::vec(-9i64..9, 1..20), sign in prop::bool::ANY) {
            c[0] = if sign { 1 } else { -1 };
            let f = ints(&c);
            prop_assert_eq!(f.mul(&f.invert().unwrap()).unwrap(), TruncSeries::one(Z, f.order()));
        }

        #[test]
        fn exp_log_round_trip(c in prop::collection::vec(-5i64..5, 1..33)) {
            let mut c = c;
            c[0] = 0;
            let g = TruncSeries::from_ints(Q, &c).unwrap();
            let e = g.exp().unwrap();
            prop_assert_eq!(e.log1p().unwrap(), g);
            c[0] = 1;
            let f = TruncSeries::from_ints(Q, &c).unwrap();
            prop_assert_eq!(f.log1p().unwrap().exp().unwrap(), f);
        }
    }
}
