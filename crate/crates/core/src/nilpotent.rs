//! Truncated multivariate polynomials `B[z_1..z_m] / (z_i^{n_i+1})`.
//!
//! This is both the normal form of `K_0(P^{n_1} x ... x P^{n_m})` (with
//! `z_i = u_i = [O(e_i)] - 1`) and the Chow ring of the same product (with
//! `z_i = h_i`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::RingElement;
use crate::scalar::{binomial, binomial_rat, rat_to_string, Rat, ScalarDomain};
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NilpotentPoly {
    dims: Vec<u32>,
    domain: ScalarDomain,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl NilpotentPoly {
    pub fn zero(dims: &[u32], domain: ScalarDomain) -> Self {
        NilpotentPoly {
            dims: dims.to_vec(),
            domain,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dims: &[u32], domain: ScalarDomain, c: Rat) -> Result<Self> {
        let mut p = Self::zero(dims, domain);
        let c = p.domain.normalize(c)?;
        p.add_term(vec![0; dims.len()], c);
        Ok(p)
    }

    pub fn one(dims: &[u32], domain: ScalarDomain) -> Self {
        let mut p = Self::zero(dims, domain);
        let one = p.domain.one();
        p.add_term(vec![0; dims.len()], one);
        p
    }

    /// The generator `z_i` (zero when `n_i = 0`).
    pub fn var(dims: &[u32], domain: ScalarDomain, i: usize) -> Self {
        let mut p = Self::zero(dims, domain);
        let mut e = vec![0; dims.len()];
        e[i] = 1;
        let one = p.domain.one();
        p.add_term(e, one);
        p
    }

    /// `c * z^exps`, dropped if it violates nilpotence.
    pub fn monomial(dims: &[u32], domain: ScalarDomain, exps: Vec<u32>, c: Rat) -> Result<Self> {
        if exps.len() != dims.len() {
            return Err(Error::ShapeMismatch("exponent vector length".into()));
        }
        let mut p = Self::zero(dims, domain);
        let c = p.domain.normalize(c)?;
        p.add_term(exps, c);
        Ok(p)
    }

    /// `prod_i (1 + z_i)^{a_i}`; the normal form of the line class `O(a)`.
    pub fn line(dims: &[u32], domain: ScalarDomain, a: &[i64]) -> Self {
        let mut acc = Self::one(dims, domain.clone());
        for (i, &ai) in a.iter().enumerate() {
            let mut factor = Self::zero(dims, domain.clone());
            let ab = BigInt::from(ai);
            for j in 0..=dims[i] {
                let mut e = vec![0; dims.len()];
                e[i] = j;
                let c = domain.from_bigint(binomial(&ab, j as u64));
                factor.add_term(e, c);
            }
            acc = acc.mul_unchecked(&factor);
        }
        acc
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        if c.is_zero() || exps.iter().zip(&self.dims).any(|(e, n)| e > n) {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rat::zero);
        *entry = self.domain.add(entry, &c);
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }

    /// Total dimension `sum n_i`; any product of more nilpotents vanishes.
    pub fn total_dim(&self) -> u32 {
        self.dims.iter().sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coefficient(&vec![0; self.dims.len()])
    }

    /// Homogeneous component of total degree `j`.
    pub fn degree_part(&self, j: u32) -> Self {
        let mut p = Self::zero(&self.dims, self.domain.clone());
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == j {
                p.terms.insert(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn with_domain(&self, domain: ScalarDomain) -> Result<Self> {
        let mut p = Self::zero(&self.dims, domain);
        for (e, c) in &self.terms {
            let c = p.domain.normalize(c.clone())?;
            p.add_term(e.clone(), c);
        }
        Ok(p)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!(
                "spaces {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(
                self.domain.to_string(),
                other.domain.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale_unchecked(&-Rat::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    fn scale_unchecked(&self, c: &Rat) -> Self {
        let mut out = Self::zero(&self.dims, self.domain.clone());
        for (e, v) in &self.terms {
            out.add_term(e.clone(), self.domain.mul(v, c));
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Result<Self> {
        let c = self.domain.normalize(c.clone())?;
        Ok(self.scale_unchecked(&c))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.dims, self.domain.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.dims, self.domain.clone());
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// `(1 + self)^c` for nilpotent `self` and any rational `c`; the binomial
    /// series terminates.
    pub fn one_plus_pow(&self, c: &Rat) -> Result<Self> {
        self.require_nilpotent()?;
        let mut acc = Self::zero(&self.dims, self.domain.clone());
        let mut zj = Self::one(&self.dims, self.domain.clone());
        for j in 0..=self.total_dim() {
            acc = acc.add(&zj.scale(&binomial_rat(c, j as u64))?)?;
            zj = zj.mul_unchecked(self);
            if zj.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    fn require_nilpotent(&self) -> Result<()> {
        if !self.constant_term().is_zero() {
            return Err(Error::BadConstantTerm {
                expected: "0".into(),
                found: rat_to_string(&self.constant_term()),
            });
        }
        Ok(())
    }

    /// Inverse of an element whose constant term is a unit of the domain.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = self.domain.inv(&c0)?;
        // self = c0 (1 + w), w nilpotent
        let w = self
            .scale_unchecked(&inv0)
            .sub(&Self::one(&self.dims, self.domain.clone()))?;
        let mut acc = Self::zero(&self.dims, self.domain.clone());
        let mut wj = Self::one(&self.dims, self.domain.clone());
        let minus_w = w.neg();
        for _ in 0..=self.total_dim() {
            acc = acc.add(&wj)?;
            wj = wj.mul_unchecked(&minus_w);
            if wj.is_zero() {
                break;
            }
        }
        Ok(acc.scale_unchecked(&inv0))
    }

    /// `f(self)` for nilpotent `self`; the series must reach the total
    /// dimension.
    pub fn compose_series(&self, f: &TruncSeries) -> Result<Self> {
        self.require_nilpotent()?;
        let need = self.total_dim() as usize;
        if f.order() < need {
            return Err(Error::InsufficientTruncation {
                have: f.order(),
                need,
            });
        }
        let mut acc = Self::zero(&self.dims, self.domain.clone());
        for j in (0..=need).rev() {
            acc = acc.mul_unchecked(self);
            let c = self.domain.normalize(f.coeff(j))?;
            acc.add_term(vec![0; self.dims.len()], c);
        }
        Ok(acc)
    }

    /// Sum of all coefficients with exponent `k` in variable `i`, as a
    /// polynomial in the remaining variables (the variable is deleted).
    pub fn extract(&self, i: usize, k: u32) -> Self {
        let mut dims = self.dims.clone();
        dims.remove(i);
        let mut out = Self::zero(&dims, self.domain.clone());
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e2 = e.clone();
                e2.remove(i);
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Inclusion along a projection: insert a new variable at position `i`.
    pub fn insert_var(&self, i: usize, n: u32) -> Self {
        let mut dims = self.dims.clone();
        dims.insert(i, n);
        let mut out = Self::zero(&dims, self.domain.clone());
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.insert(i, 0);
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Replace every `z_i` by `k z_i` on degree-`j` parts, i.e. multiply the
    /// degree-`j` part by `k^j`.
    pub fn scale_degrees(&self, k: &Rat) -> Self {
        let mut out = Self::zero(&self.dims, self.domain.clone());
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            let mut f = Rat::one();
            for _ in 0..deg {
                f *= k;
            }
            out.add_term(e.clone(), c * f);
        }
        out
    }
}

impl RingElement for NilpotentPoly {
    fn zero_like(&self) -> Self {
        Self::zero(&self.dims, self.domain.clone())
    }
    fn one_like(&self) -> Self {
        Self::one(&self.dims, self.domain.clone())
    }
    fn add_ref(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn mul_ref(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn scale_rat(&self, c: &Rat) -> Result<Self> {
        self.scale(c)
    }
}

impl NilpotentPoly {
    /// Render with the given variable stem (`u` for K-theory, `h` for Chow).
    pub fn render(&self, stem: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let single = self.dims.len() == 1;
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let v = if single {
                        stem.to_string()
                    } else {
                        format!("{stem}{}", i + 1)
                    };
                    if x == 1 {
                        v
                    } else {
                        format!("{v}^{x}")
                    }
                })
                .collect();
            let cs = rat_to_string(c);
            parts.push(if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono.join("*")
            } else {
                format!("{cs}*{}", mono.join("*"))
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for NilpotentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    #[test]
    fn line_classes() {
        let z = ScalarDomain::Integers;
        assert_eq!(NilpotentPoly::line(&[2], z.clone(), &[1]).render("u"), "1 + u");
        assert_eq!(NilpotentPoly::line(&[1], z.clone(), &[-1]).render("u"), "1 + -1*u");
        assert_eq!(
            NilpotentPoly::line(&[2], z.clone(), &[-1]).render("u"),
            "1 + -1*u + u^2"
        );
        let l = NilpotentPoly::line(&[1, 1], z, &[1, 1]);
        assert_eq!(l.render("u"), "1 + u2 + u1 + u1*u2");
    }

    #[test]
    fn inverse_and_powers() {
        let q = ScalarDomain::Rationals;
        let h = NilpotentPoly::var(&[2], q.clone(), 0);
        let one_plus_h = h.add(&NilpotentPoly::one(&[2], q.clone())).unwrap();
        assert_eq!(one_plus_h.invert().unwrap().render("h"), "1 + -1*h + h^2");
        let sq = h.one_plus_pow(&rat(-2)).unwrap();
        assert_eq!(sq.mul(&one_plus_h.pow(2)).unwrap(), NilpotentPoly::one(&[2], q.clone()));
        let half = h.one_plus_pow(&ratio(1, 2)).unwrap();
        assert_eq!(half.pow(2), one_plus_h);
    }

    #[test]
    fn non_unit_inverse_fails() {
        let z = ScalarDomain::Integers;
        let two = NilpotentPoly::constant(&[1], z, rat(2)).unwrap();
        assert!(two.invert().is_err());
    }
}
