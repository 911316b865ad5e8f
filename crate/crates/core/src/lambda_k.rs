//! The special λ-ring `K_0(P^{n_1} x ... x P^{n_m})` over a point, via the
//! splitting principle.
//!
//! Elements are presented as combinations of line classes `[O(a)]`. The
//! presentation is not canonical; equality goes through [`normal_form`],
//! the image in `Z[u_1..u_m]/(u_i^{n_i+1})` with `[O(a)] -> prod (1+u_i)^{a_i}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nilpotent::NilpotentPoly;
use crate::ring::RingElement;
use crate::scalar::{binomial, parse_rat, rat, rat_to_string, Rat, ScalarDomain};
use crate::symmetric::{universal_plethysm_poly, universal_product_poly};

/// `P^{n_1} x ... x P^{n_m}`; the empty product is the point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseSpace {
    pub dims: Vec<u32>,
}

impl BaseSpace {
    pub fn point() -> Self {
        BaseSpace { dims: vec![] }
    }

    pub fn projective(n: u32) -> Self {
        BaseSpace { dims: vec![n] }
    }

    pub fn product(dims: &[u32]) -> Self {
        BaseSpace {
            dims: dims.to_vec(),
        }
    }

    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> u32 {
        self.dims.iter().sum()
    }
}

impl fmt::Display for BaseSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dims.is_empty() {
            return write!(f, "pt");
        }
        let parts: Vec<String> = self.dims.iter().map(|n| format!("P^{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Accepts `pt`, `P^2xP^1`, `P2xP1` or `2x1`.
impl FromStr for BaseSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "pt" || s.is_empty() {
            return Ok(BaseSpace::point());
        }
        let dims = s
            .split(['x', 'X', '×'])
            .map(|f| {
                let f = f.trim();
                let n = f.strip_prefix("P^").or_else(|| f.strip_prefix('P')).unwrap_or(f);
                n.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad projective factor '{f}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BaseSpace { dims })
    }
}

/// A class in `K_0(X) ⊗ B` written as `sum_a c_a [O(a)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitElement {
    space: BaseSpace,
    domain: ScalarDomain,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl SplitElement {
    pub fn zero(space: &BaseSpace) -> Self {
        Self::zero_in(space, ScalarDomain::Integers)
    }

    pub fn zero_in(space: &BaseSpace, domain: ScalarDomain) -> Self {
        SplitElement {
            space: space.clone(),
            domain,
            terms: BTreeMap::new(),
        }
    }

    pub fn line(space: &BaseSpace, a: &[i64]) -> Result<Self> {
        Self::from_terms(space, ScalarDomain::Integers, [(a.to_vec(), Rat::one())])
    }

    /// `r` copies of the trivial line bundle.
    pub fn trivial(space: &BaseSpace, r: i64) -> Self {
        Self::from_terms(space, ScalarDomain::Integers, [(vec![0; space.factors()], rat(r))])
            .expect("integers")
    }

    pub fn from_terms(
        space: &BaseSpace,
        domain: ScalarDomain,
        terms: impl IntoIterator<Item = (Vec<i64>, Rat)>,
    ) -> Result<Self> {
        let mut x = Self::zero_in(space, domain);
        for (a, c) in terms {
            if a.len() != space.factors() {
                return Err(Error::ShapeMismatch(format!(
                    "line O({a:?}) on {space}"
                )));
            }
            let c = x.domain.normalize(c)?;
            x.add_term(a, c);
        }
        Ok(x)
    }

    fn add_term(&mut self, a: Vec<i64>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(a.clone()).or_insert_with(Rat::zero);
        *e = self.domain.add(e, &c);
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn space(&self) -> &BaseSpace {
        &self.space
    }

    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero_presentation(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn rank(&self) -> Rat {
        self.terms.values().cloned().sum()
    }

    /// Rank as an integer; errors for non-integral ranks.
    pub fn int_rank(&self) -> Result<i64> {
        let r = self.rank();
        crate::scalar::small_int(&r).ok_or_else(|| Error::NotInDomain {
            value: rat_to_string(&r),
            domain: "small integers".into(),
        })
    }

    pub fn with_domain(&self, domain: ScalarDomain) -> Result<Self> {
        Self::from_terms(&self.space, domain, self.terms.clone())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::ShapeMismatch(format!(
                "{} vs {}",
                self.space, other.space
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
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero_in(&self.space, self.domain.clone());
        for (a, c) in &self.terms {
            out.add_term(a.clone(), self.domain.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Result<Self> {
        let c = self.domain.normalize(c.clone())?;
        let mut out = Self::zero_in(&self.space, self.domain.clone());
        for (a, v) in &self.terms {
            out.add_term(a.clone(), self.domain.mul(v, &c));
        }
        Ok(out)
    }

    /// Tensor product: `[O(a)][O(b)] = [O(a+b)]`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero_in(&self.space, self.domain.clone());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(s, self.domain.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// Image in `B[u]/(u_i^{n_i+1})`.
    pub fn normal_form(&self) -> NilpotentPoly {
        let mut acc = NilpotentPoly::zero(&self.space.dims, self.domain.clone());
        for (a, c) in &self.terms {
            let l = NilpotentPoly::line(&self.space.dims, self.domain.clone(), a);
            acc = acc
                .add(&l.scale(c).expect("coefficient in domain"))
                .expect("same shape");
        }
        acc
    }

    /// Canonical presentation of a normal form, with exponents in `0..=n_i`:
    /// `u^j = ((1+u) - 1)^j = sum_l C(j,l) (-1)^{j-l} (1+u)^l`.
    pub fn from_normal_form(space: &BaseSpace, nf: &NilpotentPoly) -> Result<Self> {
        if nf.dims() != space.dims.as_slice() {
            return Err(Error::ShapeMismatch("normal form on another space".into()));
        }
        let mut out = Self::zero_in(space, nf.domain().clone());
        for (exps, c) in nf.terms() {
            // expand the product of per-variable binomial sums
            let mut partial: Vec<(Vec<i64>, BigInt)> = vec![(vec![], BigInt::one())];
            for &j in exps {
                let mut next = Vec::new();
                for (prefix, coef) in &partial {
                    for l in 0..=j {
                        let mut b = binomial(&BigInt::from(j), l as u64);
                        if (j - l) % 2 == 1 {
                            b = -b;
                        }
                        let mut p = prefix.clone();
                        p.push(l as i64);
                        next.push((p, coef * b));
                    }
                }
                partial = next;
            }
            for (a, b) in partial {
                out.add_term(a, nf.domain().mul(c, &Rat::from_integer(b)));
            }
        }
        Ok(out)
    }

    /// Equality in `K_0`, i.e. equality of normal forms.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.space == other.space && self.normal_form() == other.normal_form()
    }

    /// Canonical re-presentation (exponents in `0..=n_i`).
    pub fn canonical(&self) -> Self {
        Self::from_normal_form(&self.space, &self.normal_form()).expect("same space")
    }

    fn require_integral(&self) -> Result<()> {
        match self.terms.values().find(|c| !c.is_integer()) {
            Some(c) => Err(Error::NotInDomain {
                value: rat_to_string(c),
                domain: "Z (lambda operations need integral multiplicities)".into(),
            }),
            None => Ok(()),
        }
    }

    /// `lambda_t(x) = prod_a (1 + [O(a)] t)^{c_a}` up to `t^n`, returned as the
    /// normal forms of `lambda^0 .. lambda^n`. Negative multiplicities use the
    /// generalised binomial series, i.e. the inverse of `(1 + L t)^{|c|}`.
    pub fn lambda_series_nf(&self, n: usize) -> Result<Vec<NilpotentPoly>> {
        self.require_integral()?;
        let dims = &self.space.dims;
        let d = &self.domain;
        let mut acc: Vec<NilpotentPoly> = vec![NilpotentPoly::zero(dims, d.clone()); n + 1];
        acc[0] = NilpotentPoly::one(dims, d.clone());
        for (a, c) in &self.terms {
            let c = c.numer().clone();
            let line = NilpotentPoly::line(dims, d.clone(), a);
            let mut factor = Vec::with_capacity(n + 1);
            let mut lj = NilpotentPoly::one(dims, d.clone());
            for j in 0..=n {
                let b = binomial(&c, j as u64);
                factor.push(lj.scale(&Rat::from_integer(b))?);
                lj = lj.mul(&line)?;
            }
            let mut next = vec![NilpotentPoly::zero(dims, d.clone()); n + 1];
            for i in 0..=n {
                if acc[i].is_zero() {
                    continue;
                }
                for j in 0..=(n - i) {
                    next[i + j] = next[i + j].add(&acc[i].mul(&factor[j])?)?;
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    pub fn lambda(&self, n: usize) -> Result<Self> {
        let nf = self.lambda_series_nf(n)?.swap_remove(n);
        Self::from_normal_form(&self.space, &nf)
    }

    /// `gamma^n = sum_{j=1}^n C(n-1, j-1) lambda^j` from `gamma_t = lambda_{t/(1-t)}`.
    pub fn gamma_series_nf(&self, n: usize) -> Result<Vec<NilpotentPoly>> {
        let lam = self.lambda_series_nf(n)?;
        let mut out = vec![lam[0].clone()];
        for m in 1..=n {
            let mut acc = lam[0].zero_like();
            for (j, lj) in lam.iter().enumerate().take(m + 1).skip(1) {
                let b = binomial(&BigInt::from(m - 1), (j - 1) as u64);
                acc = acc.add(&lj.scale(&Rat::from_integer(b))?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn gamma(&self, n: usize) -> Result<Self> {
        let nf = self.gamma_series_nf(n)?.swap_remove(n);
        Self::from_normal_form(&self.space, &nf)
    }

    /// `Psi^k [O(a)] = [O(k a)]`; `Psi^0 x = rank(x)`.
    pub fn adams(&self, k: i64) -> Self {
        let mut out = Self::zero_in(&self.space, self.domain.clone());
        for (a, c) in &self.terms {
            out.add_term(a.iter().map(|x| k * x).collect(), c.clone());
        }
        out
    }

    /// `[O(a)] -> [O(-a)]`.
    pub fn dual(&self) -> Self {
        self.adams(-1)
    }

    /// `Psi^k` recovered from `lambda^1..lambda^k` alone, by
    /// `Psi^k = sum_{i<k} (-1)^{i-1} lambda^i Psi^{k-i} + (-1)^{k-1} k lambda^k`.
    pub fn adams_from_lambda_newton(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("Newton route needs k >= 1".into()));
        }
        let lam = self.lambda_series_nf(k)?;
        let mut psi: Vec<NilpotentPoly> = vec![lam[0].zero_like()];
        for j in 1..=k {
            let mut acc = lam[0].zero_like();
            for i in 1..j {
                let t = lam[i].mul(&psi[j - i])?;
                acc = if i % 2 == 1 { acc.add(&t)? } else { acc.sub(&t)? };
            }
            let last = lam[j].scale(&rat(j as i64))?;
            acc = if j % 2 == 1 { acc.add(&last)? } else { acc.sub(&last)? };
            psi.push(acc);
        }
        Self::from_normal_form(&self.space, &psi[k])
    }

    pub fn to_json(&self) -> SplitElementJson {
        SplitElementJson {
            dims: self.space.dims.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| LineTermJson {
                    a: a.clone(),
                    c: coefficient_json(c),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SplitElementJson, domain: ScalarDomain) -> Result<Self> {
        let space = BaseSpace::product(&j.dims);
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.a.clone(), coefficient_from_json(&t.c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(&space, domain, terms)
    }
}

fn coefficient_json(c: &Rat) -> serde_json::Value {
    if c.is_integer() {
        if let Some(v) = c.numer().to_i64() {
            return serde_json::Value::from(v);
        }
    }
    serde_json::Value::from(rat_to_string(c))
}

fn coefficient_from_json(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(rat)
            .ok_or_else(|| Error::Parse(format!("coefficient {n} is not an integer"))),
        serde_json::Value::String(s) => parse_rat(s),
        other => Err(Error::Parse(format!("bad coefficient {other}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineTermJson {
    pub a: Vec<i64>,
    pub c: serde_json::Value,
}

/// `{dims, terms: [{a, c}]}`; `c` is an integer, or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitElementJson {
    pub dims: Vec<u32>,
    pub terms: Vec<LineTermJson>,
}

impl Serialize for SplitElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl SplitElement {
    /// Reads the display form, e.g. `[O(1,0)] + -2[O(0,-1)]`; the brackets,
    /// and a `*` after the coefficient, are optional.
    pub fn parse(space: &BaseSpace, domain: ScalarDomain, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero_in(space, domain));
        }
        let mut terms = vec![];
        for t in s.split('+') {
            let t = t.trim();
            let bad = || Error::Parse(format!("bad line term '{t}'"));
            let open = t.find("O(").ok_or_else(bad)?;
            let close = t[open..].find(')').ok_or_else(bad)? + open;
            let rest = t[close + 1..].trim();
            if !(rest.is_empty() || rest == "]") {
                return Err(bad());
            }
            let coeff = t[..open].trim().trim_end_matches('[').trim().trim_end_matches('*').trim();
            let c = match coeff {
                "" => Rat::one(),
                "-" => -Rat::one(),
                c => parse_rat(c)?,
            };
            let inner = t[open + 2..close].trim();
            let a: Vec<i64> = if inner.is_empty() {
                vec![]
            } else {
                inner
                    .split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            };
            if a.len() != space.factors() {
                return Err(Error::ShapeMismatch(format!(
                    "'{t}' has {} exponents, {space} needs {}",
                    a.len(),
                    space.factors()
                )));
            }
            terms.push((a, c));
        }
        Self::from_terms(space, domain, terms)
    }
}

impl fmt::Display for SplitElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| {
                let idx: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                let line = format!("[O({})]", idx.join(","));
                if c.is_one() {
                    line
                } else {
                    format!("{}{}", rat_to_string(c), line)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl RingElement for SplitElement {
    fn zero_like(&self) -> Self {
        Self::zero_in(&self.space, self.domain.clone())
    }
    fn one_like(&self) -> Self {
        Self::trivial(&self.space, 1)
            .with_domain(self.domain.clone())
            .expect("1 is in every domain")
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

pub fn normal_form(x: &SplitElement) -> NilpotentPoly {
    x.normal_form()
}

pub fn lambda_op(n: usize, x: &SplitElement) -> Result<SplitElement> {
    x.lambda(n)
}

pub fn gamma_op(n: usize, x: &SplitElement) -> Result<SplitElement> {
    x.gamma(n)
}

pub fn adams_op(k: i64, x: &SplitElement) -> SplitElement {
    x.adams(k)
}

pub fn dual(x: &SplitElement) -> SplitElement {
    x.dual()
}

pub fn adams_from_lambda_newton(k: usize, x: &SplitElement) -> Result<SplitElement> {
    x.adams_from_lambda_newton(k)
}

/// One identity checked by [`verify_special_axioms`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    /// First failing instance, with both sides in normal form.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub space: String,
    pub max_degree: usize,
    pub checks: Vec<AxiomCheck>,
    pub all_passed: bool,
}

impl AxiomReport {
    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Source of `lambda^0..lambda^n` normal forms; swappable so the checker can
/// be mutation-tested.
pub type LambdaFn<'a> = dyn Fn(&SplitElement, usize) -> Result<Vec<NilpotentPoly>> + Sync + 'a;

/// Check the special λ-ring with duality identities on `x`, `y` up to
/// `max_degree`.
pub fn verify_special_axioms(
    x: &SplitElement,
    y: &SplitElement,
    max_degree: usize,
) -> Result<AxiomReport> {
    verify_special_axioms_with(x, y, max_degree, &|e, n| e.lambda_series_nf(n))
}

struct Checker {
    checks: Vec<AxiomCheck>,
}

impl Checker {
    fn record(&mut self, name: &str, failures: Vec<String>) {
        self.checks.push(AxiomCheck {
            name: name.to_string(),
            passed: failures.is_empty(),
            witness: failures.into_iter().next(),
        });
    }
}

fn mismatch(what: String, lhs: &NilpotentPoly, rhs: &NilpotentPoly) -> Option<String> {
    if lhs == rhs {
        None
    } else {
        Some(format!("{what}: lhs {} != rhs {}", lhs.render("u"), rhs.render("u")))
    }
}

pub fn verify_special_axioms_with(
    x: &SplitElement,
    y: &SplitElement,
    max_degree: usize,
    lambda: &LambdaFn<'_>,
) -> Result<AxiomReport> {
    x.check(y)?;
    let d = max_degree;
    let space = x.space.clone();
    let mut ck = Checker { checks: vec![] };

    let lx = lambda(x, d)?;
    let ly = lambda(y, d)?;

    let mut fails = vec![];
    if let Some(w) = mismatch("lambda^0(x)".into(), &lx[0], &lx[0].one_like()) {
        fails.push(w);
    }
    if d >= 1 {
        if let Some(w) = mismatch("lambda^1(x)".into(), &lx[1], &x.normal_form()) {
            fails.push(w);
        }
    }
    ck.record("lambda^0 = 1, lambda^1 = id", fails);

    // lambda_t(x + y) = lambda_t(x) lambda_t(y)
    let lsum = lambda(&x.add(y)?, d)?;
    let mut fails = vec![];
    for n in 0..=d {
        let mut rhs = lx[0].zero_like();
        for i in 0..=n {
            rhs = rhs.add(&lx[i].mul(&ly[n - i])?)?;
        }
        fails.extend(mismatch(format!("degree {n}"), &lsum[n], &rhs));
    }
    ck.record("lambda_t(x+y) = lambda_t(x) lambda_t(y)", fails);

    // lambda^n(xy) = P_n(lambda x; lambda y)
    let lxy = lambda(&x.mul(y)?, d)?;
    let mut fails = vec![];
    for n in 1..=d {
        let p = universal_product_poly(n)?;
        let mut vals: Vec<NilpotentPoly> = lx[1..=n].to_vec();
        vals.extend_from_slice(&ly[1..=n]);
        let rhs = p.evaluate(&lx[0].one_like(), &vals)?;
        fails.extend(mismatch(format!("n={n}"), &lxy[n], &rhs));
    }
    ck.record("lambda^n(xy) = P_n", fails);

    // lambda^m(lambda^n x) = P_{m,n}(lambda x)
    let need = d.max(1);
    let lx_deep = if need > d { lambda(x, need)? } else { lx.clone() };
    let mut fails = vec![];
    for n in 1..=d {
        let inner = SplitElement::from_normal_form(&space, &lx_deep[n])?;
        let outer = lambda(&inner, d / n)?;
        for (m, lhs) in outer.iter().enumerate().skip(1) {
            if m * n > d {
                break;
            }
            let p = universal_plethysm_poly(m, n)?;
            let rhs = p.evaluate(&lx[0].one_like(), &lx_deep[1..=m * n])?;
            fails.extend(mismatch(format!("m={m}, n={n}"), lhs, &rhs));
        }
    }
    ck.record("lambda^m(lambda^n x) = P_{m,n}", fails);

    let ks: Vec<i64> = (-(d as i64)..=(d as i64)).collect();
    let mut fails = vec![];
    for &k in &ks {
        for &l in &ks {
            let lhs = x.adams(l).adams(k).normal_form();
            let rhs = x.adams(k * l).normal_form();
            fails.extend(mismatch(format!("k={k}, k'={l}"), &lhs, &rhs));
        }
    }
    ck.record("Psi^k Psi^k' = Psi^{kk'}", fails);

    let mut fails = vec![];
    for &k in &ks {
        let lhs = x.mul(y)?.adams(k).normal_form();
        let rhs = x.adams(k).mul(&y.adams(k))?.normal_form();
        fails.extend(mismatch(format!("product, k={k}"), &lhs, &rhs));
        let lhs = x.add(y)?.adams(k).normal_form();
        let rhs = x.adams(k).add(&y.adams(k))?.normal_form();
        fails.extend(mismatch(format!("sum, k={k}"), &lhs, &rhs));
    }
    ck.record("Psi^k is a ring map", fails);

    let mut fails = vec![];
    fails.extend(mismatch("dual dual x".into(), &x.dual().dual().normal_form(), &x.normal_form()));
    fails.extend(mismatch(
        "dual(xy)".into(),
        &x.mul(y)?.dual().normal_form(),
        &x.dual().mul(&y.dual())?.normal_form(),
    ));
    fails.extend(mismatch(
        "dual(x+y)".into(),
        &x.add(y)?.dual().normal_form(),
        &x.dual().add(&y.dual())?.normal_form(),
    ));
    ck.record("dual is an involutive ring map", fails);

    let dual_l = lambda(&x.dual(), d)?;
    let mut fails = vec![];
    for n in 0..=d {
        let lhs = SplitElement::from_normal_form(&space, &lx[n])?.dual().normal_form();
        fails.extend(mismatch(format!("n={n}"), &lhs, &dual_l[n]));
    }
    ck.record("dual lambda^n = lambda^n dual", fails);

    let mut fails = vec![];
    for &k in &ks {
        fails.extend(mismatch(
            format!("k={k}"),
            &x.adams(k).dual().normal_form(),
            &x.adams(-k).normal_form(),
        ));
    }
    ck.record("dual Psi^k = Psi^{-k}", fails);

    // Newton route from the (possibly substituted) lambda source
    let mut fails = vec![];
    for k in 1..=d {
        let mut psi: Vec<NilpotentPoly> = vec![lx[0].zero_like()];
        for j in 1..=k {
            let mut acc = lx[0].zero_like();
            for i in 1..j {
                let t = lx[i].mul(&psi[j - i])?;
                acc = if i % 2 == 1 { acc.add(&t)? } else { acc.sub(&t)? };
            }
            let last = lx[j].scale(&rat(j as i64))?;
            acc = if j % 2 == 1 { acc.add(&last)? } else { acc.sub(&last)? };
            psi.push(acc);
        }
        fails.extend(mismatch(format!("k={k}"), &psi[k], &x.adams(k as i64).normal_form()));
    }
    ck.record("Newton recurrence gives Psi^k", fails);

    let all_passed = ck.checks.iter().all(|c| c.passed);
    Ok(AxiomReport {
        space: space.to_string(),
        max_degree: d,
        checks: ck.checks,
        all_passed,
    })
}

/// Sign-aware helper: is the integer part of every coefficient nonnegative?
pub fn is_effective(x: &SplitElement) -> bool {
    x.terms.values().all(|c| !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips_display() {
        let s: BaseSpace = "P^2xP^1".parse().unwrap();
        assert_eq!(s, BaseSpace::product(&[2, 1]));
        assert_eq!("2x1".parse::<BaseSpace>().unwrap(), s);
        assert_eq!(s.to_string().parse::<BaseSpace>().unwrap(), s);
        assert_eq!("pt".parse::<BaseSpace>().unwrap(), BaseSpace::point());
        let x = SplitElement::parse(&s, ScalarDomain::Integers, "[O(1,0)] + -2[O(0,-1)] + 1/2*O(3,3)");
        assert!(x.is_err(), "1/2 is not an integer");
        let x = SplitElement::parse(&s, ScalarDomain::Rationals, "[O(1,0)] + -2[O(0,-1)] + 1/2*O(3,3)").unwrap();
        assert_eq!(SplitElement::parse(&s, ScalarDomain::Rationals, &x.to_string()).unwrap(), x);
        assert!(SplitElement::parse(&s, ScalarDomain::Integers, "[O(1)]").is_err());
        assert!(SplitElement::parse(&s, ScalarDomain::Integers, "[O(1,0)] junk").is_err());
    }

    fn p(n: u32) -> BaseSpace {
        BaseSpace::projective(n)
    }

    fn line(space: &BaseSpace, a: &[i64]) -> SplitElement {
        SplitElement::line(space, a).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(line(&p(2), &[1]).normal_form().render("u"), "1 + u");
        assert_eq!(line(&p(2), &[2]).normal_form().render("u"), "1 + 2*u + u^2");
        assert_eq!(line(&p(1), &[-1]).normal_form().render("u"), "1 + -1*u");
        let s = BaseSpace::product(&[1, 1]);
        assert_eq!(line(&s, &[1, 1]).normal_form().render("u"), "1 + u2 + u1 + u1*u2");
    }

    #[test]
    fn presentation_round_trip() {
        let s = BaseSpace::product(&[2, 1]);
        let x = line(&s, &[-3, 4]).add(&line(&s, &[5, -1]).scale(&rat(-2)).unwrap()).unwrap();
        let c = x.canonical();
        assert!(c.equivalent(&x));
        assert!(c.terms().all(|(a, _)| a[0] >= 0 && a[0] <= 2 && a[1] >= 0 && a[1] <= 1));
    }

    #[test]
    fn exterior_square_of_two_lines() {
        let x = line(&p(2), &[1]).add(&line(&p(2), &[1])).unwrap();
        assert!(x.lambda(2).unwrap().equivalent(&line(&p(2), &[2])));
    }

    #[test]
    fn gamma_of_reduced_line() {
        for n in 1..=6 {
            let s = p(n);
            for a in -3..=3 {
                let u = line(&s, &[a]).sub(&SplitElement::trivial(&s, 1)).unwrap();
                assert!(u.gamma(1).unwrap().equivalent(&u));
                for k in 2..=(n as usize + 2) {
                    assert!(u.gamma(k).unwrap().normal_form().is_zero(), "n={n} a={a} k={k}");
                }
            }
        }
    }

    #[test]
    fn adams_on_u() {
        let s = p(2);
        let u = line(&s, &[1]).sub(&SplitElement::trivial(&s, 1)).unwrap();
        assert_eq!(u.adams(2).normal_form().render("u"), "2*u + u^2");
        assert!(u.adams(0).normal_form().is_zero());
        let x = line(&s, &[3]).add(&line(&s, &[-1])).unwrap();
        assert!(x.adams(0).equivalent(&SplitElement::trivial(&s, 2)));
    }

    #[test]
    fn newton_route_matches() {
        let s = p(2);
        let x = line(&s, &[1]).add(&line(&s, &[2])).unwrap();
        assert!(x.adams_from_lambda_newton(1).unwrap().equivalent(&x));
        let want = line(&s, &[2]).add(&line(&s, &[4])).unwrap();
        assert!(x.adams_from_lambda_newton(2).unwrap().equivalent(&want));
        let two_lambda = x.lambda(2).unwrap().scale(&rat(2)).unwrap();
        assert!(x.mul(&x).unwrap().sub(&two_lambda).unwrap().equivalent(&want));
        let y = x.add(&line(&s, &[-5])).unwrap();
        assert!(y.adams_from_lambda_newton(3).unwrap().equivalent(&y.adams(3)));
    }

    #[test]
    fn psi_composition_on_p6() {
        let s = p(6);
        let u = line(&s, &[1]).sub(&SplitElement::trivial(&s, 1)).unwrap();
        assert!(u.adams(3).adams(2).equivalent(&u.adams(6)));
    }

    #[test]
    fn axioms_pass_on_lines_over_p3() {
        let s = p(3);
        let x = line(&s, &[1]);
        let r = verify_special_axioms(&x, &x, 3).unwrap();
        assert!(r.all_passed, "{:?}", r.first_failure());
    }

    #[test]
    fn axioms_catch_corrupted_lambda_two() {
        let s = p(3);
        let x = line(&s, &[1]).add(&line(&s, &[2])).unwrap();
        let y = line(&s, &[-1]).add(&SplitElement::trivial(&s, 1)).unwrap();
        let corrupted = |e: &SplitElement, n: usize| -> Result<Vec<NilpotentPoly>> {
            let mut l = e.lambda_series_nf(n)?;
            if n >= 2 {
                l[2] = l[2].add(&l[2].one_like())?;
            }
            Ok(l)
        };
        let r = verify_special_axioms_with(&x, &y, 3, &corrupted).unwrap();
        assert!(!r.all_passed);
        let f = r.first_failure().unwrap();
        assert!(f.witness.as_ref().unwrap().contains("lhs"));
    }

    #[test]
    fn square_identity() {
        let s = BaseSpace::product(&[2, 1]);
        let x = line(&s, &[1, -1])
            .add(&line(&s, &[2, 3]).scale(&rat(-2)).unwrap())
            .unwrap()
            .add(&SplitElement::trivial(&s, 3))
            .unwrap();
        let rhs = x.adams(2).add(&x.lambda(2).unwrap().scale(&rat(2)).unwrap()).unwrap();
        assert!(x.mul(&x).unwrap().equivalent(&rhs));
    }

    #[test]
    fn rational_coefficients_rejected_for_lambda() {
        let s = p(1);
        let q = ScalarDomain::Rationals;
        let x = SplitElement::from_terms(&s, q, [(vec![1], crate::scalar::ratio(1, 2))]).unwrap();
        assert!(x.lambda(2).is_err());
    }

    #[test]
    fn json_shape() {
        let s = p(2);
        let x = line(&s, &[1]).sub(&SplitElement::trivial(&s, 2)).unwrap();
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"dims": [2], "terms": [{"a": [0], "c": -2}, {"a": [1], "c": 1}]})
        );
        let back: SplitElementJson = serde_json::from_value(v).unwrap();
        assert_eq!(SplitElement::from_json(&back, ScalarDomain::Integers).unwrap(), x);
    }
}
