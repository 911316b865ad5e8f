//! Symmetric functions over formal roots, kept in the elementary basis.
//!
//! Everything is computed with Newton's identities in infinitely many
//! variables, so no choice of root count is involved; specialising
//! `e_i = 0` for `i > d` recovers the `d`-root answer.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::RingElement;
use crate::scalar::{parse_rat, rat, rat_to_string, Rat};
use crate::series::TruncSeries;

/// Largest weight any universal construction will attempt.
pub const MAX_WEIGHT: u32 = 24;

/// A block of weighted variables `name_1, name_2, ...`; `name_i` has weight `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarBlock {
    pub name: String,
    pub len: usize,
}

impl VarBlock {
    pub fn new(name: &str, len: usize) -> Self {
        VarBlock {
            name: name.to_string(),
            len,
        }
    }
}

/// Monomial key: total weight first, then the exponent vector, which gives
/// the graded-lexicographic order used for serialisation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Key {
    weight: u32,
    exps: Vec<u32>,
}

/// Polynomial in one or more blocks of weighted variables, truncated so that
/// every block's weight stays within `weight_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoly {
    blocks: Vec<VarBlock>,
    weight_bound: u32,
    terms: BTreeMap<Key, Rat>,
}

impl WeightedPoly {
    pub fn zero(blocks: Vec<VarBlock>, weight_bound: u32) -> Self {
        WeightedPoly {
            blocks,
            weight_bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(name: &str, len: usize, weight_bound: u32) -> Self {
        Self::zero(vec![VarBlock::new(name, len)], weight_bound)
    }

    pub fn constant_like(&self, c: Rat) -> Self {
        let mut p = Self::zero(self.blocks.clone(), self.weight_bound);
        if !c.is_zero() {
            p.terms.insert(
                Key {
                    weight: 0,
                    exps: vec![0; p.nvars()],
                },
                c,
            );
        }
        p
    }

    /// The variable `name_index` of block `block` (indices start at 1).
    pub fn var(&self, block: usize, index: usize) -> Self {
        let mut exps = vec![0; self.nvars()];
        let offset: usize = self.blocks[..block].iter().map(|b| b.len).sum();
        assert!(index >= 1 && index <= self.blocks[block].len, "variable out of range");
        exps[offset + index - 1] = 1;
        let mut p = Self::zero(self.blocks.clone(), self.weight_bound);
        p.insert(exps, Rat::one());
        p
    }

    pub fn blocks(&self) -> &[VarBlock] {
        &self.blocks
    }

    pub fn weight_bound(&self) -> u32 {
        self.weight_bound
    }

    pub fn nvars(&self) -> usize {
        self.blocks.iter().map(|b| b.len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate `(exponents, coefficient)` in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(k, c)| (k.exps.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rat {
        let key = Key {
            weight: self.total_weight(exps),
            exps: exps.to_vec(),
        };
        self.terms.get(&key).cloned().unwrap_or_else(Rat::zero)
    }

    fn block_weights(&self, exps: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut pos = 0;
        for b in &self.blocks {
            let w = (0..b.len).map(|i| (i as u32 + 1) * exps[pos + i]).sum();
            out.push(w);
            pos += b.len;
        }
        out
    }

    fn total_weight(&self, exps: &[u32]) -> u32 {
        self.block_weights(exps).iter().sum()
    }

    fn admissible(&self, exps: &[u32]) -> bool {
        self.block_weights(exps).iter().all(|w| *w <= self.weight_bound)
    }

    fn insert(&mut self, exps: Vec<u32>, c: Rat) {
        if c.is_zero() || !self.admissible(&exps) {
            return;
        }
        let key = Key {
            weight: self.total_weight(&exps),
            exps,
        };
        let entry = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.blocks != other.blocks {
            return Err(Error::ShapeMismatch(format!(
                "variable blocks {:?} vs {:?}",
                self.blocks, other.blocks
            )));
        }
        Ok(())
    }

    /// Re-truncate at a (smaller) weight bound.
    pub fn with_weight_bound(&self, w: u32) -> Self {
        let mut p = Self::zero(self.blocks.clone(), w);
        for (k, c) in &self.terms {
            p.insert(k.exps.clone(), c.clone());
        }
        p
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.with_weight_bound(self.weight_bound.min(other.weight_bound));
        for (k, c) in &other.terms {
            out.insert(k.exps.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.blocks.clone(), self.weight_bound);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let wb = self.weight_bound.min(other.weight_bound);
        let mut acc: HashMap<Vec<u32>, Rat> = HashMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if ka.weight + kb.weight > wb * self.blocks.len() as u32 {
                    continue;
                }
                let exps: Vec<u32> = ka.exps.iter().zip(&kb.exps).map(|(a, b)| a + b).collect();
                *acc.entry(exps).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        let mut out = Self::zero(self.blocks.clone(), wb);
        for (exps, c) in acc {
            if !c.is_zero() && out.admissible(&exps) {
                let key = Key {
                    weight: out.total_weight(&exps),
                    exps,
                };
                out.terms.insert(key, c);
            }
        }
        Ok(out)
    }

    /// `exp(self)` for a polynomial without constant term; finite because
    /// every monomial has positive weight.
    pub fn exp(&self) -> Result<Self> {
        if !self.coefficient(&vec![0; self.nvars()]).is_zero() {
            return Err(Error::BadConstantTerm {
                expected: "0".into(),
                found: rat_to_string(&self.coefficient(&vec![0; self.nvars()])),
            });
        }
        let mut acc = self.constant_like(Rat::one());
        let mut term = self.constant_like(Rat::one());
        let max_terms = self.weight_bound as usize * self.blocks.len();
        for j in 1..=max_terms {
            term = term.mul(self)?.scale(&Rat::new(BigInt::one(), BigInt::from(j)));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Substitute ring elements for the variables (flattened block order).
    pub fn evaluate<T: RingElement>(&self, one: &T, values: &[T]) -> Result<T> {
        if values.len() != self.nvars() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {} variables",
                values.len(),
                self.nvars()
            )));
        }
        let mut powers: HashMap<(usize, u32), T> = HashMap::new();
        let mut acc = one.zero_like();
        for (k, c) in &self.terms {
            let mut mono = one.clone();
            for (v, &e) in k.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match powers.entry((v, e)) {
                    std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                    std::collections::hash_map::Entry::Vacant(slot) => slot.insert(values[v].pow_u(e)?),
                };
                mono = mono.mul_ref(p)?;
            }
            acc = acc.add_ref(&mono.scale_rat(c)?)?;
        }
        Ok(acc)
    }

    /// Rename the variable blocks (same layout), e.g. `e` to the gamma-tilde
    /// coordinates.
    pub fn rename(&self, names: &[&str]) -> Result<Self> {
        if names.len() != self.blocks.len() {
            return Err(Error::ShapeMismatch("block count".into()));
        }
        let mut out = self.clone();
        for (b, n) in out.blocks.iter_mut().zip(names) {
            b.name = n.to_string();
        }
        Ok(out)
    }

    /// Widen/narrow the block lengths; variables dropped must not occur.
    pub fn reshape(&self, lens: &[usize]) -> Result<Self> {
        if lens.len() != self.blocks.len() {
            return Err(Error::ShapeMismatch("block count".into()));
        }
        let blocks: Vec<VarBlock> = self
            .blocks
            .iter()
            .zip(lens)
            .map(|(b, &len)| VarBlock::new(&b.name, len))
            .collect();
        let mut out = Self::zero(blocks, self.weight_bound);
        for (k, c) in &self.terms {
            let mut exps = Vec::new();
            let mut pos = 0;
            for (b, &len) in self.blocks.iter().zip(lens) {
                let chunk = &k.exps[pos..pos + b.len];
                if chunk[len.min(b.len)..].iter().any(|e| *e != 0) {
                    return Err(Error::ShapeMismatch(format!(
                        "variable of block {} beyond new length {len}",
                        b.name
                    )));
                }
                exps.extend_from_slice(&chunk[..len.min(b.len)]);
                exps.extend(std::iter::repeat(0).take(len.saturating_sub(b.len)));
                pos += b.len;
            }
            out.insert(exps, c.clone());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> WeightedPolyJson {
        WeightedPolyJson {
            blocks: self.blocks.clone(),
            weight_bound: self.weight_bound,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermJson {
                    exponents: k.exps.clone(),
                    coefficient: rat_to_string(c),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &WeightedPolyJson) -> Result<Self> {
        let mut p = Self::zero(j.blocks.clone(), j.weight_bound);
        for t in &j.terms {
            if t.exponents.len() != p.nvars() {
                return Err(Error::Parse("exponent vector length".into()));
            }
            p.insert(t.exponents.clone(), parse_rat(&t.coefficient)?);
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

/// Serialized form: sorted term list plus the variable layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPolyJson {
    pub blocks: Vec<VarBlock>,
    pub weight_bound: u32,
    pub terms: Vec<TermJson>,
}

impl Serialize for WeightedPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl RingElement for WeightedPoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.blocks.clone(), self.weight_bound)
    }
    fn one_like(&self) -> Self {
        self.constant_like(Rat::one())
    }
    fn add_ref(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn mul_ref(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn scale_rat(&self, c: &Rat) -> Result<Self> {
        Ok(self.scale(c))
    }
}

impl fmt::Display for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut names = Vec::new();
        for b in &self.blocks {
            for i in 1..=b.len {
                names.push(format!("{}{}", b.name, i));
            }
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let mut mono = Vec::new();
            for (v, &e) in k.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => mono.push(names[v].clone()),
                    _ => mono.push(format!("{}^{}", names[v], e)),
                }
            }
            let neg = c < &Rat::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = if mono.is_empty() {
                rat_to_string(&abs)
            } else if abs.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", rat_to_string(&abs), mono.join("*"))
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

fn check_budget(need: u32) -> Result<()> {
    if need > MAX_WEIGHT {
        return Err(Error::WeightBudgetExceeded {
            budget: MAX_WEIGHT,
            need,
        });
    }
    Ok(())
}

/// Power sums `p_1..p_k` in terms of a block of elementary-like variables
/// named `name`, via `p_j = sum_{i<j} (-1)^{i-1} e_i p_{j-i} + (-1)^{j-1} j e_j`.
fn power_sums_in(name: &str, k: usize, weight: u32) -> Result<Vec<WeightedPoly>> {
    check_budget(weight)?;
    if k as u32 > weight {
        return Err(Error::WeightBudgetExceeded {
            budget: weight,
            need: k as u32,
        });
    }
    let base = WeightedPoly::single(name, weight as usize, weight);
    let mut p: Vec<WeightedPoly> = vec![base.zero_like()];
    for j in 1..=k {
        let mut acc = base.zero_like();
        for i in 1..j {
            let term = base.var(0, i).mul(&p[j - i])?;
            acc = if i % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        let last = base.var(0, j).scale(&rat(j as i64));
        acc = if j % 2 == 1 { acc.add(&last)? } else { acc.sub(&last)? };
        p.push(acc);
    }
    Ok(p)
}

/// `chi_n` as a polynomial in the Chern classes `c_1..c_n`, from
/// `chi_k - c_1 chi_{k-1} + ... + (-1)^{k-1} c_{k-1} chi_1 + (-1)^k k c_k = 0`.
pub fn chi_poly(n: usize) -> Result<WeightedPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("chi_poly needs n >= 1".into()));
    }
    Ok(power_sums_in("c", n, n as u32)?.pop().expect("n >= 1"))
}

/// `p_k` in the elementary basis `e_1..e_W`.
pub fn power_sums_to_elementary(k: usize, weight: u32) -> Result<WeightedPoly> {
    Ok(power_sums_in("e", k, weight)?.swap_remove(k))
}

fn elementary_in_power_sums(k: usize, weight: u32) -> Result<Vec<WeightedPoly>> {
    check_budget(weight)?;
    if k as u32 > weight {
        return Err(Error::WeightBudgetExceeded {
            budget: weight,
            need: k as u32,
        });
    }
    let base = WeightedPoly::single("p", weight as usize, weight);
    let mut e = vec![base.one_like()];
    for j in 1..=k {
        let mut acc = base.zero_like();
        for i in 1..=j {
            let term = e[j - i].mul(&base.var(0, i))?;
            acc = if i % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        e.push(acc.scale(&Rat::new(BigInt::one(), BigInt::from(j))));
    }
    Ok(e)
}

/// `e_k` in the power-sum basis `p_1..p_W` (rational coefficients).
pub fn elementary_to_power_sums(k: usize, weight: u32) -> Result<WeightedPoly> {
    Ok(elementary_in_power_sums(k, weight)?.swap_remove(k))
}

fn require_reduced_char_zero(f: &TruncSeries, weight: u32) -> Result<()> {
    if !f.domain().is_char_zero() {
        return Err(Error::Unsupported(format!(
            "symmetrisation over {}",
            f.domain()
        )));
    }
    if (f.order() as u32) < weight {
        return Err(Error::InsufficientTruncation {
            have: f.order(),
            need: weight as usize,
        });
    }
    Ok(())
}

/// `sum_i f(u_i)` in the elementary symmetric functions of the roots `u_i`,
/// up to weight `W`.
pub fn additive_symmetrization(f: &TruncSeries, weight: u32) -> Result<WeightedPoly> {
    if !f.coeff(0).is_zero() {
        return Err(Error::BadConstantTerm {
            expected: "0".into(),
            found: rat_to_string(&f.coeff(0)),
        });
    }
    require_reduced_char_zero(f, weight)?;
    let p = power_sums_in("e", weight as usize, weight)?;
    let mut acc = WeightedPoly::single("e", weight as usize, weight);
    for (k, pk) in p.iter().enumerate().skip(1) {
        acc = acc.add(&pk.scale(&f.coeff(k)))?;
    }
    Ok(acc)
}

/// `prod_i f(u_i) = a_0^rank * prod_i (f(u_i)/a_0)`; the normalised product is
/// returned in the elementary basis together with the unit `a_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeSym {
    pub unit: Rat,
    pub poly: WeightedPoly,
}

pub fn multiplicative_symmetrization(f: &TruncSeries, weight: u32) -> Result<MultiplicativeSym> {
    let a0 = f.coeff(0);
    let inv = f.domain().inv(&a0)?;
    require_reduced_char_zero(f, weight)?;
    let q = crate::scalar::ScalarDomain::Rationals;
    let normalised = f.with_domain(q)?.scale(&inv)?.truncate(weight as usize);
    let log = normalised.log1p()?;
    let poly = additive_symmetrization(&log, weight)?.exp()?;
    Ok(MultiplicativeSym { unit: a0, poly })
}

/// `P_n`: `e_n` of the pairwise products `x_i y_j`, written in `e_i(x)` and
/// `f_j(y)`. Uses `p_k(xy) = p_k(x) p_k(y)`.
pub fn universal_product_poly(n: usize) -> Result<WeightedPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("n >= 1".into()));
    }
    let w = n as u32;
    check_budget(w)?;
    let blocks = vec![VarBlock::new("e", n), VarBlock::new("f", n)];
    let two = WeightedPoly::zero(blocks, w);
    let p_single = power_sums_in("e", n, w)?;
    let embed = |p: &WeightedPoly, block: usize| -> Result<WeightedPoly> {
        let vals: Vec<WeightedPoly> = (1..=n).map(|i| two.var(block, i)).collect();
        p.evaluate(&two.one_like(), &vals)
    };
    let mut pxy = Vec::with_capacity(n);
    for pk in p_single.iter().skip(1) {
        pxy.push(embed(pk, 0)?.mul(&embed(pk, 1)?)?);
    }
    let en = elementary_to_power_sums(n, w)?;
    en.evaluate(&two.one_like(), &pxy)
}

/// `P_{m,n}`: `e_m` of the family of `n`-fold products `x_{i_1}...x_{i_n}`
/// (`i_1 < ... < i_n`), written in `e_1..e_{mn}` of the `x_i`.
pub fn universal_plethysm_poly(m: usize, n: usize) -> Result<WeightedPoly> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("m, n >= 1".into()));
    }
    let w = (m * n) as u32;
    check_budget(w)?;
    let p = power_sums_in("e", m * n, w)?;
    let en = elementary_to_power_sums(n, n as u32)?;
    let one = p[0].one_like();
    // p_k(Y) = e_n(x^k) = E_n(p_j -> p_{jk})
    let mut py = Vec::with_capacity(m);
    for k in 1..=m {
        let vals: Vec<WeightedPoly> = (1..=n).map(|j| p[j * k].clone()).collect();
        py.push(en.evaluate(&one, &vals)?);
    }
    let em = elementary_to_power_sums(m, m as u32)?;
    em.evaluate(&one, &py)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, ScalarDomain};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ser(c: &[i64]) -> TruncSeries {
        TruncSeries::from_ints(ScalarDomain::Rationals, c).unwrap()
    }

    /// Elementary symmetric functions of explicit numbers (the oracle side).
    fn elementary_of(xs: &[Rat], upto: usize) -> Vec<Rat> {
        let mut e = vec![Rat::zero(); upto + 1];
        e[0] = Rat::one();
        for x in xs {
            for j in (1..=upto).rev() {
                let prev = e[j - 1].clone();
                e[j] += prev * x;
            }
        }
        e
    }

    fn eval_e(p: &WeightedPoly, vals: &[Rat]) -> Rat {
        p.evaluate(&Rat::one(), vals).unwrap()
    }

    #[test]
    fn chi_matches_newton_values() {
        assert_eq!(chi_poly(1).unwrap().to_string(), "c1");
        assert_eq!(chi_poly(2).unwrap().to_string(), "-2*c2 + c1^2");
        assert_eq!(chi_poly(3).unwrap().to_string(), "3*c3 - 3*c1*c2 + c1^3");
    }

    #[test]
    fn chi_on_a_single_root_is_a_power() {
        for n in 1..=12usize {
            let chi = chi_poly(n).unwrap();
            let mut vals = vec![Rat::zero(); n];
            vals[0] = rat(3);
            assert_eq!(eval_e(&chi, &vals), rat(3).pow(n as i32));
        }
    }

    #[test]
    fn power_sum_conversions() {
        assert_eq!(power_sums_to_elementary(2, 2).unwrap().to_string(), "-2*e2 + e1^2");
        assert_eq!(elementary_to_power_sums(1, 3).unwrap().to_string(), "p1");
        let p3 = power_sums_to_elementary(3, 3).unwrap();
        let e = (0..=3).map(|k| elementary_to_power_sums(k, 3)).collect::<Result<Vec<_>>>().unwrap();
        let base = e[1].clone();
        let back = p3.evaluate(&base.one_like(), &e[1..]).unwrap();
        assert_eq!(back, base.var(0, 3));
    }

    #[test]
    fn additive_examples() {
        assert_eq!(additive_symmetrization(&ser(&[0, 1, 0]), 2).unwrap().to_string(), "e1");
        assert_eq!(
            additive_symmetrization(&ser(&[0, 0, 1]), 2).unwrap().to_string(),
            "-2*e2 + e1^2"
        );
        assert_eq!(
            additive_symmetrization(&ser(&[0, 1, 1]), 2).unwrap().to_string(),
            "e1 - 2*e2 + e1^2"
        );
        assert!(additive_symmetrization(&ser(&[1, 1, 1]), 2).is_err());
    }

    #[test]
    fn multiplicative_examples() {
        let m = multiplicative_symmetrization(&ser(&[1, 1, 0, 0, 0]), 4).unwrap();
        assert_eq!(m.poly.to_string(), "1 + e1 + e2 + e3 + e4");
        let m = multiplicative_symmetrization(&ser(&[1, 0, 1]), 2).unwrap();
        assert_eq!(m.poly.to_string(), "1 - 2*e2 + e1^2");
        let m = multiplicative_symmetrization(&ser(&[1, 0, 0]), 2).unwrap();
        assert_eq!(m.poly.to_string(), "1");
        let z = TruncSeries::from_ints(ScalarDomain::Integers, &[2, 1, 0]).unwrap();
        assert!(multiplicative_symmetrization(&z, 2).is_err());
    }

    #[test]
    fn multiplicative_matches_explicit_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = ser(&[3, 1, -2, 5, 1]);
        let m = multiplicative_symmetrization(&f, 4).unwrap();
        // three roots, degree-4 truncation: compare graded pieces through a
        // scaling parameter s (roots s*u_i); weight <= 4 part only.
        for _ in 0..5 {
            let us: Vec<Rat> = (0..3).map(|_| rat(rng.gen_range(-4..5))).collect();
            let e = elementary_of(&us, 4);
            let lhs = eval_e(&m.poly, &e[1..]);
            // truncate prod f(u_i)/3 as a polynomial in a formal scaling t
            let mut prod = TruncSeries::one(ScalarDomain::Rationals, 4);
            for u in &us {
                let fu = TruncSeries::new(
                    ScalarDomain::Rationals,
                    (0..=4).map(|j| f.coeff(j) * u.pow(j as i32) / rat(3)).collect(),
                )
                .unwrap();
                prod = prod.mul(&fu).unwrap();
            }
            let rhs: Rat = prod.coeffs().iter().cloned().sum();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn product_poly_small_cases() {
        assert_eq!(universal_product_poly(1).unwrap().to_string(), "e1*f1");
        let p2 = universal_product_poly(2).unwrap();
        assert_eq!(p2.to_string(), "-2*e2*f2 + e2*f1^2 + e1^2*f2");
        // single roots on both sides: lambda^2(line * line) = 0
        let vals = [rat(5), rat(0), rat(-3), rat(0)];
        assert_eq!(eval_e(&p2, &vals), Rat::zero());
    }

    #[test]
    fn plethysm_trivial_cases() {
        for n in 1..=4 {
            let p = universal_plethysm_poly(1, n).unwrap();
            assert_eq!(p.to_string(), format!("e{n}"));
            let p = universal_plethysm_poly(n, 1).unwrap();
            assert_eq!(p.to_string(), format!("e{n}"));
        }
    }

    fn subsets(d: usize, n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for last in (n - 1)..d {
            for mut s in subsets(last, n - 1) {
                s.push(last);
                out.push(s);
            }
        }
        out
    }

    #[test]
    fn universal_polys_match_explicit_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for m in 1..=8usize {
            for n in 1..=8usize {
                if m * n > 8 {
                    continue;
                }
                let pl = universal_plethysm_poly(m, n).unwrap();
                for extra in 0..2 {
                    let d = m * n + extra;
                    let xs: Vec<Rat> = (0..d).map(|_| rat(rng.gen_range(-3..4))).collect();
                    let prods: Vec<Rat> = subsets(d, n)
                        .into_iter()
                        .map(|s| s.iter().map(|&i| xs[i].clone()).product())
                        .collect();
                    let want = elementary_of(&prods, m)[m].clone();
                    let e = elementary_of(&xs, m * n);
                    assert_eq!(eval_e(&pl, &e[1..]), want, "m={m} n={n} d={d}");
                }
                if m == n || m * n <= 8 {
                    let pp = universal_product_poly(n).unwrap();
                    let xs: Vec<Rat> = (0..n + 1).map(|_| rat(rng.gen_range(-3..4))).collect();
                    let ys: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-3..4))).collect();
                    let prods: Vec<Rat> = xs
                        .iter()
                        .flat_map(|x| ys.iter().map(move |y| x * y))
                        .collect();
                    let want = elementary_of(&prods, n)[n].clone();
                    let mut vals = elementary_of(&xs, n)[1..].to_vec();
                    vals.extend_from_slice(&elementary_of(&ys, n)[1..]);
                    assert_eq!(eval_e(&pp, &vals), want, "product n={n}");
                }
            }
        }
    }

    #[test]
    fn pair_product_plethysm_on_four_roots() {
        let xs = [rat(2), rat(-1), rat(3), ratio(1, 2)];
        let pl = universal_plethysm_poly(2, 2).unwrap();
        let prods: Vec<Rat> = subsets(4, 2)
            .into_iter()
            .map(|s| &xs[s[0]] * &xs[s[1]])
            .collect();
        assert_eq!(prods.len(), 6);
        let e = elementary_of(&xs, 4);
        assert_eq!(eval_e(&pl, &e[1..]), elementary_of(&prods, 2)[2]);
    }

    #[test]
    fn chi_depends_only_on_first_n_classes() {
        // two root multisets sharing e_1..e_3 but differing in e_4
        let chi = chi_poly(3).unwrap();
        let a = [rat(1), rat(2), rat(3), rat(0)];
        let b = [rat(1), rat(2), rat(3), rat(7)];
        assert_eq!(eval_e(&chi, &a[..3]), eval_e(&chi, &b[..3]));
        let p3 = power_sums_to_elementary(3, 4).unwrap();
        assert_eq!(eval_e(&p3, &a), eval_e(&p3, &b));
    }

    #[test]
    fn additive_is_linear() {
        let f = ser(&[0, 2, -1, 3]);
        let g = ser(&[0, -1, 4, 1]);
        let lhs = additive_symmetrization(&f, 3)
            .unwrap()
            .add(&additive_symmetrization(&g, 3).unwrap())
            .unwrap();
        assert_eq!(lhs, additive_symmetrization(&f.add(&g).unwrap(), 3).unwrap());
    }

    #[test]
    fn json_round_trip_and_order() {
        let p = universal_product_poly(2).unwrap();
        let j = serde_json::to_value(&p).unwrap();
        let terms = j["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 3);
        let back: WeightedPolyJson = serde_json::from_value(j).unwrap();
        assert_eq!(WeightedPoly::from_json(&back).unwrap(), p);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            universal_plethysm_poly(5, 5),
            Err(Error::WeightBudgetExceeded { .. })
        ));
    }
}
