//! Chow rings `B[h_1..h_m]/(h_i^{n_i+1})` of products of projective spaces,
//! characteristic classes of split elements, pushforwards along the last
//! factor, and exact checks of the Riemann-Roch formulas.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lambda_k::{BaseSpace, SplitElement};
use crate::nilpotent::NilpotentPoly;
use crate::ring::RingElement;
use crate::scalar::{binomial, rat, rat_to_string, Rat, ScalarDomain};
use crate::series::TruncSeries;
use crate::symmetric::chi_poly;

/// A class in `CH^*(X) ⊗ B`, `h_i` the hyperplane class of the `i`-th factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    space: BaseSpace,
    poly: NilpotentPoly,
}

impl ChowClass {
    pub fn from_poly(space: &BaseSpace, poly: NilpotentPoly) -> Result<Self> {
        if poly.dims() != space.dims.as_slice() {
            return Err(Error::ShapeMismatch(format!("class on {space} with other dimensions")));
        }
        Ok(ChowClass {
            space: space.clone(),
            poly,
        })
    }

    pub fn zero(space: &BaseSpace, domain: ScalarDomain) -> Self {
        ChowClass {
            space: space.clone(),
            poly: NilpotentPoly::zero(&space.dims, domain),
        }
    }

    pub fn one(space: &BaseSpace, domain: ScalarDomain) -> Self {
        ChowClass {
            space: space.clone(),
            poly: NilpotentPoly::one(&space.dims, domain),
        }
    }

    /// `h_i`, 0-based factor index.
    pub fn hyperplane(space: &BaseSpace, i: usize, domain: ScalarDomain) -> Self {
        ChowClass {
            space: space.clone(),
            poly: NilpotentPoly::var(&space.dims, domain, i),
        }
    }

    pub fn space(&self) -> &BaseSpace {
        &self.space
    }

    pub fn poly(&self) -> &NilpotentPoly {
        &self.poly
    }

    pub fn domain(&self) -> &ScalarDomain {
        self.poly.domain()
    }

    pub fn with_domain(&self, d: ScalarDomain) -> Result<Self> {
        Ok(ChowClass {
            space: self.space.clone(),
            poly: self.poly.with_domain(d)?,
        })
    }

    /// Part of codimension `j`.
    pub fn degree_part(&self, j: u32) -> Self {
        ChowClass {
            space: self.space.clone(),
            poly: self.poly.degree_part(j),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(ChowClass {
            space: self.space.clone(),
            poly: self.poly.add(&o.poly)?,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Ok(ChowClass {
            space: self.space.clone(),
            poly: self.poly.sub(&o.poly)?,
        })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(ChowClass {
            space: self.space.clone(),
            poly: self.poly.mul(&o.poly)?,
        })
    }

    pub fn scale(&self, c: &Rat) -> Result<Self> {
        Ok(ChowClass {
            space: self.space.clone(),
            poly: self.poly.scale(c)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Multiply the codimension-`j` part by `k^j`.
    pub fn scale_degrees(&self, k: &Rat) -> Self {
        ChowClass {
            space: self.space.clone(),
            poly: self.poly.scale_degrees(k),
        }
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.render("h"))
    }
}

#[derive(Serialize)]
struct ChowTermJson {
    exponents: Vec<u32>,
    coefficient: String,
}

impl Serialize for ChowClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J {
            dims: Vec<u32>,
            terms: Vec<ChowTermJson>,
        }
        J {
            dims: self.space.dims.clone(),
            terms: self
                .poly
                .terms()
                .map(|(e, c)| ChowTermJson {
                    exponents: e.clone(),
                    coefficient: rat_to_string(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl RingElement for ChowClass {
    fn zero_like(&self) -> Self {
        ChowClass::zero(&self.space, self.domain().clone())
    }
    fn one_like(&self) -> Self {
        ChowClass::one(&self.space, self.domain().clone())
    }
    fn add_ref(&self, o: &Self) -> Result<Self> {
        self.add(o)
    }
    fn mul_ref(&self, o: &Self) -> Result<Self> {
        self.mul(o)
    }
    fn scale_rat(&self, c: &Rat) -> Result<Self> {
        self.scale(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    ProjectionToPoint,
    ForgetLastFactor,
}

/// `f: X -> T` whose fibre is the last factor `P^d` of `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativeMap {
    pub kind: MapKind,
    pub source: BaseSpace,
    pub target: BaseSpace,
    pub relative_dim: u32,
}

impl RelativeMap {
    /// `P^d -> pt`.
    pub fn to_point(d: u32) -> Self {
        RelativeMap {
            kind: MapKind::ProjectionToPoint,
            source: BaseSpace::projective(d),
            target: BaseSpace::point(),
            relative_dim: d,
        }
    }

    /// `P^{n_1} x ... x P^{n_m} -> P^{n_1} x ... x P^{n_{m-1}}`.
    pub fn forget_last(source: &BaseSpace) -> Result<Self> {
        let Some((&d, rest)) = source.dims.split_last() else {
            return Err(Error::InvalidArgument("the point has no factor to forget".into()));
        };
        Ok(RelativeMap {
            kind: MapKind::ForgetLastFactor,
            source: source.clone(),
            target: BaseSpace::product(rest),
            relative_dim: d,
        })
    }

    fn last(&self) -> usize {
        self.source.factors() - 1
    }
}

fn nilpotent_c1(space: &BaseSpace, domain: &ScalarDomain, a: &[i64]) -> NilpotentPoly {
    let mut acc = NilpotentPoly::zero(&space.dims, domain.clone());
    for (i, &ai) in a.iter().enumerate() {
        let hi = NilpotentPoly::var(&space.dims, domain.clone(), i);
        acc = acc.add(&hi.scale(&rat(ai)).expect("integer")).expect("same shape");
    }
    acc
}

fn integral_multiplicity(c: &Rat) -> Result<i64> {
    crate::scalar::small_int(c).ok_or_else(|| Error::NotInDomain {
        value: rat_to_string(c),
        domain: "Z (multiplicities)".into(),
    })
}

/// `(1 + c_1 L)` per line, multiplied with multiplicities.
pub fn total_chern(x: &SplitElement) -> Result<ChowClass> {
    let d = ScalarDomain::Integers;
    let mut acc = NilpotentPoly::one(&x.space().dims, d.clone());
    for (a, c) in x.terms() {
        let m = integral_multiplicity(c)?;
        let l = nilpotent_c1(x.space(), &d, a);
        acc = acc.mul(&l.one_plus_pow(&rat(m))?)?;
    }
    ChowClass::from_poly(x.space(), acc)
}

/// `χ_n(x)`: the Newton polynomial `chi_poly(n)` of the Chern classes;
/// `χ_0` is the rank.
pub fn chi_n_class(n: usize, x: &SplitElement) -> Result<ChowClass> {
    let d = ScalarDomain::Integers;
    if n == 0 {
        return ChowClass::one(x.space(), d).scale(&x.rank());
    }
    let c = total_chern(x)?;
    let vals: Vec<ChowClass> = (1..=n).map(|j| c.degree_part(j as u32)).collect();
    chi_poly(n)?.evaluate(&ChowClass::one(x.space(), d), &vals)
}

/// `sum_a c_a exp(c_1 L_a)` over the rationals.
pub fn chern_character(x: &SplitElement) -> Result<ChowClass> {
    let q = ScalarDomain::Rationals;
    let space = x.space();
    let n = space.total_dim() as usize;
    let exp = exp_series(n)?;
    let mut acc = NilpotentPoly::zero(&space.dims, q.clone());
    for (a, c) in x.terms() {
        let l = nilpotent_c1(space, &q, a);
        acc = acc.add(&l.compose_series(&exp)?.scale(c)?)?;
    }
    ChowClass::from_poly(space, acc)
}

fn exp_series(n: usize) -> Result<TruncSeries> {
    let q = ScalarDomain::Rationals;
    TruncSeries::monomial(q, 1, Rat::one(), n.max(1))?.exp()
}

/// `t / (1 - e^{-t})` to order `n`.
pub fn todd_series(n: usize) -> Result<TruncSeries> {
    let q = ScalarDomain::Rationals;
    // (1 - e^{-t}) / t = sum_k (-1)^k t^k / (k+1)!
    let mut c = Vec::with_capacity(n + 1);
    let mut fact = BigInt::one();
    for k in 0..=n {
        fact *= BigInt::from(k + 1);
        let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        c.push(Rat::new(sign, fact.clone()));
    }
    TruncSeries::new(q, c)?.invert()
}

/// `prod_a td(c_1 L_a)^{c_a}` over the rationals.
pub fn todd_class(x: &SplitElement) -> Result<ChowClass> {
    let q = ScalarDomain::Rationals;
    let space = x.space();
    let td = todd_series(space.total_dim() as usize)?;
    let mut acc = NilpotentPoly::one(&space.dims, q.clone());
    for (a, c) in x.terms() {
        let m = integral_multiplicity(c)?;
        let t = nilpotent_c1(space, &q, a).compose_series(&td)?;
        let t = if m < 0 { t.invert()? } else { t };
        acc = acc.mul(&t.pow(m.unsigned_abs() as u32))?;
    }
    ChowClass::from_poly(space, acc)
}

fn last_line(space: &BaseSpace, e: i64) -> Vec<i64> {
    let mut a = vec![0; space.factors()];
    if let Some(x) = a.last_mut() {
        *x = e;
    }
    a
}

/// Relative tangent class from the Euler sequence: `(d+1)[O(0,..,0,1)] - 1`.
pub fn tangent_class(f: &RelativeMap) -> SplitElement {
    let s = &f.source;
    SplitElement::from_terms(
        s,
        ScalarDomain::Integers,
        [
            (last_line(s, 1), rat(f.relative_dim as i64 + 1)),
            (vec![0; s.factors()], rat(-1)),
        ],
    )
    .expect("integers")
}

/// `(d+1)[O(0,..,0,-1)] - 1`.
pub fn cotangent_class(f: &RelativeMap) -> SplitElement {
    tangent_class(f).dual()
}

/// `χ(P^d, O(m)) = C(m+d, d)`, as the integer-valued polynomial
/// `(m+1)...(m+d)/d!`, valid for every `m`.
pub fn hilbert_polynomial(d: u32, m: i64) -> BigInt {
    binomial(&BigInt::from(m + d as i64), d as u64)
}

/// `f_*[O(a, m)] = C(m+d, d) [O(a)]`, extended additively.
pub fn k_pushforward(f: &RelativeMap, x: &SplitElement) -> Result<SplitElement> {
    if x.space() != &f.source {
        return Err(Error::ShapeMismatch(format!("{} is not the source {}", x.space(), f.source)));
    }
    let d = f.relative_dim;
    let terms = x.terms().map(|(a, c)| {
        let (m, rest) = a.split_last().expect("source has a last factor");
        let chi = Rat::from_integer(hilbert_polynomial(d, *m));
        (rest.to_vec(), c * chi)
    });
    SplitElement::from_terms(&f.target, x.domain().clone(), terms.collect::<Vec<_>>())
}

/// Integration over the fibre: the coefficient of `h_last^d`.
pub fn chow_pushforward(f: &RelativeMap, y: &ChowClass) -> Result<ChowClass> {
    if y.space() != &f.source {
        return Err(Error::ShapeMismatch(format!("{} is not the source {}", y.space(), f.source)));
    }
    ChowClass::from_poly(&f.target, y.poly.extract(f.last(), f.relative_dim))
}

pub fn chow_pullback(f: &RelativeMap, y: &ChowClass) -> Result<ChowClass> {
    if y.space() != &f.target {
        return Err(Error::ShapeMismatch(format!("{} is not the target {}", y.space(), f.target)));
    }
    ChowClass::from_poly(&f.source, y.poly.insert_var(f.last(), f.relative_dim))
}

pub fn k_pullback(f: &RelativeMap, x: &SplitElement) -> Result<SplitElement> {
    if x.space() != &f.target {
        return Err(Error::ShapeMismatch(format!("{} is not the target {}", x.space(), f.target)));
    }
    let terms: Vec<(Vec<i64>, Rat)> = x
        .terms()
        .map(|(a, c)| {
            let mut a = a.clone();
            a.push(0);
            (a, c.clone())
        })
        .collect();
    SplitElement::from_terms(&f.source, x.domain().clone(), terms)
}

/// A virtual class written as `positive - negative` with both parts honest
/// (nonnegative multiplicities). Bott's class depends on this split only up
/// to multiplicativity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualPresentation {
    pub positive: SplitElement,
    pub negative: SplitElement,
}

impl VirtualPresentation {
    pub fn new(positive: SplitElement, negative: SplitElement) -> Result<Self> {
        for part in [&positive, &negative] {
            if part.terms().any(|(_, c)| c < &Rat::zero() || !c.is_integer()) {
                return Err(Error::InvalidArgument(format!("{part} is not an honest class")));
            }
        }
        Ok(VirtualPresentation { positive, negative })
    }

    /// Split a presentation by the signs of its coefficients.
    pub fn from_split(x: &SplitElement) -> Result<Self> {
        let pos: Vec<_> = x.terms().filter(|(_, c)| c > &&Rat::zero()).map(|(a, c)| (a.clone(), c.clone())).collect();
        let neg: Vec<_> = x.terms().filter(|(_, c)| c < &&Rat::zero()).map(|(a, c)| (a.clone(), -c.clone())).collect();
        Self::new(
            SplitElement::from_terms(x.space(), ScalarDomain::Integers, pos)?,
            SplitElement::from_terms(x.space(), ScalarDomain::Integers, neg)?,
        )
    }
}

fn theta_honest(x: &SplitElement, k: u32, d: &ScalarDomain) -> Result<NilpotentPoly> {
    let dims = &x.space().dims;
    let mut acc = NilpotentPoly::one(dims, d.clone());
    for (a, c) in x.terms() {
        let mut t = NilpotentPoly::zero(dims, d.clone());
        for j in 0..k as i64 {
            let aj: Vec<i64> = a.iter().map(|x| j * x).collect();
            t = t.add(&NilpotentPoly::line(dims, d.clone(), &aj))?;
        }
        acc = acc.mul(&t.pow(integral_multiplicity(c)? as u32))?;
    }
    Ok(acc)
}

/// Bott's class `θ^k`, with `θ^k(L) = 1 + L + ... + L^{k-1}`, over `Z[1/k]`.
pub fn theta_k(x: &VirtualPresentation, k: u32) -> Result<SplitElement> {
    SplitElement::from_normal_form(x.positive.space(), &theta_nf(x, k)?)
}

fn theta_nf(x: &VirtualPresentation, k: u32) -> Result<NilpotentPoly> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("θ^k needs k ≥ 2, got {k}")));
    }
    let d = ScalarDomain::invert(k as u64)?;
    let pos = theta_honest(&x.positive, k, &d)?;
    let neg = theta_honest(&x.negative, k, &d)?;
    pos.mul(&neg.invert()?)
}

/// Outcome of one exact identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub claim: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    pub trace: Vec<String>,
}

fn render_nf(p: &NilpotentPoly, stem: &str) -> String {
    p.render(stem)
}

/// `Ψ^k(f_* x) = f_*(Ψ^k x · θ^k(Ω_f)^{-1})` over `Z[1/k]`.
pub fn verify_arr(f: &RelativeMap, k: u32, x: &SplitElement) -> Result<Report> {
    let d = ScalarDomain::invert(k as u64)?;
    let x = x.with_domain(d.clone())?;
    let push = k_pushforward(f, &x)?;
    let lhs = push.adams(k as i64);
    let omega = cotangent_class(f);
    let pres = VirtualPresentation::from_split(&omega)?;
    let theta_inv = theta_nf(&pres, k)?.invert()?;
    let corrected_nf = x.adams(k as i64).normal_form().mul(&theta_inv)?;
    let corrected = SplitElement::from_normal_form(&f.source, &corrected_nf)?;
    let rhs = k_pushforward(f, &corrected)?;
    let (l, r) = (lhs.normal_form(), rhs.normal_form());
    Ok(Report {
        claim: format!("ARR k={k} for {} -> {} on {}", f.source, f.target, x),
        lhs: render_nf(&l, "u"),
        rhs: render_nf(&r, "u"),
        equal: l == r,
        trace: vec![
            format!("f_* x = {}", render_nf(&push.normal_form(), "u")),
            format!("Psi^{k} x = {}", render_nf(&x.adams(k as i64).normal_form(), "u")),
            format!("Omega_f = {omega}"),
            format!("theta^{k}(Omega_f)^-1 = {}", render_nf(&theta_inv, "u")),
            format!("Psi^{k} x * theta^-1 = {corrected}"),
        ],
    })
}

/// `ch(f_* x) = f_*(ch(x) td(T_f))` over the rationals.
pub fn verify_grr(f: &RelativeMap, x: &SplitElement) -> Result<Report> {
    let push = k_pushforward(f, x)?;
    let lhs = chern_character(&push)?;
    let chx = chern_character(x)?;
    let td = todd_class(&tangent_class(f))?;
    let rhs = chow_pushforward(f, &chx.mul(&td)?)?;
    Ok(Report {
        claim: format!("GRR for {} -> {} on {}", f.source, f.target, x),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        equal: lhs == rhs,
        trace: vec![
            format!("f_* x = {push}"),
            format!("ch(x) = {chx}"),
            format!("td(T_f) = {td}"),
        ],
    })
}

/// `C(m+d, d) = [h^d] e^{mh} (h / (1 - e^{-h}))^{d+1}`, by univariate series.
pub fn verify_hrr(d: u32, m: i64) -> Result<Report> {
    let n = d as usize;
    let q = ScalarDomain::Rationals;
    let mh = TruncSeries::monomial(q.clone(), 1, rat(m), n.max(1))?.exp()?.truncate(n);
    let td = todd_series(n)?.pow(d + 1)?;
    let prod = mh.mul(&td)?;
    let rhs = prod.coeff(n);
    let lhs = Rat::from_integer(hilbert_polynomial(d, m));
    Ok(Report {
        claim: format!("HRR on P^{d} for O({m})"),
        lhs: rat_to_string(&lhs),
        rhs: rat_to_string(&rhs),
        equal: lhs == rhs,
        trace: vec![
            format!("e^(mh) = {mh}"),
            format!("td(P^{d}) = {td}"),
        ],
    })
}

/// `ch(Ψ^k x)` equals `ch(x)` with its degree-`j` part scaled by `k^j`.
pub fn verify_adams_eigen(x: &SplitElement, k: i64) -> Result<Report> {
    let lhs = chern_character(&x.adams(k))?;
    let rhs = chern_character(x)?.scale_degrees(&rat(k));
    Ok(Report {
        claim: format!("ch(Psi^{k} x) = k^j ch_j(x) on {x}"),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        equal: lhs == rhs,
        trace: vec![],
    })
}

/// Line classes used to probe `X`: each `O(e_i)` and `O(1,...,1)`.
pub fn probe_lines(space: &BaseSpace) -> Vec<Vec<i64>> {
    let m = space.factors();
    let mut out: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
        .collect();
    if m > 1 {
        out.push(vec![1; m]);
    }
    if m == 0 {
        out.push(vec![]);
    }
    out
}

/// `Ω(χ_n) = n χ_{n-1}`: for each probe line `L` on `X`,
/// `χ_n(u ⊠ [L])` on `X x P^1` equals `[∞] ⊠ n χ_{n-1}([L])`, where
/// `u = [O(1)] - 1` on `P^1` and `[∞]` is the point class.
pub fn verify_omega_chi(n: usize, x: &BaseSpace) -> Result<Report> {
    if n == 0 {
        return Err(Error::InvalidArgument("n >= 1".into()));
    }
    let mut dims = x.dims.clone();
    dims.push(1);
    let big = BaseSpace::product(&dims);
    let f = RelativeMap::forget_last(&big)?;
    let t = ChowClass::hyperplane(&big, x.factors(), ScalarDomain::Integers);
    let mut lhs_all = vec![];
    let mut rhs_all = vec![];
    let mut trace = vec![];
    let mut equal = true;
    for a in probe_lines(x) {
        let mut a1 = a.clone();
        a1.push(1);
        let mut a0 = a.clone();
        a0.push(0);
        let cls = SplitElement::line(&big, &a1)?.sub(&SplitElement::line(&big, &a0)?)?;
        let lhs = chi_n_class(n, &cls)?;
        let l = SplitElement::line(x, &a)?;
        let lower = chi_n_class(n - 1, &l)?.scale(&rat(n as i64))?;
        let rhs = chow_pullback(&f, &lower)?.mul(&t)?;
        trace.push(format!("L = O({a:?}): chi_{n}(u x L) = {lhs}, n chi_{}(L) = {lower}", n - 1));
        equal &= lhs == rhs;
        lhs_all.push(lhs.to_string());
        rhs_all.push(rhs.to_string());
    }
    Ok(Report {
        claim: format!("Omega(chi_{n}) = {n} chi_{} on {x}", n - 1),
        lhs: lhs_all.join("; "),
        rhs: rhs_all.join("; "),
        equal,
        trace,
    })
}

/// HRR for every `d <= d_max`, `m` in the range, in input order.
pub fn hrr_sweep(d_max: u32, m_range: (i64, i64)) -> Result<Vec<(u32, i64, Report)>> {
    let cases: Vec<(u32, i64)> = (0..=d_max)
        .flat_map(|d| (m_range.0..=m_range.1).map(move |m| (d, m)))
        .collect();
    cases
        .into_par_iter()
        .map(|(d, m)| verify_hrr(d, m).map(|r| (d, m, r)))
        .collect()
}

/// ARR on `P^d -> pt` with `x = [O(m)]`.
pub fn arr_sweep(d_max: u32, ks: &[u32], m_range: (i64, i64)) -> Result<Vec<(u32, u32, i64, Report)>> {
    let mut cases = vec![];
    for d in 1..=d_max {
        for &k in ks {
            for m in m_range.0..=m_range.1 {
                cases.push((d, k, m));
            }
        }
    }
    cases
        .into_par_iter()
        .map(|(d, k, m)| {
            let f = RelativeMap::to_point(d);
            let x = SplitElement::line(&f.source, &[m])?;
            verify_arr(&f, k, &x).map(|r| (d, k, m, r))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn p(n: u32) -> BaseSpace {
        BaseSpace::projective(n)
    }

    fn line(s: &BaseSpace, a: &[i64]) -> SplitElement {
        SplitElement::line(s, a).unwrap()
    }

    #[test]
    fn chern_examples() {
        let s = p(2);
        assert_eq!(total_chern(&line(&s, &[1])).unwrap().to_string(), "1 + h");
        let two = line(&s, &[1]).add(&line(&s, &[1])).unwrap();
        assert_eq!(total_chern(&two).unwrap().to_string(), "1 + 2*h + h^2");
        assert_eq!(total_chern(&line(&s, &[1]).neg()).unwrap().to_string(), "1 + -1*h + h^2");
    }

    #[test]
    fn chi_examples() {
        let s = p(2);
        let two = line(&s, &[1]).add(&line(&s, &[1])).unwrap();
        assert_eq!(chi_n_class(2, &two).unwrap().to_string(), "2*h^2");
        for n in 1..=5u32 {
            let l = line(&p(n), &[1]);
            let hn = NilpotentPoly::var(&[n], ScalarDomain::Integers, 0).pow(n);
            assert_eq!(chi_n_class(n as usize, &l).unwrap().poly(), &hn);
        }
        let s = BaseSpace::product(&[2, 2]);
        let x = line(&s, &[1, -2]).add(&line(&s, &[3, 1]).scale(&rat(-2)).unwrap()).unwrap();
        assert_eq!(chi_n_class(1, &x).unwrap(), total_chern(&x).unwrap().degree_part(1));
    }

    #[test]
    fn character_and_todd() {
        let s = p(2);
        assert_eq!(chern_character(&line(&s, &[1])).unwrap().to_string(), "1 + h + 1/2*h^2");
        assert_eq!(todd_class(&SplitElement::trivial(&s, 3)).unwrap().to_string(), "1");
        assert_eq!(todd_class(&line(&s, &[1])).unwrap().to_string(), "1 + 1/2*h + 1/12*h^2");
        let t = tangent_class(&RelativeMap::to_point(1));
        assert_eq!(total_chern(&t).unwrap().to_string(), "1 + 2*h");
        let td = todd_class(&tangent_class(&RelativeMap::to_point(2))).unwrap();
        assert_eq!(td.poly().coefficient(&[1]), ratio(3, 2));
        let f = RelativeMap::to_point(3);
        assert!(tangent_class(&f).dual().equivalent(&cotangent_class(&f)));
    }

    #[test]
    fn pushforward_examples() {
        let f = RelativeMap::to_point(2);
        let pt = BaseSpace::point();
        assert!(k_pushforward(&f, &line(&f.source, &[1])).unwrap().equivalent(&SplitElement::trivial(&pt, 3)));
        for d in 1..=5 {
            let f = RelativeMap::to_point(d);
            assert!(k_pushforward(&f, &line(&f.source, &[-1])).unwrap().rank().is_zero());
            let top = k_pushforward(&f, &line(&f.source, &[-(d as i64) - 1])).unwrap();
            assert_eq!(top.rank(), rat(if d % 2 == 0 { 1 } else { -1 }));
            // Serre duality: chi(O(m)) = (-1)^d chi(O(-m-d-1))
            for m in -8..=8 {
                let sign = if d % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                assert_eq!(hilbert_polynomial(d, m), sign * hilbert_polynomial(d, -m - d as i64 - 1));
            }
        }
        let h = ChowClass::hyperplane(&p(2), 0, ScalarDomain::Integers);
        assert_eq!(chow_pushforward(&f, &h.mul(&h).unwrap()).unwrap().to_string(), "1");
        assert!(chow_pushforward(&f, &h).unwrap().is_zero());
        let s = BaseSpace::product(&[1, 1]);
        let g = RelativeMap::forget_last(&s).unwrap();
        let h1 = ChowClass::hyperplane(&s, 0, ScalarDomain::Integers);
        let h2 = ChowClass::hyperplane(&s, 1, ScalarDomain::Integers);
        assert_eq!(chow_pushforward(&g, &h1.mul(&h2).unwrap()).unwrap().to_string(), "h");
    }

    #[test]
    fn theta_examples() {
        let s = p(1);
        let pres = VirtualPresentation::from_split(&line(&s, &[-2])).unwrap();
        let t = theta_k(&pres, 2).unwrap();
        assert_eq!(t.normal_form().render("u"), "2 + -2*u");
        let triv = VirtualPresentation::from_split(&SplitElement::trivial(&s, 1)).unwrap();
        assert_eq!(theta_k(&triv, 5).unwrap().normal_form().render("u"), "5");
        let omega = cotangent_class(&RelativeMap::to_point(1));
        let th = theta_nf(&VirtualPresentation::from_split(&omega).unwrap(), 2).unwrap();
        assert_eq!(th.invert().unwrap().render("u"), "1/2 + 1/2*u");
        assert!(theta_k(&pres, 1).is_err());
    }

    #[test]
    fn arr_examples() {
        let f = RelativeMap::to_point(1);
        let r = verify_arr(&f, 2, &line(&f.source, &[1])).unwrap();
        assert!(r.equal, "{r:?}");
        assert_eq!(r.lhs, "2");
        let r = verify_arr(&f, 2, &SplitElement::zero(&f.source)).unwrap();
        assert!(r.equal && r.lhs == "0");
        for (_, _, _, r) in arr_sweep(2, &[3], (-5, 5)).unwrap() {
            assert!(r.equal, "{r:?}");
        }
    }

    #[test]
    fn hrr_and_grr_examples() {
        let r = verify_hrr(1, 1).unwrap();
        assert!(r.equal && r.lhs == "2");
        let r = verify_hrr(2, 0).unwrap();
        assert!(r.equal && r.lhs == "1");
        let s = BaseSpace::product(&[1, 1]);
        let f = RelativeMap::forget_last(&s).unwrap();
        let r = verify_grr(&f, &line(&s, &[2, 3])).unwrap();
        assert!(r.equal, "{r:?}");
    }

    #[test]
    fn omega_chi_examples() {
        let r = verify_omega_chi(2, &p(2)).unwrap();
        assert!(r.equal, "{r:?}");
        assert!(r.lhs.starts_with("2*h1*h2"));
        assert!(verify_omega_chi(1, &p(2)).unwrap().equal);
        assert!(verify_omega_chi(3, &p(3)).unwrap().equal);
    }

    #[test]
    fn projection_formula() {
        let s = BaseSpace::product(&[2, 2]);
        let f = RelativeMap::forget_last(&s).unwrap();
        let x = line(&s, &[1, 3]).add(&line(&s, &[-1, -2]).scale(&rat(2)).unwrap()).unwrap();
        let y = line(&f.target, &[2]).sub(&SplitElement::trivial(&f.target, 1)).unwrap();
        let lhs = k_pushforward(&f, &x.mul(&k_pullback(&f, &y).unwrap()).unwrap()).unwrap();
        let rhs = k_pushforward(&f, &x).unwrap().mul(&y).unwrap();
        assert!(lhs.equivalent(&rhs));
        let a = chern_character(&x).unwrap();
        let b = chern_character(&y).unwrap();
        let lhs = chow_pushforward(&f, &a.mul(&chow_pullback(&f, &b).unwrap()).unwrap()).unwrap();
        let rhs = chow_pushforward(&f, &a).unwrap().mul(&b).unwrap();
        assert_eq!(lhs, rhs);
    }
}
