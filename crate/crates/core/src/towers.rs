//! Projective systems of series: the towers `A^Ω` with transition map
//! `Ω = (1+U) d/dU`, the factorial towers `A!`, their `lim`/`R^1 lim`, and the
//! stable description through `σ`/`Σ` in the log basis `p_n = log^n(1+U)/n!`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operations::{star_compose, AdditiveOpSeries};
use crate::scalar::{factorial, rat, rat_to_string, Rat, ScalarDomain};
use crate::series::TruncSeries;

/// An abelian group entering a tower as coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupDescriptor {
    FreeAbelian { rank: u32 },
    /// `Z/d_1 x Z/d_2 x ...` with `d_1 | d_2 | ...`.
    Finite { invariant_factors: Vec<u64> },
    Rationals,
    FpVector { p: u64, dim: u32 },
    FinitelyGenerated { rank: u32, torsion: Vec<u64> },
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_factors(fs: &[u64]) -> Result<()> {
    for (i, &d) in fs.iter().enumerate() {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("invariant factor {d} < 2")));
        }
        if i > 0 && d % fs[i - 1] != 0 {
            return Err(Error::InvalidArgument(format!(
                "invariant factors must form a divisibility chain: {} does not divide {d}",
                fs[i - 1]
            )));
        }
    }
    Ok(())
}

impl GroupDescriptor {
    pub fn z() -> Self {
        GroupDescriptor::FreeAbelian { rank: 1 }
    }

    pub fn cyclic(n: u64) -> Self {
        GroupDescriptor::Finite {
            invariant_factors: vec![n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::Finite { invariant_factors } => check_factors(invariant_factors),
            GroupDescriptor::FinitelyGenerated { torsion, .. } => check_factors(torsion),
            GroupDescriptor::FpVector { p, .. } if !is_prime(*p) => {
                Err(Error::InvalidArgument(format!("{p} is not prime")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GroupDescriptor::FreeAbelian { rank } => *rank == 0,
            GroupDescriptor::Finite { invariant_factors } => invariant_factors.is_empty(),
            GroupDescriptor::FpVector { dim, .. } => *dim == 0,
            GroupDescriptor::FinitelyGenerated { rank, torsion } => *rank == 0 && torsion.is_empty(),
            GroupDescriptor::Rationals => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            GroupDescriptor::Finite { .. } | GroupDescriptor::FpVector { .. } => true,
            GroupDescriptor::FreeAbelian { rank } => *rank == 0,
            GroupDescriptor::FinitelyGenerated { rank, .. } => *rank == 0,
            GroupDescriptor::Rationals => false,
        }
    }

    pub fn is_divisible(&self) -> bool {
        matches!(self, GroupDescriptor::Rationals) || self.is_zero()
    }

    /// `(free rank, torsion factors)` for finitely generated groups.
    fn fg_parts(&self) -> Option<(u32, Vec<u64>)> {
        match self {
            GroupDescriptor::FreeAbelian { rank } => Some((*rank, vec![])),
            GroupDescriptor::Finite { invariant_factors } => Some((0, invariant_factors.clone())),
            GroupDescriptor::FpVector { p, dim } => Some((0, vec![*p; *dim as usize])),
            GroupDescriptor::FinitelyGenerated { rank, torsion } => Some((*rank, torsion.clone())),
            GroupDescriptor::Rationals => None,
        }
    }

    /// Exponent of the torsion part (1 if there is none).
    fn torsion_exponent(&self) -> u64 {
        self.fg_parts()
            .map(|(_, t)| t.iter().fold(1u64, |a, &d| a.lcm(&d)))
            .unwrap_or(1)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let torsion = |t: &[u64]| t.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>();
        match self {
            GroupDescriptor::FreeAbelian { rank: 0 } => write!(f, "0"),
            GroupDescriptor::FreeAbelian { rank: 1 } => write!(f, "Z"),
            GroupDescriptor::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            GroupDescriptor::Finite { invariant_factors } if invariant_factors.is_empty() => {
                write!(f, "0")
            }
            GroupDescriptor::Finite { invariant_factors } => {
                write!(f, "{}", torsion(invariant_factors).join("+"))
            }
            GroupDescriptor::Rationals => write!(f, "Q"),
            GroupDescriptor::FpVector { p, dim: 1 } => write!(f, "F{p}"),
            GroupDescriptor::FpVector { p, dim } => write!(f, "F{p}^{dim}"),
            GroupDescriptor::FinitelyGenerated { rank, torsion: t } => {
                let mut parts = vec![GroupDescriptor::FreeAbelian { rank: *rank }.to_string()];
                parts.extend(torsion(t));
                write!(f, "{}", parts.join("+"))
            }
        }
    }
}

/// Accepts `Z`, `Z^3`, `Q`, `Z/4`, `F5`, `F5^2`, and sums such as `Z^2+Z/2+Z/4`.
impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognised group '{s}'"));
        let s = s.trim();
        if s == "Q" {
            return Ok(GroupDescriptor::Rationals);
        }
        if s == "0" {
            return Ok(GroupDescriptor::FreeAbelian { rank: 0 });
        }
        if let Some(rest) = s.strip_prefix('F') {
            let (p, dim) = match rest.split_once('^') {
                Some((p, d)) => (p, d.parse().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let g = GroupDescriptor::FpVector {
                p: p.parse().map_err(|_| bad())?,
                dim,
            };
            g.validate()?;
            return Ok(g);
        }
        let mut rank = 0u32;
        let mut torsion = vec![];
        for part in s.split('+') {
            let part = part.trim();
            if let Some(n) = part.strip_prefix("Z/") {
                torsion.push(n.parse::<u64>().map_err(|_| bad())?);
            } else if part == "Z" {
                rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                rank += r.parse::<u32>().map_err(|_| bad())?;
            } else {
                return Err(bad());
            }
        }
        torsion.sort_unstable();
        let g = match (rank, torsion.is_empty()) {
            (r, true) => GroupDescriptor::FreeAbelian { rank: r },
            (0, false) => GroupDescriptor::Finite {
                invariant_factors: torsion,
            },
            (r, false) => GroupDescriptor::FinitelyGenerated { rank: r, torsion },
        };
        g.validate()?;
        Ok(g)
    }
}

/// Shape of a projective system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TowerKind {
    /// Levels `A[[U]]`, transition `Ω`.
    Omega { group: GroupDescriptor },
    /// Levels `A`, transition from level `n+1` to level `n` is multiplication
    /// by `n+1`.
    Factorial { group: GroupDescriptor },
    /// `j` zero groups prepended.
    Shift { j: u32, inner: Box<TowerKind> },
    Product { factors: Vec<TowerKind> },
}

impl fmt::Display for TowerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerKind::Omega { group } => write!(f, "{group}^Omega"),
            TowerKind::Factorial { group } => write!(f, "{group}!"),
            TowerKind::Shift { j, inner } => write!(f, "s^{j}({inner})"),
            TowerKind::Product { factors } => {
                let p: Vec<String> = factors.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", p.join(" x "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub kind: TowerKind,
    /// Series truncation for `Ω` levels.
    pub truncation: usize,
    /// Number of levels materialised for certificates.
    pub depth: usize,
    /// Seed for sampled re-verification.
    pub seed: u64,
}

impl TowerDescriptor {
    pub fn new(kind: TowerKind, truncation: usize, depth: usize) -> Self {
        TowerDescriptor {
            kind,
            truncation,
            depth,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MittagLeffler {
    Yes,
    No,
    UnknownAtDepth { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimClass {
    Zero,
    IsomorphicTo { group: GroupDescriptor },
    /// A subgroup of `A[[U]]` via level 0; `basis` spans it at the stated
    /// truncation when it is known, and lists sample members otherwise.
    SubgroupOfSeries { description: String, basis: Vec<Vec<String>> },
    /// `Q^Z`, identified through `Σ`.
    QzSequences,
    Product { factors: Vec<LimClass> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum R1Class {
    Zero,
    /// `(Ẑ/Z)^copies`, uncountable.
    HatZModZ { copies: u32 },
    ExtQ { group: GroupDescriptor },
    Unknown { reason: String },
    Product { factors: Vec<R1Class> },
}

impl R1Class {
    fn is_zero(&self) -> bool {
        match self {
            R1Class::Zero => true,
            R1Class::HatZModZ { copies } => *copies == 0,
            R1Class::Product { factors } => factors.iter().all(|f| f.is_zero()),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimReport {
    pub tower: String,
    pub mittag_leffler: MittagLeffler,
    pub lim: LimClass,
    pub r1lim: R1Class,
    pub evidence: Vec<String>,
    /// All sampled re-verifications agreed with the classification.
    pub certified: bool,
}

/// `Ω(f) = (1+U) f'`; the order drops by one.
pub fn omega_apply(f: &TruncSeries) -> TruncSeries {
    let d = f.derivative();
    let shifted = {
        let mut c = vec![Rat::zero(); d.order() + 1];
        for i in 1..=d.order() {
            c[i] = d.coeff(i - 1);
        }
        TruncSeries::new(d.domain().clone(), c).expect("same domain")
    };
    d.add(&shifted).expect("same shape")
}

/// Solution of `Ω(g) = f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum OmegaLift {
    /// `particular` has order `N+1`; adding any multiple of `U^i` for
    /// `i` in `free` gives the other lifts.
    Lift { particular: TruncSeries, free: Vec<usize> },
    Obstruction { index: usize, detail: String },
}

impl OmegaLift {
    pub fn lift(&self) -> Option<&TruncSeries> {
        match self {
            OmegaLift::Lift { particular, .. } => Some(particular),
            OmegaLift::Obstruction { .. } => None,
        }
    }
}

/// `n b_n = sum_{k<n} (-1)^{n-1-k} a_k`, i.e. `n b_n + (n+1) b_{n+1} = a_n`.
/// Over `Z` (or a localisation) every division must be exact; over a prime
/// field the indices divisible by `p` are free.
pub fn omega_lift(f: &TruncSeries) -> Result<OmegaLift> {
    let d = f.domain().clone();
    if let ScalarDomain::IntegersMod { m } = d {
        if !is_prime(m) {
            return Err(Error::Unsupported(format!("Ω-lifting over Z/{m} with m not prime")));
        }
        return Ok(fp_lift(f, m));
    }
    let n = f.order();
    let mut b = vec![Rat::zero(); n + 2];
    let mut s = Rat::zero();
    for i in 1..=n + 1 {
        // s_i = a_{i-1} - s_{i-1}
        s = &f.coeff(i - 1) - &s;
        match d.div_int(&s, &BigInt::from(i)) {
            Ok(v) => b[i] = v,
            Err(_) => {
                return Ok(OmegaLift::Obstruction {
                    index: i,
                    detail: format!(
                        "{i} b_{i} = {} has no solution in {d}",
                        rat_to_string(&s)
                    ),
                })
            }
        }
    }
    Ok(OmegaLift::Lift {
        particular: TruncSeries::new(d, b)?,
        free: vec![0],
    })
}

fn to_residues(f: &TruncSeries, p: u64) -> Vec<u64> {
    f.coeffs()
        .iter()
        .map(|c| {
            let v = c.numer().mod_floor(&BigInt::from(p));
            v.to_u64().expect("residue")
        })
        .collect()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn from_residues(v: &[u64], p: u64) -> TruncSeries {
    let d = ScalarDomain::IntegersMod { m: p };
    TruncSeries::new(d, v.iter().map(|&x| rat(x as i64)).collect()).expect("residues")
}

fn fp_lift(f: &TruncSeries, p: u64) -> OmegaLift {
    let a = to_residues(f, p);
    let n = f.order();
    let mut b = vec![0u64; n + 2];
    for i in 0..=n {
        let im = i as u64 % p;
        let ip1 = (i as u64 + 1) % p;
        let rest = (a[i] + p - im * b[i] % p) % p;
        if ip1 == 0 {
            if rest != 0 {
                return OmegaLift::Obstruction {
                    index: i,
                    detail: format!(
                        "alternating sum of block {} is nonzero mod {p}",
                        i as u64 / p
                    ),
                };
            }
        } else {
            b[i + 1] = rest * inv_mod(ip1, p) % p;
        }
    }
    let free = (0..=n + 1).filter(|i| *i as u64 % p == 0).collect();
    OmegaLift::Lift {
        particular: from_residues(&b, p),
        free,
    }
}

fn require_prime_field(f: &TruncSeries) -> Result<u64> {
    match f.domain() {
        ScalarDomain::IntegersMod { m } if is_prime(*m) => Ok(*m),
        d => Err(Error::DomainMismatch(d.to_string(), "F_p".into())),
    }
}

/// Membership in `L`: every block `a_{kp}, ..., a_{kp+p-1}` lying inside the
/// truncation has vanishing alternating sum `sum_i (-1)^i a_{kp+i}`.
pub fn fp_membership_l(f: &TruncSeries) -> Result<bool> {
    let p = require_prime_field(f)?;
    let a = to_residues(f, p);
    Ok(alternating_blocks_vanish(&a, p))
}

fn alternating_blocks_vanish(a: &[u64], p: u64) -> bool {
    let p = p as usize;
    a.chunks(p).filter(|c| c.len() == p).all(|block| {
        let s: i64 = block
            .iter()
            .enumerate()
            .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum();
        s.rem_euclid(p as i64) == 0
    })
}

/// The unique lift lying in `L`. Its order is the last index whose
/// coefficient is determined: the free coefficient `b_{kp}` of a block is
/// fixed only once the whole block is inside the truncation.
pub fn fp_canonical_lift(f: &TruncSeries) -> Result<TruncSeries> {
    let p = require_prime_field(f)?;
    if !fp_membership_l(f)? {
        return Err(Error::InvalidArgument(format!("series is not in L over F{p}")));
    }
    let OmegaLift::Lift { particular, .. } = fp_lift(f, p) else {
        unreachable!("members of L lift")
    };
    let mut b = to_residues(&particular, p);
    let pu = p as usize;
    let len = b.len();
    let full_blocks = len / pu;
    for k in 0..full_blocks {
        let mut s = 0i64;
        for i in 1..pu {
            let x = b[k * pu + i] as i64;
            s += if i % 2 == 0 { x } else { -x };
        }
        b[k * pu] = (-s).rem_euclid(p as i64) as u64;
    }
    let order = if len % pu == 0 { len - 1 } else { full_blocks * pu - 1 };
    if full_blocks == 0 {
        return Err(Error::InsufficientTruncation {
            have: f.order(),
            need: pu - 2,
        });
    }
    b.truncate(order + 1);
    Ok(from_residues(&b, p))
}

/// Spanning set of `L` at truncation `n` (one vector per free coordinate).
pub fn l_basis(p: u64, n: usize) -> Vec<Vec<u64>> {
    let pu = p as usize;
    let mut out = vec![];
    for idx in 0..=n {
        let k = idx / pu;
        let i = idx % pu;
        let block_full = (k + 1) * pu - 1 <= n;
        if block_full && i == 0 {
            continue;
        }
        let mut v = vec![0u64; n + 1];
        v[idx] = 1;
        if block_full {
            // a_{kp} = -sum_{i>=1} (-1)^i a_{kp+i}
            v[k * pu] = if i % 2 == 1 { 1 } else { p - 1 };
        }
        out.push(v);
    }
    out
}

/// Whether `f` is in the image of `Ω` at its truncation, decided by Gaussian
/// elimination on the matrix of `Ω` over `F_p`. Independent of the block-sum
/// description.
pub fn fp_in_image_by_elimination(f: &TruncSeries) -> Result<bool> {
    let p = require_prime_field(f)?;
    let a = to_residues(f, p);
    let n = f.order();
    // columns: b_0..b_{n+1}; rows: a_0..a_n
    let cols = n + 2;
    let mut m: Vec<Vec<u64>> = (0..=n)
        .map(|i| {
            let mut row = vec![0u64; cols + 1];
            row[i] = i as u64 % p;
            row[i + 1] = (i as u64 + 1) % p;
            row[cols] = a[i];
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let fct = m[i][c];
                for j in 0..=cols {
                    m[i][j] = (m[i][j] + p * p - fct * m[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    Ok(m.iter().all(|row| row[..cols].iter().any(|&x| x != 0) || row[cols] == 0))
}

/// Affine form `c0 + sum v_i c_i` in the free constants.
#[derive(Clone, Debug)]
struct Affine {
    c0: Rat,
    v: Vec<Rat>,
}

impl Affine {
    fn constant(c: Rat, unknowns: usize) -> Self {
        Affine {
            c0: c,
            v: vec![Rat::zero(); unknowns],
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.v.len().max(o.v.len());
        let get = |a: &Affine, i: usize| a.v.get(i).cloned().unwrap_or_else(Rat::zero);
        Affine {
            c0: &self.c0 - &o.c0,
            v: (0..n).map(|i| get(self, i) - get(o, i)).collect(),
        }
    }

    fn div(&self, k: i64) -> Self {
        let k = rat(k);
        Affine {
            c0: &self.c0 / &k,
            v: self.v.iter().map(|x| x / &k).collect(),
        }
    }

    fn eval(&self, c: &[BigInt]) -> Rat {
        let mut acc = self.c0.clone();
        for (v, x) in self.v.iter().zip(c) {
            acc += v * Rat::from_integer(x.clone());
        }
        acc
    }
}

/// Solution set `{x0 + B t}` of a system of linear congruences, kept with
/// `B` in Hermite normal form (rows are generators).
struct CongruenceLattice {
    x0: Vec<BigInt>,
    rows: Vec<Vec<BigInt>>,
}

impl CongruenceLattice {
    fn new() -> Self {
        CongruenceLattice {
            x0: vec![],
            rows: vec![],
        }
    }

    fn add_unknown(&mut self) {
        for r in &mut self.rows {
            r.push(BigInt::zero());
        }
        self.x0.push(BigInt::zero());
        let mut e = vec![BigInt::zero(); self.x0.len()];
        *e.last_mut().unwrap() = BigInt::one();
        self.rows.push(e);
    }

    /// Impose `a . x ≡ rhs (mod modulus)`; false when unsolvable.
    fn add_constraint(&mut self, a: &[BigInt], rhs: &BigInt, modulus: &BigInt) -> bool {
        let n = self.x0.len();
        let r = self.rows.len();
        let dot = |u: &[BigInt], v: &[BigInt]| -> BigInt { u.iter().zip(v).map(|(x, y)| x * y).sum() };
        let r0 = rhs - dot(a, &self.x0);
        // w_j = a . row_j, solve w . t + modulus * s = r0
        let mut w: Vec<BigInt> = self.rows.iter().map(|row| dot(a, row)).collect();
        w.push(modulus.clone());
        // unimodular column ops tracked in u ((r+1) x (r+1))
        let m = r + 1;
        let mut u: Vec<Vec<BigInt>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        loop {
            let nz: Vec<usize> = (0..m).filter(|&j| !w[j].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&j| w[j].abs()).unwrap();
            for &j in &nz {
                if j == piv {
                    continue;
                }
                let q = w[j].div_floor(&w[piv]);
                if q.is_zero() {
                    continue;
                }
                w[j] = &w[j] - &q * &w[piv];
                for row in u.iter_mut() {
                    let t = &row[j] - &q * &row[piv];
                    row[j] = t;
                }
            }
        }
        let piv = (0..m).find(|&j| !w[j].is_zero()).expect("modulus is nonzero");
        // move pivot to column 0
        w.swap(0, piv);
        for row in u.iter_mut() {
            row.swap(0, piv);
        }
        let g = w[0].clone();
        if !r0.is_multiple_of(&g) {
            return false;
        }
        let y0 = &r0 / &g;
        // t = U_t y, y = (y0, free...)
        let t0: Vec<BigInt> = (0..r).map(|i| &u[i][0] * &y0).collect();
        for (k, tk) in t0.iter().enumerate() {
            for i in 0..n {
                self.x0[i] += tk * &self.rows[k][i];
            }
        }
        let mut new_rows = vec![];
        for col in 1..m {
            let mut v = vec![BigInt::zero(); n];
            for k in 0..r {
                if u[k][col].is_zero() {
                    continue;
                }
                for i in 0..n {
                    v[i] += &u[k][col] * &self.rows[k][i];
                }
            }
            new_rows.push(v);
        }
        self.rows = new_rows;
        self.reduce();
        true
    }

    /// Hermite normal form of the generators, then a centred reduction of
    /// `x0`, so the representative is canonical.
    fn reduce(&mut self) {
        let n = self.x0.len();
        let mut rows = std::mem::take(&mut self.rows);
        let mut out: Vec<Vec<BigInt>> = vec![];
        for c in 0..n {
            loop {
                let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
                if nz.len() <= 1 {
                    break;
                }
                let piv = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
                for &i in &nz {
                    if i == piv {
                        continue;
                    }
                    let q = rows[i][c].div_floor(&rows[piv][c]);
                    let pr = rows[piv].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
            if let Some(i) = (0..rows.len()).find(|&i| !rows[i][c].is_zero()) {
                let mut row = rows.swap_remove(i);
                if row[c].is_negative() {
                    row.iter_mut().for_each(|x| *x = -x.clone());
                }
                out.push(row);
            }
        }
        // reduce above pivots
        for i in 0..out.len() {
            let c = out[i].iter().position(|x| !x.is_zero()).unwrap();
            for k in 0..i {
                let q = out[k][c].div_floor(&out[i][c]);
                if !q.is_zero() {
                    let pr = out[i].clone();
                    for (x, y) in out[k].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
        }
        for row in &out {
            let c = row.iter().position(|x| !x.is_zero()).unwrap();
            let h = &row[c];
            // nearest multiple, ties towards the smaller representative
            let two = BigInt::from(2);
            let q = (&self.x0[c] * &two + h - BigInt::one()).div_floor(&(h * &two));
            if !q.is_zero() {
                for (x, y) in self.x0.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
        }
        self.rows = out;
    }
}

/// A compatible chain `g_0 = f, Ω(g_{k+1}) = g_k` of integral series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerChain {
    pub levels: Vec<TruncSeries>,
    /// Constant terms chosen at levels `1..=depth`.
    pub constants: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum TowerLift {
    Chain(TowerChain),
    /// No choice of constants reaches level `depth`; `index` is the first
    /// coefficient that cannot be made integral there.
    Obstruction { depth: usize, index: usize, detail: String },
}

/// Lift `f` over `Z` through `depth` levels. The free constant of each level
/// feeds linearly into the later levels, so all constants are solved
/// together as linear congruences. One extra look-ahead level is used when
/// possible, so that the last reported level is itself liftable.
pub fn tower_lift_to_depth(f: &TruncSeries, depth: usize) -> Result<TowerLift> {
    if f.domain() != &ScalarDomain::Integers {
        return Err(Error::DomainMismatch(f.domain().to_string(), "Z".into()));
    }
    match tower_solve(f, depth + 1)? {
        TowerLift::Chain(mut c) => {
            c.levels.truncate(depth + 1);
            c.constants.truncate(depth);
            Ok(TowerLift::Chain(c))
        }
        TowerLift::Obstruction { depth: d, .. } if d == depth + 1 => tower_solve(f, depth),
        other => Ok(other),
    }
}

fn tower_solve(f: &TruncSeries, depth: usize) -> Result<TowerLift> {
    let mut lattice = CongruenceLattice::new();
    let mut levels: Vec<Vec<Affine>> = vec![f
        .coeffs()
        .iter()
        .map(|c| Affine::constant(c.clone(), 0))
        .collect()];
    for k in 1..=depth {
        lattice.add_unknown();
        let unknowns = k;
        let prev = &levels[k - 1];
        let n = prev.len() - 1;
        let mut next = vec![Affine::constant(Rat::zero(), unknowns); n + 2];
        next[0].v[k - 1] = Rat::one();
        let mut s = Affine::constant(Rat::zero(), unknowns);
        for i in 1..=n + 1 {
            s = prev[i - 1].sub(&s);
            let b = s.div(i as i64);
            if !impose_integral(&mut lattice, &b, unknowns) {
                return Ok(TowerLift::Obstruction {
                    depth: k,
                    index: i,
                    detail: format!("coefficient of U^{i} at level {k} cannot be made integral"),
                });
            }
            next[i] = b;
        }
        levels.push(next);
    }
    let c = lattice.x0.clone();
    let mut out = vec![];
    for lvl in &levels {
        let coeffs = lvl.iter().map(|a| a.eval(&c)).collect();
        out.push(TruncSeries::new(ScalarDomain::Integers, coeffs)?);
    }
    Ok(TowerLift::Chain(TowerChain {
        levels: out,
        constants: c.iter().map(|x| x.to_string()).collect(),
    }))
}

fn impose_integral(lattice: &mut CongruenceLattice, b: &Affine, unknowns: usize) -> bool {
    let mut l = b.c0.denom().clone();
    for v in &b.v {
        l = l.lcm(v.denom());
    }
    if l.is_one() {
        return true;
    }
    let lr = Rat::from_integer(l.clone());
    let a: Vec<BigInt> = (0..unknowns)
        .map(|i| (b.v.get(i).cloned().unwrap_or_else(Rat::zero) * &lr).to_integer())
        .collect();
    let rhs = -(&b.c0 * &lr).to_integer();
    lattice.add_constraint(&a, &rhs, &l)
}

/// `Hom(Q, A)`.
pub fn hom_q(a: &GroupDescriptor) -> Result<LimClass> {
    a.validate()?;
    Ok(match a {
        GroupDescriptor::Rationals => LimClass::IsomorphicTo {
            group: GroupDescriptor::Rationals,
        },
        _ => LimClass::Zero,
    })
}

/// `Ext(Q, A)`.
pub fn ext_q(a: &GroupDescriptor) -> Result<R1Class> {
    a.validate()?;
    Ok(match a.fg_parts() {
        Some((0, _)) | None => R1Class::Zero,
        Some((r, _)) => R1Class::HatZModZ { copies: r },
    })
}

fn sample_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn analyze_tower(t: &TowerDescriptor) -> Result<LimReport> {
    analyze_kind(&t.kind, t)
}

fn analyze_kind(kind: &TowerKind, t: &TowerDescriptor) -> Result<LimReport> {
    let tower = kind.to_string();
    match kind {
        TowerKind::Shift { j, inner } => {
            let mut r = analyze_kind(inner, t)?;
            r.tower = tower;
            r.evidence
                .push(format!("prepending {j} zero groups changes neither lim nor R^1 lim"));
            Ok(r)
        }
        TowerKind::Product { factors } => {
            let parts = factors
                .iter()
                .map(|k| analyze_kind(k, t))
                .collect::<Result<Vec<_>>>()?;
            let ml = if parts.iter().all(|p| p.mittag_leffler == MittagLeffler::Yes) {
                MittagLeffler::Yes
            } else if parts.iter().any(|p| p.mittag_leffler == MittagLeffler::No) {
                MittagLeffler::No
            } else {
                MittagLeffler::UnknownAtDepth { depth: t.depth }
            };
            Ok(LimReport {
                tower,
                mittag_leffler: ml,
                lim: LimClass::Product {
                    factors: parts.iter().map(|p| p.lim.clone()).collect(),
                },
                r1lim: R1Class::Product {
                    factors: parts.iter().map(|p| p.r1lim.clone()).collect(),
                },
                certified: parts.iter().all(|p| p.certified),
                evidence: parts
                    .iter()
                    .flat_map(|p| p.evidence.iter().map(move |e| format!("{}: {e}", p.tower)))
                    .collect(),
            })
        }
        TowerKind::Factorial { group } => analyze_factorial(group, t, tower),
        TowerKind::Omega { group } => analyze_omega(group, t, tower),
    }
}

fn analyze_factorial(a: &GroupDescriptor, t: &TowerDescriptor, tower: String) -> Result<LimReport> {
    a.validate()?;
    let d = t.depth.max(1);
    let mut evidence = vec![];
    let (ml, certified) = match a {
        GroupDescriptor::Rationals => {
            evidence.push("all transition maps are isomorphisms of Q".into());
            (MittagLeffler::Yes, true)
        }
        _ if a.is_finite() => {
            let e = a.torsion_exponent();
            let n = (1..=e).find(|n| factorial(*n) % BigInt::from(e) == BigInt::zero()).unwrap_or(1);
            evidence.push(format!(
                "exponent {e} divides {n}!, so composites of {n} transitions vanish (cofinally zero)"
            ));
            (MittagLeffler::Yes, true)
        }
        _ => {
            let images: Vec<String> = (1..=d.min(12)).map(|k| factorial(k as u64).to_string()).collect();
            evidence.push(format!(
                "image of level k in level 0 is k!Z: {} (strictly decreasing, Mittag-Leffler fails)",
                images.join(", ")
            ));
            let df = factorial(d as u64);
            evidence.push(format!(
                "an element of lim restricts to a multiple of {d}! = {df} at level 0; inputs bounded by {df} are forced to 0"
            ));
            // k!Z strictly contains (k+1)!Z for k >= 1
            let ok = (1..d as u64).all(|k| {
                let a = factorial(k);
                let b = factorial(k + 1);
                b.is_multiple_of(&a) && b != a
            });
            (MittagLeffler::No, ok)
        }
    };
    Ok(LimReport {
        tower,
        mittag_leffler: ml,
        lim: hom_q(a)?,
        r1lim: ext_q(a)?,
        evidence,
        certified,
    })
}

fn series_strings(s: &TruncSeries) -> Vec<String> {
    s.to_strings()
}

fn analyze_omega(a: &GroupDescriptor, t: &TowerDescriptor, tower: String) -> Result<LimReport> {
    a.validate()?;
    let n = t.truncation.max(1);
    let samples = 32;
    match a {
        GroupDescriptor::Rationals => {
            let q = ScalarDomain::Rationals;
            let ok = (0..samples).into_par_iter().all(|i| {
                let mut rng = sample_rng(t.seed.wrapping_add(i));
                let c: Vec<Rat> = (0..=n).map(|_| Rat::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=9).into())).collect();
                let f = TruncSeries::new(q.clone(), c).unwrap();
                match omega_lift(&f) {
                    Ok(OmegaLift::Lift { particular, .. }) => omega_apply(&particular) == f,
                    _ => false,
                }
            });
            Ok(LimReport {
                tower,
                mittag_leffler: MittagLeffler::Yes,
                lim: LimClass::QzSequences,
                r1lim: R1Class::Zero,
                evidence: vec![
                    format!("Ω is surjective on Q[[U]]: {samples} sampled series at N={n} solved exactly"),
                    "lim is identified with Q^Z through Σ".into(),
                ],
                certified: ok,
            })
        }
        GroupDescriptor::FpVector { p, dim } if *dim == 1 => analyze_omega_fp(*p, t, tower),
        GroupDescriptor::Finite { invariant_factors } if invariant_factors.len() == 1 && is_prime(invariant_factors[0]) => {
            analyze_omega_fp(invariant_factors[0], t, tower)
        }
        _ if a.is_finite() => Ok(LimReport {
            tower,
            mittag_leffler: MittagLeffler::Yes,
            lim: LimClass::SubgroupOfSeries {
                description: format!("closed subgroup of ({a})[[U]] through level 0"),
                basis: vec![],
            },
            r1lim: R1Class::Zero,
            evidence: vec![format!(
                "{a} is finite: every level is a compact (profinite) group, so images stabilise"
            )],
            certified: true,
        }),
        _ => {
            let (rank, torsion) = a.fg_parts().expect("finitely generated");
            let mut r = analyze_omega_z(rank, t, tower.clone())?;
            if !torsion.is_empty() {
                let tors = GroupDescriptor::Finite {
                    invariant_factors: torsion,
                };
                let tr = analyze_omega(&tors, t, tors.to_string())?;
                r = LimReport {
                    tower,
                    mittag_leffler: MittagLeffler::UnknownAtDepth { depth: t.depth },
                    lim: LimClass::Product {
                        factors: vec![r.lim, tr.lim],
                    },
                    r1lim: R1Class::Product {
                        factors: vec![r.r1lim, tr.r1lim],
                    },
                    evidence: [r.evidence, tr.evidence].concat(),
                    certified: r.certified && tr.certified,
                };
            }
            Ok(r)
        }
    }
}

fn analyze_omega_z(rank: u32, t: &TowerDescriptor, tower: String) -> Result<LimReport> {
    let n = t.truncation.max(2);
    let z = ScalarDomain::Integers;
    let one_plus_u = TruncSeries::from_ints(z.clone(), &[1, 1])?;
    let mut c = vec![0i64; n + 1];
    for (i, x) in c.iter_mut().enumerate() {
        *x = if i % 2 == 0 { 1 } else { -1 };
    }
    let geom = TruncSeries::from_ints(z.clone(), &c)?;
    let d = t.depth.max(1);
    let chains_ok = [&one_plus_u, &geom]
        .par_iter()
        .all(|f| matches!(tower_lift_to_depth(f, d), Ok(TowerLift::Chain(_))));
    let u = TruncSeries::from_ints(z, &[0, 1])?;
    let u_blocked = matches!(tower_lift_to_depth(&u, 1), Ok(TowerLift::Obstruction { .. }));
    let l: BigInt = (1..=n as u64 + 1).fold(BigInt::one(), |a, k| a.lcm(&BigInt::from(k)));
    Ok(LimReport {
        tower,
        mittag_leffler: MittagLeffler::UnknownAtDepth { depth: d },
        lim: LimClass::SubgroupOfSeries {
            description: format!(
                "subgroup of (Z[[U]])^{rank} through level 0 (injective); contains 1+U and 1/(1+U); not characterised"
            ),
            basis: vec![series_strings(&one_plus_u), series_strings(&geom)],
        },
        r1lim: if rank == 0 {
            R1Class::Zero
        } else {
            R1Class::Unknown {
                reason: "no closed form for R^1 lim of Z^Omega".into(),
            }
        },
        evidence: vec![
            format!("1+U and 1/(1+U) lift through {d} levels: {chains_ok}"),
            format!("U does not lift past level 0: {u_blocked}"),
            format!(
                "a constant c at level 1 lifts once more only if lcm(1..{}) = {l} divides c, so lim -> level 0 is injective",
                n + 1
            ),
        ],
        certified: chains_ok && u_blocked,
    })
}

fn analyze_omega_fp(p: u64, t: &TowerDescriptor, tower: String) -> Result<LimReport> {
    let n = t.truncation.max(p as usize);
    let samples = 64u64;
    let agree = (0..samples).into_par_iter().all(|i| {
        let mut rng = sample_rng(t.seed.wrapping_add(i));
        let f = random_fp_series(&mut rng, p, n, i % 2 == 0);
        let member = fp_membership_l(&f).unwrap();
        let solvable = fp_in_image_by_elimination(&f).unwrap();
        let lift_ok = match fp_canonical_lift(&f) {
            Ok(g) => {
                let back = omega_apply(&g);
                back == f.truncate(back.order())
            }
            Err(_) => !member,
        };
        member == solvable && lift_ok
    });
    let basis: Vec<Vec<String>> = l_basis(p, n)
        .into_iter()
        .map(|v| v.iter().map(|x| x.to_string()).collect())
        .collect();
    Ok(LimReport {
        tower,
        mittag_leffler: MittagLeffler::Yes,
        lim: LimClass::SubgroupOfSeries {
            description: format!(
                "L = series over F{p} whose blocks a_kp..a_kp+{} have vanishing alternating sum",
                p - 1
            ),
            basis,
        },
        r1lim: R1Class::Zero,
        evidence: vec![
            format!("image of Ω equals L at N={n}: {samples} sampled series, block test agrees with elimination"),
            "Ω maps L onto L with kernel meeting L trivially, so the images stabilise at L".into(),
        ],
        certified: agree,
    })
}

/// Random series over `F_p`; with `in_l` the sample is drawn from `L`.
pub fn random_fp_series<R: Rng>(rng: &mut R, p: u64, n: usize, in_l: bool) -> TruncSeries {
    let mut a: Vec<u64> = (0..=n).map(|_| rng.gen_range(0..p)).collect();
    if in_l {
        let pu = p as usize;
        for k in 0..(n + 1) / pu {
            let mut s = 0i64;
            for i in 1..pu {
                let x = a[k * pu + i] as i64;
                s += if i % 2 == 0 { x } else { -x };
            }
            a[k * pu] = (-s).rem_euclid(p as i64) as u64;
        }
    }
    from_residues(&a, p)
}

/// `p_0, ..., p_N` with `p_n = log^n(1+U) / n!`.
pub fn log_basis(order: usize) -> Arc<Vec<TruncSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<TruncSeries>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().expect("cache").get(&order) {
        return b.clone();
    }
    let b = Arc::new(build_log_basis(order));
    cache.lock().expect("cache").insert(order, b.clone());
    b
}

fn build_log_basis(order: usize) -> Vec<TruncSeries> {
    let q = ScalarDomain::Rationals;
    let mut u = vec![Rat::zero(); order + 1];
    if order >= 1 {
        u[1] = Rat::one();
    }
    let l = TruncSeries::new(q.clone(), u)
        .and_then(|u| TruncSeries::one(q.clone(), order).add(&u))
        .and_then(|s| s.log1p())
        .expect("log(1+U)");
    let mut out = vec![TruncSeries::one(q, order)];
    for n in 1..=order {
        let next = out[n - 1]
            .mul(&l)
            .and_then(|s| s.scale(&Rat::new(BigInt::one(), BigInt::from(n))))
            .expect("rational");
        out.push(next);
    }
    out
}

/// `σ(a) = sum a_n p_n` modulo `U^{N+1}`.
pub fn sigma(a: &[Rat], order: usize) -> Result<TruncSeries> {
    let basis = log_basis(order);
    let mut acc = TruncSeries::zero(ScalarDomain::Rationals, order);
    for (an, pn) in a.iter().zip(basis.iter()) {
        if !an.is_zero() {
            acc = acc.add(&pn.scale(an)?)?;
        }
    }
    Ok(acc)
}

/// Coordinates in the basis `p_n`; `p_n` starts with `U^n / n!`, so the
/// solve is triangular.
pub fn sigma_inverse(f: &TruncSeries) -> Result<Vec<Rat>> {
    let f = f.with_domain(ScalarDomain::Rationals)?;
    let basis = log_basis(f.order());
    let mut rest = f;
    let mut out = vec![];
    for (n, pn) in basis.iter().enumerate() {
        let a = rest.coeff(n) / pn.coeff(n);
        if !a.is_zero() {
            rest = rest.sub(&pn.scale(&a)?)?;
        }
        out.push(a);
    }
    Ok(out)
}

/// Levels and truncation shared by stable elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableContext {
    /// Levels `0..=levels` are materialised.
    pub levels: usize,
    pub truncation: usize,
}

/// A compatible family `(x_n)` in `lim Q^Ω`, given through `Σ` by a function
/// `a: Z -> Q` known on `[-levels, truncation]` (the only values that affect
/// the materialised levels). Level `n` is `σ(a_{-n}, a_{-n+1}, ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableElement {
    ctx: StableContext,
    /// `values[i]` is `a_{i - levels}`.
    values: Vec<Rat>,
}

impl StableElement {
    pub fn from_fn(ctx: StableContext, f: impl Fn(i64) -> Rat) -> Self {
        let lo = -(ctx.levels as i64);
        let hi = ctx.truncation as i64;
        StableElement {
            ctx,
            values: (lo..=hi).map(f).collect(),
        }
    }

    pub fn context(&self) -> StableContext {
        self.ctx
    }

    pub fn range(&self) -> (i64, i64) {
        (-(self.ctx.levels as i64), self.ctx.truncation as i64)
    }

    pub fn value(&self, m: i64) -> Rat {
        let i = m + self.ctx.levels as i64;
        if i < 0 {
            return Rat::zero();
        }
        self.values.get(i as usize).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn values(&self) -> Vec<(i64, Rat)> {
        let (lo, hi) = self.range();
        (lo..=hi).map(|m| (m, self.value(m))).collect()
    }

    /// Characteristic function of `{n}`.
    pub fn pi(ctx: StableContext, n: i64) -> Self {
        Self::from_fn(ctx, |m| if m == n { Rat::one() } else { Rat::zero() })
    }

    /// Characteristic function of `[-n, n]`.
    pub fn chi_interval(ctx: StableContext, n: i64) -> Self {
        Self::from_fn(ctx, |m| if m.abs() <= n { Rat::one() } else { Rat::zero() })
    }

    /// `Ψ^k`, i.e. `m -> k^m`; level `n` is `k^{-n} (1+U)^k`.
    pub fn psi(ctx: StableContext, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("stable Ψ^k needs k ≠ 0".into()));
        }
        Ok(Self::from_fn(ctx, |m| rat_pow(k, m)))
    }

    /// `φ_{n,k}`: `m -> (k^m - k^n)^{-1}` for `m ≠ n`, and 0 at `n`.
    pub fn phi(ctx: StableContext, n: i64, k: i64) -> Result<Self> {
        if k == 0 || k == 1 || k == -1 {
            return Err(Error::InvalidArgument(format!("φ needs |k| ≥ 2, got {k}")));
        }
        let kn = rat_pow(k, n);
        Ok(Self::from_fn(ctx, |m| {
            if m == n {
                Rat::zero()
            } else {
                (rat_pow(k, m) - &kn).recip()
            }
        }))
    }

    pub fn identity(ctx: StableContext) -> Self {
        Self::from_fn(ctx, |_| Rat::one())
    }

    fn zip(&self, o: &Self, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<Self> {
        if self.ctx != o.ctx {
            return Err(Error::ShapeMismatch("stable elements in different contexts".into()));
        }
        Ok(StableElement {
            ctx: self.ctx,
            values: self.values.iter().zip(&o.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        StableElement {
            ctx: self.ctx,
            values: self.values.iter().map(|a| a * c).collect(),
        }
    }

    /// Level `n`: `sum_{j>=0} a_{j-n} p_j` modulo `U^{N+1}`.
    pub fn level(&self, n: usize) -> Result<TruncSeries> {
        if n > self.ctx.levels {
            return Err(Error::InvalidArgument(format!(
                "level {n} beyond materialised {}",
                self.ctx.levels
            )));
        }
        let a: Vec<Rat> = (0..=self.ctx.truncation)
            .map(|j| self.value(j as i64 - n as i64))
            .collect();
        sigma(&a, self.ctx.truncation)
    }

    pub fn levels(&self) -> Result<Vec<TruncSeries>> {
        (0..=self.ctx.levels).map(|n| self.level(n)).collect()
    }

    /// Checks `Ω(x_{n+1}) = x_n` at every materialised level (to the
    /// truncation surviving `Ω`).
    pub fn check_compatibility(&self) -> Result<bool> {
        let lv = self.levels()?;
        Ok(lv.windows(2).all(|w| {
            let o = omega_apply(&w[1]);
            o == w[0].truncate(o.order())
        }))
    }
}

fn rat_pow(k: i64, m: i64) -> Rat {
    let base = if m < 0 { rat(k).recip() } else { rat(k) };
    let mut acc = Rat::one();
    for _ in 0..m.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Composition of stable operations: pointwise product of the functions.
pub fn stable_compose(x: &StableElement, y: &StableElement) -> Result<StableElement> {
    x.zip(y, |a, b| a * b)
}

/// Level-by-level comparison of `stable_compose` with `★` of the levels.
pub fn stable_compose_matches_star(x: &StableElement, y: &StableElement) -> Result<bool> {
    let c = stable_compose(x, y)?;
    for n in 0..=x.ctx.levels {
        let lhs = c.level(n)?;
        let rhs = star_compose(&AdditiveOpSeries::new(x.level(n)?)?, &AdditiveOpSeries::new(y.level(n)?)?)?;
        if &lhs != rhs.series() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The pieces of `0 -> R^1 lim K_{i+1}^Ω -> [BGL, BGL[-i]] -> lim K_i^Ω -> 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnorReport {
    pub i: i32,
    /// Phantom part `R^1 lim K_{i+1}^Ω`.
    pub phantom: R1Class,
    /// Quotient `lim K_i^Ω`.
    pub lim: LimClass,
    pub no_phantoms: bool,
    pub evidence: Vec<String>,
}

pub fn milnor_report(
    i: i32,
    groups: &BTreeMap<i32, GroupDescriptor>,
    truncation: usize,
    depth: usize,
) -> Result<MilnorReport> {
    let get = |d: i32| {
        groups
            .get(&d)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("no descriptor for K_{d}")))
    };
    let ki = get(i)?;
    let ki1 = get(i + 1)?;
    let desc = |g: &GroupDescriptor| TowerDescriptor::new(TowerKind::Omega { group: g.clone() }, truncation, depth);
    let lim = analyze_tower(&desc(&ki))?;
    let phantom = if ki1.is_finite() || ki1.is_divisible() {
        R1Class::Zero
    } else {
        analyze_tower(&desc(&ki1))?.r1lim
    };
    let mut evidence = vec![format!("K_{} = {ki1}", i + 1)];
    if phantom.is_zero() {
        evidence.push(format!("{ki1} is finite or divisible, so R^1 lim of its Ω-tower vanishes"));
    }
    evidence.extend(lim.evidence.iter().map(|e| format!("K_{i} = {ki}: {e}")));
    Ok(MilnorReport {
        i,
        no_phantoms: phantom.is_zero(),
        phantom,
        lim: lim.lim,
        evidence,
    })
}
