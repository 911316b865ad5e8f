//! Minimal commutative-ring interface used to evaluate universal
//! polynomials in different targets (numbers, series, K-theory, Chow).

use num_traits::{One, Zero};

use crate::error::Result;
use crate::scalar::{Rat, ScalarDomain};
use crate::series::TruncSeries;

pub trait RingElement: Clone {
    /// Additive identity of the ring `self` lives in.
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, other: &Self) -> Result<Self>;
    fn mul_ref(&self, other: &Self) -> Result<Self>;
    /// Multiplication by a rational scalar; fails when the scalar is not in
    /// the coefficient domain.
    fn scale_rat(&self, c: &Rat) -> Result<Self>;

    fn sub_ref(&self, other: &Self) -> Result<Self> {
        self.add_ref(&other.scale_rat(&-Rat::one())?)
    }

    fn pow_u(&self, e: u32) -> Result<Self> {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.mul_ref(self)?;
        }
        Ok(acc)
    }
}

impl RingElement for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn add_ref(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn mul_ref(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn scale_rat(&self, c: &Rat) -> Result<Self> {
        Ok(self * c)
    }
}

impl RingElement for TruncSeries {
    fn zero_like(&self) -> Self {
        TruncSeries::zero(self.domain().clone(), self.order())
    }
    fn one_like(&self) -> Self {
        TruncSeries::one(self.domain().clone(), self.order())
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

/// Helper for targets that need a domain to build scalars.
pub fn domain_scalar(domain: &ScalarDomain, c: &Rat) -> Result<Rat> {
    domain.normalize(c.clone())
}
