//! Deterministic inputs shared by the benchmarks.

use lambda_forge::operations::AdditiveOpSeries;
use lambda_forge::scalar::rat;
use lambda_forge::{BaseSpace, ScalarDomain, SplitElement, TruncSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 7;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

/// Integral series of order `n` with coefficients in `[-3, 3]`.
pub fn int_series(r: &mut impl Rng, n: usize) -> TruncSeries {
    let c: Vec<i64> = (0..=n).map(|_| r.gen_range(-3..=3)).collect();
    TruncSeries::from_ints(ScalarDomain::Integers, &c).expect("integers")
}

pub fn op_pair(n: usize) -> (AdditiveOpSeries, AdditiveOpSeries) {
    let mut r = rng();
    let f = AdditiveOpSeries::new(int_series(&mut r, n)).expect("Z");
    let g = AdditiveOpSeries::new(int_series(&mut r, n)).expect("Z");
    (f, g)
}

/// `terms` line classes with exponents in `[-2, 2]` on `space`.
pub fn element(space: &BaseSpace, terms: usize) -> SplitElement {
    let mut r = rng();
    let t: Vec<(Vec<i64>, _)> = (0..terms)
        .map(|i| {
            let a = (0..space.factors()).map(|_| r.gen_range(-2..=2)).collect();
            (a, rat(if i % 2 == 0 { 1 } else { -2 }))
        })
        .collect();
    SplitElement::from_terms(space, ScalarDomain::Integers, t).expect("Z")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(op_pair(8), op_pair(8));
        let s = BaseSpace::product(&[2, 1]);
        assert_eq!(element(&s, 3), element(&s, 3));
        assert_eq!(op_pair(8).0.order(), 8);
    }
}
