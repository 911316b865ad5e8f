//! Exact λ-ring calculus on `K_0` of products of projective spaces.
//!
//! Everything is exact: big rationals, truncated series with explicit order,
//! nilpotent polynomial rings. See the `acceptance` test target for the
//! identities checked end to end.

pub mod chow;
pub mod error;
pub mod lambda_k;
pub mod nilpotent;
pub mod operations;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod suite;
pub mod symmetric;
pub mod towers;

pub use chow::{ChowClass, RelativeMap, Report};
pub use error::{Error, Result};
pub use lambda_k::{BaseSpace, SplitElement};
pub use nilpotent::NilpotentPoly;
pub use operations::{AdditiveOpSeries, GammaSeries};
pub use scalar::{Rat, ScalarDomain};
pub use series::TruncSeries;
pub use symmetric::WeightedPoly;
pub use towers::{GroupDescriptor, LimReport, StableElement, TowerDescriptor};
