//! Shannon information measures on joint distributions.

use crate::error::{Error, Result};
use crate::partition::JointDistribution;
use crate::Real;

/// Logarithm base for information quantities. Internally everything is
/// computed in nats; bits divide by ln 2 at the end, so the two bases always
/// differ by exactly that factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Bits,
}

impl LogBase {
    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Natural => "nats",
            LogBase::Bits => "bits",
        }
    }

    #[allow(clippy::wrong_self_convention)] // converts a value into this base
    pub(crate) fn from_nats<F: Real>(self, nats: F) -> F {
        match self {
            LogBase::Natural => nats,
            LogBase::Bits => nats / F::from_f64(std::f64::consts::LN_2).unwrap(),
        }
    }
}

pub(crate) fn validate_distribution<F: Real>(dist: &[F]) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::NotADistribution("empty distribution".into()));
    }
    if dist.iter().any(|&x| x < F::zero()) {
        return Err(Error::NotADistribution("negative entry".into()));
    }
    let total: F = dist.iter().copied().sum();
    if (total - F::one()).abs() > F::from_f64(1e-9).unwrap() {
        return Err(Error::NotADistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

pub(crate) fn shannon<F: Real>(dist: &[F]) -> F {
    let mut h = F::zero();
    for &x in dist {
        if x > F::zero() {
            h = h - x * x.ln();
        }
    }
    h
}

/// Shannon entropy of a distribution. Zero entries contribute nothing.
pub fn entropy<F: Real>(dist: &[F], base: LogBase) -> Result<F> {
    validate_distribution(dist)?;
    Ok(base.from_nats(shannon(dist)))
}

pub(crate) fn mutual_information_nats<F: Real>(j: &JointDistribution<F>) -> F {
    let (row, col) = (j.row_marginal(), j.col_marginal());
    let mut mi = F::zero();
    for ((i, jx), &p) in j.p().indexed_iter() {
        if p > F::zero() {
            mi = mi + p * (p / (row[i] * col[jx])).ln();
        }
    }
    mi
}

/// Mutual information between the two clusterings of a joint distribution.
/// Exactly zero on product distributions; non-negative up to rounding.
pub fn mutual_information<F: Real>(j: &JointDistribution<F>, base: LogBase) -> F {
    base.from_nats(mutual_information_nats(j))
}

/// Variation of information `H(A) + H(B) - 2 I(A;B)`, a metric on partitions.
pub fn variation_of_information<F: Real>(j: &JointDistribution<F>, base: LogBase) -> F {
    let nats = shannon(j.row_marginal()) + shannon(j.col_marginal())
        - (F::one() + F::one()) * mutual_information_nats(j);
    base.from_nats(nats)
}

/// Mutual information normalized by the mean of the two marginal entropies.
/// Base-independent; undefined when both clusterings are single clusters.
pub fn normalized_mi<F: Real>(j: &JointDistribution<F>) -> Result<F> {
    let denom = (shannon(j.row_marginal()) + shannon(j.col_marginal()))
        / (F::one() + F::one());
    if denom <= F::zero() {
        return Err(Error::DegenerateNmi);
    }
    Ok(mutual_information_nats(j) / denom)
}
