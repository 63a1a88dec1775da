//! Collision probabilities, Renyi entropies, and k-tuple MI estimators.
//!
//! The probability that k random elements land in one cluster can be read two
//! ways: with replacement it is the power sum `sum p^k`, without replacement
//! the exact finite-sample ratio `sum C(count, k) / C(N, k)`. Renyi contrasts
//! built from these collisions agree with mutual information in the `alpha ->
//! 1` limit, and Lagrange extrapolation of integer orders back to 1 yields
//! the `mi_ktuple` estimators. Under the fixed-marginals permutation null the
//! without-replacement joint collision factorizes exactly in expectation
//! (a falling-factorial identity), which is what centers the extrapolated
//! estimators at zero where the plug-in MI stays positive.

use crate::error::{Error, Result};
use crate::info::{shannon, validate_distribution};
use crate::pair_counts::{big_ratio, tuple_counts};
use crate::partition::{ContingencyTable, JointDistribution};
use crate::Real;

/// How k-tuples are drawn when estimating collision probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMode {
    /// Power sums of cell probabilities; the population quantity.
    #[default]
    WithReplacement,
    /// Exact binomial ratios over distinct k-subsets; the unbiased
    /// finite-sample estimator.
    WithoutReplacement,
}

impl SamplingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SamplingMode::WithReplacement => "with",
            SamplingMode::WithoutReplacement => "without",
        }
    }
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "with" => Ok(SamplingMode::WithReplacement),
            "without" => Ok(SamplingMode::WithoutReplacement),
            other => Err(Error::Usage(format!(
                "unknown sampling mode {other:?} (expected with or without)"
            ))),
        }
    }
}

/// Collision probability estimates for both marginals and the joint.
#[derive(Debug, Clone, Copy)]
pub struct CollisionEstimate<F: Real = f64> {
    pub order: u32,
    pub mode: SamplingMode,
    pub lambda: F,
    pub c_a: F,
    pub c_b: F,
    pub c_joint: F,
}

// Additive smoothing: every term gains lambda and the denominator absorbs
// (number of terms) * lambda, so each smoothed sum stays a probability.
fn smooth<F: Real>(sum: F, den: F, terms: usize, lambda: F) -> F {
    let shift = F::from_usize(terms).unwrap() * lambda;
    (sum + shift) / (den + shift)
}

fn power_sum<F: Real>(parts: impl Iterator<Item = F>, alpha: F) -> F {
    let k = alpha.round();
    let integral = (alpha - k).abs() <= F::from_f64(1e-9).unwrap();
    let mut s = F::zero();
    for x in parts {
        if x > F::zero() {
            s = s + if integral {
                x.powi(k.to_i32().unwrap())
            } else {
                x.powf(alpha)
            };
        }
    }
    s
}

/// Probability that k elements drawn from N all share a cluster, for each
/// marginal clustering and for the joint refinement.
///
/// `lambda > 0` smooths every binomial (or power) term by `+lambda` with the
/// matching denominator adjustment; `lambda = 0` is the plain estimate and
/// may legitimately be zero.
pub fn collision_probability<F: Real>(
    t: &ContingencyTable,
    k: u32,
    mode: SamplingMode,
    lambda: F,
) -> Result<CollisionEstimate<F>> {
    if k < 2 {
        return Err(Error::OrderTooSmall(k));
    }
    if lambda < F::zero() {
        return Err(Error::InvalidConfig("lambda must be non-negative".into()));
    }
    let (rows, cols) = (t.n_rows(), t.n_cols());
    let est = match mode {
        SamplingMode::WithReplacement => {
            let j = JointDistribution::<F>::from_table(t);
            let alpha = F::from_u32(k).unwrap();
            let one = F::one();
            (
                smooth(power_sum(j.row_marginal().iter().copied(), alpha), one, rows, lambda),
                smooth(power_sum(j.col_marginal().iter().copied(), alpha), one, cols, lambda),
                smooth(power_sum(j.p().iter().copied(), alpha), one, rows * cols, lambda),
            )
        }
        SamplingMode::WithoutReplacement => {
            let tc = tuple_counts(t, k)?;
            let den = &tc.m_tuples;
            // Counts small enough for f64 go through the smoothing formula;
            // beyond that lambda is below resolution and the exact shifted
            // ratio takes over.
            let ratio = |num: &num_bigint::BigUint, terms: usize| -> F {
                use num_traits::ToPrimitive;
                match (num.to_f64(), den.to_f64()) {
                    (Some(nf), Some(df)) if nf.is_finite() && df.is_finite() => smooth(
                        F::from_f64(nf).unwrap(),
                        F::from_f64(df).unwrap(),
                        terms,
                        lambda,
                    ),
                    _ => F::from_f64(big_ratio(num, den)).unwrap(),
                }
            };
            (
                ratio(&tc.a_tuples, rows),
                ratio(&tc.b_tuples, cols),
                ratio(&tc.t_tuples, rows * cols),
            )
        }
    };
    let (c_a, c_b, c_joint) = est;
    if lambda == F::zero() {
        debug_assert!(c_joint <= c_a.min(c_b) + F::from_f64(1e-12).unwrap());
    }
    Ok(CollisionEstimate {
        order: k,
        mode,
        lambda,
        c_a,
        c_b,
        c_joint,
    })
}

/// Renyi entropy `log(sum p^alpha) / (1 - alpha)` in nats. Orders within
/// 1e-9 of 1 dispatch to Shannon entropy, the limit value.
pub fn renyi_entropy<F: Real>(dist: &[F], alpha: F) -> Result<F> {
    if alpha <= F::zero() {
        return Err(Error::InvalidOrder(format!(
            "Renyi order must be positive, got {alpha}"
        )));
    }
    validate_distribution(dist)?;
    if (alpha - F::one()).abs() <= F::from_f64(1e-9).unwrap() {
        return Ok(shannon(dist));
    }
    Ok(power_sum(dist.iter().copied(), alpha).ln() / (F::one() - alpha))
}

/// Renyi entropies of both marginals and the joint, and their contrast
/// `J_alpha = H_alpha(A) + H_alpha(B) - H_alpha(A, B)` (nats).
#[derive(Debug, Clone, Copy)]
pub struct RenyiReport<F: Real = f64> {
    pub alpha: F,
    pub mode: SamplingMode,
    pub lambda: F,
    pub h_a: F,
    pub h_b: F,
    pub h_joint: F,
    pub j_alpha: F,
}

/// Renyi mutual-information contrast at order `alpha`.
///
/// Zero on product tables (the joint collision factorizes), and equal to
/// Shannon mutual information in the `alpha -> 1` limit, which is dispatched
/// directly when alpha is within 1e-9 of 1 (mode and lambda are then inert).
/// Without-replacement estimates exist only at integer orders.
pub fn renyi_contrast<F: Real>(
    t: &ContingencyTable,
    alpha: F,
    mode: SamplingMode,
    lambda: F,
) -> Result<RenyiReport<F>> {
    if alpha <= F::zero() {
        return Err(Error::InvalidOrder(format!(
            "Renyi order must be positive, got {alpha}"
        )));
    }
    let tol = F::from_f64(1e-9).unwrap();
    let one = F::one();
    if (alpha - one).abs() <= tol {
        let j = JointDistribution::<F>::from_table(t);
        let h_a = shannon(j.row_marginal());
        let h_b = shannon(j.col_marginal());
        let flat: Vec<F> = j.p().iter().copied().collect();
        let h_joint = shannon(&flat);
        return Ok(RenyiReport {
            alpha,
            mode,
            lambda,
            h_a,
            h_b,
            h_joint,
            j_alpha: h_a + h_b - h_joint,
        });
    }

    let ce = match mode {
        SamplingMode::WithReplacement => {
            let j = JointDistribution::<F>::from_table(t);
            let (rows, cols) = (t.n_rows(), t.n_cols());
            let c_a = smooth(power_sum(j.row_marginal().iter().copied(), alpha), one, rows, lambda);
            let c_b = smooth(power_sum(j.col_marginal().iter().copied(), alpha), one, cols, lambda);
            let c_joint = smooth(
                power_sum(j.p().iter().copied(), alpha),
                one,
                rows * cols,
                lambda,
            );
            CollisionEstimate {
                order: alpha.round().to_u32().unwrap_or(0),
                mode,
                lambda,
                c_a,
                c_b,
                c_joint,
            }
        }
        SamplingMode::WithoutReplacement => {
            let k = alpha.round();
            if (alpha - k).abs() > tol {
                return Err(Error::InvalidOrder(format!(
                    "without-replacement estimates need an integer order, got {alpha}"
                )));
            }
            collision_probability(t, k.to_u32().unwrap(), mode, lambda)?
        }
    };
    if ce.c_a <= F::zero() || ce.c_b <= F::zero() || ce.c_joint <= F::zero() {
        return Err(Error::ZeroCollision(format!(
            "order {alpha} collision sums vanish; smooth with lambda > 0"
        )));
    }
    let scale = one - alpha;
    let h_a = ce.c_a.ln() / scale;
    let h_b = ce.c_b.ln() / scale;
    let h_joint = ce.c_joint.ln() / scale;
    Ok(RenyiReport {
        alpha,
        mode,
        lambda,
        h_a,
        h_b,
        h_joint,
        j_alpha: h_a + h_b - h_joint,
    })
}

// Lagrange basis weights at alpha = 1 for integer nodes 2..=k.
fn lagrange_weights_at_one<F: Real>(k: u32) -> Vec<F> {
    let nodes: Vec<F> = (2..=k).map(|m| F::from_u32(m).unwrap()).collect();
    let one = F::one();
    nodes
        .iter()
        .map(|&node| {
            let mut w = one;
            for &m in &nodes {
                if m != node {
                    w = w * (one - m) / (node - m);
                }
            }
            w
        })
        .collect()
}

/// k-tuple mutual-information estimator: the Lagrange extrapolation of the
/// Renyi contrasts at integer orders `2..=k` back to order 1. `k = 2` is the
/// plain pair contrast `J_2`; `k = 3` gives `2 J_2 - J_3`; `k = 4` gives
/// `3 J_2 - 3 J_3 + J_4`.
pub fn mi_ktuple<F: Real>(
    t: &ContingencyTable,
    k: u32,
    mode: SamplingMode,
    lambda: F,
) -> Result<F> {
    if k < 2 {
        return Err(Error::OrderTooSmall(k));
    }
    let weights = lagrange_weights_at_one::<F>(k);
    let mut value = F::zero();
    for (i, w) in weights.into_iter().enumerate() {
        let alpha = F::from_usize(i + 2).unwrap();
        let j = renyi_contrast(t, alpha, mode, lambda)?;
        value = value + w * j.j_alpha;
    }
    Ok(value)
}
