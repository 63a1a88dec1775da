//! Pair and k-tuple counting measures.
//!
//! All counts are exact: pair counts in `u128`, k-tuple counts in `BigUint`
//! because binomials outgrow fixed-width integers quickly. Scores are formed
//! as single divisions of exact integers, so the classic fixture values
//! (RI = 3/5, ARI = 1/6, ...) come out as the correctly rounded floats of the
//! exact rationals.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::int_ratio;
use crate::partition::ContingencyTable;
use crate::Real;

/// Pairwise agreement counts between two clusterings of N elements.
///
/// `a_pairs`/`b_pairs` count intra-cluster pairs of each clustering,
/// `t_pairs` the pairs intra-cluster in both, `m_pairs` all N-choose-2 pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub a_pairs: u128,
    pub b_pairs: u128,
    pub t_pairs: u128,
    pub m_pairs: u128,
}

fn binom2(x: u64) -> u128 {
    let x = x as u128;
    if x < 2 {
        0
    } else {
        x * (x - 1) / 2
    }
}

/// Exact pair counts from a contingency table. Needs at least two elements.
pub fn pair_counts(t: &ContingencyTable) -> Result<PairCounts> {
    if t.n() < 2 {
        return Err(Error::TooFewElements(format!(
            "pair counts need N >= 2, got N = {}",
            t.n()
        )));
    }
    let a_pairs = t.row_sums().iter().map(|&x| binom2(x)).sum();
    let b_pairs = t.col_sums().iter().map(|&x| binom2(x)).sum();
    let t_pairs = t.counts().iter().map(|&x| binom2(x)).sum();
    let m_pairs = binom2(t.n());
    let pc = PairCounts {
        a_pairs,
        b_pairs,
        t_pairs,
        m_pairs,
    };
    debug_assert!(pc.t_pairs <= pc.a_pairs.min(pc.b_pairs));
    debug_assert!(pc.a_pairs.max(pc.b_pairs) <= pc.m_pairs);
    Ok(pc)
}

/// Exact k-tuple agreement counts: sums of `C(count, k)` over rows, columns,
/// and cells, plus `C(N, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleCounts {
    pub order: u32,
    pub a_tuples: BigUint,
    pub b_tuples: BigUint,
    pub t_tuples: BigUint,
    pub m_tuples: BigUint,
}

fn big_binom(n: u64, k: u32) -> BigUint {
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

pub fn tuple_counts(t: &ContingencyTable, k: u32) -> Result<TupleCounts> {
    if k < 2 {
        return Err(Error::OrderTooSmall(k));
    }
    if u64::from(k) > t.n() {
        return Err(Error::OrderExceedsN { order: k, n: t.n() });
    }
    let sum = |it: &mut dyn Iterator<Item = u64>| -> BigUint {
        it.map(|x| big_binom(x, k)).sum()
    };
    Ok(TupleCounts {
        order: k,
        a_tuples: sum(&mut t.row_sums().iter().copied()),
        b_tuples: sum(&mut t.col_sums().iter().copied()),
        t_tuples: sum(&mut t.counts().iter().copied()),
        m_tuples: big_binom(t.n(), k),
    })
}

/// Ratio of two arbitrary-width integers with one rounding step. The shifted
/// path handles counts too large for `f64`; it is exact to one ulp because
/// `num <= den` for every ratio formed here.
pub(crate) fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    debug_assert!(num <= den);
    match (num.to_f64(), den.to_f64()) {
        (Some(nf), Some(df)) if nf.is_finite() && df.is_finite() && df > 0.0 => nf / df,
        _ => {
            let scaled = (num << 64u32) / den;
            scaled.to_f64().unwrap() / 2f64.powi(64)
        }
    }
}

/// Rand index: the fraction of pairs on which the clusterings agree.
pub fn rand_index<F: Real>(pc: &PairCounts) -> F {
    let num = 2 * pc.t_pairs as i128 + pc.m_pairs as i128
        - pc.a_pairs as i128
        - pc.b_pairs as i128;
    int_ratio(num, pc.m_pairs as i128)
}

/// Adjusted Rand index: agreement beyond the fixed-marginals expectation
/// `AB/M`, scaled so identical clusterings score 1. Undefined when the
/// expectation already equals the maximum.
pub fn adjusted_rand<F: Real>(pc: &PairCounts) -> Result<F> {
    let (a, b, t, m) = (
        pc.a_pairs as i128,
        pc.b_pairs as i128,
        pc.t_pairs as i128,
        pc.m_pairs as i128,
    );
    let num = 2 * (m * t - a * b);
    let den = m * (a + b) - 2 * a * b;
    if den == 0 {
        return Err(Error::DegenerateAri);
    }
    Ok(int_ratio(num, den))
}

/// Jaccard index over co-clustered pairs. Undefined when both clusterings
/// are all singletons (no co-clustered pairs anywhere).
pub fn jaccard<F: Real>(pc: &PairCounts) -> Result<F> {
    let den = pc.a_pairs + pc.b_pairs - pc.t_pairs;
    if den == 0 {
        return Err(Error::DegenerateJaccard);
    }
    Ok(int_ratio(pc.t_pairs as i128, den as i128))
}

/// Fowlkes-Mallows index: geometric mean of the two pair precisions.
/// Undefined when either clustering has no co-clustered pairs.
pub fn fowlkes_mallows<F: Real>(pc: &PairCounts) -> Result<F> {
    if pc.a_pairs == 0 || pc.b_pairs == 0 {
        return Err(Error::DegenerateFm);
    }
    let t = F::from_u128(pc.t_pairs).unwrap();
    let ab = F::from_u128(pc.a_pairs).unwrap() * F::from_u128(pc.b_pairs).unwrap();
    Ok(t / ab.sqrt())
}

/// The 2x2 distribution of a random element pair over (co-clustered in A) x
/// (co-clustered in B), the factorized baseline built from the marginal
/// co-clustering rates, and their difference.
///
/// Index `[0][0]` is the co-co cell; index `[1][1]` the separated-separated
/// cell. `delta[0][0]` equals `(T - AB/M) / M`, the same residual that the
/// adjusted Rand index rescales.
#[derive(Debug, Clone, Copy)]
pub struct PairTable<F: Real = f64> {
    pub q: [[F; 2]; 2],
    pub q0: [[F; 2]; 2],
    pub delta: [[F; 2]; 2],
}

pub fn pair_table<F: Real>(pc: &PairCounts) -> PairTable<F> {
    let m = pc.m_pairs as i128;
    let q = [
        [
            int_ratio::<F>(pc.t_pairs as i128, m),
            int_ratio::<F>((pc.a_pairs - pc.t_pairs) as i128, m),
        ],
        [
            int_ratio::<F>((pc.b_pairs - pc.t_pairs) as i128, m),
            int_ratio::<F>((pc.m_pairs - pc.a_pairs - pc.b_pairs + pc.t_pairs) as i128, m),
        ],
    ];
    let s_a: F = int_ratio(pc.a_pairs as i128, m);
    let s_b: F = int_ratio(pc.b_pairs as i128, m);
    let one = F::one();
    let q0 = [
        [s_a * s_b, s_a * (one - s_b)],
        [(one - s_a) * s_b, (one - s_a) * (one - s_b)],
    ];
    let mut delta = [[F::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            delta[i][j] = q[i][j] - q0[i][j];
        }
    }
    PairTable { q, q0, delta }
}
