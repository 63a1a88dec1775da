//! Residuals against independence and the expansions built on them.
//!
//! The additive residual `delta = p - p_row p_col` and the relative residual
//! `epsilon = delta / (p_row p_col)` turn mutual information into a power
//! series whose quadratic head is half the chi-square statistic, and split
//! the Rand index into a marginal baseline plus residual corrections. These
//! are the expansions that make the pair-counting and information-theoretic
//! families directly comparable.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::info::LogBase;
use crate::pair_counts::pair_counts;
use crate::partition::{ContingencyTable, JointDistribution};
use crate::{int_ratio, Real};

/// Residuals of a joint distribution against its product of marginals.
#[derive(Debug, Clone)]
pub struct ResidualField<F: Real = f64> {
    /// `delta[[i, j]] = p[[i, j]] - row[i] col[j]`; rows and columns sum to 0.
    pub delta: Array2<F>,
    /// `epsilon[[i, j]] = delta[[i, j]] / (row[i] col[j])`, bounded below by -1.
    pub epsilon: Array2<F>,
    /// Convergence gauge of the MI series: the series converges where this
    /// is below 1.
    pub max_abs_epsilon: F,
}

/// Computes both residual fields of `j`. A zero expectation can only come
/// from a zero marginal (possible in resampled tables), where the whole cell
/// is massless and its residuals are exactly zero.
pub fn residuals<F: Real>(j: &JointDistribution<F>) -> ResidualField<F> {
    let (row, col) = (j.row_marginal(), j.col_marginal());
    let mut delta = Array2::zeros((j.n_rows(), j.n_cols()));
    let mut epsilon = Array2::zeros((j.n_rows(), j.n_cols()));
    let mut max_abs = F::zero();
    for ((i, jx), &p) in j.p().indexed_iter() {
        let e = row[i] * col[jx];
        let d = p - e;
        let eps = if e > F::zero() { d / e } else { F::zero() };
        delta[[i, jx]] = d;
        epsilon[[i, jx]] = eps;
        max_abs = max_abs.max(eps.abs());
    }
    ResidualField {
        delta,
        epsilon,
        max_abs_epsilon: max_abs,
    }
}

/// Half of the chi-square independence statistic of `j` (in nats): the
/// quadratic head of the mutual-information series.
pub fn chi_square_approx<F: Real>(j: &JointDistribution<F>) -> F {
    let (row, col) = (j.row_marginal(), j.col_marginal());
    let mut s = F::zero();
    for ((i, jx), &p) in j.p().indexed_iter() {
        let e = row[i] * col[jx];
        let d = p - e;
        if e > F::zero() {
            s = s + d * d / e;
        }
    }
    s / (F::one() + F::one())
}

/// Truncated mutual-information series.
#[derive(Debug, Clone)]
pub struct SeriesApproximation<F: Real = f64> {
    /// Highest order included.
    pub order: u32,
    /// Sum of all terms up to `order` (nats).
    pub value: F,
    /// Per-order terms, `terms[0]` being order 2.
    pub terms: Vec<F>,
    /// Set when `max |epsilon|` is 1 or more, where the series leaves its
    /// guaranteed convergence region and partial sums may be misleading.
    pub convergence_warning: bool,
}

/// Expands mutual information in powers of the relative residual:
/// the order-r term is `(-1)^r / (r (r-1)) * sum_ij delta epsilon^(r-1)`.
/// Truncation at order 2 is `chi_square_approx`.
pub fn mi_series<F: Real>(j: &JointDistribution<F>, order: u32) -> Result<SeriesApproximation<F>> {
    if order < 2 {
        return Err(Error::InvalidOrder(format!(
            "series order must be at least 2, got {order}"
        )));
    }
    let field = residuals(j);
    let cells: Vec<(F, F)> = field
        .delta
        .iter()
        .zip(field.epsilon.iter())
        .map(|(&d, &e)| (d, e))
        .collect();
    // Running power delta * epsilon^(r-1) per cell.
    let mut pow: Vec<F> = cells.iter().map(|&(d, e)| d * e).collect();
    let mut terms = Vec::with_capacity(order as usize - 1);
    let mut value = F::zero();
    for r in 2..=order {
        let cell_sum: F = pow.iter().copied().sum();
        let sign = if r % 2 == 0 { F::one() } else { -F::one() };
        let coef = sign / F::from_u32(r * (r - 1)).unwrap();
        let term = coef * cell_sum;
        terms.push(term);
        value = value + term;
        for (p, &(_, e)) in pow.iter_mut().zip(cells.iter()) {
            *p = *p * e;
        }
    }
    Ok(SeriesApproximation {
        order,
        value,
        terms,
        convergence_warning: field.max_abs_epsilon >= F::one(),
    })
}

/// Quadratic variation-of-information approximation
/// `H(A) + H(B) - chi_square`, i.e. VI with mutual information replaced by
/// its quadratic head.
pub fn vi_quadratic_approx<F: Real>(j: &JointDistribution<F>) -> F {
    let h = crate::info::entropy(j.row_marginal(), LogBase::Natural).unwrap_or(F::zero())
        + crate::info::entropy(j.col_marginal(), LogBase::Natural).unwrap_or(F::zero());
    h - (F::one() + F::one()) * chi_square_approx(j)
}

/// The Rand index split into a marginal baseline plus residual corrections.
#[derive(Debug, Clone, Copy)]
pub struct RiDecomposition<F: Real = f64> {
    /// Large-N baseline `1 - S_A - S_B + 2 S_A S_B` from the marginal
    /// collision probabilities alone.
    pub baseline: F,
    /// `4 sum_ij row_i col_j delta_ij`; vanishes when delta is orthogonal to
    /// the product of marginals.
    pub linear: F,
    /// `2 sum_ij delta_ij^2`, the only term that survives at independence.
    pub quadratic: F,
    /// `baseline + linear + quadratic`; approaches the exact Rand index at
    /// rate 1/N.
    pub total: F,
    /// Exact Rand index of the table.
    pub exact_ri: F,
    /// Exact pair-space baseline `1 - (A+B)/M + 2AB/M^2`.
    pub pair_baseline: F,
    /// Exact pair-space residual `(2/M)(T - AB/M)`;
    /// `exact_ri = pair_baseline + pair_residual` identically.
    pub pair_residual: F,
}

/// Decomposes the Rand index of a table into baseline and residual parts,
/// both in the large-N probability form and in the exact pair-count form.
pub fn ri_decomposition<F: Real>(t: &ContingencyTable) -> Result<RiDecomposition<F>> {
    let pc = pair_counts(t)?;
    let j = JointDistribution::<F>::from_table(t);
    let (row, col) = (j.row_marginal(), j.col_marginal());
    let s_a: F = row.iter().map(|&x| x * x).sum();
    let s_b: F = col.iter().map(|&x| x * x).sum();
    let two = F::one() + F::one();
    let four = two + two;
    let baseline = F::one() - s_a - s_b + two * s_a * s_b;
    let mut linear = F::zero();
    let mut quadratic = F::zero();
    for ((i, jx), &p) in j.p().indexed_iter() {
        let e = row[i] * col[jx];
        let d = p - e;
        linear = linear + e * d;
        quadratic = quadratic + d * d;
    }
    linear = four * linear;
    quadratic = two * quadratic;

    let exact_ri = crate::pair_counts::rand_index::<F>(&pc);
    let (a, b, tt, m) = (
        pc.a_pairs as i128,
        pc.b_pairs as i128,
        pc.t_pairs as i128,
        pc.m_pairs as i128,
    );
    // Exact integer numerators over M^2 keep the split identity tight.
    let pair_baseline = int_ratio::<F>(m * m - (a + b) * m + 2 * a * b, m * m);
    let pair_residual = int_ratio::<F>(2 * (tt * m - a * b), m * m);

    Ok(RiDecomposition {
        baseline,
        linear,
        quadratic,
        total: baseline + linear + quadratic,
        exact_ri,
        pair_baseline,
        pair_residual,
    })
}

/// Which cell-wise contribution map to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualKind {
    /// `p log(p / (row col))` per cell; cells sum to mutual information.
    Mi,
    /// `C(n, 2) - C(a, 2) C(b, 2) / C(N, 2)` per cell; cells sum to
    /// `T - AB/M`, the unscaled ARI numerator.
    Ari,
}

impl ResidualKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ResidualKind::Mi => "mi",
            ResidualKind::Ari => "ari",
        }
    }
}

impl std::str::FromStr for ResidualKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mi" => Ok(ResidualKind::Mi),
            "ari" => Ok(ResidualKind::Ari),
            other => Err(Error::Usage(format!(
                "unknown residual kind {other:?} (expected mi or ari)"
            ))),
        }
    }
}

/// Cell-wise contribution map, normalized for display.
#[derive(Debug, Clone)]
pub struct ResidualMatrix<F: Real = f64> {
    /// Cells divided by `scale` so the largest magnitude is 1; returned
    /// unnormalized when all cells are zero.
    pub values: Array2<F>,
    /// The max-absolute-cell divisor (0 for an all-zero matrix).
    pub scale: F,
    /// Sum of the unnormalized cells: mutual information for [`ResidualKind::Mi`],
    /// `T - AB/M` for [`ResidualKind::Ari`].
    pub cell_sum: F,
}

/// Builds the per-cell contribution map of `kind`, highlighting which cluster
/// intersections drive the aggregate measure.
pub fn residual_matrix<F: Real>(t: &ContingencyTable, kind: ResidualKind) -> Result<ResidualMatrix<F>> {
    let mut values = match kind {
        ResidualKind::Mi => {
            let j = JointDistribution::<F>::from_table(t);
            let (row, col) = (j.row_marginal(), j.col_marginal());
            let mut m = Array2::zeros((t.n_rows(), t.n_cols()));
            for ((i, jx), &p) in j.p().indexed_iter() {
                if p > F::zero() {
                    m[[i, jx]] = p * (p / (row[i] * col[jx])).ln();
                }
            }
            m
        }
        ResidualKind::Ari => {
            let pc = pair_counts(t)?;
            let m_pairs = pc.m_pairs as i128;
            let binom2 = |x: u64| -> i128 {
                let x = x as i128;
                x * (x - 1) / 2
            };
            let mut m = Array2::zeros((t.n_rows(), t.n_cols()));
            for ((i, jx), &n) in t.counts().indexed_iter() {
                // Exact integer numerator over M, one rounding per cell.
                let num = binom2(n) * m_pairs
                    - binom2(t.row_sums()[i]) * binom2(t.col_sums()[jx]);
                m[[i, jx]] = int_ratio::<F>(num, m_pairs);
            }
            m
        }
    };
    let cell_sum = values.iter().copied().sum();
    let scale = values
        .iter()
        .fold(F::zero(), |acc, &x| acc.max(x.abs()));
    if scale > F::zero() {
        values.mapv_inplace(|x| x / scale);
    }
    Ok(ResidualMatrix {
        values,
        scale,
        cell_sum,
    })
}
