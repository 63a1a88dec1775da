//! Clustering comparison measures on a shared contingency-table core.
//!
//! The crate exposes three families of similarity measures between two
//! clusterings of the same elements, all derived from one contingency table:
//!
//! * pair counting: Rand, adjusted Rand, Jaccard, Fowlkes-Mallows, and the
//!   2x2 pair table with its independence baseline ([`pair_counts`]);
//! * information theory: entropy, mutual information, variation of
//!   information, normalized MI ([`info`]), plus the residual expansion that
//!   connects MI to chi-square and the Rand index to its own residuals
//!   ([`residual`]);
//! * collision statistics: Renyi entropies, k-tuple agreement contrasts, and
//!   extrapolated mutual-information estimators ([`renyi`]).
//!
//! [`experiment`] generates the partition-exchange benchmarks used to compare
//! measure behavior, [`measures`] is the string-keyed registry the CLI and the
//! bootstrap use, and [`io`]/[`report`] handle partition files and stable
//! JSON/CSV output.
//!
//! Floating-point kernels are generic over [`Real`] (`f32` or `f64`); every
//! public type defaults its scalar parameter to `f64`, which is what the CLI
//! and the experiment layer use. Pair and tuple counts are kept in exact
//! integer arithmetic (`u128`, arbitrary width where binomials demand it) and
//! only leave it at the final division.

pub mod affinity;
pub mod error;
pub mod experiment;
pub mod info;
pub mod io;
pub mod measures;
pub mod pair_counts;
pub mod partition;
pub mod renyi;
pub mod report;
pub mod residual;

mod stream;

pub use affinity::{colocated_walk_probability, truncated_ppr, AffinityWalk};
pub use error::{Error, Result};
pub use experiment::{
    gen_exchange_pair, run_experiment, ExperimentCell, ExperimentConfig, ExperimentResult,
    Scenario,
};
pub use info::{entropy, mutual_information, normalized_mi, variation_of_information, LogBase};
pub use io::{
    parse_partition_file, parse_partition_str, write_partition_two_column, PartitionFormat,
};
pub use measures::{
    bootstrap_variance, compute_measure, normalize_by_self, normalized_measure, BootstrapSummary,
    MeasureId, MeasureOptions,
};
pub use pair_counts::{
    adjusted_rand, fowlkes_mallows, jaccard, pair_counts, pair_table, rand_index, tuple_counts,
    PairCounts, PairTable, TupleCounts,
};
pub use partition::{contingency, Clustering, ContingencyTable, JointDistribution};
pub use renyi::{
    collision_probability, mi_ktuple, renyi_contrast, renyi_entropy, CollisionEstimate,
    RenyiReport, SamplingMode,
};
pub use report::{
    compare_csv, compare_json, compare_report, experiment_csv, experiment_json, fmt_sig10,
    residual_csv, residual_json, round_sig10, CompareItem, CompareOptions, MeasureEntry,
    MeasureReport, SCHEMA_VERSION,
};
pub use residual::{
    chi_square_approx, mi_series, residual_matrix, residuals, ri_decomposition,
    vi_quadratic_approx, ResidualField, ResidualKind, ResidualMatrix, RiDecomposition,
    SeriesApproximation,
};

use num_traits::{Float, FromPrimitive};

/// Scalar type of the floating-point layer: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + std::iter::Sum + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + std::fmt::Debug
        + std::fmt::Display
        + std::iter::Sum
        + Send
        + Sync
        + 'static
{
}

/// Converts an exact integer ratio to `F` with a single rounding step.
pub(crate) fn int_ratio<F: Real>(num: i128, den: i128) -> F {
    debug_assert!(den != 0);
    F::from_i128(num).unwrap() / F::from_i128(den).unwrap()
}
