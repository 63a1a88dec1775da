//! String-keyed measure registry, self-similarity normalization, and the
//! element bootstrap.
//!
//! This is the layer the CLI and the experiment driver talk to: every scalar
//! measure gets an id, one options struct, and a uniform `f64` entry point.

use ndarray::Array2;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::info::{mutual_information, normalized_mi, variation_of_information, LogBase};
use crate::pair_counts::{adjusted_rand, fowlkes_mallows, jaccard, pair_counts, rand_index};
use crate::partition::{contingency, Clustering, ContingencyTable, JointDistribution};
use crate::renyi::{mi_ktuple, SamplingMode};
use crate::residual::chi_square_approx;
use crate::stream::{substream_rng, DOMAIN_BOOTSTRAP};

/// Scalar comparison measures addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureId {
    Ri,
    Ari,
    Jaccard,
    Fm,
    Mi,
    Vi,
    Nmi,
    Chi2,
    I2,
    I3,
    I4,
}

impl MeasureId {
    pub const ALL: [MeasureId; 11] = [
        MeasureId::Ri,
        MeasureId::Ari,
        MeasureId::Jaccard,
        MeasureId::Fm,
        MeasureId::Mi,
        MeasureId::Vi,
        MeasureId::Nmi,
        MeasureId::Chi2,
        MeasureId::I2,
        MeasureId::I3,
        MeasureId::I4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureId::Ri => "ri",
            MeasureId::Ari => "ari",
            MeasureId::Jaccard => "jaccard",
            MeasureId::Fm => "fm",
            MeasureId::Mi => "mi",
            MeasureId::Vi => "vi",
            MeasureId::Nmi => "nmi",
            MeasureId::Chi2 => "chi2",
            MeasureId::I2 => "i2",
            MeasureId::I3 => "i3",
            MeasureId::I4 => "i4",
        }
    }

    /// Measures expressed in log units, which the bits option rescales.
    pub fn is_log_scaled(self) -> bool {
        matches!(
            self,
            MeasureId::Mi | MeasureId::Vi | MeasureId::Chi2 | MeasureId::I2 | MeasureId::I3 | MeasureId::I4
        )
    }

    /// Measures whose experiment curves are divided by mean self-similarity.
    /// The rest either already land in [0, 1] against themselves (RI, ARI,
    /// NMI, Jaccard, FM score 1 on identical clusterings) or are left raw.
    pub fn self_normalizes(self) -> bool {
        matches!(self, MeasureId::Mi | MeasureId::I2 | MeasureId::I3 | MeasureId::I4)
    }
}

impl std::str::FromStr for MeasureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MeasureId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown measure {s:?}")))
    }
}

impl std::fmt::Display for MeasureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Options shared by every measure evaluation.
#[derive(Debug, Clone, Copy)]
pub struct MeasureOptions {
    /// Tuple sampling for the collision-based measures (i2, i3, i4).
    pub mode: SamplingMode,
    /// Additive smoothing for collision sums.
    pub lambda: f64,
    /// Output base for log-scaled measures.
    pub base: LogBase,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            mode: SamplingMode::WithReplacement,
            lambda: 0.0,
            base: LogBase::Natural,
        }
    }
}

/// Evaluates one measure on a contingency table.
pub fn compute_measure(t: &ContingencyTable, id: MeasureId, opts: &MeasureOptions) -> Result<f64> {
    let value = match id {
        MeasureId::Ri => rand_index(&pair_counts(t)?),
        MeasureId::Ari => adjusted_rand(&pair_counts(t)?)?,
        MeasureId::Jaccard => jaccard(&pair_counts(t)?)?,
        MeasureId::Fm => fowlkes_mallows(&pair_counts(t)?)?,
        MeasureId::Mi => mutual_information(&JointDistribution::from_table(t), opts.base),
        MeasureId::Vi => variation_of_information(&JointDistribution::from_table(t), opts.base),
        MeasureId::Nmi => normalized_mi(&JointDistribution::from_table(t))?,
        MeasureId::Chi2 => opts
            .base
            .from_nats(chi_square_approx(&JointDistribution::<f64>::from_table(t))),
        MeasureId::I2 => opts.base.from_nats(mi_ktuple(t, 2, opts.mode, opts.lambda)?),
        MeasureId::I3 => opts.base.from_nats(mi_ktuple(t, 3, opts.mode, opts.lambda)?),
        MeasureId::I4 => opts.base.from_nats(mi_ktuple(t, 4, opts.mode, opts.lambda)?),
    };
    Ok(value)
}

/// Normalizes a similarity by the mean of the two self-similarities,
/// `s_ab / ((s_aa + s_bb) / 2)`.
pub fn normalize_by_self(s_ab: f64, s_aa: f64, s_bb: f64) -> Result<f64> {
    let denom = (s_aa + s_bb) / 2.0;
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::DegenerateNormalization(format!(
            "mean self-similarity {denom} is not positive"
        )));
    }
    Ok(s_ab / denom)
}

/// Measure of `a` against `b`, self-normalized where the measure calls for it
/// ([`MeasureId::self_normalizes`]); identical clusterings then score 1.
pub fn normalized_measure(
    a: &Clustering,
    b: &Clustering,
    id: MeasureId,
    opts: &MeasureOptions,
) -> Result<f64> {
    let s_ab = compute_measure(&contingency(a, b)?, id, opts)?;
    if !id.self_normalizes() {
        return Ok(s_ab);
    }
    let s_aa = compute_measure(&contingency(a, a)?, id, opts)?;
    let s_bb = compute_measure(&contingency(b, b)?, id, opts)?;
    normalize_by_self(s_ab, s_aa, s_bb)
}

/// Bootstrap distribution summary of one measure.
#[derive(Debug, Clone, Copy)]
pub struct BootstrapSummary {
    pub mean: f64,
    /// Standard deviation of the replicate values with the n-1 denominator;
    /// the bootstrap estimate of the measure's standard error.
    pub std_error: f64,
    /// Replicates that produced a value.
    pub n_effective: usize,
    /// Replicates skipped because the measure was degenerate on the resample.
    pub n_skipped: usize,
}

/// Element bootstrap: resamples the N elements with replacement, rebuilds the
/// contingency table of both clusterings over each resample, and summarizes
/// the replicate distribution of `id`.
///
/// Replicate r draws from its own RNG stream keyed by `(seed, r)`, so results
/// are bit-identical for a given seed no matter how many threads run the
/// replicates. Degenerate replicates are skipped; more than half skipped is
/// reported as instability rather than a summary of the remainder.
pub fn bootstrap_variance(
    a: &Clustering,
    b: &Clustering,
    id: MeasureId,
    n_boot: usize,
    seed: u64,
    opts: &MeasureOptions,
) -> Result<BootstrapSummary> {
    if n_boot < 2 {
        return Err(Error::InvalidConfig(format!(
            "bootstrap needs at least 2 replicates, got {n_boot}"
        )));
    }
    let to_b = a.align(b)?;
    let n = a.n_elements();
    let (ka, kb) = (a.n_clusters(), b.n_clusters());
    let a_of: Vec<usize> = (0..n).map(|p| a.cluster_of(p)).collect();
    let b_of: Vec<usize> = (0..n).map(|p| b.cluster_of(to_b[p])).collect();

    let draws: Vec<Option<f64>> = (0..n_boot as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream_rng(seed, DOMAIN_BOOTSTRAP, rep, 0);
            let mut counts = Array2::<u64>::zeros((ka, kb));
            for _ in 0..n {
                let pos = rng.random_range(0..n);
                counts[[a_of[pos], b_of[pos]]] += 1;
            }
            let t = ContingencyTable::from_counts(counts)
                .expect("resampled table keeps all N elements");
            match compute_measure(&t, id, opts) {
                Ok(v) => Ok(Some(v)),
                Err(e) if e.is_degenerate() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let values: Vec<f64> = draws.iter().copied().flatten().collect();
    let n_skipped = n_boot - values.len();
    if n_skipped * 2 > n_boot || values.len() < 2 {
        return Err(Error::BootstrapUnstable {
            skipped: n_skipped,
            total: n_boot,
        });
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (values.len() - 1) as f64;
    Ok(BootstrapSummary {
        mean,
        std_error: var.sqrt(),
        n_effective: values.len(),
        n_skipped,
    })
}
