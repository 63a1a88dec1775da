//! Partition-exchange benchmarks.
//!
//! Each trial builds two clusterings at a controlled level of disagreement:
//! start from a reference partition with scenario-fixed cluster sizes, pick
//! `floor(eps * s)` elements uniformly from each of two involved clusters
//! (s is the smaller of the two), and swap their memberships. `eps = 0` is
//! perfect agreement and `eps = 0.5` is the maximal-disorder point for the
//! symmetric scenarios. Per-measure curves are trial means with standard
//! errors; measures that grow with entropy (MI and the k-tuple family) are
//! divided by the mean self-similarity of the pair so every curve starts
//! at 1.
//!
//! The balanced scenario uses two clusters of N/2; the unbalanced scenarios
//! use sizes [0.8N, 0.1N, 0.1N] and differ in which clusters exchange
//! elements: small_small swaps between the two small clusters, big_small
//! between the big cluster and one small one.

use ndarray::Array2;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{compute_measure, normalize_by_self, MeasureId, MeasureOptions};
use crate::partition::{contingency, Clustering, ContingencyTable};
use crate::stream::{substream_rng, DOMAIN_EXPERIMENT};

/// Perturbation scenario: which reference partition, and which two clusters
/// exchange elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Balanced,
    SmallSmall,
    BigSmall,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Balanced => "balanced",
            Scenario::SmallSmall => "small_small",
            Scenario::BigSmall => "big_small",
        }
    }

    /// Reference cluster sizes for `n` elements.
    pub fn cluster_sizes(self, n: usize) -> Result<Vec<usize>> {
        match self {
            Scenario::Balanced => {
                if n < 4 || !n.is_multiple_of(2) {
                    return Err(Error::InvalidConfig(format!(
                        "balanced scenario needs an even N of at least 4, got {n}"
                    )));
                }
                Ok(vec![n / 2, n / 2])
            }
            Scenario::SmallSmall | Scenario::BigSmall => {
                if n < 10 || !n.is_multiple_of(10) {
                    return Err(Error::InvalidConfig(format!(
                        "unbalanced scenarios use sizes [0.8N, 0.1N, 0.1N] and need N \
                         divisible by 10, got {n}"
                    )));
                }
                Ok(vec![n * 8 / 10, n / 10, n / 10])
            }
        }
    }

    /// Indices of the two clusters that exchange elements.
    fn involved(self) -> (usize, usize) {
        match self {
            Scenario::Balanced => (0, 1),
            Scenario::SmallSmall => (1, 2),
            Scenario::BigSmall => (0, 1),
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "balanced" => Ok(Scenario::Balanced),
            "small_small" => Ok(Scenario::SmallSmall),
            "big_small" => Ok(Scenario::BigSmall),
            other => Err(Error::Usage(format!(
                "unknown scenario {other:?} (expected balanced, small_small or big_small)"
            ))),
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Draws one reference/perturbed pair at exchange level `eps`.
///
/// `floor(eps * s)` elements from each involved cluster swap memberships,
/// with `s` the smaller involved cluster, so cluster sizes are preserved and
/// `eps = 0` returns an identical pair.
pub fn gen_exchange_pair<R: Rng>(
    scenario: Scenario,
    n: usize,
    eps: f64,
    rng: &mut R,
) -> Result<(Clustering, Clustering)> {
    if !(0.0..=0.5).contains(&eps) {
        return Err(Error::InvalidConfig(format!(
            "exchange level must lie in [0, 0.5], got {eps}"
        )));
    }
    let sizes = scenario.cluster_sizes(n)?;
    let mut membership = Vec::with_capacity(n);
    for (cluster, &size) in sizes.iter().enumerate() {
        membership.extend(std::iter::repeat_n(cluster, size));
    }

    let (x, y) = scenario.involved();
    let s = sizes[x].min(sizes[y]);
    // The nudge only absorbs representation error in eps * s (0.29 * 100
    // must floor to 29, not 28); it never crosses a true integer boundary
    // for grid-sized eps.
    let m = (eps * s as f64 + 1e-9).floor() as usize;
    debug_assert!(m <= s);

    let mut swapped = membership.clone();
    for (from, to) in [(x, y), (y, x)] {
        let offset: usize = sizes[..from].iter().sum();
        for i in rand::seq::index::sample(rng, sizes[from], m) {
            swapped[offset + i] = to;
        }
    }

    let a = Clustering::from_membership(&membership)?;
    let b = Clustering::from_membership(&swapped)?;
    Ok((a, b))
}

/// Full description of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n_elements: usize,
    /// Exchange levels, each in [0, 0.5].
    pub eps_grid: Vec<f64>,
    pub n_trials: usize,
    pub measures: Vec<MeasureId>,
    pub seed: u64,
    pub options: MeasureOptions,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.cluster_sizes(self.n_elements)?;
        if self.eps_grid.is_empty() {
            return Err(Error::InvalidConfig("empty exchange-level grid".into()));
        }
        for &eps in &self.eps_grid {
            if !(0.0..=0.5).contains(&eps) {
                return Err(Error::InvalidConfig(format!(
                    "exchange level must lie in [0, 0.5], got {eps}"
                )));
            }
        }
        if self.n_trials == 0 {
            return Err(Error::InvalidConfig("n_trials must be positive".into()));
        }
        if self.measures.is_empty() {
            return Err(Error::InvalidConfig("no measures selected".into()));
        }
        Ok(())
    }
}

/// One aggregated point of a measure curve.
#[derive(Debug, Clone, Copy)]
pub struct ExperimentCell {
    pub measure: MeasureId,
    pub eps: f64,
    /// Trial mean over the non-degenerate trials.
    pub mean: f64,
    /// Standard error of the mean, sample variance with the n-1 denominator.
    pub sem: f64,
    /// Trials that produced a value.
    pub n_used: usize,
    /// More than 10% of trials were degenerate for this cell.
    pub flagged: bool,
}

/// Aggregated measure curves plus the configuration that produced them.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub code_version: String,
    /// Measure-major, then eps ascending in grid order.
    pub cells: Vec<ExperimentCell>,
}

/// Runs the configured trials and aggregates per-measure curves.
///
/// Trial (eps_index, trial_index) draws from its own RNG stream keyed by the
/// config seed and those two indices, so results are bit-identical for a
/// fixed seed regardless of thread count. Degenerate trials are excluded
/// from their cell's mean; a cell missing more than 10% of its trials is
/// flagged.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let sizes = cfg.scenario.cluster_sizes(cfg.n_elements)?;

    // Self-similarity depends only on cluster sizes, which the exchange
    // preserves, so one diagonal table serves every trial of the run.
    let k = sizes.len();
    let mut diag = Array2::<u64>::zeros((k, k));
    for (i, &size) in sizes.iter().enumerate() {
        diag[[i, i]] = size as u64;
    }
    let self_table = ContingencyTable::from_counts(diag)?;
    let self_sim: Vec<f64> = cfg
        .measures
        .iter()
        .map(|&m| {
            if m.self_normalizes() {
                compute_measure(&self_table, m, &cfg.options)
            } else {
                Ok(0.0)
            }
        })
        .collect::<Result<_>>()?;

    let total = cfg.eps_grid.len() * cfg.n_trials;
    let per_trial: Vec<Vec<Option<f64>>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let eps_idx = idx / cfg.n_trials;
            let trial = idx % cfg.n_trials;
            let mut rng =
                substream_rng(cfg.seed, DOMAIN_EXPERIMENT, eps_idx as u64, trial as u64);
            let (a, b) =
                gen_exchange_pair(cfg.scenario, cfg.n_elements, cfg.eps_grid[eps_idx], &mut rng)?;
            let t = contingency(&a, &b)?;
            cfg.measures
                .iter()
                .zip(&self_sim)
                .map(|(&m, &s_self)| {
                    let raw = match compute_measure(&t, m, &cfg.options) {
                        Ok(v) => v,
                        Err(e) if e.is_degenerate() => return Ok(None),
                        Err(e) => return Err(e),
                    };
                    if !m.self_normalizes() {
                        return Ok(Some(raw));
                    }
                    match normalize_by_self(raw, s_self, s_self) {
                        Ok(v) => Ok(Some(v)),
                        Err(e) if e.is_degenerate() => Ok(None),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::with_capacity(cfg.measures.len() * cfg.eps_grid.len());
    for (mi, &measure) in cfg.measures.iter().enumerate() {
        for (ei, &eps) in cfg.eps_grid.iter().enumerate() {
            let values: Vec<f64> = (0..cfg.n_trials)
                .filter_map(|t| per_trial[ei * cfg.n_trials + t][mi])
                .collect();
            let n_used = values.len();
            let (mean, sem) = if n_used == 0 {
                (f64::NAN, f64::NAN)
            } else {
                let mean = values.iter().sum::<f64>() / n_used as f64;
                let sem = if n_used < 2 {
                    0.0
                } else {
                    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                        / (n_used - 1) as f64;
                    (var / n_used as f64).sqrt()
                };
                (mean, sem)
            };
            cells.push(ExperimentCell {
                measure,
                eps,
                mean,
                sem,
                n_used,
                flagged: (cfg.n_trials - n_used) * 10 > cfg.n_trials,
            });
        }
    }

    Ok(ExperimentResult {
        config: cfg.clone(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        cells,
    })
}
