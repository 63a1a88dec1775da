//! Random-walk view of a strict partition.
//!
//! A clustering induces an element affinity W with `W_uv = 1` exactly when u
//! and v share a cluster (self included) and a row-stochastic transition
//! matrix `P = D^-1 W`. P is block diagonal and idempotent, so truncated
//! personalized-PageRank vectors collapse to a closed form, and the chance
//! that independent uniformly started walks end up co-located in one cluster
//! is exactly the with-replacement collision probability of the cluster-size
//! distribution. That identity is what ties the walk picture to the k-tuple
//! measures in [`crate::renyi`].

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::partition::Clustering;
use crate::Real;

/// Uniform within-cluster random walk with damping and a path-length cap.
///
/// The transition matrix is never stored; one step of P only needs per-cluster
/// sums, so products with it run in O(N).
#[derive(Debug, Clone)]
pub struct AffinityWalk<F: Real = f64> {
    membership: Vec<usize>,
    cluster_sizes: Vec<usize>,
    damping: F,
    max_length: u32,
}

impl<F: Real> AffinityWalk<F> {
    /// Walk on the partition `c` with restart damping in (0, 1) and at most
    /// `max_length` steps.
    pub fn new(c: &Clustering, damping: F, max_length: u32) -> Result<Self> {
        if !(damping > F::zero() && damping < F::one()) {
            return Err(Error::InvalidConfig(format!(
                "damping must lie strictly between 0 and 1, got {damping}"
            )));
        }
        Ok(AffinityWalk {
            membership: c.membership().collect(),
            cluster_sizes: c.cluster_sizes().to_vec(),
            damping,
            max_length,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.membership.len()
    }

    pub fn damping(&self) -> F {
        self.damping
    }

    pub fn max_length(&self) -> u32 {
        self.max_length
    }

    /// One application of P: `out_j` averages `v` over j's cluster. Every row
    /// of the uniform block matrix is that same average, which is what makes
    /// P idempotent.
    pub fn step(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.membership.len(), "vector length must be N");
        let mut sums = vec![F::zero(); self.cluster_sizes.len()];
        for (&cl, &x) in self.membership.iter().zip(v) {
            sums[cl] = sums[cl] + x;
        }
        self.membership
            .iter()
            .map(|&cl| sums[cl] / F::from_usize(self.cluster_sizes[cl]).unwrap())
            .collect()
    }

    /// Dense N x N transition matrix, for inspection and small-N checks.
    pub fn transition_matrix(&self) -> Array2<F> {
        let n = self.membership.len();
        Array2::from_shape_fn((n, n), |(u, v)| {
            if self.membership[u] == self.membership[v] {
                F::one() / F::from_usize(self.cluster_sizes[self.membership[u]]).unwrap()
            } else {
                F::zero()
            }
        })
    }
}

/// Truncated personalized PageRank started at `start`:
/// `(1 - a) * sum_{t=0..=k} a^t (e_u P^t)` with `a` the damping and `k` the
/// walk's length cap. Total mass is `1 - a^(k+1)` and no mass ever leaves the
/// start's cluster.
pub fn truncated_ppr<F: Real>(walk: &AffinityWalk<F>, start: usize) -> Vec<F> {
    assert!(start < walk.n_elements(), "start element out of range");
    let restart = F::one() - walk.damping;
    let mut visit = vec![F::zero(); walk.n_elements()];
    visit[start] = F::one();
    let mut out: Vec<F> = visit.iter().map(|&x| restart * x).collect();
    let mut weight = F::one();
    for _ in 1..=walk.max_length {
        visit = walk.step(&visit);
        weight = weight * walk.damping;
        for (o, &x) in out.iter_mut().zip(&visit) {
            *o = *o + restart * weight * x;
        }
    }
    out
}

/// Probability that `k` independent walks, each started at an independent
/// uniformly random element, all terminate inside one common cluster.
///
/// The uniform law is stationary for P, so a walk of any positive length
/// terminates in cluster i with mass `c_i / N` and the co-location chance is
/// `sum_i (c_i / N)^k`: the with-replacement k-tuple collision probability of
/// the cluster-size distribution.
pub fn colocated_walk_probability<F: Real>(c: &Clustering, k: u32) -> F {
    debug_assert!(k >= 2, "co-location needs at least two walks");
    let n = c.n_elements();
    let uniform = vec![F::one() / F::from_usize(n).unwrap(); n];
    let walk = AffinityWalk {
        membership: c.membership().collect(),
        cluster_sizes: c.cluster_sizes().to_vec(),
        damping: F::zero(),
        max_length: 1,
    };
    let terminal = walk.step(&uniform);
    let mut mass = vec![F::zero(); c.n_clusters()];
    for (pos, x) in terminal.into_iter().enumerate() {
        mass[c.cluster_of(pos)] = mass[c.cluster_of(pos)] + x;
    }
    mass.into_iter().map(|m| m.powi(k as i32)).sum()
}
