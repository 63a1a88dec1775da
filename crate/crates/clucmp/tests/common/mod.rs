//! Oracles shared by the integration tests: brute-force enumerations and
//! direct-summation formulas kept deliberately independent of the library's
//! own computation paths, plus seeded random generators.

#![allow(dead_code)]

use itertools::Itertools;
use ndarray::Array2;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clucmp::{contingency, Clustering, ContingencyTable};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All set partitions of `n` elements as membership vectors, generated as
/// restricted growth strings (a[0] = 0, a[i] <= 1 + max of the prefix).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, max_used: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for value in 0..=max_used + 1 {
            prefix.push(value);
            extend(prefix, max_used.max(value), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut vec![0], 0, n, &mut out);
    out
}

/// Pair counts by direct O(N^2) enumeration: pairs co-clustered in A, in B,
/// in both, and all pairs.
pub fn brute_pair_counts(a: &[usize], b: &[usize]) -> (u128, u128, u128, u128) {
    let n = a.len();
    let (mut pa, mut pb, mut pt, mut m) = (0u128, 0u128, 0u128, 0u128);
    for i in 0..n {
        for j in i + 1..n {
            m += 1;
            let same_a = a[i] == a[j];
            let same_b = b[i] == b[j];
            pa += same_a as u128;
            pb += same_b as u128;
            pt += (same_a && same_b) as u128;
        }
    }
    (pa, pb, pt, m)
}

/// k-subset counts by enumerating every k-subset of elements: subsets
/// mono-cluster in A, in B, in both, and all subsets.
pub fn brute_tuple_counts(
    a: &[usize],
    b: &[usize],
    k: usize,
) -> (BigUint, BigUint, BigUint, BigUint) {
    let (mut ta, mut tb, mut tt, mut m) = (0u64, 0u64, 0u64, 0u64);
    for combo in (0..a.len()).combinations(k) {
        m += 1;
        let mono_a = combo.iter().all(|&i| a[i] == a[combo[0]]);
        let mono_b = combo.iter().all(|&i| b[i] == b[combo[0]]);
        ta += mono_a as u64;
        tb += mono_b as u64;
        tt += (mono_a && mono_b) as u64;
    }
    (ta.into(), tb.into(), tt.into(), m.into())
}

/// Relabels membership values to dense 0..k in first-appearance order.
pub fn dense_membership(raw: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    raw.iter()
        .map(|&v| {
            let next = map.len();
            *map.entry(v).or_insert(next)
        })
        .collect()
}

/// Random membership over exactly `k` nonempty clusters.
pub fn random_membership(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    assert!(n >= k && k >= 1);
    let mut m: Vec<usize> = (0..n)
        .map(|i| if i < k { i } else { rng.random_range(0..k) })
        .collect();
    // The first k entries pin every cluster nonempty; shuffle to unpin
    // positions.
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        m.swap(i, j);
    }
    m
}

/// Random contingency table with no empty rows or columns.
pub fn random_table(rng: &mut ChaCha8Rng, max_dim: usize, max_cell: u64) -> Array2<u64> {
    let rows = rng.random_range(2..=max_dim);
    let cols = rng.random_range(2..=max_dim);
    loop {
        let t = Array2::from_shape_fn((rows, cols), |_| rng.random_range(0..=max_cell));
        let rows_ok = t.rows().into_iter().all(|r| r.sum() > 0);
        let cols_ok = t.columns().into_iter().all(|c| c.sum() > 0);
        if rows_ok && cols_ok {
            return t;
        }
    }
}

/// Expands a contingency table into the clustering pair that produces it.
pub fn clusterings_from_table(counts: &Array2<u64>) -> (Clustering, Clustering) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for ((i, j), &c) in counts.indexed_iter() {
        for _ in 0..c {
            a.push(i);
            b.push(j);
        }
    }
    (
        Clustering::from_membership(&a).unwrap(),
        Clustering::from_membership(&b).unwrap(),
    )
}

pub fn table_of(a: &[usize], b: &[usize]) -> ContingencyTable {
    let ca = Clustering::from_membership(&dense_membership(a)).unwrap();
    let cb = Clustering::from_membership(&dense_membership(b)).unwrap();
    contingency(&ca, &cb).unwrap()
}

/// Shannon entropy of counts by direct summation, in nats.
pub fn oracle_entropy(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.ln()
        })
        .sum()
}

/// Mutual information of a counts table by direct summation, in nats.
pub fn oracle_mi(counts: &Array2<u64>) -> f64 {
    let n: u64 = counts.iter().sum();
    let rows: Vec<u64> = counts.rows().into_iter().map(|r| r.sum()).collect();
    let cols: Vec<u64> = counts.columns().into_iter().map(|c| c.sum()).collect();
    let mut mi = 0.0;
    for ((i, j), &c) in counts.indexed_iter() {
        if c == 0 {
            continue;
        }
        let p = c as f64 / n as f64;
        let e = (rows[i] as f64 / n as f64) * (cols[j] as f64 / n as f64);
        mi += p * (p / e).ln();
    }
    mi
}

/// Variation of information by direct summation, in nats.
pub fn oracle_vi(counts: &Array2<u64>) -> f64 {
    let rows: Vec<u64> = counts.rows().into_iter().map(|r| r.sum()).collect();
    let cols: Vec<u64> = counts.columns().into_iter().map(|c| c.sum()).collect();
    oracle_entropy(&rows) + oracle_entropy(&cols) - 2.0 * oracle_mi(counts)
}

/// With-replacement Renyi contrast J_alpha by direct power sums, in nats.
pub fn oracle_j_with(counts: &Array2<u64>, alpha: f64) -> f64 {
    let n: u64 = counts.iter().sum();
    let rows: Vec<u64> = counts.rows().into_iter().map(|r| r.sum()).collect();
    let cols: Vec<u64> = counts.columns().into_iter().map(|c| c.sum()).collect();
    let power = |parts: &[u64]| -> f64 {
        parts
            .iter()
            .map(|&c| (c as f64 / n as f64).powf(alpha))
            .sum()
    };
    let joint: Vec<u64> = counts.iter().copied().collect();
    let h = |s: f64| s.ln() / (1.0 - alpha);
    h(power(&rows)) + h(power(&cols)) - h(power(&joint))
}

/// Random joint distribution built as an independence product plus a
/// double-centered perturbation with max |delta/e| bounded by `max_eps`.
pub fn random_epsilon_table(rng: &mut ChaCha8Rng, max_eps: f64) -> Array2<f64> {
    let rows = rng.random_range(2..=4);
    let cols = rng.random_range(2..=4);
    let marginal = |rng: &mut ChaCha8Rng, k: usize| -> Vec<f64> {
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / s).collect()
    };
    let pr = marginal(rng, rows);
    let pc = marginal(rng, cols);

    // Double-center a random field so rows and columns of delta sum to zero,
    // then scale it until |delta/e| stays below max_eps.
    let noise = Array2::from_shape_fn((rows, cols), |_| rng.random_range(-1.0..1.0));
    let row_means: Vec<f64> = noise.rows().into_iter().map(|r| r.mean().unwrap()).collect();
    let col_means: Vec<f64> = noise
        .columns()
        .into_iter()
        .map(|c| c.mean().unwrap())
        .collect();
    let grand = noise.mean().unwrap();
    let mut delta = Array2::zeros((rows, cols));
    for ((i, j), d) in delta.indexed_iter_mut() {
        *d = noise[[i, j]] - row_means[i] - col_means[j] + grand;
    }
    let worst = delta
        .indexed_iter()
        .map(|((i, j), &d)| (d / (pr[i] * pc[j])).abs())
        .fold(0.0f64, f64::max);
    if worst > 0.0 {
        delta.mapv_inplace(|d| d * max_eps / worst * 0.999);
    }

    Array2::from_shape_fn((rows, cols), |(i, j)| pr[i] * pc[j] + delta[[i, j]])
}

/// Random confusion-style joint distribution near independence: a random
/// permuted-diagonal coupling blended with the product of its own marginals,
/// diluted so max |delta/e| lands in [max_eps/4, max_eps].
///
/// Unlike the mean-zero perturbations above, these have the signed
/// third-moment structure of tables of genuinely related clusterings (the
/// positive residual sits on the matching cells), so the odd terms of the
/// information series keep a definite sign instead of passing through zero.
pub fn random_associated_table(rng: &mut ChaCha8Rng, max_eps: f64) -> Array2<f64> {
    let k = rng.random_range(3..=5);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..1.5)).collect();
    let s: f64 = raw.iter().sum();
    let p: Vec<f64> = raw.into_iter().map(|x| x / s).collect();

    // Column j = perm[i] carries row i's mass in the coupling, so the column
    // marginal is the row marginal permuted.
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let mut q = vec![0.0; k];
    for (i, &j) in perm.iter().enumerate() {
        q[j] = p[i];
    }

    // Relative residual of the coupling: 1/p_i - 1 on matched cells (always
    // positive for k >= 3), -1 elsewhere.
    let worst = p
        .iter()
        .map(|&pi| 1.0 / pi - 1.0)
        .fold(1.0f64, f64::max);
    let target = max_eps * rng.random_range(0.25..1.0);
    let t = target / worst;
    Array2::from_shape_fn((k, k), |(i, j)| {
        let e = p[i] * q[j];
        let d = if perm[i] == j { p[i] } else { 0.0 };
        e + t * (d - e)
    })
}
