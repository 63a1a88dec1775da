//! Walk-based affinity checked against dense linear algebra.

mod common;

use common::*;
use ndarray::{Array1, Array2};

use clucmp::{collision_probability, colocated_walk_probability, contingency, truncated_ppr, AffinityWalk, Clustering, SamplingMode};

/// Dense oracle: build P row by row from the membership, then accumulate
/// (1 - a) * sum_{t=0..k} a^t * e_u P^t with explicit vector-matrix products.
fn dense_ppr(membership: &[usize], damping: f64, max_length: u32, start: usize) -> Vec<f64> {
    let n = membership.len();
    let mut sizes = vec![0usize; membership.iter().max().unwrap() + 1];
    for &c in membership {
        sizes[c] += 1;
    }
    let p = Array2::from_shape_fn((n, n), |(u, v)| {
        if membership[u] == membership[v] {
            1.0 / sizes[membership[u]] as f64
        } else {
            0.0
        }
    });
    let mut e = Array1::zeros(n);
    e[start] = 1.0;
    let mut acc = Array1::zeros(n);
    let mut weight = 1.0 - damping;
    for _ in 0..=max_length {
        acc = acc + &e * weight;
        e = e.dot(&p);
        weight *= damping;
    }
    acc.to_vec()
}

#[test]
fn ppr_matches_dense_matrix_powers() {
    let mut rng = rng(41);
    for _ in 0..25 {
        let n = 2 + rand::Rng::random_range(&mut rng, 0..30usize);
        let k = 1 + rand::Rng::random_range(&mut rng, 0..4usize).min(n - 1);
        let membership = random_membership(&mut rng, n, k);
        let c = Clustering::from_membership(&membership).unwrap();
        for damping in [0.15, 0.5, 0.85] {
            for max_length in [0u32, 1, 3, 7] {
                let walk = AffinityWalk::<f64>::new(&c, damping, max_length).unwrap();
                for start in [0, n / 2, n - 1] {
                    let got = truncated_ppr(&walk, start);
                    let want = dense_ppr(&membership, damping, max_length, start);
                    for (g, w) in got.iter().zip(&want) {
                        assert!((g - w).abs() < 1e-12, "n={n} a={damping} k={max_length}");
                    }
                }
            }
        }
    }
}

#[test]
fn ppr_mass_stays_inside_the_start_cluster() {
    let membership = [0usize, 0, 0, 1, 1, 2, 2, 2, 2];
    let c = Clustering::from_membership(&membership).unwrap();
    let walk = AffinityWalk::<f64>::new(&c, 0.7, 5).unwrap();
    for start in 0..membership.len() {
        let post = truncated_ppr(&walk, start);
        let inside: f64 = post
            .iter()
            .zip(&membership)
            .filter(|(_, &m)| m == membership[start])
            .map(|(p, _)| p)
            .sum();
        let total: f64 = post.iter().sum();
        assert!((inside - total).abs() < 1e-15);
        assert!((total - (1.0 - 0.7f64.powi(6))).abs() < 1e-12);
    }
}

#[test]
fn colocated_probability_bridges_to_collision_probability() {
    let mut rng = rng(42);
    for _ in 0..50 {
        let n = 5 + rand::Rng::random_range(&mut rng, 0..60usize);
        let kc = 1 + rand::Rng::random_range(&mut rng, 0..5usize).min(n - 1);
        let membership = random_membership(&mut rng, n, kc);
        let c = Clustering::from_membership(&membership).unwrap();
        let t = contingency(&c, &c).unwrap();
        for k in 2..=4u32 {
            let via_walk: f64 = colocated_walk_probability(&c, k);
            let via_counts = collision_probability::<f64>(&t, k, SamplingMode::WithReplacement, 0.0)
                .unwrap()
                .c_a;
            assert!(
                (via_walk - via_counts).abs() <= 1e-12,
                "n={n} k={k}: {via_walk} vs {via_counts}"
            );
        }
    }
}
