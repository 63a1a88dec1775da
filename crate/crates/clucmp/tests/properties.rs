//! Structural invariants over randomized inputs.

mod common;

use common::*;
use ndarray::Array2;
use proptest::prelude::*;

use clucmp::{
    collision_probability, compute_measure, contingency, mi_ktuple, mutual_information,
    pair_counts, ri_decomposition, tuple_counts, Clustering, ContingencyTable, JointDistribution,
    LogBase, MeasureId, MeasureOptions, SamplingMode,
};

fn membership_pair() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (2usize..40).prop_flat_map(|n| {
        (
            prop::collection::vec(0usize..4, n),
            prop::collection::vec(0usize..4, n),
        )
    })
}

fn table_pair(raw: &(Vec<usize>, Vec<usize>)) -> ContingencyTable {
    table_of(&raw.0, &raw.1)
}

proptest! {
    /// Every measure ignores how clusters are numbered.
    #[test]
    fn measures_ignore_cluster_relabeling(raw in membership_pair()) {
        let a = Clustering::from_membership(&dense_membership(&raw.0)).unwrap();
        let b = Clustering::from_membership(&dense_membership(&raw.1)).unwrap();
        let perm: Vec<usize> = (0..b.n_clusters()).rev().collect();
        let t1 = contingency(&a, &b).unwrap();
        let t2 = contingency(&a, &b.with_permuted_clusters(&perm).unwrap()).unwrap();
        let opts = MeasureOptions::default();
        for id in MeasureId::ALL {
            match (compute_measure(&t1, id, &opts), compute_measure(&t2, id, &opts)) {
                (Ok(v1), Ok(v2)) => prop_assert!((v1 - v2).abs() < 1e-12, "{id}: {v1} vs {v2}"),
                (Err(e1), Err(e2)) => prop_assert!(e1.is_degenerate() && e2.is_degenerate()),
                (r1, r2) => prop_assert!(false, "{id}: asymmetric outcome {r1:?} vs {r2:?}"),
            }
        }
    }

    /// Symmetric measures are symmetric in their arguments.
    #[test]
    fn symmetric_measures_commute(raw in membership_pair()) {
        let a = Clustering::from_membership(&dense_membership(&raw.0)).unwrap();
        let b = Clustering::from_membership(&dense_membership(&raw.1)).unwrap();
        let ab = contingency(&a, &b).unwrap();
        let ba = contingency(&b, &a).unwrap();
        let opts = MeasureOptions::default();
        for id in MeasureId::ALL {
            if let (Ok(v1), Ok(v2)) = (compute_measure(&ab, id, &opts), compute_measure(&ba, id, &opts)) {
                prop_assert!((v1 - v2).abs() < 1e-12, "{id}: {v1} vs {v2}");
            }
        }
    }

    /// Pair counts are the k = 2 case of tuple counts.
    #[test]
    fn tuple_counts_specialize_to_pairs(raw in membership_pair()) {
        let t = table_pair(&raw);
        let pc = pair_counts(&t).unwrap();
        let tc = tuple_counts(&t, 2).unwrap();
        prop_assert_eq!(tc.a_tuples, num_bigint::BigUint::from(pc.a_pairs));
        prop_assert_eq!(tc.b_tuples, num_bigint::BigUint::from(pc.b_pairs));
        prop_assert_eq!(tc.t_tuples, num_bigint::BigUint::from(pc.t_pairs));
        prop_assert_eq!(tc.m_tuples, num_bigint::BigUint::from(pc.m_pairs));
    }

    /// Bounds: RI, Jaccard, FM in [0, 1]; MI <= min entropy; joint collision
    /// never exceeds either marginal collision.
    #[test]
    fn measure_bounds_hold(raw in membership_pair()) {
        let t = table_pair(&raw);
        let pc = pair_counts(&t).unwrap();
        let ri: f64 = clucmp::rand_index(&pc);
        prop_assert!((0.0..=1.0).contains(&ri));
        if let Ok(j) = clucmp::jaccard::<f64>(&pc) {
            prop_assert!((0.0..=1.0).contains(&j));
        }
        if let Ok(f) = clucmp::fowlkes_mallows::<f64>(&pc) {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
        }
        let j = JointDistribution::<f64>::from_table(&t);
        let mi = mutual_information(&j, LogBase::Natural);
        let ha = oracle_entropy(t.row_sums());
        let hb = oracle_entropy(t.col_sums());
        prop_assert!(mi >= -1e-12);
        prop_assert!(mi <= ha.min(hb) + 1e-12);
        for mode in [SamplingMode::WithReplacement, SamplingMode::WithoutReplacement] {
            let est = collision_probability::<f64>(&t, 2, mode, 0.0).unwrap();
            prop_assert!(est.c_joint <= est.c_a.min(est.c_b) + 1e-15);
        }
    }

    /// The three-term decomposition always reassembles its own total, and the
    /// exact pair split always reassembles exact RI.
    #[test]
    fn ri_decomposition_reassembles(raw in membership_pair()) {
        let t = table_pair(&raw);
        let d = ri_decomposition::<f64>(&t).unwrap();
        prop_assert!((d.baseline + d.linear + d.quadratic - d.total).abs() < 1e-12);
        prop_assert!((d.pair_baseline + d.pair_residual - d.exact_ri).abs() < 1e-12);
        let ri: f64 = clucmp::rand_index(&pair_counts(&t).unwrap());
        prop_assert!((d.exact_ri - ri).abs() < 1e-15);
    }

    /// I^(2) is exactly J_2; higher extrapolations stay finite and zero out
    /// on single-cluster tables.
    #[test]
    fn ktuple_extrapolation_is_consistent(raw in membership_pair()) {
        let t = table_pair(&raw);
        let j2 = clucmp::renyi_contrast(&t, 2.0, SamplingMode::WithReplacement, 0.0)
            .unwrap()
            .j_alpha;
        let i2: f64 = mi_ktuple(&t, 2, SamplingMode::WithReplacement, 0.0).unwrap();
        prop_assert!((i2 - j2).abs() < 1e-14);
        for k in [3, 4] {
            let ik: f64 = mi_ktuple(&t, k, SamplingMode::WithReplacement, 0.0).unwrap();
            prop_assert!(ik.is_finite());
        }
    }
}

/// The fixed-marginals identity behind the without-replacement estimator,
/// checked exactly: summed over all N! relabelings, T_k * C(N,k) equals
/// A_k * B_k * N!.
#[test]
fn without_replacement_null_is_exactly_centered() {
    use itertools::Itertools;
    use num_bigint::BigUint;

    let a = [0usize, 0, 0, 1, 1, 2];
    let b = [0usize, 1, 1, 2, 2, 2];
    let n = a.len();
    for k in 2..=3u32 {
        let base = tuple_counts(&table_of(&a, &b), k).unwrap();
        let mut sum_t = BigUint::from(0u32);
        let mut count = BigUint::from(0u32);
        for perm in (0..n).permutations(n) {
            let b_perm: Vec<usize> = perm.iter().map(|&p| b[p]).collect();
            let tc = tuple_counts(&table_of(&a, &b_perm), k).unwrap();
            sum_t += tc.t_tuples;
            count += BigUint::from(1u32);
        }
        // E[T_k] = A_k B_k / C(N,k) under the uniform relabeling null.
        assert_eq!(
            sum_t * base.m_tuples,
            base.a_tuples * base.b_tuples * count
        );
    }
}

/// Contingency tables with empty rows or columns (as the bootstrap produces)
/// still yield well-defined measures.
#[test]
fn zero_rows_and_columns_are_tolerated() {
    let mut counts = Array2::<u64>::zeros((3, 3));
    counts[[0, 0]] = 4;
    counts[[0, 2]] = 1;
    counts[[2, 2]] = 3;
    let t = ContingencyTable::from_counts(counts).unwrap();
    let opts = MeasureOptions::default();
    for id in MeasureId::ALL {
        match compute_measure(&t, id, &opts) {
            Ok(v) => assert!(v.is_finite(), "{id} produced {v}"),
            Err(e) => assert!(e.is_degenerate(), "{id} failed structurally: {e}"),
        }
    }
}
