//! Keeps the README library example compiling and its numbers honest.

use clucmp::{
    adjusted_rand, contingency, mutual_information, pair_counts, Clustering, JointDistribution,
    LogBase,
};

#[test]
fn readme_example_runs_as_printed() -> clucmp::Result<()> {
    let a = Clustering::from_labels(["x", "x", "x", "y", "y"])?;
    let b = Clustering::from_labels(["u", "u", "v", "v", "v"])?;
    let table = contingency(&a, &b)?;

    let pc = pair_counts(&table)?;
    let ari: f64 = adjusted_rand(&pc)?;

    let joint: JointDistribution = JointDistribution::from_table(&table);
    let mi = mutual_information(&joint, LogBase::Natural);

    assert_eq!(ari, 1.0 / 6.0);
    assert!((mi - 0.291103166).abs() < 1e-9);
    Ok(())
}
