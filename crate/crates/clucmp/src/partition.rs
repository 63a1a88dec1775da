//! Clusterings, contingency tables, and joint distributions.
//!
//! Everything downstream (pair counts, information measures, collision
//! statistics) is a function of the contingency table of two clusterings over
//! the same element set, or of the joint distribution obtained by dividing it
//! by N. This module owns those three types and their validation.

use std::collections::HashMap;

use ndarray::{Array2, Axis};

use crate::error::{Error, Result};
use crate::Real;

/// A strict partition of a finite element set into non-empty clusters.
///
/// Elements are stored positionally; ids are either implicit (position `i`
/// is element `i`, the dense file format and all generated partitions) or a
/// set of named ids from a two-column file. Cluster indices follow first
/// appearance, and the original cluster labels are retained for output.
#[derive(Debug, Clone)]
pub struct Clustering {
    membership: Vec<u32>,
    cluster_labels: Vec<String>,
    cluster_sizes: Vec<usize>,
    ids: ElementIds,
}

#[derive(Debug, Clone)]
enum ElementIds {
    Implicit,
    Named {
        names: Vec<String>,
        index: HashMap<String, usize>,
    },
}

impl Clustering {
    /// Builds a clustering from `(element_id, cluster_label)` assignments.
    pub fn from_assignments<I, S, T>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: AsRef<str>,
    {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        let mut membership = Vec::new();
        let mut cluster_labels: Vec<String> = Vec::new();
        let mut by_label: HashMap<String, u32> = HashMap::new();

        for (id, label) in pairs {
            let id = id.into();
            if index.insert(id.clone(), names.len()).is_some() {
                return Err(Error::DuplicateElement(id));
            }
            let label = label.as_ref();
            let cluster = *by_label.entry(label.to_string()).or_insert_with(|| {
                cluster_labels.push(label.to_string());
                (cluster_labels.len() - 1) as u32
            });
            names.push(id);
            membership.push(cluster);
        }
        if membership.is_empty() {
            return Err(Error::EmptyInput("no element assignments".into()));
        }

        let mut cluster_sizes = vec![0usize; cluster_labels.len()];
        for &c in &membership {
            cluster_sizes[c as usize] += 1;
        }
        Ok(Clustering {
            membership,
            cluster_labels,
            cluster_sizes,
            ids: ElementIds::Named { names, index },
        })
    }

    /// Builds a clustering from one cluster label per element; element ids
    /// are the 0-based positions.
    pub fn from_labels<I, T>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut membership = Vec::new();
        let mut cluster_labels: Vec<String> = Vec::new();
        let mut by_label: HashMap<String, u32> = HashMap::new();
        for label in labels {
            let label = label.as_ref();
            let cluster = *by_label.entry(label.to_string()).or_insert_with(|| {
                cluster_labels.push(label.to_string());
                (cluster_labels.len() - 1) as u32
            });
            membership.push(cluster);
        }
        if membership.is_empty() {
            return Err(Error::EmptyInput("no cluster labels".into()));
        }
        let mut cluster_sizes = vec![0usize; cluster_labels.len()];
        for &c in &membership {
            cluster_sizes[c as usize] += 1;
        }
        Ok(Clustering {
            membership,
            cluster_labels,
            cluster_sizes,
            ids: ElementIds::Implicit,
        })
    }

    /// Builds a clustering from cluster indices `0..k`; every index up to the
    /// maximum must occur, so that generated partitions keep their intended
    /// cluster numbering regardless of which element appears first.
    pub fn from_membership(membership: &[usize]) -> Result<Self> {
        if membership.is_empty() {
            return Err(Error::EmptyInput("no membership entries".into()));
        }
        let k = membership.iter().copied().max().unwrap() + 1;
        let mut cluster_sizes = vec![0usize; k];
        for &c in membership {
            cluster_sizes[c] += 1;
        }
        if let Some(empty) = cluster_sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptyInput(format!("cluster index {empty} is empty")));
        }
        Ok(Clustering {
            membership: membership.iter().map(|&c| c as u32).collect(),
            cluster_labels: (0..k).map(|c| c.to_string()).collect(),
            cluster_sizes,
            ids: ElementIds::Implicit,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.membership.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.cluster_sizes.len()
    }

    pub fn cluster_sizes(&self) -> &[usize] {
        &self.cluster_sizes
    }

    pub fn cluster_labels(&self) -> &[String] {
        &self.cluster_labels
    }

    /// Cluster index of the element at `position`.
    pub fn cluster_of(&self, position: usize) -> usize {
        self.membership[position] as usize
    }

    pub fn membership(&self) -> impl Iterator<Item = usize> + '_ {
        self.membership.iter().map(|&c| c as usize)
    }

    /// Element id at `position` (the position itself when ids are implicit).
    pub fn element_id(&self, position: usize) -> String {
        match &self.ids {
            ElementIds::Implicit => position.to_string(),
            ElementIds::Named { names, .. } => names[position].clone(),
        }
    }

    /// Copy of this clustering with cluster indices renamed by `perm`
    /// (cluster `c` becomes `perm[c]`). The partition itself is unchanged,
    /// which makes this the natural probe for label-invariance tests.
    pub fn with_permuted_clusters(&self, perm: &[usize]) -> Result<Self> {
        let k = self.n_clusters();
        let mut seen = vec![false; k];
        if perm.len() != k {
            return Err(Error::InvalidConfig(format!(
                "permutation length {} does not match {k} clusters",
                perm.len()
            )));
        }
        for &p in perm {
            if p >= k || seen[p] {
                return Err(Error::InvalidConfig("not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut cluster_labels = vec![String::new(); k];
        let mut cluster_sizes = vec![0usize; k];
        for c in 0..k {
            cluster_labels[perm[c]] = self.cluster_labels[c].clone();
            cluster_sizes[perm[c]] = self.cluster_sizes[c];
        }
        Ok(Clustering {
            membership: self.membership.iter().map(|&c| perm[c as usize] as u32).collect(),
            cluster_labels,
            cluster_sizes,
            ids: self.ids.clone(),
        })
    }

    /// For each position in `self`, the position of the same element in
    /// `other`. Errors unless the two element-id sets coincide.
    pub(crate) fn align(&self, other: &Clustering) -> Result<Vec<usize>> {
        let n = self.n_elements();
        if n != other.n_elements() {
            return Err(Error::ElementSetMismatch(format!(
                "{} vs {} elements",
                n,
                other.n_elements()
            )));
        }
        match (&self.ids, &other.ids) {
            (ElementIds::Implicit, ElementIds::Implicit) => Ok((0..n).collect()),
            _ => {
                let mut map = Vec::with_capacity(n);
                for pos in 0..n {
                    let id = self.element_id(pos);
                    let at = match &other.ids {
                        ElementIds::Named { index, .. } => index.get(&id).copied(),
                        // Implicit ids are the decimal positions.
                        ElementIds::Implicit => id.parse::<usize>().ok().filter(|&p| p < n),
                    };
                    match at {
                        Some(p) => map.push(p),
                        None => {
                            return Err(Error::ElementSetMismatch(format!(
                                "element {id:?} missing from second clustering"
                            )))
                        }
                    }
                }
                Ok(map)
            }
        }
    }
}

/// Contingency table of two clusterings: `counts[[i, j]]` is the number of
/// elements in cluster `i` of the first and cluster `j` of the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Array2<u64>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    n: u64,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl ContingencyTable {
    /// Wraps a raw count matrix, synthesizing positional cluster labels.
    /// Zero rows and columns are allowed (they arise in bootstrap replicates
    /// where a cluster receives no draws).
    pub fn from_counts(counts: Array2<u64>) -> Result<Self> {
        let row_labels = (0..counts.nrows()).map(|i| i.to_string()).collect();
        let col_labels = (0..counts.ncols()).map(|j| j.to_string()).collect();
        Self::with_labels(counts, row_labels, col_labels)
    }

    fn with_labels(
        counts: Array2<u64>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self> {
        let row_sums: Vec<u64> = counts.sum_axis(Axis(1)).to_vec();
        let col_sums: Vec<u64> = counts.sum_axis(Axis(0)).to_vec();
        let n: u64 = row_sums.iter().sum();
        if n == 0 {
            return Err(Error::EmptyInput("contingency table has no elements".into()));
        }
        Ok(ContingencyTable {
            counts,
            row_sums,
            col_sums,
            n,
            row_labels,
            col_labels,
        })
    }

    pub fn counts(&self) -> &Array2<u64> {
        &self.counts
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn n_rows(&self) -> usize {
        self.counts.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.counts.ncols()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }
}

/// Builds the contingency table of `a` (rows) against `b` (columns).
pub fn contingency(a: &Clustering, b: &Clustering) -> Result<ContingencyTable> {
    let to_b = a.align(b)?;
    let mut counts = Array2::<u64>::zeros((a.n_clusters(), b.n_clusters()));
    for pos in 0..a.n_elements() {
        counts[[a.cluster_of(pos), b.cluster_of(to_b[pos])]] += 1;
    }
    ContingencyTable::with_labels(
        counts,
        a.cluster_labels().to_vec(),
        b.cluster_labels().to_vec(),
    )
}

/// Joint distribution `p[[i, j]] = n[[i, j]] / N` with its marginals.
#[derive(Debug, Clone)]
pub struct JointDistribution<F: Real = f64> {
    p: Array2<F>,
    row: Vec<F>,
    col: Vec<F>,
}

impl<F: Real> JointDistribution<F> {
    /// Normalizes a contingency table to a joint distribution.
    pub fn from_table(t: &ContingencyTable) -> Self {
        let n = F::from_u64(t.n()).unwrap();
        let p = t.counts().mapv(|c| F::from_u64(c).unwrap() / n);
        let row = t.row_sums().iter().map(|&c| F::from_u64(c).unwrap() / n).collect();
        let col = t.col_sums().iter().map(|&c| F::from_u64(c).unwrap() / n).collect();
        JointDistribution { p, row, col }
    }

    /// Wraps an explicit probability matrix. Entries must be non-negative and
    /// sum to 1 within 1e-9; marginals are derived by summation.
    pub fn from_probabilities(p: Array2<F>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyInput("empty probability matrix".into()));
        }
        if p.iter().any(|&x| x < F::zero()) {
            return Err(Error::NotADistribution("negative entry".into()));
        }
        let total: F = p.iter().copied().sum();
        let tol = F::from_f64(1e-9).unwrap();
        if (total - F::one()).abs() > tol {
            return Err(Error::NotADistribution(format!(
                "entries sum to {total}, not 1"
            )));
        }
        let row = p.sum_axis(Axis(1)).to_vec();
        let col = p.sum_axis(Axis(0)).to_vec();
        Ok(JointDistribution { p, row, col })
    }

    pub fn p(&self) -> &Array2<F> {
        &self.p
    }

    pub fn row_marginal(&self) -> &[F] {
        &self.row
    }

    pub fn col_marginal(&self) -> &[F] {
        &self.col
    }

    pub fn n_rows(&self) -> usize {
        self.p.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.p.ncols()
    }
}

/// Convenience alias for [`JointDistribution::from_table`].
pub fn joint_distribution<F: Real>(t: &ContingencyTable) -> JointDistribution<F> {
    JointDistribution::from_table(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn w_pair() -> (Clustering, Clustering) {
        // Fixture W: {{1,2,3},{4,5}} against {{1,2},{3,4,5}}.
        let a = Clustering::from_assignments([
            ("1", "x"),
            ("2", "x"),
            ("3", "x"),
            ("4", "y"),
            ("5", "y"),
        ])
        .unwrap();
        let b = Clustering::from_assignments([
            ("1", "u"),
            ("2", "u"),
            ("3", "v"),
            ("4", "v"),
            ("5", "v"),
        ])
        .unwrap();
        (a, b)
    }

    #[test]
    fn w_contingency() {
        let (a, b) = w_pair();
        let t = contingency(&a, &b).unwrap();
        assert_eq!(t.counts(), &array![[2, 1], [0, 2]]);
        assert_eq!(t.row_sums(), &[3, 2]);
        assert_eq!(t.col_sums(), &[2, 3]);
        assert_eq!(t.n(), 5);
        assert_eq!(t.row_labels(), &["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn named_alignment_ignores_order() {
        let (a, _) = w_pair();
        let b = Clustering::from_assignments([
            ("5", "v"),
            ("4", "v"),
            ("3", "v"),
            ("2", "u"),
            ("1", "u"),
        ])
        .unwrap();
        let t = contingency(&a, &b).unwrap();
        // Column order follows b's first-appearance labels: v before u.
        assert_eq!(t.counts(), &array![[1, 2], [2, 0]]);
    }

    #[test]
    fn duplicate_and_empty_are_rejected() {
        let dup = Clustering::from_assignments([("1", "x"), ("1", "y")]);
        assert!(matches!(dup, Err(Error::DuplicateElement(id)) if id == "1"));
        let empty = Clustering::from_labels(Vec::<String>::new());
        assert!(matches!(empty, Err(Error::EmptyInput(_))));
    }

    #[test]
    fn mismatched_element_sets_are_rejected() {
        let a = Clustering::from_assignments([("1", "x"), ("2", "y")]).unwrap();
        let b = Clustering::from_assignments([("1", "x"), ("3", "y")]).unwrap();
        assert!(matches!(contingency(&a, &b), Err(Error::ElementSetMismatch(_))));
    }

    #[test]
    fn implicit_and_named_align_by_decimal_id() {
        let a = Clustering::from_labels(["x", "x", "y"]).unwrap();
        let b = Clustering::from_assignments([("2", "q"), ("0", "p"), ("1", "p")]).unwrap();
        let t = contingency(&a, &b).unwrap();
        assert_eq!(t.n(), 3);
        // Elements 0 and 1 share cluster p; element 2 is q.
        assert_eq!(t.counts(), &array![[0, 2], [1, 0]]);
    }

    #[test]
    fn membership_round_trip() {
        let c = Clustering::from_membership(&[0, 0, 1, 2, 1]).unwrap();
        assert_eq!(c.cluster_sizes(), &[2, 2, 1]);
        assert!(Clustering::from_membership(&[0, 2]).is_err());
    }

    #[test]
    fn joint_from_probabilities_validates() {
        let bad = JointDistribution::<f64>::from_probabilities(array![[0.5, 0.4]]);
        assert!(matches!(bad, Err(Error::NotADistribution(_))));
        let ok = JointDistribution::<f64>::from_probabilities(array![[0.5, 0.5]]).unwrap();
        assert_eq!(ok.row_marginal(), &[1.0]);
        assert_eq!(ok.col_marginal(), &[0.5, 0.5]);
    }
}
