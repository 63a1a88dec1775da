//! Partition file parsing and writing.
//!
//! Two text formats, both UTF-8 with one record per line:
//!
//! * two-column: `element_id<TAB>cluster_label`, `#` comment lines and blank
//!   lines ignored;
//! * dense: one bare cluster label per line, element ids implied as 0-based
//!   line numbers, so nothing may be skipped (no comments, no interior
//!   blanks; trailing blank lines are tolerated).
//!
//! Auto-detection inspects the first non-blank line: a tab or a leading `#`
//! means two-column, anything else dense.

use std::path::Path;

use crate::error::{Error, Result};
use crate::partition::Clustering;

/// Partition file layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PartitionFormat {
    #[default]
    Auto,
    TwoColumn,
    Dense,
}

impl PartitionFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            PartitionFormat::Auto => "auto",
            PartitionFormat::TwoColumn => "two-column",
            PartitionFormat::Dense => "dense",
        }
    }
}

impl std::str::FromStr for PartitionFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(PartitionFormat::Auto),
            "two-column" => Ok(PartitionFormat::TwoColumn),
            "dense" => Ok(PartitionFormat::Dense),
            other => Err(Error::Usage(format!(
                "unknown partition format {other:?} (expected auto, two-column or dense)"
            ))),
        }
    }
}

fn detect(text: &str) -> PartitionFormat {
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        return if line.starts_with('#') || line.contains('\t') {
            PartitionFormat::TwoColumn
        } else {
            PartitionFormat::Dense
        };
    }
    // Empty input; either parser will reject it with EmptyInput.
    PartitionFormat::Dense
}

fn parse_two_column(text: &str) -> Result<Clustering> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.splitn(2, '\t');
        let id = fields.next().unwrap_or("").trim();
        let label = fields.next().unwrap_or("").trim();
        if id.is_empty() || label.is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected element_id<TAB>cluster_label, got {line:?}"),
            });
        }
        pairs.push((id.to_string(), label.to_string()));
    }
    Clustering::from_assignments(pairs)
}

fn parse_dense(text: &str) -> Result<Clustering> {
    let mut labels = Vec::new();
    let mut blank_run = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            blank_run += 1;
            continue;
        }
        // Line numbers are element ids here, so skipping anything would
        // silently shift every id after it.
        if blank_run > 0 {
            return Err(Error::Parse {
                line: idx + 1 - blank_run,
                message: "blank line inside dense partition data".into(),
            });
        }
        if line.starts_with('#') {
            return Err(Error::Parse {
                line: idx + 1,
                message: "comment lines are not allowed in the dense format \
                          (use the two-column format instead)"
                    .into(),
            });
        }
        labels.push(line.to_string());
    }
    Clustering::from_labels(labels)
}

/// Parses partition text in the given (or detected) format.
pub fn parse_partition_str(text: &str, format: PartitionFormat) -> Result<Clustering> {
    let format = match format {
        PartitionFormat::Auto => detect(text),
        other => other,
    };
    match format {
        PartitionFormat::TwoColumn => parse_two_column(text),
        PartitionFormat::Dense => parse_dense(text),
        PartitionFormat::Auto => unreachable!("auto resolved above"),
    }
}

/// Reads and parses a partition file, detecting the format.
pub fn parse_partition_file<P: AsRef<Path>>(path: P) -> Result<Clustering> {
    let text = std::fs::read_to_string(path)?;
    parse_partition_str(&text, PartitionFormat::Auto)
}

/// Writes a clustering in the two-column format, one element per line in
/// position order. Re-parsing the output reproduces the partition exactly.
pub fn write_partition_two_column(c: &Clustering) -> String {
    let mut out = String::new();
    for (pos, cluster) in c.membership().enumerate() {
        out.push_str(&c.element_id(pos));
        out.push('\t');
        out.push_str(&c.cluster_labels()[cluster]);
        out.push('\n');
    }
    out
}
