//! Report assembly and stable JSON/CSV serialization.
//!
//! Output byte stability is part of the contract: JSON key order is fixed
//! (insertion-ordered maps), CSV columns are frozen, and every float is
//! rounded to 10 significant digits before serialization so fixtures
//! reproduce across platforms. The key layout is documented in
//! `docs/schema.md` and guarded by `schema_version`.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::experiment::ExperimentResult;
use crate::measures::{
    bootstrap_variance, compute_measure, BootstrapSummary, MeasureId, MeasureOptions,
};
use crate::partition::{contingency, Clustering, ContingencyTable, JointDistribution};
use crate::residual::{residuals, ri_decomposition, ResidualKind, ResidualMatrix, RiDecomposition};

/// Version of the JSON/CSV output layout.
pub const SCHEMA_VERSION: u32 = 1;

const TOOL_NAME: &str = "clucmp";

/// Rounds to 10 significant digits; zero and non-finite values pass through.
pub fn round_sig10(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.9e}").parse().unwrap()
}

/// 10-significant-digit decimal form, the shortest that round-trips.
pub fn fmt_sig10(v: f64) -> String {
    round_sig10(v).to_string()
}

/// Quotes a CSV field when it contains a delimiter, quote, or line break.
fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn tool_value() -> Value {
    json!({ "name": TOOL_NAME, "version": env!("CARGO_PKG_VERSION") })
}

/// One requested output of the compare command: a scalar measure or the
/// Rand-index decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareItem {
    Measure(MeasureId),
    RiDecomp,
}

impl CompareItem {
    pub fn as_str(self) -> &'static str {
        match self {
            CompareItem::Measure(id) => id.as_str(),
            CompareItem::RiDecomp => "ri_decomp",
        }
    }

    /// All scalar measures followed by the decomposition.
    pub fn all() -> Vec<CompareItem> {
        let mut items: Vec<CompareItem> =
            MeasureId::ALL.into_iter().map(CompareItem::Measure).collect();
        items.push(CompareItem::RiDecomp);
        items
    }
}

impl std::str::FromStr for CompareItem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "ri_decomp" {
            Ok(CompareItem::RiDecomp)
        } else {
            s.parse::<MeasureId>().map(CompareItem::Measure)
        }
    }
}

/// Compare-command configuration, echoed into the report.
#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub items: Vec<CompareItem>,
    pub measure_opts: MeasureOptions,
    /// Bootstrap replicate count; `None` disables the bootstrap.
    pub bootstrap: Option<usize>,
    pub seed: u64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            items: CompareItem::all(),
            measure_opts: MeasureOptions::default(),
            bootstrap: None,
            seed: 0,
        }
    }
}

/// One scalar measure's result: a value or a degenerate explanation, plus
/// optional bootstrap summary and flags.
#[derive(Debug, Clone)]
pub struct MeasureEntry {
    pub id: MeasureId,
    pub value: Option<f64>,
    /// Why the measure is undefined on this input, when it is.
    pub degenerate: Option<String>,
    pub bootstrap: Option<BootstrapSummary>,
    /// Why the bootstrap was abandoned (instability or degenerate resamples).
    pub bootstrap_error: Option<String>,
    /// Residual expansion outside its convergence region (chi2 only).
    pub convergence_warning: bool,
}

/// Everything the compare command reports: input summary, one entry per
/// requested measure, and the optional Rand-index decomposition.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub n: u64,
    pub k_a: usize,
    pub k_b: usize,
    pub sizes_a: Vec<usize>,
    pub sizes_b: Vec<usize>,
    pub entries: Vec<MeasureEntry>,
    pub ri_decomp: Option<RiDecomposition>,
    pub options: CompareOptions,
}

/// Computes every requested measure of `a` against `b`.
///
/// Degenerate measures are reported in-band (entry with a reason instead of
/// a value); only structural problems (element-set mismatch, parse-level
/// errors) abort.
pub fn compare_report(
    a: &Clustering,
    b: &Clustering,
    options: &CompareOptions,
) -> Result<MeasureReport> {
    let t = contingency(a, b)?;
    let wants_chi2 = options
        .items
        .contains(&CompareItem::Measure(MeasureId::Chi2));
    let outside_convergence = if wants_chi2 {
        residuals(&JointDistribution::<f64>::from_table(&t)).max_abs_epsilon >= 1.0
    } else {
        false
    };

    let mut entries = Vec::new();
    let mut ri_decomp = None;
    for &item in &options.items {
        let id = match item {
            CompareItem::RiDecomp => {
                ri_decomp = Some(ri_decomposition(&t)?);
                continue;
            }
            CompareItem::Measure(id) => id,
        };
        let mut entry = MeasureEntry {
            id,
            value: None,
            degenerate: None,
            bootstrap: None,
            bootstrap_error: None,
            convergence_warning: id == MeasureId::Chi2 && outside_convergence,
        };
        match compute_measure(&t, id, &options.measure_opts) {
            Ok(v) => entry.value = Some(v),
            Err(e) if e.is_degenerate() => entry.degenerate = Some(e.to_string()),
            Err(e) => return Err(e),
        }
        if let (Some(n_boot), Some(_)) = (options.bootstrap, entry.value) {
            match bootstrap_variance(a, b, id, n_boot, options.seed, &options.measure_opts) {
                Ok(s) => entry.bootstrap = Some(s),
                Err(e @ Error::BootstrapUnstable { .. }) => {
                    entry.bootstrap_error = Some(e.to_string())
                }
                Err(e) if e.is_degenerate() => entry.bootstrap_error = Some(e.to_string()),
                Err(e) => return Err(e),
            }
        }
        entries.push(entry);
    }

    Ok(MeasureReport {
        n: t.n(),
        k_a: a.n_clusters(),
        k_b: b.n_clusters(),
        sizes_a: a.cluster_sizes().to_vec(),
        sizes_b: b.cluster_sizes().to_vec(),
        entries,
        ri_decomp,
        options: options.clone(),
    })
}

fn options_value(o: &CompareOptions) -> Value {
    json!({
        "base": o.measure_opts.base.as_str(),
        "mode": o.measure_opts.mode.as_str(),
        "lambda": round_sig10(o.measure_opts.lambda),
        "bootstrap": o.bootstrap,
        "seed": o.seed,
    })
}

fn decomp_value(d: &RiDecomposition) -> Value {
    json!({
        "baseline": round_sig10(d.baseline),
        "linear": round_sig10(d.linear),
        "quadratic": round_sig10(d.quadratic),
        "total": round_sig10(d.total),
        "exact_ri": round_sig10(d.exact_ri),
        "pair_baseline": round_sig10(d.pair_baseline),
        "pair_residual": round_sig10(d.pair_residual),
    })
}

/// Compare report as pretty JSON, trailing newline included.
pub fn compare_json(r: &MeasureReport) -> String {
    let mut measures = Map::new();
    for e in &r.entries {
        let mut m = Map::new();
        m.insert("value".into(), e.value.map(round_sig10).into());
        if let Some(reason) = &e.degenerate {
            m.insert("degenerate".into(), reason.as_str().into());
        }
        if let Some(b) = &e.bootstrap {
            m.insert("bootstrap_mean".into(), round_sig10(b.mean).into());
            m.insert("bootstrap_se".into(), round_sig10(b.std_error).into());
            m.insert("bootstrap_n_effective".into(), b.n_effective.into());
            m.insert("bootstrap_n_skipped".into(), b.n_skipped.into());
        }
        if let Some(err) = &e.bootstrap_error {
            m.insert("bootstrap_error".into(), err.as_str().into());
        }
        if e.convergence_warning {
            m.insert("convergence_warning".into(), true.into());
        }
        measures.insert(e.id.as_str().into(), Value::Object(m));
    }

    let mut root = Map::new();
    root.insert("schema_version".into(), SCHEMA_VERSION.into());
    root.insert("tool".into(), tool_value());
    root.insert(
        "input".into(),
        json!({
            "n": r.n,
            "k_a": r.k_a,
            "k_b": r.k_b,
            "cluster_sizes_a": r.sizes_a,
            "cluster_sizes_b": r.sizes_b,
        }),
    );
    root.insert("options".into(), options_value(&r.options));
    root.insert("measures".into(), Value::Object(measures));
    if let Some(d) = &r.ri_decomp {
        root.insert("ri_decomp".into(), decomp_value(d));
    }
    to_json_string(Value::Object(root))
}

/// Compare report as CSV: `measure,value,bootstrap_mean,bootstrap_se,flag`.
/// The decomposition flattens to `ri_decomp_<part>` rows.
pub fn compare_csv(r: &MeasureReport) -> String {
    let mut out = String::from("measure,value,bootstrap_mean,bootstrap_se,flag\n");
    for e in &r.entries {
        let mut flags = Vec::new();
        if e.degenerate.is_some() {
            flags.push("degenerate");
        }
        if e.bootstrap_error.is_some() {
            flags.push("bootstrap_unstable");
        }
        if e.convergence_warning {
            flags.push("convergence_warning");
        }
        let (bm, bs) = match &e.bootstrap {
            Some(b) => (fmt_sig10(b.mean), fmt_sig10(b.std_error)),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.id.as_str(),
            e.value.map(fmt_sig10).unwrap_or_default(),
            bm,
            bs,
            flags.join(";"),
        ));
    }
    if let Some(d) = &r.ri_decomp {
        for (part, v) in [
            ("baseline", d.baseline),
            ("linear", d.linear),
            ("quadratic", d.quadratic),
            ("total", d.total),
            ("exact_ri", d.exact_ri),
            ("pair_baseline", d.pair_baseline),
            ("pair_residual", d.pair_residual),
        ] {
            out.push_str(&format!("ri_decomp_{part},{},,,\n", fmt_sig10(v)));
        }
    }
    out
}

/// Residual matrix as CSV with cluster labels; first column holds row labels.
pub fn residual_csv(t: &ContingencyTable, m: &ResidualMatrix) -> String {
    let mut out = String::from("cluster");
    for label in t.col_labels() {
        out.push(',');
        out.push_str(&csv_escape(label));
    }
    out.push('\n');
    for (i, label) in t.row_labels().iter().enumerate() {
        out.push_str(&csv_escape(label));
        for j in 0..t.n_cols() {
            out.push(',');
            out.push_str(&fmt_sig10(m.values[[i, j]]));
        }
        out.push('\n');
    }
    out
}

/// Residual matrix as JSON, including the normalization scale and the cell
/// sum the matrix satisfies before normalization.
pub fn residual_json(t: &ContingencyTable, m: &ResidualMatrix, kind: ResidualKind) -> String {
    let values: Vec<Vec<f64>> = (0..t.n_rows())
        .map(|i| (0..t.n_cols()).map(|j| round_sig10(m.values[[i, j]])).collect())
        .collect();
    let root = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": tool_value(),
        "kind": kind.as_str(),
        "row_labels": t.row_labels(),
        "col_labels": t.col_labels(),
        "values": values,
        "scale": round_sig10(m.scale),
        "cell_sum": round_sig10(m.cell_sum),
    });
    to_json_string(root)
}

/// Experiment curves as CSV: `scenario,measure,eps,mean,sem,n_trials`, rows
/// measure-major in grid order. `n_trials` counts the trials actually used.
pub fn experiment_csv(r: &ExperimentResult) -> String {
    let mut out = String::from("scenario,measure,eps,mean,sem,n_trials\n");
    for c in &r.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.config.scenario.as_str(),
            c.measure.as_str(),
            fmt_sig10(c.eps),
            fmt_sig10(c.mean),
            fmt_sig10(c.sem),
            c.n_used,
        ));
    }
    out
}

/// Experiment curves as JSON with the full configuration echo.
pub fn experiment_json(r: &ExperimentResult) -> String {
    let cfg = &r.config;
    let mut curves = Vec::new();
    for &m in &cfg.measures {
        let points: Vec<Value> = r
            .cells
            .iter()
            .filter(|c| c.measure == m)
            .map(|c| {
                json!({
                    "eps": round_sig10(c.eps),
                    "mean": round_sig10(c.mean),
                    "sem": round_sig10(c.sem),
                    "n_used": c.n_used,
                    "flagged": c.flagged,
                })
            })
            .collect();
        curves.push(json!({ "measure": m.as_str(), "points": points }));
    }
    let root = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": { "name": TOOL_NAME, "version": r.code_version },
        "config": {
            "scenario": cfg.scenario.as_str(),
            "n": cfg.n_elements,
            "eps_grid": cfg.eps_grid.iter().map(|&e| round_sig10(e)).collect::<Vec<_>>(),
            "trials": cfg.n_trials,
            "measures": cfg.measures.iter().map(|m| m.as_str()).collect::<Vec<_>>(),
            "seed": cfg.seed,
            "mode": cfg.options.mode.as_str(),
            "lambda": round_sig10(cfg.options.lambda),
            "base": cfg.options.base.as_str(),
        },
        "curves": curves,
    });
    to_json_string(root)
}

fn to_json_string(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("report values are serializable");
    s.push('\n');
    s
}
