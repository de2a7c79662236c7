//! The JSON analysis report.
//!
//! Numbers are written in shortest round-trip form, so re-reading a report
//! gives back the exact same values. Nothing time-dependent is recorded:
//! identical inputs and flags produce byte-identical files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Tca,
    Ca,
    Dispersion,
    Tensor,
    Cluster,
    Seriate,
    Compare,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub method: Method,
    pub inputs: InputSummary,
    /// One record per extracted axis, in order; empty for methods without axes.
    pub axes: Vec<AxisRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Details>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub name: String,
    /// `[n, m]` for tables, `[n, m, t]` for three-way arrays, `[n]` for samples.
    pub shape: Vec<usize>,
    pub total: f64,
    #[serde(default)]
    pub row_labels: Vec<String>,
    #[serde(default)]
    pub col_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub dataset: String,
    /// SHA-256 of the input bytes, lowercase hex.
    pub sha256: String,
    /// Requested solver: `auto`, `exact` or `heuristic`.
    pub solver: String,
    pub tolerances: BTreeMap<String, f64>,
    pub tool_version: String,
}

impl Provenance {
    pub fn new(dataset: &str, bytes: &[u8], solver: &str) -> Self {
        Self {
            dataset: dataset.to_owned(),
            sha256: sha256_hex(bytes),
            solver: solver.to_owned(),
            tolerances: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    pub fn with_tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_owned(), value);
        self
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// A TCA or CA axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisRecord {
    /// 1-based.
    pub index: usize,
    /// δ for TCA, the singular value σ for CA.
    pub value: f64,
    /// Principal inertia σ² (CA only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia: Option<f64>,
    /// Whether δ is certified optimal (TCA only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    pub row_scores: Vec<f64>,
    pub col_scores: Vec<f64>,
    pub row_contributions: Vec<f64>,
    pub col_contributions: Vec<f64>,
    #[serde(default)]
    pub heavyweight_rows: Vec<usize>,
    #[serde(default)]
    pub heavyweight_cols: Vec<usize>,
    /// Row sign vector `v` (TCA only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_signs: Option<Vec<i8>>,
    /// Column sign vector `u` (TCA only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_signs: Option<Vec<i8>>,
    /// Seriation block sums `(S,T), (S,T̄), (S̄,T), (S̄,T̄)` (TCA only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_sums: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Details {
    Tca {
        rank_used: usize,
        remainder_l1: f64,
    },
    Ca {
        total_inertia: f64,
    },
    Dispersion(DispersionDetails),
    Seriation(SeriationDetails),
    Comparison(ComparisonDetails),
    Tensor(TensorDetails),
    Cluster(ClusterDetails),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionDetails {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub d: f64,
    pub s: f64,
    pub s2: f64,
    pub lad: f64,
    pub cut_norm: f64,
    pub rc_d: Vec<f64>,
    pub rc_s2: Vec<f64>,
    pub rc_lad: Vec<f64>,
    pub heavyweights: Vec<usize>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriationDetails {
    /// 1-based.
    pub axis: usize,
    pub delta: f64,
    pub cut_norm: f64,
    pub s_opt: Vec<String>,
    pub t_opt: Vec<String>,
    pub block_sums: [f64; 4],
    pub row_order: Vec<String>,
    pub col_order: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDetails {
    /// 1-based.
    pub axis: usize,
    pub rows: Vec<ContributionRecord>,
    pub cols: Vec<ContributionRecord>,
    pub max_ca: Option<PeakRecord>,
    pub max_tca: Option<PeakRecord>,
    pub same_sign_structure: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContributionRecord {
    pub label: String,
    pub ca: f64,
    pub tca: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakRecord {
    /// `row` or `column`.
    pub kind: String,
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDetails {
    pub delta: f64,
    pub exact: bool,
    pub u: Vec<i8>,
    pub v: Vec<i8>,
    pub w: Vec<i8>,
    /// Indexed by `4·[i∉S] + 2·[j∉T] + [k∉W]`.
    pub octant_sums: [f64; 8],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterDetails {
    pub r: usize,
    pub c: usize,
    pub p: f64,
    /// `exhaustive` or `local_search`.
    pub method: String,
    /// `multiplicative` or `additive`.
    pub residual: String,
    pub objective: f64,
    pub row_blocks: Vec<Vec<String>>,
    pub col_blocks: Vec<Vec<String>>,
}

pub fn to_json(report: &AnalysisReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<AnalysisReport> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_report(path: impl AsRef<Path>, report: &AnalysisReport) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_json(report)?).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_report(path: impl AsRef<Path>) -> Result<AnalysisReport> {
    from_json(&crate::csv_io::read(path.as_ref())?)
}
