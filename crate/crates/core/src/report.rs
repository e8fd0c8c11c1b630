//! Serializable report documents. Exact integers are written as decimal
//! strings; complex numbers as `[re, im]` pairs; matrices row-major.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::canonical::{Canonical35, ReductionResult, TakagiForm};
use crate::polycert::{coeff_table, Certificate, DimsReport, SubspaceSpec, Verdict};
use crate::states::{EscapeResult, ObstructionResult};
use crate::{Error, FermionState, Result, UnitaryMatrix, C64};

/// Hex SHA-256 of a state's canonical file representation.
pub fn state_hash(psi: &FermionState) -> String {
    hex_digest(psi.to_json().as_bytes())
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn complex_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// Rows of `[re, im]` pairs.
pub fn matrix_rows(u: &UnitaryMatrix) -> Vec<Vec<[f64; 2]>> {
    let e = u.entries();
    (0..e.nrows()).map(|i| (0..e.ncols()).map(|j| complex_pair(e[(i, j)])).collect()).collect()
}

pub fn to_pretty_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("report serialization")
}

/// Excluded triples from text: either a JSON array of `[i, j, k]`, or one
/// triple per line with whitespace or commas between indices (`#` comments).
pub fn parse_excluded(m: usize, text: &str) -> Result<SubspaceSpec> {
    let trimmed = text.trim_start();
    let triples: Vec<[usize; 3]> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed)?
    } else {
        let mut out = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Format(format!("line {}: {e}", no + 1)))?;
            let t: [usize; 3] = nums.try_into().map_err(|_| Error::Format(format!("line {}: expected three indices", no + 1)))?;
            out.push(t);
        }
        out
    };
    SubspaceSpec::new(m, triples)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateReport {
    pub m: usize,
    pub excluded_count: usize,
    pub dim: usize,
    pub excluded: Vec<[usize; 3]>,
    pub multiplier: String,
    pub pairing: String,
    pub verdict: Verdict,
    pub multipliers_tried: usize,
    pub peak_terms: usize,
    pub eliminated_last_var: bool,
    pub elapsed_secs: f64,
}

impl From<&Certificate> for CertificateReport {
    fn from(c: &Certificate) -> Self {
        Self {
            m: c.spec.m(),
            excluded_count: c.spec.excluded().len(),
            dim: c.spec.dim(),
            excluded: c.spec.excluded().iter().copied().collect(),
            multiplier: c.multiplier.describe(),
            pairing: c.pairing.to_string(),
            verdict: c.verdict,
            multipliers_tried: c.multipliers_tried,
            peak_terms: c.peak_terms,
            eliminated_last_var: c.eliminated,
            elapsed_secs: c.elapsed_secs,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimsDocument {
    pub m: usize,
    pub n: usize,
    pub total: String,
    pub group: String,
    pub lower_bound: String,
    pub sov_bundle: String,
    pub sov_bundle_below_total: bool,
}

impl From<&DimsReport> for DimsDocument {
    fn from(d: &DimsReport) -> Self {
        Self {
            m: d.m,
            n: d.n,
            total: d.total.to_string(),
            group: d.group.to_string(),
            lower_bound: d.lower_bound.to_string(),
            sov_bundle: d.sov_bundle.to_string(),
            sov_bundle_below_total: d.sov_bundle_below_total,
        }
    }
}

/// Rows `M = 4 … max_m` of the coefficient table: `a_0 … a_{M−1}` for even
/// `M` (the last being the convention zero) and `a_0 … a_{M−2}` for odd `M`,
/// truncated to `columns` entries when given.
pub fn coeff_rows(max_m: usize, columns: Option<usize>) -> Result<Vec<(usize, Vec<BigInt>)>> {
    let mut rows = Vec::new();
    for m in 4..=max_m {
        let t = coeff_table(m)?;
        let len = if m % 2 == 0 { m } else { m - 1 };
        let len = columns.map_or(len, |c| len.min(c));
        rows.push((m, (0..len).map(|p| t.get(p)).collect()));
    }
    Ok(rows)
}

/// Plain-text table, one row per `M`, entries separated by single spaces.
pub fn coeff_table_text(max_m: usize, columns: Option<usize>) -> Result<String> {
    let rows = coeff_rows(max_m, columns)?;
    let width = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
    let mut out = String::from("M");
    for p in 0..width {
        out.push_str(&format!(" a_{p}"));
    }
    out.push('\n');
    for (m, vals) in rows {
        out.push_str(&m.to_string());
        for v in vals {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TakagiDocument {
    pub input_hash: String,
    pub m: usize,
    pub coeffs: Vec<f64>,
    pub transform: Vec<Vec<[f64; 2]>>,
}

impl TakagiDocument {
    pub fn new(psi: &FermionState, t: &TakagiForm) -> Self {
        Self { input_hash: state_hash(psi), m: psi.m(), coeffs: t.coeffs.clone(), transform: matrix_rows(&t.transform) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Canon5Document {
    pub input_hash: String,
    pub c1: f64,
    pub c2: f64,
    pub transform: Vec<Vec<[f64; 2]>>,
}

impl Canon5Document {
    pub fn new(psi: &FermionState, c: &Canonical35) -> Self {
        Self { input_hash: state_hash(psi), c1: c.c1, c2: c.c2, transform: matrix_rows(&c.transform) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionDocument {
    pub input_hash: String,
    pub m: usize,
    pub n: usize,
    pub target: String,
    pub residual: f64,
    pub relative_residual: f64,
    pub success: bool,
    pub restart: usize,
    pub restarts_run: usize,
    pub seed: u64,
    pub transform: Vec<Vec<[f64; 2]>>,
    /// Where the reduced state was written, if anywhere.
    pub reduced_file: Option<String>,
}

impl ReductionDocument {
    pub fn new(psi: &FermionState, r: &ReductionResult, target: &str, seed: u64, reduced_file: Option<String>) -> Self {
        Self {
            input_hash: state_hash(psi),
            m: psi.m(),
            n: psi.n(),
            target: target.into(),
            residual: r.residual,
            relative_residual: r.residual / psi.norm_sqr(),
            success: r.success,
            restart: r.restart,
            restarts_run: r.restarts_run,
            seed,
            transform: matrix_rows(&r.transform),
            reduced_file,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObstructionDocument {
    pub n: usize,
    pub m: usize,
    pub restarts: usize,
    pub seed: u64,
    pub min_value: f64,
    pub min_normalized: f64,
    pub restart_values: Vec<f64>,
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
    pub stabilizer_deviation: f64,
    pub contraction_identity: bool,
}

impl ObstructionDocument {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        m: usize,
        restarts: usize,
        seed: u64,
        r: &ObstructionResult,
        stabilizer_deviation: f64,
        contraction_identity: bool,
    ) -> Self {
        Self {
            n,
            m,
            restarts,
            seed,
            min_value: r.min_value,
            min_normalized: r.min_normalized,
            restart_values: r.restart_values.clone(),
            a: r.a.iter().map(|z| complex_pair(*z)).collect(),
            b: r.b.iter().map(|z| complex_pair(*z)).collect(),
            stabilizer_deviation,
            contraction_identity,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EscapeDocument {
    pub input_hash: String,
    pub m: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Configured threshold below which the state counts as reduced.
    pub threshold: f64,
    pub best_residual: f64,
    pub reached_threshold: bool,
    pub restart_values: Vec<f64>,
    pub mean_residual: f64,
    pub transform: Vec<Vec<[f64; 2]>>,
}

impl EscapeDocument {
    pub fn new(psi: &FermionState, restarts: usize, seed: u64, threshold: f64, r: &EscapeResult) -> Self {
        let n = r.restart_values.len().max(1) as f64;
        Self {
            input_hash: state_hash(psi),
            m: psi.m(),
            restarts,
            seed,
            threshold,
            best_residual: r.best_residual,
            reached_threshold: r.best_residual < threshold,
            restart_values: r.restart_values.clone(),
            mean_residual: r.restart_values.iter().sum::<f64>() / n,
            transform: matrix_rows(&r.transform),
        }
    }
}
