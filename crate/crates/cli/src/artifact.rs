//! Vector files, CSV helpers and atomic writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use latticeforge_core::{ConstructionResult, GeneratingVector, LatticeConfig};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub alpha: f64,
    pub weights: String,
    pub error: f64,
    pub method: String,
}

/// A constructed generating vector with its provenance. `wall_time` is the
/// only field that differs between identical runs and is written last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFile {
    pub schema_version: u32,
    pub m: u32,
    pub n: u64,
    pub d: usize,
    pub d_star: usize,
    pub w: Vec<u32>,
    pub reduced: Vec<u64>,
    pub full: Vec<u64>,
    pub weights: String,
    pub reduction: String,
    pub method: String,
    pub op_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
    pub wall_time: f64,
}

impl VectorFile {
    pub fn from_result(r: &ConstructionResult, weights: String, reduction: String) -> Self {
        let v = &r.vector;
        let m = v.m();
        Self {
            schema_version: SCHEMA_VERSION,
            m,
            n: v.n(),
            d: v.d(),
            d_star: v.reduction_indices().iter().take_while(|&&w| w < m).count(),
            w: v.reduction_indices().to_vec(),
            reduced: v.reduced().to_vec(),
            full: v.full().to_vec(),
            weights,
            reduction,
            method: r.method.to_string(),
            op_count: r.op_count,
            evaluation: None,
            wall_time: r.wall_time,
        }
    }

    /// Rebuilds the vector, checking the stored fields against each other.
    pub fn vector(&self) -> Result<GeneratingVector> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Validation(format!("unsupported schema version {}", self.schema_version)));
        }
        let cfg = LatticeConfig::new(self.m, self.d)?;
        let v = GeneratingVector::new(cfg, self.w.clone(), self.reduced.clone())?;
        if v.n() != self.n || v.full() != self.full.as_slice() {
            return Err(CliError::Validation("vector file: n or full components do not match reduced form".into()));
        }
        Ok(v)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }
}

/// The part of a vector file that identical runs must reproduce byte for
/// byte: everything except the `wall_time` line.
pub fn deterministic_region(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"wall_time\"")).collect::<Vec<_>>().join("\n")
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::Usage(format!("'{}' is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0 && y.is_finite())) {
        return None;
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}
