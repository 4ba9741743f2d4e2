//! JSON exchange formats for `f64` matrices, weights and instance manifests.
//!
//! A matrix is `{"dim": d, "entries": [[[re, im], ...], ...]}` with rows
//! outermost. Writers print every component with 17 significant digits so a
//! file read back reproduces the matrix bit for bit.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::random::Sampling;
use crate::solver::{InstanceRconds, ProblemInstance, ThreeLayerWeights};

/// File names `gen` writes and `solve` reads inside an instance directory.
pub const INSTANCE_FILES: [&str; 4] = ["x1.json", "x2.json", "y1.json", "y2.json"];
pub const MANIFEST_FILE: &str = "instance.json";

#[derive(Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    fn into_matrix(self) -> Result<Matrix<f64>> {
        if self.entries.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: self.entries.len(),
            });
        }
        let mut data = Vec::with_capacity(self.dim * self.dim);
        for row in self.entries {
            if row.len() != self.dim {
                return Err(Error::Dimension {
                    expected: self.dim,
                    found: row.len(),
                });
            }
            data.extend(row.into_iter().map(|[re, im]| Complex::new(re, im)));
        }
        Matrix::from_vec(self.dim, data)
    }
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes `m` in the shared matrix format, one row per line.
pub fn matrix_to_json(m: &Matrix<f64>) -> String {
    let n = m.dim();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cells: Vec<String> = m
                .row(i)
                .iter()
                .map(|z| format!("[{}, {}]", number(z.re), number(z.im)))
                .collect();
            format!("    [{}]", cells.join(", "))
        })
        .collect();
    format!(
        "{{\n  \"dim\": {n},\n  \"entries\": [\n{}\n  ]\n}}",
        rows.join(",\n")
    )
}

pub fn matrix_from_json(text: &str) -> Result<Matrix<f64>> {
    let parsed: MatrixJson =
        serde_json::from_str(text).map_err(|e| Error::InvalidMatrix(e.to_string()))?;
    parsed.into_matrix()
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    fs::write(path, body).map_err(|e| io_err(path, e))
}

pub fn read_matrix(path: &Path) -> Result<Matrix<f64>> {
    matrix_from_json(&read_text(path)?)
}

pub fn write_matrix(path: &Path, m: &Matrix<f64>) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix writer"));
    }
    write_text(path, &matrix_to_json(m))
}

/// Sidecar describing a generated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceManifest {
    pub dim: usize,
    pub seed: u64,
    pub sampling: Sampling,
    /// Samples drawn, the admitted one included.
    pub attempts: usize,
    pub admission: f64,
    pub admitted: bool,
    pub rconds: InstanceRconds,
}

/// Writes the four matrices and the manifest into `dir`, creating it if needed.
pub fn write_instance(
    dir: &Path,
    inst: &ProblemInstance<f64>,
    manifest: &InstanceManifest,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (name, m) in INSTANCE_FILES
        .iter()
        .zip([&inst.x1, &inst.x2, &inst.y1, &inst.y2])
    {
        write_matrix(&dir.join(name), m)?;
    }
    let text = serde_json::to_string_pretty(manifest).map_err(|e| io_err(dir, e))?;
    write_text(&dir.join(MANIFEST_FILE), &text)
}

/// Reads `x1.json`, `x2.json`, `y1.json`, `y2.json` from `dir`. The manifest is not required.
pub fn read_instance(dir: &Path) -> Result<ProblemInstance<f64>> {
    let [x1, x2, y1, y2] = INSTANCE_FILES.map(|name| read_matrix(&dir.join(name)));
    ProblemInstance::new(x1?, x2?, y1?, y2?)
}

#[derive(Serialize)]
struct WeightsOut<'a> {
    alpha: f64,
    branch_offset: i64,
    w1: &'a RawValue,
    w2: &'a RawValue,
    w3: &'a RawValue,
    z: &'a RawValue,
}

#[derive(Deserialize)]
struct WeightsIn {
    alpha: f64,
    #[serde(default)]
    branch_offset: i64,
    w1: MatrixJson,
    w2: MatrixJson,
    w3: MatrixJson,
    z: MatrixJson,
}

pub fn weights_to_json(w: &ThreeLayerWeights<f64>, branch_offset: i64) -> Result<String> {
    let raw = |m: &Matrix<f64>| {
        RawValue::from_string(matrix_to_json(m)).map_err(|e| Error::InvalidMatrix(e.to_string()))
    };
    let (w1, w2, w3, z) = (raw(&w.w1)?, raw(&w.w2)?, raw(&w.w3)?, raw(&w.z)?);
    let out = WeightsOut {
        alpha: w.alpha,
        branch_offset,
        w1: &w1,
        w2: &w2,
        w3: &w3,
        z: &z,
    };
    serde_json::to_string_pretty(&out).map_err(|e| Error::InvalidMatrix(e.to_string()))
}

/// Parses a weights file; returns the weights and the branch offset recorded with them.
pub fn weights_from_json(text: &str) -> Result<(ThreeLayerWeights<f64>, i64)> {
    let w: WeightsIn =
        serde_json::from_str(text).map_err(|e| Error::InvalidMatrix(e.to_string()))?;
    let weights = ThreeLayerWeights {
        w1: w.w1.into_matrix()?,
        w2: w.w2.into_matrix()?,
        w3: w.w3.into_matrix()?,
        alpha: w.alpha,
        z: w.z.into_matrix()?,
    };
    Ok((weights, w.branch_offset))
}
