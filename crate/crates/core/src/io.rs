//! JSON input files: matrices, data, spaces, vectors and parameterized systems.

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::linalg::exact::{ExactMatrix, ExactMatrixJson, GaussRat};
use crate::linalg::{span_basis_shaped, ComplexMatrix, ComplexVector, MatrixJson, MatrixSpace};
use crate::richness::Datum;
use crate::scanner::ParamSystem;
use serde::Deserialize;
use serde_json::Value;
use std::path::Path;

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn is_exact_entry(v: &Value) -> bool {
    v.as_array().is_some_and(|a| a.len() == 2 && a.iter().all(Value::is_array))
}

/// Float matrix; exact `[[num,den],[num,den]]` entries are accepted and converted.
pub fn matrix_from_value(v: &Value) -> Result<ComplexMatrix> {
    let exact = v.get("entries").and_then(Value::as_array).is_some_and(|e| e.first().is_some_and(is_exact_entry));
    if exact {
        return Ok(exact_from_value(v)?.to_complex());
    }
    let m: MatrixJson = serde_json::from_value(v.clone())?;
    m.to_matrix()
}

/// Exact matrix. Float entries are accepted when they are integers.
pub fn exact_from_value(v: &Value) -> Result<ExactMatrix> {
    if let Ok(m) = serde_json::from_value::<ExactMatrixJson>(v.clone()) {
        return m.to_matrix();
    }
    let m: MatrixJson = serde_json::from_value(v.clone())?;
    let int = |x: f64| -> Result<i64> {
        if x.fract() == 0.0 && x.abs() < 9e15 {
            Ok(x as i64)
        } else {
            Err(Error::Exactness(format!("entry {} is not an integer; give [[num,den],[num,den]]", x)))
        }
    };
    if m.entries.len() != m.rows * m.cols || m.rows == 0 || m.cols == 0 {
        return Err(Error::Format("matrix has wrong entry count".into()));
    }
    let mut entries = Vec::with_capacity(m.entries.len());
    for e in &m.entries {
        entries.push(GaussRat::from_ints(int(e[0])?, int(e[1])?));
    }
    Ok(ExactMatrix { rows: m.rows, cols: m.cols, entries })
}

#[derive(Deserialize)]
struct DatumFile {
    #[serde(rename = "A")]
    a: Value,
    #[serde(rename = "B")]
    b: Vec<Value>,
}

pub fn load_datum(path: &Path, cfg: &ToleranceConfig) -> Result<Datum> {
    let f: DatumFile = serde_json::from_value(read_json(path)?)?;
    let a = matrix_from_value(&f.a)?;
    let b = f.b.iter().map(matrix_from_value).collect::<Result<Vec<_>>>()?;
    Datum::new(a, b, cfg)
}

pub fn load_exact_datum(path: &Path) -> Result<(ExactMatrix, Vec<ExactMatrix>)> {
    let f: DatumFile = serde_json::from_value(read_json(path)?)?;
    let a = exact_from_value(&f.a)?;
    let b = f.b.iter().map(exact_from_value).collect::<Result<Vec<_>>>()?;
    Ok((a, b))
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    matrix_from_value(&read_json(path)?)
}

/// `{"basis": [matrix, ...]}`, optionally with `"rows"`/`"cols"` for an empty basis.
#[derive(Deserialize)]
struct SpaceFile {
    rows: Option<usize>,
    cols: Option<usize>,
    basis: Vec<Value>,
}

fn space_shape(f: &SpaceFile, first: Option<(usize, usize)>) -> Result<(usize, usize)> {
    match (first, f.rows, f.cols) {
        (Some(s), _, _) => Ok(s),
        (None, Some(r), Some(c)) if r > 0 && c > 0 => Ok((r, c)),
        _ => Err(Error::Format("empty basis needs positive rows and cols".into())),
    }
}

pub fn load_space(path: &Path, cfg: &ToleranceConfig) -> Result<MatrixSpace> {
    let f: SpaceFile = serde_json::from_value(read_json(path)?)?;
    let mats = f.basis.iter().map(matrix_from_value).collect::<Result<Vec<_>>>()?;
    let (r, c) = space_shape(&f, mats.first().map(|m| m.shape()))?;
    span_basis_shaped(&mats, r, c, cfg)
}

pub fn load_exact_space(path: &Path) -> Result<Vec<ExactMatrix>> {
    let f: SpaceFile = serde_json::from_value(read_json(path)?)?;
    f.basis.iter().map(exact_from_value).collect()
}

/// `[[re,im], ...]` or `[x, ...]`.
pub fn load_vector(path: &Path) -> Result<ComplexVector> {
    let v = read_json(path)?;
    if let Ok(pairs) = serde_json::from_value::<Vec<[f64; 2]>>(v.clone()) {
        return Ok(crate::linalg::vector_from_json(&pairs));
    }
    let reals: Vec<f64> = serde_json::from_value(v)?;
    Ok(ComplexVector::from_iterator(reals.len(), reals.iter().map(|&x| crate::linalg::cr(x))))
}

pub fn load_system(path: &Path) -> Result<ParamSystem> {
    Ok(serde_json::from_value(read_json(path)?)?)
}

/// Matrix as `{"rows","cols","entries"}`.
pub fn matrix_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixJson::from_matrix(m)).unwrap_or(Value::Null)
}

pub fn vector_value(v: &ComplexVector) -> Value {
    serde_json::to_value(crate::linalg::vector_to_json(v)).unwrap_or(Value::Null)
}
