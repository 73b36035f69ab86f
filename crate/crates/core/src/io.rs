//! JSON storage for tensors and vectors.
//!
//! Two tensor layouts are accepted:
//!
//! ```json
//! {"format": "dense", "order": 3, "dim": 2, "data": [1, 0, 0, 0, 0, 0, 0, 1]}
//! {"format": "coo", "order": 3, "dim": 2, "entries": [[1, 1, 1, 1.0], [2, 2, 2, 1.0]]}
//! ```
//!
//! Dense data is row-major over `(i1, ..., im)`. COO indices are 1-based and
//! each entry lists `order` indices followed by the value.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "snake_case", deny_unknown_fields)]
pub enum TensorFile {
    Dense {
        order: usize,
        dim: usize,
        data: Vec<f64>,
    },
    Coo {
        order: usize,
        dim: usize,
        entries: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorLayout {
    Dense,
    Coo,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn coo_index(entry: &[f64], order: usize, dim: usize) -> Result<Vec<usize>> {
    if entry.len() != order + 1 {
        return Err(Error::Format(format!(
            "COO entry {entry:?} has {} fields, expected {} indices and a value",
            entry.len(),
            order
        )));
    }
    entry[..order]
        .iter()
        .map(|&v| {
            if v.fract() != 0.0 || v < 1.0 || v > dim as f64 {
                Err(Error::Format(format!(
                    "COO index {v} is not an integer in 1..={dim}"
                )))
            } else {
                Ok(v as usize - 1)
            }
        })
        .collect()
}

impl TensorFile {
    pub fn into_tensor(self) -> Result<DenseTensor> {
        match self {
            TensorFile::Dense { order, dim, data } => {
                let expected = dim.checked_pow(order as u32);
                if expected != Some(data.len()) {
                    return Err(Error::Format(format!(
                        "dense data has {} entries, order {order} dim {dim} needs {}",
                        data.len(),
                        expected.map_or("too many".to_string(), |e| e.to_string())
                    )));
                }
                DenseTensor::new(order, dim, data)
            }
            TensorFile::Coo {
                order,
                dim,
                entries,
            } => {
                let mut t = DenseTensor::zeros(order, dim)?;
                let mut seen = HashSet::new();
                for entry in &entries {
                    let idx = coo_index(entry, order, dim)?;
                    if !seen.insert(idx.clone()) {
                        return Err(Error::DuplicateEntry(idx.iter().map(|i| i + 1).collect()));
                    }
                    let value = entry[order];
                    if !value.is_finite() {
                        return Err(Error::NonFinite(t.offset(&idx)));
                    }
                    t.set(&idx, value);
                }
                Ok(t)
            }
        }
    }

    pub fn from_tensor(t: &DenseTensor, layout: TensorLayout) -> Self {
        match layout {
            TensorLayout::Dense => TensorFile::Dense {
                order: t.order(),
                dim: t.dim(),
                data: t.as_slice().to_vec(),
            },
            TensorLayout::Coo => TensorFile::Coo {
                order: t.order(),
                dim: t.dim(),
                entries: t
                    .as_slice()
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(flat, &v)| {
                        let mut e: Vec<f64> = t
                            .multi_index(flat)
                            .into_iter()
                            .map(|i| (i + 1) as f64)
                            .collect();
                        e.push(v);
                        e
                    })
                    .collect(),
            },
        }
    }
}

pub fn parse_tensor(text: &str) -> Result<DenseTensor> {
    serde_json::from_str::<TensorFile>(text)
        .map_err(parse_error)?
        .into_tensor()
}

pub fn tensor_to_string(t: &DenseTensor, layout: TensorLayout) -> Result<String> {
    serde_json::to_string(&TensorFile::from_tensor(t, layout))
        .map_err(|e| Error::Format(e.to_string()))
}

pub fn load_tensor(path: impl AsRef<Path>) -> Result<DenseTensor> {
    parse_tensor(&fs::read_to_string(path)?)
}

pub fn store_tensor(path: impl AsRef<Path>, t: &DenseTensor, layout: TensorLayout) -> Result<()> {
    fs::write(path, tensor_to_string(t, layout)?)?;
    Ok(())
}

/// Parses a JSON array of finite numbers.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = serde_json::from_str(text).map_err(parse_error)?;
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(v)
}

pub fn load_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    parse_vector(&fs::read_to_string(path)?)
}

pub fn store_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    fs::write(
        path,
        serde_json::to_string(v).map_err(|e| Error::Format(e.to_string()))?,
    )?;
    Ok(())
}
