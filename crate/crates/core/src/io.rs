//! The JSON tile-file format.
//!
//! A tile file lists the nonzero coefficients of an arity-2 (domino) or
//! arity-4 (tile) tensor with 1-based indices:
//!
//! ```json
//! { "dim": 2, "arity": 4,
//!   "entries": [ { "idx": [2, 1, 1, 1], "re": 1.0, "im": 0.0 } ] }
//! ```
//!
//! Omitted entries are zero. Writing and re-reading a tensor reproduces its
//! coefficients bit for bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensor::{C64, Tensor, TensorError};

#[derive(Debug, Error)]
pub enum TileFileError {
    #[error("invalid tile file JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("tile files hold arity 2 (dominoes) or arity 4 (tiles), got {0}")]
    UnsupportedArity(usize),
    #[error("dimension must be at least 1")]
    ZeroDim,
    #[error("entry index {idx:?} has {got} positions, expected {arity}")]
    BadIndexLength { idx: Vec<usize>, got: usize, arity: usize },
    #[error("entry index {idx:?} out of range: indices are 1-based up to dim = {dim}")]
    IndexOutOfRange { idx: Vec<usize>, dim: usize },
    #[error("duplicate entry for index {0:?}")]
    DuplicateIndex(Vec<usize>),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TileEntry {
    pub idx: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TileFile {
    pub dim: usize,
    pub arity: usize,
    pub entries: Vec<TileEntry>,
}

impl TileFile {
    /// Capture a tensor's nonzero coefficients (1-based indices, flat order).
    pub fn from_tensor(t: &Tensor) -> TileFile {
        let mut entries = Vec::new();
        let mut idx = vec![0usize; t.arity()];
        let mut more = !t.is_empty();
        while more {
            let c = t.get(&idx);
            if c != C64::new(0.0, 0.0) {
                entries.push(TileEntry {
                    idx: idx.iter().map(|&i| i + 1).collect(),
                    re: c.re,
                    im: c.im,
                });
            }
            more = crate::tensor::increment(&mut idx, t.dim());
        }
        TileFile { dim: t.dim(), arity: t.arity(), entries }
    }

    pub fn to_tensor(&self) -> Result<Tensor, TileFileError> {
        if self.dim == 0 {
            return Err(TileFileError::ZeroDim);
        }
        if self.arity != 2 && self.arity != 4 {
            return Err(TileFileError::UnsupportedArity(self.arity));
        }
        let mut t = Tensor::zeros(self.dim, self.arity);
        let mut seen = std::collections::BTreeSet::new();
        for entry in &self.entries {
            if entry.idx.len() != self.arity {
                return Err(TileFileError::BadIndexLength {
                    idx: entry.idx.clone(),
                    got: entry.idx.len(),
                    arity: self.arity,
                });
            }
            if entry.idx.iter().any(|&i| i == 0 || i > self.dim) {
                return Err(TileFileError::IndexOutOfRange {
                    idx: entry.idx.clone(),
                    dim: self.dim,
                });
            }
            if !seen.insert(entry.idx.clone()) {
                return Err(TileFileError::DuplicateIndex(entry.idx.clone()));
            }
            let zero_based: Vec<usize> = entry.idx.iter().map(|&i| i - 1).collect();
            t.set(&zero_based, C64::new(entry.re, entry.im));
        }
        Ok(t)
    }

    pub fn from_json(s: &str) -> Result<TileFile, TileFileError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tile files serialize")
    }
}

/// Parse a tensor straight from tile-file JSON.
pub fn tensor_from_json(s: &str) -> Result<Tensor, TileFileError> {
    TileFile::from_json(s)?.to_tensor()
}

/// Serialize a tensor as tile-file JSON.
pub fn tensor_to_json(t: &Tensor) -> String {
    TileFile::from_tensor(t).to_json()
}
