//! One-dimensional tensorial dominoes.
//!
//! A tensorial domino is an arity-2 tensor read as a matrix `T` whose rows
//! are left colors and columns right colors. Powers of the matrix enumerate
//! admissible patterns: the `(a, b)` entry of `Tⁿ` is the count / probability
//! / amplitude of length-`n` patterns with boundary colors `(a, b)`, and
//! `tr(Tⁿ)` plays the same role for periodic patterns.
//!
//! A domino tiles the line iff no power of `T` vanishes, i.e. iff `T` is not
//! nilpotent. Nilpotency is decided exactly by the vanishing of the first
//! `dim` power traces, which means trace aperiodicity and failure to tile the
//! line coincide in one dimension.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::classify::{self, Classification};
use crate::tensor::{C64, Tensor, TensorError};

#[derive(Debug, Error)]
pub enum DominoError {
    #[error("a tensorial domino must have arity 2, got {0}")]
    NotArity2(usize),
    #[error("color {color} out of range for alphabet size {dim}")]
    ColorOutOfRange { color: usize, dim: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Arity-2 tensor viewed as a matrix over the color alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorialDomino {
    tensor: Tensor,
}

impl TensorialDomino {
    pub fn new(tensor: Tensor) -> Result<Self, DominoError> {
        if tensor.arity() != 2 {
            return Err(DominoError::NotArity2(tensor.arity()));
        }
        Ok(TensorialDomino { tensor })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, DominoError> {
        Ok(TensorialDomino { tensor: Tensor::from_rows(rows)? })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, DominoError> {
        Ok(TensorialDomino { tensor: Tensor::from_real_rows(rows)? })
    }

    pub fn identity(dim: usize) -> Self {
        TensorialDomino { tensor: Tensor::identity(dim) }
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor {
        self.tensor
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    /// Matrix entry `T[x, y]`, 0-based colors.
    pub fn get(&self, x: usize, y: usize) -> C64 {
        self.tensor.get(&[x, y])
    }

    pub fn classify(&self, eps: f64) -> Classification {
        classify::classify_tensor(&self.tensor, eps)
    }

    pub fn is_possibilistic(&self, eps: f64) -> bool {
        classify::is_possibilistic(&self.tensor, eps)
    }

    pub fn is_probabilistic(&self, eps: f64) -> bool {
        classify::is_probabilistic(&self.tensor, eps)
    }

    pub fn is_quantum(&self, eps: f64) -> bool {
        classify::is_quantum(&self.tensor, eps)
    }

    /// Color pairs with coefficient magnitude above `eps` (0-based).
    pub fn support(&self, eps: f64) -> BTreeSet<(usize, usize)> {
        let d = self.dim();
        let mut set = BTreeSet::new();
        for x in 0..d {
            for y in 0..d {
                if self.get(x, y).norm() > eps {
                    set.insert((x, y));
                }
            }
        }
        set
    }

    /// Matrix power by repeated squaring; `T⁰` is the identity.
    pub fn power(&self, n: u32) -> TensorialDomino {
        let mut result = Tensor::identity(self.dim());
        let mut base = self.tensor.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.matmul(&base).expect("same dim and arity 2");
            }
            n >>= 1;
            if n > 0 {
                base = base.matmul(&base).expect("same dim and arity 2");
            }
        }
        TensorialDomino { tensor: result }
    }

    /// Entry `(a, b)` of `Tⁿ`: the weight of length-`n` patterns with
    /// boundary colors `a` and `b`.
    pub fn boundary_amplitude(&self, n: u32, a: usize, b: usize) -> Result<C64, DominoError> {
        let d = self.dim();
        for color in [a, b] {
            if color >= d {
                return Err(DominoError::ColorOutOfRange { color, dim: d });
            }
        }
        Ok(self.power(n).get(a, b))
    }

    /// `tr(Tⁿ)`: the weight of periodic length-`n` patterns.
    pub fn periodic_amplitude(&self, n: u32) -> C64 {
        self.power(n).tensor.trace().expect("arity 2")
    }

    /// The finite witness list `tr(T¹), …, tr(T^dim)` together with the
    /// scale of each power (for relative zero tests).
    pub fn trace_sequence(&self) -> Vec<(C64, f64)> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d);
        let mut p = self.tensor.clone();
        for k in 1..=d {
            out.push((p.trace().expect("arity 2"), p.scale()));
            if k < d {
                p = p.matmul(&self.tensor).expect("same dim");
            }
        }
        out
    }

    /// A domino tiles the line iff every power of `T` is nonzero, i.e. iff
    /// `T` is not nilpotent. Decided exactly through the first `dim` power
    /// traces, not by bounded search.
    pub fn tiles_line(&self, eps: f64) -> bool {
        self.trace_sequence()
            .iter()
            .any(|(tr, scale)| tr.norm() > eps * scale.max(1.0))
    }

    /// Equivalent to `!tiles_line` by the trace characterization of
    /// nilpotency.
    pub fn trace_aperiodic(&self, eps: f64) -> bool {
        !self.tiles_line(eps)
    }

    /// Smallest `k` with `T^k ≈ 0`, when `T` is nilpotent.
    pub fn nilpotency_index(&self, eps: f64) -> Option<u32> {
        if self.tiles_line(eps) {
            return None;
        }
        let mut p = self.tensor.clone();
        for k in 1..=self.dim() as u32 {
            if p.is_zero(eps) {
                return Some(k);
            }
            p = p.matmul(&self.tensor).expect("same dim");
        }
        // the traces all vanish, so the dim-th power must be zero
        Some(self.dim() as u32)
    }

    /// For a trace-periodic domino, some `k ≥ n_min` with `tr(T^k) ≠ 0`
    /// (the smallest such `k` in the bounded search window); nothing when the
    /// domino is trace-aperiodic. Non-aperiodic dominoes admit arbitrarily
    /// large periodic patterns, and the window `n_min · dim · (dim + 1)`
    /// always contains one.
    pub fn find_large_periodic(&self, n_min: u32, eps: f64) -> Option<u32> {
        let n_min = n_min.max(1);
        if self.trace_aperiodic(eps) {
            return None;
        }
        let bound = n_min as u64 * self.dim() as u64 * (self.dim() as u64 + 1);
        let mut p = self.power(n_min).tensor;
        let mut k = n_min as u64;
        while k <= bound {
            let tr = p.trace().expect("arity 2");
            if tr.norm() > eps * p.scale().max(1.0) {
                return Some(k as u32);
            }
            p = p.matmul(&self.tensor).expect("same dim");
            k += 1;
        }
        None
    }

    /// Disjoint union of alphabets: the direct sum of the matrices.
    pub fn union(&self, other: &TensorialDomino) -> TensorialDomino {
        TensorialDomino {
            tensor: self.tensor.direct_sum(&other.tensor).expect("both arity 2"),
        }
    }

    /// Cartesian product of alphabets: the Kronecker product of the matrices.
    pub fn product(&self, other: &TensorialDomino) -> TensorialDomino {
        TensorialDomino {
            tensor: self.tensor.kron_per_index(&other.tensor).expect("both arity 2"),
        }
    }
}
