//! Dense complex tensors with a uniform index dimension.
//!
//! A [`Tensor`] of dimension `d` and arity `n` stores its `d^n` coefficients
//! in row-major order (first index slowest). All index positions in this API
//! are 0-based; the JSON tile format is the only place where 1-based indices
//! appear.
//!
//! Every tensor carries a `scale`: the largest coefficient magnitude observed
//! while producing it. Zero tests are relative to that scale, so a tensor
//! whose coefficients cancelled down from magnitude ~1 is still recognized as
//! zero at the default tolerance even though the cancellation left rounding
//! dust behind.

use num_complex::Complex64;
use thiserror::Error;

/// Shorthand used throughout the crate.
pub type C64 = Complex64;

/// Default tolerance for zero tests, relative to the recorded scale.
pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("index dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("dimension must be at least 1")]
    ZeroDim,
    #[error("coefficient count {got} does not match dim^arity = {want}")]
    BadCoeffCount { got: usize, want: usize },
    #[error("invalid index pair ({a}, {b}) for arity {arity}")]
    BadIndexPair { a: usize, b: usize, arity: usize },
    #[error("index position {pos} out of range for arity {arity}")]
    PositionOutOfRange { pos: usize, arity: usize },
    #[error("{0:?} is not a permutation of 0..{1}")]
    BadPermutation(Vec<usize>, usize),
    #[error("index value {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("vector length {got} does not match dimension {want}")]
    BadVectorLength { got: usize, want: usize },
}

/// Dense complex tensor: `dim^arity` coefficients, row-major.
#[derive(Clone, Debug)]
pub struct Tensor {
    dim: usize,
    arity: usize,
    coeffs: Vec<C64>,
    scale: f64,
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.arity == other.arity && self.coeffs == other.coeffs
    }
}

fn max_abs(coeffs: &[C64]) -> f64 {
    coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
}

impl Tensor {
    pub fn new(dim: usize, arity: usize, coeffs: Vec<C64>) -> Result<Self, TensorError> {
        if dim == 0 {
            return Err(TensorError::ZeroDim);
        }
        let want = dim.pow(arity as u32);
        if coeffs.len() != want {
            return Err(TensorError::BadCoeffCount { got: coeffs.len(), want });
        }
        let scale = max_abs(&coeffs);
        Ok(Tensor { dim, arity, coeffs, scale })
    }

    pub fn zeros(dim: usize, arity: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Tensor { dim, arity, coeffs: vec![C64::new(0.0, 0.0); dim.pow(arity as u32)], scale: 0.0 }
    }

    /// Arity-0 tensor holding one coefficient, with index dimension 1.
    pub fn scalar(value: C64) -> Self {
        Self::scalar_with_dim(value, 1)
    }

    /// Arity-0 tensor over an alphabet of size `dim` (relevant for products).
    pub fn scalar_with_dim(value: C64, dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Tensor { dim, arity: 0, coeffs: vec![value], scale: value.norm() }
    }

    /// Identity matrix as an arity-2 tensor.
    pub fn identity(dim: usize) -> Self {
        let mut t = Self::zeros(dim, 2);
        for i in 0..dim {
            t.coeffs[i * dim + i] = C64::new(1.0, 0.0);
        }
        t.scale = 1.0;
        t
    }

    /// Arity-2 tensor from rows of a square matrix.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, TensorError> {
        let d = rows.len();
        if d == 0 {
            return Err(TensorError::ZeroDim);
        }
        let mut coeffs = Vec::with_capacity(d * d);
        for row in rows {
            if row.len() != d {
                return Err(TensorError::BadCoeffCount { got: row.len(), want: d });
            }
            coeffs.extend_from_slice(row);
        }
        Self::new(d, 2, coeffs)
    }

    /// Arity-2 tensor from real matrix rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, TensorError> {
        let complex_rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex_rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient magnitude observed while producing this tensor.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub(crate) fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale.max(max_abs(&self.coeffs));
        self
    }

    /// Coefficient at a full index tuple (0-based values).
    pub fn get(&self, idx: &[usize]) -> C64 {
        self.coeffs[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: C64) {
        let flat = self.flat_index(idx);
        self.coeffs[flat] = value;
        self.scale = self.scale.max(value.norm());
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.arity, "index tuple length must equal arity");
        let mut flat = 0;
        for &i in idx {
            assert!(i < self.dim, "index value {i} out of range for dim {}", self.dim);
            flat = flat * self.dim + i;
        }
        flat
    }

    /// Value of an arity-0 tensor.
    pub fn scalar_value(&self) -> Option<C64> {
        if self.arity == 0 {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Tensor {
        let coeffs = self.coeffs.iter().map(|c| c.conj()).collect();
        Tensor { dim: self.dim, arity: self.arity, coeffs, scale: self.scale }
    }

    /// Multiply all coefficients by a scalar.
    pub fn scaled(&self, factor: C64) -> Tensor {
        let coeffs: Vec<C64> = self.coeffs.iter().map(|c| c * factor).collect();
        let scale = (self.scale * factor.norm()).max(max_abs(&coeffs));
        Tensor { dim: self.dim, arity: self.arity, coeffs, scale }
    }

    /// Tensor product: `(a ⊗ b)[i, j] = a[i] · b[j]`.
    pub fn tensor_product(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::DimMismatch(self.dim, other.dim));
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); self.len() * other.len()];
        for (ia, a) in self.coeffs.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let base = ia * other.len();
            for (ib, b) in other.coeffs.iter().enumerate() {
                coeffs[base + ib] = a * b;
            }
        }
        let scale = (self.scale * other.scale).max(max_abs(&coeffs));
        Ok(Tensor { dim: self.dim, arity: self.arity + other.arity, coeffs, scale })
    }

    /// Strides of each index position (row-major).
    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.arity];
        for k in (0..self.arity.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dim;
        }
        s
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<(), TensorError> {
        if a == b || a >= self.arity || b >= self.arity {
            return Err(TensorError::BadIndexPair { a, b, arity: self.arity });
        }
        Ok(())
    }

    /// Contraction over index positions `a` and `b` (0-based): sums the
    /// diagonal, reducing the arity by two. Contracting both indices of a
    /// matrix yields its trace.
    pub fn contract(&self, a: usize, b: usize) -> Result<Tensor, TensorError> {
        self.check_pair(a, b)?;
        let (a, b) = (a.min(b), a.max(b));
        let strides = self.strides();
        let out_arity = self.arity - 2;
        let mut out = Tensor::zeros(self.dim, out_arity);
        let kept: Vec<usize> = (0..self.arity).filter(|&k| k != a && k != b).collect();
        let kept_strides: Vec<usize> = kept.iter().map(|&k| strides[k]).collect();
        let diag_stride = strides[a] + strides[b];
        let mut idx = vec![0usize; out_arity];
        loop {
            let mut base = 0;
            for (k, &i) in idx.iter().enumerate() {
                base += kept_strides[k] * i;
            }
            let mut sum = C64::new(0.0, 0.0);
            for l in 0..self.dim {
                sum += self.coeffs[base + l * diag_stride];
            }
            let mut flat = 0;
            for &i in &idx {
                flat = flat * self.dim + i;
            }
            out.coeffs[flat] = sum;
            if !increment(&mut idx, self.dim) {
                break;
            }
        }
        out.scale = self.scale.max(max_abs(&out.coeffs));
        Ok(out)
    }

    /// Merge index positions `a` and `b` into one (the generalized diagonal):
    /// `out[.., i, ..] = self[.., i, .., i, ..]` with the merged index left at
    /// position `min(a, b)`.
    pub fn diagonal(&self, a: usize, b: usize) -> Result<Tensor, TensorError> {
        self.check_pair(a, b)?;
        let (a, b) = (a.min(b), a.max(b));
        let strides = self.strides();
        let out_arity = self.arity - 1;
        let mut out = Tensor::zeros(self.dim, out_arity);
        // output index order: original order with position b removed
        let kept: Vec<usize> = (0..self.arity).filter(|&k| k != b).collect();
        let mut idx = vec![0usize; out_arity];
        loop {
            let mut base = 0;
            for (k, &orig) in kept.iter().enumerate() {
                base += strides[orig] * idx[k];
            }
            // position a in the output order carries the tied value
            let a_out = kept.iter().position(|&k| k == a).expect("a is kept");
            base += strides[b] * idx[a_out];
            let mut flat = 0;
            for &i in &idx {
                flat = flat * self.dim + i;
            }
            out.coeffs[flat] = self.coeffs[base];
            if !increment(&mut idx, self.dim) {
                break;
            }
        }
        out.scale = self.scale;
        Ok(out)
    }

    /// Sum over one index position, reducing the arity by one.
    pub fn sum_index(&self, pos: usize) -> Result<Tensor, TensorError> {
        self.cap(pos, &vec![C64::new(1.0, 0.0); self.dim])
    }

    /// Contract one index position against a fixed vector.
    pub fn cap(&self, pos: usize, vector: &[C64]) -> Result<Tensor, TensorError> {
        if pos >= self.arity {
            return Err(TensorError::PositionOutOfRange { pos, arity: self.arity });
        }
        if vector.len() != self.dim {
            return Err(TensorError::BadVectorLength { got: vector.len(), want: self.dim });
        }
        let strides = self.strides();
        let out_arity = self.arity - 1;
        let mut out = Tensor::zeros(self.dim, out_arity);
        let kept: Vec<usize> = (0..self.arity).filter(|&k| k != pos).collect();
        let kept_strides: Vec<usize> = kept.iter().map(|&k| strides[k]).collect();
        let mut idx = vec![0usize; out_arity];
        loop {
            let mut base = 0;
            for (k, &i) in idx.iter().enumerate() {
                base += kept_strides[k] * i;
            }
            let mut sum = C64::new(0.0, 0.0);
            for l in 0..self.dim {
                sum += self.coeffs[base + l * strides[pos]] * vector[l];
            }
            let mut flat = 0;
            for &i in &idx {
                flat = flat * self.dim + i;
            }
            out.coeffs[flat] = sum;
            if !increment(&mut idx, self.dim) {
                break;
            }
        }
        let vec_scale = max_abs(vector).max(1.0);
        out.scale = (self.scale * vec_scale).max(max_abs(&out.coeffs));
        Ok(out)
    }

    /// Index permutation: the coefficient at `σ(i)` of the result equals the
    /// coefficient at `i` of the input, i.e. the index at position `k` moves
    /// to position `sigma[k]`.
    pub fn permute(&self, sigma: &[usize]) -> Result<Tensor, TensorError> {
        if sigma.len() != self.arity {
            return Err(TensorError::BadPermutation(sigma.to_vec(), self.arity));
        }
        let mut seen = vec![false; self.arity];
        for &s in sigma {
            if s >= self.arity || seen[s] {
                return Err(TensorError::BadPermutation(sigma.to_vec(), self.arity));
            }
            seen[s] = true;
        }
        let in_strides = self.strides();
        let mut out = Tensor::zeros(self.dim, self.arity);
        let out_strides = out.strides();
        // out position sigma[k] gets stride contribution of in position k
        let mut combined = vec![0usize; self.arity];
        for k in 0..self.arity {
            combined[k] = out_strides[sigma[k]];
        }
        let mut idx = vec![0usize; self.arity];
        let mut in_flat = 0usize;
        loop {
            let mut out_flat = 0;
            for (k, &i) in idx.iter().enumerate() {
                out_flat += combined[k] * i;
            }
            out.coeffs[out_flat] = self.coeffs[in_flat];
            in_flat += 1;
            if !increment(&mut idx, self.dim) {
                break;
            }
        }
        debug_assert_eq!(in_flat, self.coeffs.len());
        let _ = in_strides;
        out.scale = self.scale;
        Ok(out)
    }

    /// Direct sum: alphabets concatenate. The result has dimension
    /// `a.dim + b.dim`; coefficients follow `a` when every index falls in the
    /// first block, `b` (shifted) when every index falls in the second block,
    /// and are zero on mixed blocks.
    pub fn direct_sum(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        if self.arity != other.arity {
            return Err(TensorError::ArityMismatch(self.arity, other.arity));
        }
        let d = self.dim + other.dim;
        let n = self.arity;
        let mut out = Tensor::zeros(d, n);
        let mut idx = vec![0usize; n];
        // a-block
        loop {
            let mut flat = 0;
            for &i in &idx {
                flat = flat * d + i;
            }
            let mut src = 0;
            for &i in &idx {
                src = src * self.dim + i;
            }
            out.coeffs[flat] = self.coeffs[src];
            if !increment(&mut idx, self.dim) {
                break;
            }
        }
        // b-block, shifted by self.dim
        let mut idx = vec![0usize; n];
        loop {
            let mut flat = 0;
            for &i in &idx {
                flat = flat * d + (i + self.dim);
            }
            let mut src = 0;
            for &i in &idx {
                src = src * other.dim + i;
            }
            out.coeffs[flat] = other.coeffs[src];
            if !increment(&mut idx, other.dim) {
                break;
            }
        }
        out.scale = self.scale.max(other.scale);
        Ok(out)
    }

    /// Index-wise Kronecker product: the `k`-th index of the result is the
    /// pair of the `k`-th indices of the operands (the first operand major).
    /// On matrices this is the usual Kronecker product.
    pub fn kron_per_index(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        if self.arity != other.arity {
            return Err(TensorError::ArityMismatch(self.arity, other.arity));
        }
        let n = self.arity;
        let d = self.dim * other.dim;
        let mut out = Tensor::zeros(d, n);
        let mut ia = vec![0usize; n];
        loop {
            let a = self.coeffs[{
                let mut f = 0;
                for &i in &ia {
                    f = f * self.dim + i;
                }
                f
            }];
            if a.norm_sqr() != 0.0 {
                let mut ib = vec![0usize; n];
                loop {
                    let b = other.coeffs[{
                        let mut f = 0;
                        for &i in &ib {
                            f = f * other.dim + i;
                        }
                        f
                    }];
                    let mut flat = 0;
                    for k in 0..n {
                        flat = flat * d + (ia[k] * other.dim + ib[k]);
                    }
                    out.coeffs[flat] = a * b;
                    if !increment(&mut ib, other.dim) {
                        break;
                    }
                }
            }
            if !increment(&mut ia, self.dim) {
                break;
            }
        }
        out.scale = (self.scale * other.scale).max(max_abs(&out.coeffs));
        Ok(out)
    }

    /// Matrix product of two arity-2 tensors.
    pub fn matmul(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        if self.arity != 2 || other.arity != 2 {
            return Err(TensorError::ArityMismatch(self.arity, other.arity));
        }
        if self.dim != other.dim {
            return Err(TensorError::DimMismatch(self.dim, other.dim));
        }
        let d = self.dim;
        let mut out = Tensor::zeros(d, 2);
        for i in 0..d {
            for k in 0..d {
                let a = self.coeffs[i * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.coeffs[i * d + j] += a * other.coeffs[k * d + j];
                }
            }
        }
        out.scale = (self.scale * other.scale).max(max_abs(&out.coeffs));
        Ok(out)
    }

    /// Trace of an arity-2 tensor.
    pub fn trace(&self) -> Result<C64, TensorError> {
        if self.arity != 2 {
            return Err(TensorError::ArityMismatch(self.arity, 2));
        }
        let mut sum = C64::new(0.0, 0.0);
        for i in 0..self.dim {
            sum += self.coeffs[i * self.dim + i];
        }
        Ok(sum)
    }

    /// Squared Frobenius norm: `Σ |coeff|²`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Zero test relative to the recorded scale:
    /// `norm² ≤ eps² · max(1, scale²)`.
    pub fn is_zero(&self, eps: f64) -> bool {
        let s = self.scale.max(1.0);
        self.norm_sq() <= eps * eps * s * s
    }
}

/// Advance a row-major index tuple; returns false after the last tuple.
pub(crate) fn increment(idx: &mut [usize], dim: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dim {
            return true;
        }
        idx[k] = 0;
    }
    false
}
