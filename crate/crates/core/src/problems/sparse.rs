use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.indices
            .iter()
            .zip(&self.values)
            .map(|(&i, &v)| v * dense[i])
            .sum()
    }

    pub fn axpy_into(&self, scale: f64, out: &mut [f64]) {
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            out[i] += scale * v;
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }
}

/// Square sparse matrix stored as triplets, both triangles present.
///
/// Dense matrices it pairs with are flat column-major `n * n` slices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseSymmetric {
    pub n: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseSymmetric {
    /// `<S, Z>_F` for a flat column-major `Z`.
    pub fn inner(&self, z: &[f64]) -> f64 {
        let n = self.n;
        self.rows
            .iter()
            .zip(&self.cols)
            .zip(&self.values)
            .map(|((&r, &c), &v)| v * z[r + c * n])
            .sum()
    }

    /// `out += scale * S`.
    pub fn axpy_into(&self, scale: f64, out: &mut [f64]) {
        let n = self.n;
        for ((&r, &c), &v) in self.rows.iter().zip(&self.cols).zip(&self.values) {
            out[r + c * n] += scale * v;
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).collect(),
            cols: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// `(A + A^T) / 2` for a random `A` with `round(density * n^2)` (at
    /// least one) uniform `[0, 1]` nonzeros at uniformly chosen positions.
    pub fn random<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Self {
        let total = n * n;
        let count = ((density * total as f64).round() as usize).clamp(1, total);
        let mut positions: Vec<usize> = sample(rng, total, count).into_vec();
        positions.sort_unstable();
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for p in positions {
            let (r, c) = (p % n, p / n);
            let v: f64 = rng.random();
            *acc.entry((c, r)).or_insert(0.0) += 0.5 * v;
            *acc.entry((r, c)).or_insert(0.0) += 0.5 * v;
        }
        // column-major order
        let mut entries: Vec<((usize, usize), f64)> = acc.into_iter().collect();
        entries.sort_by_key(|&((r, c), _)| (c, r));
        Self {
            n,
            rows: entries.iter().map(|e| e.0 .0).collect(),
            cols: entries.iter().map(|e| e.0 .1).collect(),
            values: entries.iter().map(|e| e.1).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        self.axpy_into(1.0, &mut out);
        out
    }
}
