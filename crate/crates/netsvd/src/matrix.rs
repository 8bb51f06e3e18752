//! Dense row-major matrix and the data-parallel kernels the solver runs on.
//!
//! Every kernel has a sequential variant and (behind the `parallel` feature)
//! a rayon variant; the un-suffixed method dispatches between them by input
//! size. The two variants are bit-identical by construction: `matvec` and
//! `subtract_rank_one` parallelize over independent output rows, and
//! `matvec_transpose` accumulates fixed-size row chunks that are merged in
//! chunk order on both paths.

use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Inputs smaller than this many entries always take the sequential path.
/// These kernels are memory-bound, so the crossover is late: bench runs put
/// it near 10^6 entries on a two-core host (see benches/kernels.rs).
const PAR_MIN_ELEMS: usize = 512 * 1024;

/// Row-chunk granularity for transpose products. Fixed (not derived from the
/// thread count) so the floating-point merge order never changes.
const CHUNK_ROWS: usize = 128;

/// Dense n x p matrix, row-major, finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major values, validating shape and finiteness.
    pub fn new(n_rows: usize, n_cols: usize, values: Vec<f64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::EmptyMatrix { n_rows, n_cols });
        }
        if values.len() != n_rows * n_cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} values, got {}",
                n_rows,
                n_cols,
                n_rows * n_cols,
                values.len()
            )));
        }
        for (idx, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: idx / n_cols,
                    col: idx % n_cols,
                    value: v,
                });
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            values,
        })
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                values.push(f(i, j));
            }
        }
        Self::new(n_rows, n_cols, values)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.n_rows && col < self.n_cols, "index out of range");
        self.values[row * self.n_cols + col]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Returns `c * X`. Errors if the scale produces non-finite entries.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.n_rows,
            self.n_cols,
            self.values.iter().map(|v| c * v).collect(),
        )
    }

    /// `X v`. Dispatches to the rayon kernel for large inputs.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        #[cfg(feature = "parallel")]
        if self.values.len() >= PAR_MIN_ELEMS {
            return self.matvec_par(v);
        }
        self.matvec_seq(v)
    }

    pub fn matvec_seq(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n_cols, "matvec: vector length != n_cols");
        self.values
            .chunks_exact(self.n_cols)
            .map(|row| crate::util::dot(row, v))
            .collect()
    }

    #[cfg(feature = "parallel")]
    pub fn matvec_par(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n_cols, "matvec: vector length != n_cols");
        self.values
            .par_chunks_exact(self.n_cols)
            .map(|row| crate::util::dot(row, v))
            .collect()
    }

    /// `Xᵀ u`. Dispatches to the rayon kernel for large inputs.
    pub fn matvec_transpose(&self, u: &[f64]) -> Vec<f64> {
        #[cfg(feature = "parallel")]
        if self.values.len() >= PAR_MIN_ELEMS {
            return self.matvec_transpose_par(u);
        }
        self.matvec_transpose_seq(u)
    }

    pub fn matvec_transpose_seq(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.n_rows, "matvec_transpose: vector length != n_rows");
        let mut out = vec![0.0; self.n_cols];
        for (rows, coeffs) in self
            .values
            .chunks(CHUNK_ROWS * self.n_cols)
            .zip(u.chunks(CHUNK_ROWS))
        {
            let partial = Self::transpose_chunk(rows, coeffs, self.n_cols);
            for (acc, p) in out.iter_mut().zip(&partial) {
                *acc += p;
            }
        }
        out
    }

    #[cfg(feature = "parallel")]
    pub fn matvec_transpose_par(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.n_rows, "matvec_transpose: vector length != n_rows");
        let partials: Vec<Vec<f64>> = self
            .values
            .par_chunks(CHUNK_ROWS * self.n_cols)
            .zip(u.par_chunks(CHUNK_ROWS))
            .map(|(rows, coeffs)| Self::transpose_chunk(rows, coeffs, self.n_cols))
            .collect();
        let mut out = vec![0.0; self.n_cols];
        for partial in partials {
            for (acc, p) in out.iter_mut().zip(&partial) {
                *acc += p;
            }
        }
        out
    }

    fn transpose_chunk(rows: &[f64], coeffs: &[f64], n_cols: usize) -> Vec<f64> {
        let mut partial = vec![0.0; n_cols];
        for (row, &c) in rows.chunks_exact(n_cols).zip(coeffs) {
            for (acc, &x) in partial.iter_mut().zip(row) {
                *acc += c * x;
            }
        }
        partial
    }

    /// `X - d * u * vᵀ`, leaving `self` untouched.
    pub fn subtract_rank_one(&self, d: f64, u: &[f64], v: &[f64]) -> DenseMatrix {
        #[cfg(feature = "parallel")]
        if self.values.len() >= PAR_MIN_ELEMS {
            return self.subtract_rank_one_par(d, u, v);
        }
        self.subtract_rank_one_seq(d, u, v)
    }

    pub fn subtract_rank_one_seq(&self, d: f64, u: &[f64], v: &[f64]) -> DenseMatrix {
        assert_eq!(u.len(), self.n_rows, "subtract_rank_one: u length != n_rows");
        assert_eq!(v.len(), self.n_cols, "subtract_rank_one: v length != n_cols");
        let mut values = Vec::with_capacity(self.values.len());
        for (row, &ui) in self.values.chunks_exact(self.n_cols).zip(u) {
            let c = d * ui;
            values.extend(row.iter().zip(v).map(|(&x, &vj)| x - c * vj));
        }
        DenseMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            values,
        }
    }

    #[cfg(feature = "parallel")]
    pub fn subtract_rank_one_par(&self, d: f64, u: &[f64], v: &[f64]) -> DenseMatrix {
        assert_eq!(u.len(), self.n_rows, "subtract_rank_one: u length != n_rows");
        assert_eq!(v.len(), self.n_cols, "subtract_rank_one: v length != n_cols");
        let values: Vec<f64> = self
            .values
            .par_chunks_exact(self.n_cols)
            .zip(u.par_iter())
            .flat_map_iter(|(row, &ui)| {
                let c = d * ui;
                row.iter()
                    .zip(v)
                    .map(move |(&x, &vj)| x - c * vj)
                    .collect::<Vec<_>>()
            })
            .collect();
        DenseMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            values,
        }
    }
}
