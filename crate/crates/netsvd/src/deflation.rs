//! Multi-factor extraction by residual deflation.
//!
//! Factor `t + 1` is fit on `X_t - d_t u_t v_tᵀ`. Nothing forces successive
//! factors orthogonal; the residual subtraction alone exposes the next one.

use crate::error::{Error, Result};
use crate::factor::FactorTriple;
use crate::graph::PriorGraph;
use crate::matrix::DenseMatrix;
use crate::solver::{fit_rank_one, IterationTrace, SolverConfig};

/// Ordered factors plus the Frobenius norm of the residual after each
/// deflation step.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSeries {
    pub factors: Vec<FactorTriple>,
    pub residual_norms: Vec<f64>,
    pub traces: Vec<IterationTrace>,
}

/// `X - d u vᵀ`; the input is untouched.
pub fn deflate(x: &DenseMatrix, f: &FactorTriple) -> Result<DenseMatrix> {
    if f.u.len() != x.n_rows() || f.v.len() != x.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "deflate: factor is {}x{}, matrix is {}x{}",
            f.u.len(),
            f.v.len(),
            x.n_rows(),
            x.n_cols()
        )));
    }
    Ok(x.subtract_rank_one(f.d, &f.u, &f.v))
}

/// Extracts `k_factors` factors by alternating fit and deflation. Each factor
/// re-initializes from the current residual; non-converged factors are kept
/// and flagged in their trace.
pub fn fit_rank_k(
    x: &DenseMatrix,
    g_rows: &PriorGraph,
    g_cols: &PriorGraph,
    cfg: &SolverConfig,
    k_factors: usize,
) -> Result<FactorSeries> {
    if k_factors < 1 {
        return Err(Error::InvalidArgument("k_factors must be at least 1".into()));
    }
    let mut residual = x.clone();
    let mut series = FactorSeries {
        factors: Vec::with_capacity(k_factors),
        residual_norms: Vec::with_capacity(k_factors),
        traces: Vec::with_capacity(k_factors),
    };
    for index in 0..k_factors {
        let (factor, trace) = fit_rank_one(&residual, g_rows, g_cols, cfg).map_err(|e| {
            Error::AtFactor {
                index,
                source: Box::new(e),
            }
        })?;
        residual = deflate(&residual, &factor).map_err(|e| Error::AtFactor {
            index,
            source: Box::new(e),
        })?;
        series.residual_norms.push(residual.frobenius_norm());
        series.factors.push(factor);
        series.traces.push(trace);
    }
    Ok(series)
}
