//! Rank-one subproblem updates and the alternating solver.
//!
//! One outer iteration is: `z = X v`, update `u` from `z` under the selected
//! rule, then `z = Xᵀ u`, update `v`, then `d = zᵀ v`. Iteration stops when
//! `|Δd|` falls below the configured tolerance.
//!
//! The starred rules smooth coefficient *magnitudes* over the prior graph
//! before sparsifying: each coordinate is rebuilt as
//! `max(|z_k| + sigma * A_k·m - lambda, 0)` where `m` holds magnitudes of the
//! previous iterate. The hard-threshold rules rebuild from the previous
//! iterate only (Jacobi); the soft-threshold rule updates `m` in place as the
//! ascending sweep advances (Gauss-Seidel), which is exact coordinate descent
//! on its fixed-multiplier objective. The result is sparsified (soft
//! threshold via `lambda`, or hard cardinality via top-k projection),
//! normalized, and the signs of `z` are restored. The classic rule smooths
//! *signed* values instead and skips sign restoration; it exists as a
//! comparison baseline.
//!
//! Two denominator conventions are supported: the literal pseudocode update
//! (no division, normalization absorbs scale) and the exact coordinate-wise
//! KKT solution which divides by `eta + sigma * degree(k)`.

use crate::error::{Error, Result};
use crate::factor::FactorTriple;
use crate::graph::{LaplacianMode, PriorGraph};
use crate::matrix::DenseMatrix;
use crate::rng;
use crate::util::{dot, l2_norm, scale_in_place};

#[cfg(any(test, debug_assertions))]
fn l0_norm(v: &[f64]) -> usize {
    v.iter().filter(|x| **x != 0.0).count()
}

/// Which rank-one model the solver runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// L0 cardinality bounds plus absolute-value graph smoothing.
    L0SgSvdStar { k_u: usize, k_v: usize },
    /// L1 soft thresholds plus absolute-value graph smoothing.
    L1SgSvdStar { lambda_u: f64, lambda_v: f64 },
    /// L0 cardinality bounds plus signed graph smoothing (baseline).
    SgSvdClassic { k_u: usize, k_v: usize },
    /// Plain L0-sparse SVD; graph terms are forced off.
    L0Svd { k_u: usize, k_v: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DenominatorMode {
    /// Follow the pseudocode: no per-coordinate division.
    #[default]
    AlgorithmPseudocode,
    /// Divide each coordinate by `eta + sigma * degree(k)`.
    ExactKkt,
}

/// How the right factor is initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    /// 50 power steps on `XᵀX` from the all-ones direction. Deterministic.
    PowerIteration,
    /// Unit-normalized standard-normal vector from the given seed.
    SeededRandom(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub variant: Variant,
    pub sigma_u: f64,
    pub sigma_v: f64,
    /// Ridge multiplier for the exact-KKT denominator; unused in pseudocode
    /// mode.
    pub eta: f64,
    pub denominator_mode: DenominatorMode,
    pub laplacian_mode: LaplacianMode,
    /// Stopping tolerance on `|Δd|`.
    pub epsilon: f64,
    pub max_iter: usize,
    pub init: Init,
}

impl SolverConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            sigma_u: 0.0,
            sigma_v: 0.0,
            eta: 1.0,
            denominator_mode: DenominatorMode::AlgorithmPseudocode,
            laplacian_mode: LaplacianMode::Raw,
            epsilon: 1e-6,
            max_iter: 1000,
            init: Init::PowerIteration,
        }
    }

    pub fn validate(&self, n_rows: usize, n_cols: usize) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 || !self.epsilon.is_finite() {
            return Err(Error::InvalidConfig("epsilon must be positive and finite".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        for (name, s) in [("sigma_u", self.sigma_u), ("sigma_v", self.sigma_v)] {
            if s < 0.0 || !s.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be nonnegative")));
            }
        }
        if self.eta < 0.0 || !self.eta.is_finite() {
            return Err(Error::InvalidConfig("eta must be nonnegative".into()));
        }
        match self.variant {
            Variant::L0SgSvdStar { k_u, k_v }
            | Variant::SgSvdClassic { k_u, k_v }
            | Variant::L0Svd { k_u, k_v } => {
                if k_u < 1 || k_u > n_rows {
                    return Err(Error::InvalidConfig(format!(
                        "k_u = {k_u} outside [1, {n_rows}]"
                    )));
                }
                if k_v < 1 || k_v > n_cols {
                    return Err(Error::InvalidConfig(format!(
                        "k_v = {k_v} outside [1, {n_cols}]"
                    )));
                }
            }
            Variant::L1SgSvdStar { lambda_u, lambda_v } => {
                for (name, l) in [("lambda_u", lambda_u), ("lambda_v", lambda_v)] {
                    if l < 0.0 || !l.is_finite() {
                        return Err(Error::InvalidConfig(format!("{name} must be nonnegative")));
                    }
                }
            }
        }
        Ok(())
    }

    fn sigma(&self, side: Side) -> f64 {
        // The plain L0 variant is the starred model with both graph terms off.
        if matches!(self.variant, Variant::L0Svd { .. }) {
            return 0.0;
        }
        match side {
            Side::Rows => self.sigma_u,
            Side::Cols => self.sigma_v,
        }
    }
}

/// Per-iteration singular-value estimates from one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub d_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Rows,
    Cols,
}

/// Initial right factor: unit 2-norm, deterministic for both modes.
pub fn init_v(x: &DenseMatrix, init: &Init) -> Result<Vec<f64>> {
    if x.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    match init {
        Init::PowerIteration => {
            let p = x.n_cols();
            let mut w = vec![1.0 / (p as f64).sqrt(); p];
            for step in 0..50 {
                let xw = x.matvec(&w);
                let mut next = x.matvec_transpose(&xw);
                let norm = l2_norm(&next);
                if norm == 0.0 {
                    return Err(Error::DegenerateInit { step });
                }
                scale_in_place(&mut next, 1.0 / norm);
                w = next;
            }
            Ok(w)
        }
        Init::SeededRandom(seed) => {
            let mut r = rng::seeded(*seed);
            let mut w: Vec<f64> = (0..x.n_cols()).map(|_| rng::standard_normal(&mut r)).collect();
            let norm = l2_norm(&w);
            if norm == 0.0 {
                return Err(Error::DegenerateInit { step: 0 });
            }
            scale_in_place(&mut w, 1.0 / norm);
            Ok(w)
        }
    }
}

fn check_update_inputs(z: &[f64], g: &PriorGraph, prev: &[f64]) -> Result<()> {
    if z.len() != g.n_vertices() || prev.len() != g.n_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "update: |z| = {}, |prev| = {}, graph has {} vertices",
            z.len(),
            prev.len(),
            g.n_vertices()
        )));
    }
    Ok(())
}

fn kkt_denominator(g: &PriorGraph, k: usize, sigma: f64, cfg: &SolverConfig) -> Result<f64> {
    let den = cfg.eta + sigma * g.normalized_degree(k, cfg.laplacian_mode);
    if den <= 0.0 {
        return Err(Error::ZeroDenominator { vertex: k });
    }
    Ok(den)
}

/// Rebuild of the magnitude vector for the hard-threshold rules:
/// `out[k] = max(|z_k| + sigma * A_k·prev, 0)` with the optional exact-KKT
/// division. Every coordinate reads the *previous* magnitudes (Jacobi), so a
/// coordinate's graph bonus comes only from the last iterate, never from
/// values rebuilt earlier in the same sweep.
fn star_sweep_jacobi(
    prev: &[f64],
    z: &[f64],
    g: &PriorGraph,
    sigma: f64,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; prev.len()];
    for k in 0..prev.len() {
        let bonus = if sigma > 0.0 {
            sigma * g.neighbor_sum_unchecked(prev, k, cfg.laplacian_mode)
        } else {
            0.0
        };
        let mut val = (z[k].abs() + bonus).max(0.0);
        if cfg.denominator_mode == DenominatorMode::ExactKkt {
            val /= kkt_denominator(g, k, sigma, cfg)?;
        }
        out[k] = val;
    }
    Ok(out)
}

/// One ascending in-place sweep of the soft-threshold rule
/// `work[k] = max(|z_k| + sigma * A_k·work - lambda, 0)`, with the optional
/// exact-KKT division. Gauss-Seidel: later coordinates see the magnitudes
/// rebuilt earlier in the same sweep, which is exact coordinate descent on
/// the fixed-multiplier objective in exact-KKT mode.
fn l1_sweep_gauss_seidel(
    work: &mut [f64],
    z: &[f64],
    g: &PriorGraph,
    lambda: f64,
    sigma: f64,
    cfg: &SolverConfig,
) -> Result<()> {
    for k in 0..work.len() {
        let bonus = if sigma > 0.0 {
            sigma * g.neighbor_sum_unchecked(work, k, cfg.laplacian_mode)
        } else {
            0.0
        };
        let mut val = (z[k].abs() + bonus - lambda).max(0.0);
        if cfg.denominator_mode == DenominatorMode::ExactKkt {
            val /= kkt_denominator(g, k, sigma, cfg)?;
        }
        work[k] = val;
    }
    Ok(())
}

/// Signed Jacobi analogue of `star_sweep_jacobi` for the classic baseline:
/// no absolute values, no clamping inside the sweep.
fn classic_sweep_jacobi(
    prev: &[f64],
    z: &[f64],
    g: &PriorGraph,
    sigma: f64,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; prev.len()];
    for k in 0..prev.len() {
        let bonus = if sigma > 0.0 {
            sigma * g.neighbor_sum_unchecked(prev, k, cfg.laplacian_mode)
        } else {
            0.0
        };
        let mut val = z[k] + bonus;
        if cfg.denominator_mode == DenominatorMode::ExactKkt {
            val /= kkt_denominator(g, k, sigma, cfg)?;
        }
        out[k] = val;
    }
    Ok(out)
}

/// Soft-threshold update for one side: sweep, normalize, restore signs.
///
/// Errors with `DegenerateShrinkage` when `lambda` zeroes every coordinate.
pub fn update_l1(
    z: &[f64],
    g: &PriorGraph,
    v_prev: &[f64],
    lambda: f64,
    sigma: f64,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    check_update_inputs(z, g, v_prev)?;
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidArgument("lambda must be nonnegative".into()));
    }
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidArgument("sigma must be nonnegative".into()));
    }
    let mut work: Vec<f64> = v_prev.iter().map(|x| x.abs()).collect();
    l1_sweep_gauss_seidel(&mut work, z, g, lambda, sigma, cfg)?;
    let norm = l2_norm(&work);
    if norm == 0.0 {
        return Err(Error::DegenerateShrinkage { lambda });
    }
    scale_in_place(&mut work, 1.0 / norm);
    renormalize_after_signs(restore_signs(&work, z))
}

/// Sign restoration zeroes any kept coordinate whose `z` is exactly zero
/// (possible when a graph bonus promoted a signal-free coordinate). Rescale
/// the survivors so the iterate stays unit; without kills the norm is already
/// 1 to rounding and is left untouched.
fn renormalize_after_signs(mut signed: Vec<f64>) -> Result<Vec<f64>> {
    let norm = l2_norm(&signed);
    if norm == 0.0 {
        return Err(Error::DegenerateUpdate);
    }
    if (norm - 1.0).abs() > 1e-12 {
        scale_in_place(&mut signed, 1.0 / norm);
    }
    Ok(signed)
}

/// Cardinality-bounded update for one side: sweep, keep the `k_card` largest
/// magnitudes, normalize, restore signs.
pub fn update_l0(
    z: &[f64],
    g: &PriorGraph,
    v_prev: &[f64],
    k_card: usize,
    sigma: f64,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    check_update_inputs(z, g, v_prev)?;
    if k_card < 1 || k_card > z.len() {
        return Err(Error::InvalidArgument(format!(
            "k_card = {} outside [1, {}]",
            k_card,
            z.len()
        )));
    }
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidArgument("sigma must be nonnegative".into()));
    }
    let prev_abs: Vec<f64> = v_prev.iter().map(|x| x.abs()).collect();
    let mut work = star_sweep_jacobi(&prev_abs, z, g, sigma, cfg)?;
    retain_top_k(&mut work, k_card);
    let norm = l2_norm(&work);
    if norm == 0.0 {
        return Err(Error::DegenerateUpdate);
    }
    scale_in_place(&mut work, 1.0 / norm);
    renormalize_after_signs(restore_signs(&work, z))
}

/// Signed baseline update: sweep signed values, hard-threshold by magnitude,
/// normalize. No sign restoration (values keep the signs the sweep produced).
fn update_classic(
    z: &[f64],
    g: &PriorGraph,
    v_prev: &[f64],
    k_card: usize,
    sigma: f64,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    check_update_inputs(z, g, v_prev)?;
    let mut work = classic_sweep_jacobi(v_prev, z, g, sigma, cfg)?;
    retain_top_k(&mut work, k_card);
    let norm = l2_norm(&work);
    if norm == 0.0 {
        return Err(Error::DegenerateUpdate);
    }
    scale_in_place(&mut work, 1.0 / norm);
    Ok(work)
}

/// Zeroes all but the `k_card` entries of largest absolute value. Ties at the
/// threshold keep the smaller index.
pub fn project_top_k(v: &[f64], k_card: usize) -> Vec<f64> {
    let mut out = v.to_vec();
    retain_top_k(&mut out, k_card);
    out
}

fn retain_top_k(v: &mut [f64], k_card: usize) {
    let len = v.len();
    assert!(k_card >= 1 && k_card <= len, "top-k needs 1 <= k <= len");
    if k_card == len {
        return;
    }
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_unstable_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b)));
    for &idx in &order[k_card..] {
        v[idx] = 0.0;
    }
}

/// Elementwise `v_abs * sign(z)` with `sign(0) = 0`, so coordinates with no
/// signal stay zeroed.
pub fn restore_signs(v_abs: &[f64], z: &[f64]) -> Vec<f64> {
    assert_eq!(v_abs.len(), z.len(), "restore_signs: length mismatch");
    debug_assert!(v_abs.iter().all(|&a| a >= 0.0));
    v_abs
        .iter()
        .zip(z)
        .map(|(&a, &zi)| {
            if zi > 0.0 {
                a
            } else if zi < 0.0 {
                -a
            } else {
                0.0
            }
        })
        .collect()
}

/// `uᵀ X v`, the optimal singular value for fixed unit factors.
pub fn singular_value(x: &DenseMatrix, u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != x.n_rows() || v.len() != x.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "singular_value: |u| = {}, |v| = {}, matrix is {}x{}",
            u.len(),
            v.len(),
            x.n_rows(),
            x.n_cols()
        )));
    }
    Ok(dot(u, &x.matvec(v)))
}

fn update_side(
    z: &[f64],
    g: &PriorGraph,
    prev: &[f64],
    side: Side,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    let sigma = cfg.sigma(side);
    match cfg.variant {
        Variant::L0SgSvdStar { k_u, k_v } | Variant::L0Svd { k_u, k_v } => {
            let k = if side == Side::Rows { k_u } else { k_v };
            update_l0(z, g, prev, k, sigma, cfg)
        }
        Variant::L1SgSvdStar { lambda_u, lambda_v } => {
            let lambda = if side == Side::Rows { lambda_u } else { lambda_v };
            update_l1(z, g, prev, lambda, sigma, cfg)
        }
        Variant::SgSvdClassic { k_u, k_v } => {
            let k = if side == Side::Rows { k_u } else { k_v };
            update_classic(z, g, prev, k, sigma, cfg)
        }
    }
}

#[cfg(debug_assertions)]
fn assert_iterate_invariants(u: &[f64], v: &[f64], cfg: &SolverConfig) {
    for (name, w) in [("u", u), ("v", v)] {
        let norm = l2_norm(w);
        debug_assert!(
            (norm - 1.0).abs() <= 1e-9,
            "{name} norm {norm} drifted from 1"
        );
    }
    match cfg.variant {
        Variant::L0SgSvdStar { k_u, k_v }
        | Variant::SgSvdClassic { k_u, k_v }
        | Variant::L0Svd { k_u, k_v } => {
            debug_assert!(l0_norm(u) <= k_u);
            debug_assert!(l0_norm(v) <= k_v);
        }
        Variant::L1SgSvdStar { .. } => {}
    }
}

/// Alternating solve for one factor.
///
/// Either graph may be [`PriorGraph::empty`], which is the same as running
/// that side with `sigma = 0`. Non-convergence inside `max_iter` is reported
/// through `IterationTrace::converged`, not as an error.
pub fn fit_rank_one(
    x: &DenseMatrix,
    g_rows: &PriorGraph,
    g_cols: &PriorGraph,
    cfg: &SolverConfig,
) -> Result<(FactorTriple, IterationTrace)> {
    let (n, p) = (x.n_rows(), x.n_cols());
    cfg.validate(n, p)?;
    if g_rows.n_vertices() != n {
        return Err(Error::DimensionMismatch(format!(
            "row graph has {} vertices, matrix has {} rows",
            g_rows.n_vertices(),
            n
        )));
    }
    if g_cols.n_vertices() != p {
        return Err(Error::DimensionMismatch(format!(
            "column graph has {} vertices, matrix has {} columns",
            g_cols.n_vertices(),
            p
        )));
    }

    let mut v = init_v(x, &cfg.init)?;
    // No previous left iterate exists yet; zero magnitudes mean the first
    // sweep runs without a smoothing bonus.
    let mut u = vec![0.0; n];
    let mut d_history: Vec<f64> = Vec::new();
    let mut converged = false;

    for _ in 0..cfg.max_iter {
        let zu = x.matvec(&v);
        u = update_side(&zu, g_rows, &u, Side::Rows, cfg)?;
        let zv = x.matvec_transpose(&u);
        v = update_side(&zv, g_cols, &v, Side::Cols, cfg)?;
        let mut d = dot(&zv, &v);
        if d < 0.0 {
            // Sign convention: flip v so the singular value stays nonnegative
            // (reachable only through the signed classic sweep).
            scale_in_place(&mut v, -1.0);
            d = -d;
        }
        #[cfg(debug_assertions)]
        assert_iterate_invariants(&u, &v, cfg);
        d_history.push(d);
        let t = d_history.len();
        if t >= 2 && (d_history[t - 1] - d_history[t - 2]).abs() < cfg.epsilon {
            converged = true;
            break;
        }
    }

    let d = *d_history.last().expect("max_iter >= 1");
    Ok((
        FactorTriple { u, v, d },
        IterationTrace {
            iterations: d_history.len(),
            d_history,
            converged,
        },
    ))
}
