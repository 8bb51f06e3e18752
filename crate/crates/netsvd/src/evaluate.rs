//! Evaluation statistics: support recovery, edge enrichment of modules
//! against a prior graph, and a permutation test for within-module
//! expression correlation.

use crate::error::{Error, Result};
use crate::graph::PriorGraph;
use crate::matrix::DenseMatrix;
use crate::rng::{self, PortableRng};
use crate::util::{dot, l2_norm};
use rand::RngCore;
use statrs::function::gamma::ln_gamma;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Confusion-matrix summary of a recovered support against the planted one.
/// A coordinate counts as predicted positive iff its estimate is exactly
/// nonzero (the sparsifying updates produce exact zeros).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportMetrics {
    pub sensitivity: f64,
    pub specificity: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
}

pub fn support_metrics(estimated: &[f64], truth_support: &[usize]) -> Result<SupportMetrics> {
    if truth_support.is_empty() {
        return Err(Error::EmptyTruthSupport);
    }
    let len = estimated.len();
    let mut truth = vec![false; len];
    for &idx in truth_support {
        if idx >= len {
            return Err(Error::IndexOutOfRange { index: idx, len });
        }
        truth[idx] = true;
    }
    let (mut tp, mut fp, mut tn, mut fneg) = (0usize, 0usize, 0usize, 0usize);
    for (est, is_true) in estimated.iter().zip(&truth) {
        match (*est != 0.0, *is_true) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fneg += 1,
        }
    }
    let sensitivity = tp as f64 / (tp + fneg) as f64;
    // With no true negatives to protect, specificity is vacuously one.
    let specificity = if tn + fp == 0 {
        1.0
    } else {
        tn as f64 / (tn + fp) as f64
    };
    Ok(SupportMetrics {
        sensitivity,
        specificity,
        true_positives: tp,
        false_positives: fp,
        true_negatives: tn,
        false_negatives: fneg,
    })
}

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Fold-change edge enrichment: the module's internal edge density over the
/// whole graph's density.
pub fn fc_score(n_i: u64, m_i: u64, n_total: u64, m_total: u64) -> Result<f64> {
    if n_i < 2 {
        return Err(Error::InvalidArgument(format!(
            "module size {n_i} has no vertex pairs"
        )));
    }
    if n_total < 2 {
        return Err(Error::InvalidArgument("graph needs at least two vertices".into()));
    }
    if m_total == 0 {
        return Err(Error::InvalidArgument("background edge density is zero".into()));
    }
    let module_density = m_i as f64 / pairs(n_i) as f64;
    let background_density = m_total as f64 / pairs(n_total) as f64;
    Ok(module_density / background_density)
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Right tail `P(X >= observed)` for `X ~ Hypergeometric(population,
/// successes, draws)`, summed in log-gamma arithmetic.
pub fn hypergeom_right_tail(
    observed: u64,
    successes: u64,
    draws: u64,
    population: u64,
) -> Result<f64> {
    if observed > draws || draws > population || successes > population {
        return Err(Error::InvalidArgument(format!(
            "hypergeometric bounds violated: observed {observed} <= draws {draws} <= population {population}, successes {successes} <= population"
        )));
    }
    let hi = draws.min(successes);
    let lo = (draws + successes).saturating_sub(population);
    if observed <= lo {
        return Ok(1.0);
    }
    if observed > hi {
        return Ok(0.0);
    }
    let ln_den = ln_binomial(population, draws);
    let mut tail = 0.0;
    for k in observed..=hi {
        let ln_p = ln_binomial(successes, k) + ln_binomial(population - successes, draws - k) - ln_den;
        tail += ln_p.exp();
    }
    Ok(tail.min(1.0))
}

/// Edge enrichment of one module against a prior graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuleEnrichment {
    pub module_size: usize,
    pub internal_edges: usize,
    pub fc: f64,
    pub p_value: f64,
}

/// Counts the module's internal edges and computes its fold change plus the
/// right-tailed hypergeometric p-value, where the population is all vertex
/// pairs, successes are the graph's edges and draws are the module's pairs.
pub fn module_enrichment(module: &[usize], graph: &PriorGraph) -> Result<ModuleEnrichment> {
    let n_total = graph.n_vertices();
    let mut sorted = module.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != module.len() {
        return Err(Error::InvalidArgument("module contains duplicate vertices".into()));
    }
    if let Some(&bad) = sorted.iter().find(|&&v| v >= n_total) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: n_total,
        });
    }
    let mut member = vec![false; n_total];
    for &v in &sorted {
        member[v] = true;
    }
    let internal = graph
        .edges()
        .iter()
        .filter(|&&(i, j)| member[i as usize] && member[j as usize])
        .count();
    let fc = fc_score(
        sorted.len() as u64,
        internal as u64,
        n_total as u64,
        graph.edge_count() as u64,
    )?;
    let p_value = hypergeom_right_tail(
        internal as u64,
        graph.edge_count() as u64,
        pairs(sorted.len() as u64),
        pairs(n_total as u64),
    )?;
    Ok(ModuleEnrichment {
        module_size: sorted.len(),
        internal_edges: internal,
        fc,
        p_value,
    })
}

/// Permutation p-value for within-module correlation: the fraction of random
/// same-size row sets whose summed absolute pairwise Pearson correlation
/// meets or exceeds the module's, with the `+1/(n+1)` correction.
///
/// Trials draw their own ChaCha streams from seeds taken off `rng` up front,
/// so results do not depend on how the trials are scheduled.
pub fn module_correlation_excess(
    x: &DenseMatrix,
    module_rows: &[usize],
    n_permutations: usize,
    rng: &mut PortableRng,
) -> Result<f64> {
    let n = x.n_rows();
    let p = x.n_cols();
    let m = module_rows.len();
    if m < 2 {
        return Err(Error::InvalidArgument("module needs at least two rows".into()));
    }
    if n_permutations < 1 {
        return Err(Error::InvalidArgument("need at least one permutation".into()));
    }
    let mut sorted = module_rows.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != m {
        return Err(Error::InvalidArgument("module contains duplicate rows".into()));
    }
    if let Some(&bad) = sorted.iter().find(|&&r| r >= n) {
        return Err(Error::IndexOutOfRange { index: bad, len: n });
    }

    // Center every row once; any constant row has an undefined correlation.
    let mut centered = vec![0.0; n * p];
    let mut norms = vec![0.0; n];
    for i in 0..n {
        let row = x.row(i);
        let mean = row.iter().sum::<f64>() / p as f64;
        let c = &mut centered[i * p..(i + 1) * p];
        for (slot, &v) in c.iter_mut().zip(row) {
            *slot = v - mean;
        }
        let norm = l2_norm(c);
        if norm == 0.0 {
            return Err(Error::ConstantRow(i));
        }
        norms[i] = norm;
    }

    let stat = |rows: &[usize]| -> f64 {
        let mut s = 0.0;
        for (pos, &a) in rows.iter().enumerate() {
            let ca = &centered[a * p..(a + 1) * p];
            for &b in &rows[pos + 1..] {
                let cb = &centered[b * p..(b + 1) * p];
                s += (dot(ca, cb) / (norms[a] * norms[b])).abs();
            }
        }
        s
    };
    let observed = stat(module_rows);

    let trial_seeds: Vec<u64> = (0..n_permutations).map(|_| rng.next_u64()).collect();
    let run_trial = |seed: &u64| -> bool {
        let mut tr = rng::seeded(*seed);
        let subset = rand::seq::index::sample(&mut tr, n, m).into_vec();
        stat(&subset) >= observed
    };

    #[cfg(feature = "parallel")]
    let exceed = if n_permutations >= 64 {
        trial_seeds.par_iter().filter(|s| run_trial(s)).count()
    } else {
        trial_seeds.iter().filter(|s| run_trial(s)).count()
    };
    #[cfg(not(feature = "parallel"))]
    let exceed = trial_seeds.iter().filter(|s| run_trial(s)).count();

    Ok((1 + exceed) as f64 / (n_permutations + 1) as f64)
}
