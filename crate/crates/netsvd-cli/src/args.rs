//! Argument structs shared by the parser and the manifests. Each command's
//! args are the complete determinant of its outputs, which is what makes
//! manifest replay exact.

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(
    name = "netsvd",
    version,
    about = "Sparse network-regularized rank-one SVD pipelines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic benchmark dataset (matrix, prior graphs, truth).
    Simulate(SimulateArgs),
    /// Extract rank-one factors from a matrix, optionally graph-regularized.
    Fit(FitArgs),
    /// Score a factors file against ground truth and/or a prior graph.
    Evaluate(EvaluateArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Parser, Serialize, Deserialize, Clone, Debug)]
pub struct SimulateArgs {
    /// Number of rows.
    #[arg(long)]
    pub n: usize,
    /// Number of columns.
    #[arg(long)]
    pub p: usize,
    /// Nonzero count for both planted vectors (override per side below).
    #[arg(long)]
    pub support: Option<usize>,
    /// Nonzero count for the planted row vector.
    #[arg(long)]
    pub support_u: Option<usize>,
    /// Nonzero count for the planted column vector.
    #[arg(long)]
    pub support_v: Option<usize>,
    /// Noise scale; repeat the flag for a sweep (one dataset per value).
    #[arg(long, required = true)]
    pub gamma: Vec<f64>,
    /// Force the row vector all-positive and the column vector all-negative.
    #[arg(long, default_value_t = false)]
    pub same_sign: bool,
    /// Edge probability inside the planted block.
    #[arg(long, default_value_t = 0.3)]
    pub p11: f64,
    /// Edge probability for every other vertex pair.
    #[arg(long, default_value_t = 0.1)]
    pub p12: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

impl SimulateArgs {
    /// Per-side supports after applying the shared `--support` shorthand.
    pub fn resolved_supports(&self) -> CliResult<(usize, usize)> {
        let u = self
            .support_u
            .or(self.support)
            .ok_or_else(|| CliError::Usage("one of --support or --support-u is required".into()))?;
        let v = self
            .support_v
            .or(self.support)
            .ok_or_else(|| CliError::Usage("one of --support or --support-v is required".into()))?;
        if u > self.n {
            return Err(CliError::Usage(format!(
                "--support-u {u} exceeds --n {}",
                self.n
            )));
        }
        if v > self.p {
            return Err(CliError::Usage(format!(
                "--support-v {v} exceeds --p {}",
                self.p
            )));
        }
        for (name, prob) in [("--p11", self.p11), ("--p12", self.p12)] {
            if !(0.0..=1.0).contains(&prob) {
                return Err(CliError::Usage(format!("{name} must be in [0, 1]")));
            }
        }
        if self.gamma.iter().any(|g| *g < 0.0 || !g.is_finite()) {
            return Err(CliError::Usage("--gamma values must be nonnegative".into()));
        }
        Ok((u, v))
    }
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    /// L0 cardinality plus absolute-value graph smoothing.
    L0SgsvdStar,
    /// L1 soft threshold plus absolute-value graph smoothing.
    L1SgsvdStar,
    /// L0 cardinality plus signed graph smoothing (baseline).
    Sgsvd,
    /// Plain L0-sparse SVD, no graph terms.
    L0svd,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum DenominatorArg {
    /// No per-coordinate division; normalization absorbs scale.
    Pseudocode,
    /// Divide by eta + sigma * degree(k).
    Exact,
}

#[derive(Parser, Serialize, Deserialize, Clone, Debug)]
pub struct FitArgs {
    /// Input matrix (TSV).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Prior graph over rows (TSV edge list); absent means no row smoothing.
    #[arg(long)]
    pub row_graph: Option<PathBuf>,
    /// Prior graph over columns; absent means no column smoothing.
    #[arg(long)]
    pub col_graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    /// Cardinality bound for u (L0-style variants).
    #[arg(long = "ku")]
    pub k_u: Option<usize>,
    /// Cardinality bound for v (L0-style variants).
    #[arg(long = "kv")]
    pub k_v: Option<usize>,
    /// Soft threshold for u (L1 variant).
    #[arg(long)]
    pub lambda_u: Option<f64>,
    /// Soft threshold for v (L1 variant).
    #[arg(long)]
    pub lambda_v: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub sigma_u: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma_v: f64,
    /// Ridge multiplier for the exact denominator mode.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Number of factors to extract by deflation.
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    /// Use the degree-normalized Laplacian.
    #[arg(long, default_value_t = false)]
    pub normalized_laplacian: bool,
    #[arg(long, value_enum, default_value_t = DenominatorArg::Pseudocode)]
    pub denominator: DenominatorArg,
    /// Seed for random initialization; omitted means deterministic power
    /// iteration.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

impl FitArgs {
    pub fn solver_variant(&self) -> CliResult<netsvd::Variant> {
        let need_k = |name: &str| -> CliResult<(usize, usize)> {
            if self.lambda_u.is_some() || self.lambda_v.is_some() {
                return Err(CliError::Usage(format!(
                    "--lambda-u/--lambda-v do not apply to --variant {name}"
                )));
            }
            match (self.k_u, self.k_v) {
                (Some(u), Some(v)) => Ok((u, v)),
                _ => Err(CliError::Usage(format!(
                    "--variant {name} requires --ku and --kv"
                ))),
            }
        };
        match self.variant {
            VariantArg::L0SgsvdStar => {
                let (k_u, k_v) = need_k("l0-sgsvd-star")?;
                Ok(netsvd::Variant::L0SgSvdStar { k_u, k_v })
            }
            VariantArg::Sgsvd => {
                let (k_u, k_v) = need_k("sgsvd")?;
                Ok(netsvd::Variant::SgSvdClassic { k_u, k_v })
            }
            VariantArg::L0svd => {
                let (k_u, k_v) = need_k("l0svd")?;
                Ok(netsvd::Variant::L0Svd { k_u, k_v })
            }
            VariantArg::L1SgsvdStar => {
                if self.k_u.is_some() || self.k_v.is_some() {
                    return Err(CliError::Usage(
                        "--ku/--kv do not apply to --variant l1-sgsvd-star".into(),
                    ));
                }
                match (self.lambda_u, self.lambda_v) {
                    (Some(lambda_u), Some(lambda_v)) => {
                        Ok(netsvd::Variant::L1SgSvdStar { lambda_u, lambda_v })
                    }
                    _ => Err(CliError::Usage(
                        "--variant l1-sgsvd-star requires --lambda-u and --lambda-v".into(),
                    )),
                }
            }
        }
    }

    pub fn solver_config(&self) -> CliResult<netsvd::SolverConfig> {
        let mut cfg = netsvd::SolverConfig::new(self.solver_variant()?);
        cfg.sigma_u = self.sigma_u;
        cfg.sigma_v = self.sigma_v;
        cfg.eta = self.eta;
        cfg.epsilon = self.epsilon;
        cfg.max_iter = self.max_iter;
        cfg.denominator_mode = match self.denominator {
            DenominatorArg::Pseudocode => netsvd::DenominatorMode::AlgorithmPseudocode,
            DenominatorArg::Exact => netsvd::DenominatorMode::ExactKkt,
        };
        cfg.laplacian_mode = if self.normalized_laplacian {
            netsvd::LaplacianMode::Normalized
        } else {
            netsvd::LaplacianMode::Raw
        };
        cfg.init = match self.seed {
            Some(seed) => netsvd::Init::SeededRandom(seed),
            None => netsvd::Init::PowerIteration,
        };
        if self.rank < 1 {
            return Err(CliError::Usage("--rank must be at least 1".into()));
        }
        Ok(cfg)
    }
}

#[derive(Parser, Serialize, Deserialize, Clone, Debug)]
pub struct EvaluateArgs {
    /// Factors file produced by `fit`.
    #[arg(long)]
    pub factors: PathBuf,
    /// Ground-truth file from `simulate`; enables sensitivity/specificity.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Prior graph; enables edge-enrichment scoring of the u-supports.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Parser, Clone, Debug)]
pub struct ReplayArgs {
    /// Manifest written by a previous run.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Redirect outputs (defaults to the directory recorded in the manifest).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
