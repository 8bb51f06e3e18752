//! Run manifests: the exact arguments plus a resolved-configuration echo,
//! written next to every command's outputs. `replay` deserializes one and
//! re-executes it.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::args::{DenominatorArg, EvaluateArgs, FitArgs, SimulateArgs, VariantArg};
use crate::error::{CliError, CliResult};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    #[serde(flatten)]
    pub command: ManifestCommand,
    /// Files the run writes into its output directory.
    pub outputs: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum ManifestCommand {
    Simulate {
        args: SimulateArgs,
        resolved: Vec<SimSpecDoc>,
    },
    Fit {
        args: FitArgs,
        resolved: FitConfigDoc,
    },
    Evaluate {
        args: EvaluateArgs,
    },
}

/// Readable echo of one resolved dataset spec.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SimSpecDoc {
    pub n: usize,
    pub p: usize,
    pub support_u: usize,
    pub support_v: usize,
    pub gamma: f64,
    pub sign_mode: String,
    pub p11: f64,
    pub p12: f64,
    pub seed: u64,
}

/// Readable echo of the resolved solver configuration.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FitConfigDoc {
    pub variant: VariantArg,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_u: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_v: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_v: Option<f64>,
    pub sigma_u: f64,
    pub sigma_v: f64,
    pub eta: f64,
    pub denominator: DenominatorArg,
    pub normalized_laplacian: bool,
    pub epsilon: f64,
    pub max_iter: usize,
    pub rank: usize,
    /// `power-iteration` or `seeded-random:<seed>`.
    pub init: String,
}

impl RunManifest {
    pub fn new(command: ManifestCommand, outputs: Vec<String>) -> Self {
        Self {
            tool: "netsvd".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            outputs,
        }
    }

    pub fn save(&self, dir: &Path) -> CliResult<()> {
        let path = dir.join(MANIFEST_NAME);
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::format(&path, e.to_string()))?;
        text.push('\n');
        fs::write(&path, text).map_err(CliError::io(&path))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        serde_json::from_str(&text).map_err(|e| CliError::format(path, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    #[test]
    fn manifest_json_round_trip() {
        let args = EvaluateArgs {
            factors: PathBuf::from("factors.tsv"),
            truth: None,
            graph: Some(PathBuf::from("g.tsv")),
            out_dir: PathBuf::from("out"),
        };
        let m = RunManifest::new(
            ManifestCommand::Evaluate { args },
            vec!["report.tsv".into()],
        );
        let dir = tempfile::tempdir().unwrap();
        m.save(dir.path()).unwrap();
        let back = RunManifest::load(&dir.path().join(MANIFEST_NAME)).unwrap();
        match back.command {
            ManifestCommand::Evaluate { args } => {
                assert_eq!(args.factors, PathBuf::from("factors.tsv"));
                assert_eq!(args.graph, Some(PathBuf::from("g.tsv")));
            }
            _ => panic!("wrong command"),
        }
        assert_eq!(back.version, env!("CARGO_PKG_VERSION"));
    }
}
