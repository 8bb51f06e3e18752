//! The three pipeline stages plus manifest replay.

use std::fs;
use std::path::{Path, PathBuf};

use netsvd::deflation::fit_rank_k;
use netsvd::evaluate::{module_enrichment, support_metrics};
use netsvd::simulate::{gen_dataset, GroundTruth, SignMode, SimSpec};
use netsvd::{Error as NetsvdError, PriorGraph};

use crate::args::{EvaluateArgs, FitArgs, ReplayArgs, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::formats;
use crate::manifest::{FitConfigDoc, ManifestCommand, RunManifest, SimSpecDoc};

pub const REPORT_LEVELS: [f64; 5] = [0.10, 0.05, 0.01, 0.005, 0.001];

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

pub fn run_simulate(args: &SimulateArgs) -> CliResult<()> {
    let (support_u, support_v) = args.resolved_supports()?;
    let sign_mode = if args.same_sign {
        SignMode::SameSign
    } else {
        SignMode::Mixed
    };
    ensure_dir(&args.out_dir)?;
    let multi = args.gamma.len() > 1;
    let mut resolved = Vec::new();
    let mut outputs = Vec::new();
    for &gamma in &args.gamma {
        let spec = SimSpec {
            n: args.n,
            p: args.p,
            support_u,
            support_v,
            gamma,
            sign_mode,
            p11: args.p11,
            p12: args.p12,
            seed: args.seed,
        };
        let (x, truth, g_rows, g_cols) = gen_dataset(&spec)?;
        let (dir, prefix) = if multi {
            let sub = format!("gamma_{}", gamma);
            let dir = args.out_dir.join(&sub);
            ensure_dir(&dir)?;
            (dir, format!("{sub}/"))
        } else {
            (args.out_dir.clone(), String::new())
        };
        formats::write_matrix(&dir.join("matrix.tsv"), &x)?;
        formats::write_graph(&dir.join("row_graph.tsv"), &g_rows)?;
        formats::write_graph(&dir.join("col_graph.tsv"), &g_cols)?;
        formats::write_truth(&dir.join("truth.tsv"), &truth)?;
        for name in ["matrix.tsv", "row_graph.tsv", "col_graph.tsv", "truth.tsv"] {
            outputs.push(format!("{prefix}{name}"));
        }
        resolved.push(SimSpecDoc {
            n: spec.n,
            p: spec.p,
            support_u,
            support_v,
            gamma,
            sign_mode: match sign_mode {
                SignMode::Mixed => "mixed".into(),
                SignMode::SameSign => "same-sign".into(),
            },
            p11: spec.p11,
            p12: spec.p12,
            seed: spec.seed,
        });
    }
    RunManifest::new(
        ManifestCommand::Simulate {
            args: args.clone(),
            resolved,
        },
        outputs,
    )
    .save(&args.out_dir)
}

pub fn run_fit(args: &FitArgs) -> CliResult<()> {
    let cfg = args.solver_config()?;
    let x = formats::read_matrix(&args.matrix)?;
    let g_rows = match &args.row_graph {
        Some(path) => formats::read_graph(path)?,
        None => PriorGraph::empty(x.n_rows()),
    };
    let g_cols = match &args.col_graph {
        Some(path) => formats::read_graph(path)?,
        None => PriorGraph::empty(x.n_cols()),
    };
    let series = fit_rank_k(&x, &g_rows, &g_cols, &cfg, args.rank)?;
    for (k, trace) in series.traces.iter().enumerate() {
        if !trace.converged {
            eprintln!(
                "warning: factor {k} did not converge within {} iterations",
                cfg.max_iter
            );
        }
    }
    ensure_dir(&args.out_dir)?;
    formats::write_factors(&args.out_dir.join("factors.tsv"), &series, x.n_rows(), x.n_cols())?;
    formats::write_traces(&args.out_dir.join("traces.tsv"), &series)?;
    let resolved = FitConfigDoc {
        variant: args.variant,
        k_u: args.k_u,
        k_v: args.k_v,
        lambda_u: args.lambda_u,
        lambda_v: args.lambda_v,
        sigma_u: args.sigma_u,
        sigma_v: args.sigma_v,
        eta: args.eta,
        denominator: args.denominator,
        normalized_laplacian: args.normalized_laplacian,
        epsilon: args.epsilon,
        max_iter: args.max_iter,
        rank: args.rank,
        init: match args.seed {
            Some(seed) => format!("seeded-random:{seed}"),
            None => "power-iteration".into(),
        },
    };
    RunManifest::new(
        ManifestCommand::Fit {
            args: args.clone(),
            resolved,
        },
        vec!["factors.tsv".into(), "traces.tsv".into()],
    )
    .save(&args.out_dir)
}

struct ReportRow {
    label: String,
    cells: [Option<f64>; 8],
}

const REPORT_HEADER: &str = "row\tsens_u\tspec_u\tsens_v\tspec_v\tmodule_size\tinternal_edges\tfc\tp_value";

fn render_report(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.label);
        for cell in &row.cells {
            out.push('\t');
            match cell {
                Some(v) => out.push_str(&format!("{}", v)),
                None => out.push_str("NA"),
            }
        }
        out.push('\n');
    }
    out
}

pub fn run_evaluate(args: &EvaluateArgs) -> CliResult<()> {
    if args.truth.is_none() && args.graph.is_none() {
        return Err(CliError::Usage(
            "nothing to evaluate: pass --truth and/or --graph".into(),
        ));
    }
    let factors = formats::read_factors(&args.factors)?;
    let truth: Option<GroundTruth> = match &args.truth {
        Some(path) => Some(formats::read_truth(path)?),
        None => None,
    };
    let graph = match &args.graph {
        Some(path) => Some(formats::read_graph(path)?),
        None => None,
    };
    if let Some(g) = &graph {
        if g.n_vertices() != factors.n_rows {
            return Err(CliError::Numeric(NetsvdError::DimensionMismatch(format!(
                "graph has {} vertices, factors have {} rows",
                g.n_vertices(),
                factors.n_rows
            ))));
        }
    }
    if let Some(t) = &truth {
        if t.u_true.len() != factors.n_rows || t.v_true.len() != factors.n_cols {
            return Err(CliError::Numeric(NetsvdError::DimensionMismatch(format!(
                "truth is {}x{}, factors are {}x{}",
                t.u_true.len(),
                t.v_true.len(),
                factors.n_rows,
                factors.n_cols
            ))));
        }
    }

    let mut rows = Vec::new();
    let mut p_values = Vec::new();
    for (k, factor) in factors.factors.iter().enumerate() {
        let mut cells: [Option<f64>; 8] = [None; 8];
        if let Some(t) = &truth {
            let mu = support_metrics(&factor.u, &t.support_u_idx)
                .map_err(|e| at_factor(k, e))?;
            let mv = support_metrics(&factor.v, &t.support_v_idx)
                .map_err(|e| at_factor(k, e))?;
            cells[0] = Some(mu.sensitivity);
            cells[1] = Some(mu.specificity);
            cells[2] = Some(mv.sensitivity);
            cells[3] = Some(mv.specificity);
        }
        if let Some(g) = &graph {
            let e = module_enrichment(&factor.support_u(), g).map_err(|e| at_factor(k, e))?;
            cells[4] = Some(e.module_size as f64);
            cells[5] = Some(e.internal_edges as f64);
            cells[6] = Some(e.fc);
            cells[7] = Some(e.p_value);
            p_values.push(e.p_value);
        }
        rows.push(ReportRow {
            label: k.to_string(),
            cells,
        });
    }

    // Column means over the per-factor rows.
    let mut mean_cells: [Option<f64>; 8] = [None; 8];
    for (c, slot) in mean_cells.iter_mut().enumerate() {
        let vals: Vec<f64> = rows.iter().filter_map(|r| r.cells[c]).collect();
        if !vals.is_empty() {
            *slot = Some(vals.iter().sum::<f64>() / vals.len() as f64);
        }
    }
    rows.push(ReportRow {
        label: "mean".into(),
        cells: mean_cells,
    });
    if !p_values.is_empty() {
        for level in REPORT_LEVELS {
            let frac = p_values.iter().filter(|p| **p < level).count() as f64
                / p_values.len() as f64;
            let mut cells: [Option<f64>; 8] = [None; 8];
            cells[7] = Some(frac);
            rows.push(ReportRow {
                label: format!("frac_p_lt_{}", level),
                cells,
            });
        }
    }

    ensure_dir(&args.out_dir)?;
    let report = render_report(&rows);
    fs::write(args.out_dir.join("report.tsv"), report)
        .map_err(CliError::io(args.out_dir.join("report.tsv")))?;
    RunManifest::new(
        ManifestCommand::Evaluate { args: args.clone() },
        vec!["report.tsv".into()],
    )
    .save(&args.out_dir)
}

fn at_factor(index: usize, source: NetsvdError) -> CliError {
    CliError::Numeric(NetsvdError::AtFactor {
        index,
        source: Box::new(source),
    })
}

pub fn run_replay(args: &ReplayArgs) -> CliResult<()> {
    let manifest = RunManifest::load(&args.manifest)?;
    let override_dir = |dir: &mut PathBuf| {
        if let Some(out) = &args.out_dir {
            *dir = out.clone();
        }
    };
    match manifest.command {
        ManifestCommand::Simulate { mut args, .. } => {
            override_dir(&mut args.out_dir);
            run_simulate(&args)
        }
        ManifestCommand::Fit { mut args, .. } => {
            override_dir(&mut args.out_dir);
            run_fit(&args)
        }
        ManifestCommand::Evaluate { mut args } => {
            override_dir(&mut args.out_dir);
            run_evaluate(&args)
        }
    }
}
