//! TSV readers and writers. Every writer has a matching reader and the pair
//! round-trips exactly.
//!
//! * matrix: header `#<rows>\t<cols>`, then one tab-separated row per line;
//! * graph: header `#vertices\t<N>`, then one `i\tj` edge per line (0-based,
//!   each undirected edge once);
//! * truth: header `#truth\t<n>\t<p>`, then sparse lines `u\t<idx>\t<val>`
//!   and `v\t<idx>\t<val>`;
//! * factors: header `#factors\t<count>\t<n>\t<p>`, then per factor a line
//!   `factor <k> d=<value> converged=<bool>` followed by its sparse `u` and
//!   `v` entries;
//! * traces: header `#traces\t<count>`, then `factor\titer\td` lines.
//!
//! Values are printed with 17 significant digits (`{:.16e}`), which is
//! lossless for f64.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use netsvd::deflation::FactorSeries;
use netsvd::simulate::GroundTruth;
use netsvd::{DenseMatrix, FactorTriple, PriorGraph};

use crate::error::{CliError, CliResult};

fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(CliError::io(path))
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(CliError::io(path))
}

fn parse<T: std::str::FromStr>(path: &Path, line_no: usize, token: &str, what: &str) -> CliResult<T> {
    token.parse().map_err(|_| {
        CliError::format(
            path,
            format!("line {}: cannot parse {} from {token:?}", line_no + 1, what),
        )
    })
}

pub fn write_matrix(path: &Path, x: &DenseMatrix) -> CliResult<()> {
    let mut out = String::new();
    let _ = writeln!(out, "#{}\t{}", x.n_rows(), x.n_cols());
    for i in 0..x.n_rows() {
        let row = x.row(i);
        let mut line = String::with_capacity(row.len() * 24);
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push('\t');
            }
            line.push_str(&fmt_f64(*v));
        }
        out.push_str(&line);
        out.push('\n');
    }
    write_file(path, &out)
}

pub fn read_matrix(path: &Path) -> CliResult<DenseMatrix> {
    let text = read_file(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::format(path, "empty file"))?;
    let dims = header
        .strip_prefix('#')
        .ok_or_else(|| CliError::format(path, "missing '#rows\\tcols' header"))?;
    let mut parts = dims.split('\t');
    let n_rows: usize = parse(path, 0, parts.next().unwrap_or(""), "row count")?;
    let n_cols: usize = parse(path, 0, parts.next().unwrap_or(""), "column count")?;
    let mut values = Vec::with_capacity(n_rows * n_cols);
    for (line_no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let before = values.len();
        for token in line.split('\t') {
            values.push(parse::<f64>(path, line_no, token, "matrix entry")?);
        }
        let row_len = values.len() - before;
        if row_len != n_cols {
            return Err(CliError::format(
                path,
                format!("line {}: {} values in a {}-column matrix", line_no + 1, row_len, n_cols),
            ));
        }
    }
    DenseMatrix::new(n_rows, n_cols, values)
        .map_err(|e| CliError::format(path, e.to_string()))
}

pub fn write_graph(path: &Path, g: &PriorGraph) -> CliResult<()> {
    let mut out = String::new();
    let _ = writeln!(out, "#vertices\t{}", g.n_vertices());
    for &(i, j) in g.edges() {
        let _ = writeln!(out, "{}\t{}", i, j);
    }
    write_file(path, &out)
}

pub fn read_graph(path: &Path) -> CliResult<PriorGraph> {
    let text = read_file(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::format(path, "empty file"))?;
    let n: usize = header
        .strip_prefix("#vertices\t")
        .ok_or_else(|| CliError::format(path, "missing '#vertices\\tN' header"))
        .and_then(|t| parse(path, 0, t, "vertex count"))?;
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let i: usize = parse(path, line_no, parts.next().unwrap_or(""), "edge endpoint")?;
        let j: usize = parse(path, line_no, parts.next().unwrap_or(""), "edge endpoint")?;
        edges.push((i, j));
    }
    PriorGraph::new(n, &edges).map_err(|e| CliError::format(path, e.to_string()))
}

fn push_sparse(out: &mut String, tag: &str, dense: &[f64]) {
    for (idx, v) in dense.iter().enumerate() {
        if *v != 0.0 {
            let _ = writeln!(out, "{}\t{}\t{}", tag, idx, fmt_f64(*v));
        }
    }
}

pub fn write_truth(path: &Path, truth: &GroundTruth) -> CliResult<()> {
    let mut out = String::new();
    let _ = writeln!(out, "#truth\t{}\t{}", truth.u_true.len(), truth.v_true.len());
    push_sparse(&mut out, "u", &truth.u_true);
    push_sparse(&mut out, "v", &truth.v_true);
    write_file(path, &out)
}

pub fn read_truth(path: &Path) -> CliResult<GroundTruth> {
    let text = read_file(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::format(path, "empty file"))?;
    let rest = header
        .strip_prefix("#truth\t")
        .ok_or_else(|| CliError::format(path, "missing '#truth\\tn\\tp' header"))?;
    let mut parts = rest.split('\t');
    let n: usize = parse(path, 0, parts.next().unwrap_or(""), "row dimension")?;
    let p: usize = parse(path, 0, parts.next().unwrap_or(""), "column dimension")?;
    let mut u_true = vec![0.0; n];
    let mut v_true = vec![0.0; p];
    for (line_no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let tag = parts.next().unwrap_or("");
        let idx: usize = parse(path, line_no, parts.next().unwrap_or(""), "index")?;
        let val: f64 = parse(path, line_no, parts.next().unwrap_or(""), "value")?;
        let slot = match tag {
            "u" => u_true.get_mut(idx),
            "v" => v_true.get_mut(idx),
            other => {
                return Err(CliError::format(
                    path,
                    format!("line {}: unknown tag {other:?}", line_no + 1),
                ))
            }
        };
        match slot {
            Some(s) => *s = val,
            None => {
                return Err(CliError::format(
                    path,
                    format!("line {}: index {idx} out of range", line_no + 1),
                ))
            }
        }
    }
    Ok(GroundTruth {
        support_u_idx: u_true
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| i)
            .collect(),
        support_v_idx: v_true
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| i)
            .collect(),
        u_true,
        v_true,
    })
}

/// Factors plus per-factor convergence flags and the matrix shape they were
/// fit on.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorsFile {
    pub n_rows: usize,
    pub n_cols: usize,
    pub factors: Vec<FactorTriple>,
    pub converged: Vec<bool>,
}

pub fn write_factors(path: &Path, series: &FactorSeries, n_rows: usize, n_cols: usize) -> CliResult<()> {
    let mut out = String::new();
    let _ = writeln!(out, "#factors\t{}\t{}\t{}", series.factors.len(), n_rows, n_cols);
    for (k, (factor, trace)) in series.factors.iter().zip(&series.traces).enumerate() {
        let _ = writeln!(
            out,
            "factor {} d={} converged={}",
            k,
            fmt_f64(factor.d),
            trace.converged
        );
        push_sparse(&mut out, "u", &factor.u);
        push_sparse(&mut out, "v", &factor.v);
    }
    write_file(path, &out)
}

pub fn read_factors(path: &Path) -> CliResult<FactorsFile> {
    let text = read_file(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::format(path, "empty file"))?;
    let rest = header
        .strip_prefix("#factors\t")
        .ok_or_else(|| CliError::format(path, "missing '#factors\\tcount\\tn\\tp' header"))?;
    let mut parts = rest.split('\t');
    let count: usize = parse(path, 0, parts.next().unwrap_or(""), "factor count")?;
    let n_rows: usize = parse(path, 0, parts.next().unwrap_or(""), "row dimension")?;
    let n_cols: usize = parse(path, 0, parts.next().unwrap_or(""), "column dimension")?;

    let mut file = FactorsFile {
        n_rows,
        n_cols,
        factors: Vec::with_capacity(count),
        converged: Vec::with_capacity(count),
    };
    for (line_no, line) in lines {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("factor ") {
            let mut parts = rest.split(' ');
            let _index: usize = parse(path, line_no, parts.next().unwrap_or(""), "factor index")?;
            let d: f64 = parts
                .next()
                .and_then(|t| t.strip_prefix("d="))
                .ok_or_else(|| CliError::format(path, format!("line {}: missing d=", line_no + 1)))
                .and_then(|t| parse(path, line_no, t, "singular value"))?;
            let converged: bool = parts
                .next()
                .and_then(|t| t.strip_prefix("converged="))
                .ok_or_else(|| {
                    CliError::format(path, format!("line {}: missing converged=", line_no + 1))
                })
                .and_then(|t| parse(path, line_no, t, "converged flag"))?;
            file.factors.push(FactorTriple {
                u: vec![0.0; n_rows],
                v: vec![0.0; n_cols],
                d,
            });
            file.converged.push(converged);
            continue;
        }
        let mut parts = line.split('\t');
        let tag = parts.next().unwrap_or("");
        let idx: usize = parse(path, line_no, parts.next().unwrap_or(""), "index")?;
        let val: f64 = parse(path, line_no, parts.next().unwrap_or(""), "value")?;
        let factor = file.factors.last_mut().ok_or_else(|| {
            CliError::format(path, format!("line {}: entry before any factor", line_no + 1))
        })?;
        let slot = match tag {
            "u" => factor.u.get_mut(idx),
            "v" => factor.v.get_mut(idx),
            other => {
                return Err(CliError::format(
                    path,
                    format!("line {}: unknown tag {other:?}", line_no + 1),
                ))
            }
        };
        match slot {
            Some(s) => *s = val,
            None => {
                return Err(CliError::format(
                    path,
                    format!("line {}: index {idx} out of range", line_no + 1),
                ))
            }
        }
    }
    if file.factors.len() != count {
        return Err(CliError::format(
            path,
            format!("expected {count} factors, found {}", file.factors.len()),
        ));
    }
    Ok(file)
}

pub fn write_traces(path: &Path, series: &FactorSeries) -> CliResult<()> {
    let mut out = String::new();
    let _ = writeln!(out, "#traces\t{}", series.traces.len());
    for (k, trace) in series.traces.iter().enumerate() {
        for (iter, d) in trace.d_history.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\t{}", k, iter, fmt_f64(*d));
        }
    }
    write_file(path, &out)
}
