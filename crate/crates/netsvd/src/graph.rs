//! Undirected simple graphs used as smoothness priors.
//!
//! The graph Laplacian `L = D - A` is never materialized: every consumer
//! works through per-vertex neighbor sums over adjacency lists, so costs
//! scale with the edge count. The normalized form
//! `D^(-1/2) L D^(-1/2)` is realized by reweighting each edge `(i, j)` as
//! `1/sqrt(d_i * d_j)` and replacing diagonal degrees by 1 (0 for isolated
//! vertices).

use crate::error::{Error, Result};

/// Selects between the raw Laplacian and its degree-normalized form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaplacianMode {
    #[default]
    Raw,
    Normalized,
}

/// Undirected simple graph: no self-loops, no duplicate edges, unweighted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorGraph {
    n_vertices: usize,
    /// Canonical edge list, each edge stored once as (i, j) with i < j,
    /// sorted lexicographically.
    edges: Vec<(u32, u32)>,
    /// Bidirectional adjacency, each list sorted ascending.
    adjacency: Vec<Vec<u32>>,
}

impl PriorGraph {
    pub fn new(n_vertices: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            if a == b {
                return Err(Error::InvalidEdge {
                    i: a,
                    j: b,
                    reason: "self-loop".into(),
                });
            }
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::InvalidEdge {
                    i: a,
                    j: b,
                    reason: format!("vertex out of range for {} vertices", n_vertices),
                });
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            edges.push((i as u32, j as u32));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge {
                i: w[0].0 as usize,
                j: w[0].1 as usize,
                reason: "duplicate edge".into(),
            });
        }
        let mut adjacency = vec![Vec::new(); n_vertices];
        for &(i, j) in &edges {
            adjacency[i as usize].push(j);
            adjacency[j as usize].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            n_vertices,
            edges,
            adjacency,
        })
    }

    /// Graph with vertices but no edges (all smoothing terms vanish).
    pub fn empty(n_vertices: usize) -> Self {
        Self {
            n_vertices,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n_vertices],
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: each undirected edge once, `i < j`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degree(&self, k: usize) -> usize {
        self.adjacency[k].len()
    }

    pub fn neighbors(&self, k: usize) -> &[u32] {
        &self.adjacency[k]
    }

    /// Diagonal of the selected Laplacian: the vertex degree in raw mode, and
    /// 1 (or 0 for isolated vertices) in normalized mode.
    pub fn normalized_degree(&self, k: usize, mode: LaplacianMode) -> f64 {
        let d = self.adjacency[k].len();
        match mode {
            LaplacianMode::Raw => d as f64,
            LaplacianMode::Normalized => {
                if d > 0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Weighted sum of `x` over the neighbors of `k`: weight 1 in raw mode,
    /// `1/sqrt(d_k * d_j)` in normalized mode.
    pub fn neighbor_sum(&self, x: &[f64], k: usize, mode: LaplacianMode) -> Result<f64> {
        if k >= self.n_vertices {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.n_vertices,
            });
        }
        if x.len() != self.n_vertices {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} != {} vertices",
                x.len(),
                self.n_vertices
            )));
        }
        Ok(self.neighbor_sum_unchecked(x, k, mode))
    }

    pub(crate) fn neighbor_sum_unchecked(&self, x: &[f64], k: usize, mode: LaplacianMode) -> f64 {
        let nbrs = &self.adjacency[k];
        match mode {
            LaplacianMode::Raw => nbrs.iter().map(|&j| x[j as usize]).sum(),
            LaplacianMode::Normalized => {
                let dk = nbrs.len() as f64;
                nbrs.iter()
                    .map(|&j| x[j as usize] / (dk * self.adjacency[j as usize].len() as f64).sqrt())
                    .sum()
            }
        }
    }

    /// `L x` for the raw Laplacian, computed from the edge list in
    /// O(|edges| + n).
    pub fn laplacian_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_vertices {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} != {} vertices",
                x.len(),
                self.n_vertices
            )));
        }
        let mut out: Vec<f64> = (0..self.n_vertices)
            .map(|k| self.adjacency[k].len() as f64 * x[k])
            .collect();
        for &(i, j) in &self.edges {
            out[i as usize] -= x[j as usize];
            out[j as usize] -= x[i as usize];
        }
        Ok(out)
    }

    /// Quadratic form `xᵀ L x` of the selected Laplacian, evaluated as a sum
    /// of squared (scaled) differences over the edges.
    pub fn quadratic_form(&self, x: &[f64], mode: LaplacianMode) -> Result<f64> {
        if x.len() != self.n_vertices {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} != {} vertices",
                x.len(),
                self.n_vertices
            )));
        }
        let total = match mode {
            LaplacianMode::Raw => self
                .edges
                .iter()
                .map(|&(i, j)| {
                    let diff = x[i as usize] - x[j as usize];
                    diff * diff
                })
                .sum(),
            LaplacianMode::Normalized => self
                .edges
                .iter()
                .map(|&(i, j)| {
                    let di = self.adjacency[i as usize].len() as f64;
                    let dj = self.adjacency[j as usize].len() as f64;
                    let diff = x[i as usize] / di.sqrt() - x[j as usize] / dj.sqrt();
                    diff * diff
                })
                .sum(),
        };
        Ok(total)
    }
}
