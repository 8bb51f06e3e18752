//! Synthetic benchmark data: planted sparse rank-one signal, Gaussian noise
//! at a controlled scale, and two-density block prior graphs.
//!
//! Everything is a pure function of the spec (seed included). One ChaCha8
//! stream seeded with `SimSpec::seed` is consumed in a fixed order:
//!
//! 1. `support_u` sign draws for the row signal vector;
//! 2. `support_v` sign draws for the column signal vector;
//! 3. `n * p` standard normals for the noise matrix, row-major (drawn even
//!    when `gamma = 0`, so the graphs below do not shift across gamma);
//! 4. one uniform per row-graph vertex pair, pairs `(i, j)` with `i < j` in
//!    lexicographic order;
//! 5. the same for the column graph.
//!
//! See [`crate::rng`] for the exact bit-level definition of each draw.

use crate::error::{Error, Result};
use crate::graph::PriorGraph;
use crate::matrix::DenseMatrix;
use crate::rng::{self, PortableRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    /// Nonzero signal entries are independent uniform signs.
    Mixed,
    /// Row vector forced all-positive, column vector all-negative.
    SameSign,
}

/// Which planted vector a signal draw is for; decides the forced sign under
/// [`SignMode::SameSign`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorRole {
    Row,
    Column,
}

/// Full description of one synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSpec {
    pub n: usize,
    pub p: usize,
    pub support_u: usize,
    pub support_v: usize,
    /// Noise scale; the observed matrix is `u vᵀ + gamma * eps`.
    pub gamma: f64,
    pub sign_mode: SignMode,
    /// Edge probability inside the planted block.
    pub p11: f64,
    /// Edge probability for every other vertex pair.
    pub p12: f64,
    pub seed: u64,
}

impl SimSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::InvalidArgument("dimensions must be positive".into()));
        }
        if self.support_u > self.n || self.support_v > self.p {
            return Err(Error::InvalidArgument(format!(
                "supports ({}, {}) exceed dimensions ({}, {})",
                self.support_u, self.support_v, self.n, self.p
            )));
        }
        if self.gamma.is_nan() || self.gamma < 0.0 || !self.gamma.is_finite() {
            return Err(Error::InvalidArgument("gamma must be nonnegative".into()));
        }
        for (name, p) in [("p11", self.p11), ("p12", self.p12)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("{name} must be in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Planted factors and their supports.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub u_true: Vec<f64>,
    pub v_true: Vec<f64>,
    pub support_u_idx: Vec<usize>,
    pub support_v_idx: Vec<usize>,
}

/// Unit-norm signal vector: `support` leading nonzero coordinates, zeros
/// after. Sign draws are consumed in both modes so streams stay aligned.
pub fn gen_signal_vector(
    dim: usize,
    support: usize,
    sign_mode: SignMode,
    role: VectorRole,
    rng: &mut PortableRng,
) -> Result<Vec<f64>> {
    if support > dim {
        return Err(Error::InvalidArgument(format!(
            "support {support} exceeds dimension {dim}"
        )));
    }
    let mut v = vec![0.0; dim];
    for slot in v.iter_mut().take(support) {
        let s = rng::pm_one(rng);
        *slot = match (sign_mode, role) {
            (SignMode::Mixed, _) => s,
            (SignMode::SameSign, VectorRole::Row) => s.abs(),
            (SignMode::SameSign, VectorRole::Column) => -s.abs(),
        };
    }
    if support > 0 {
        let norm = (support as f64).sqrt();
        for slot in v.iter_mut().take(support) {
            *slot /= norm;
        }
    }
    Ok(v)
}

/// Two-probability random graph: pairs entirely inside the leading
/// `support` block connect with `p11`, every other pair with `p12`.
pub fn gen_block_graph(
    dim: usize,
    support: usize,
    p11: f64,
    p12: f64,
    rng: &mut PortableRng,
) -> Result<PriorGraph> {
    for (name, p) in [("p11", p11), ("p12", p12)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("{name} must be in [0, 1]")));
        }
    }
    let mut edges = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let prob = if i < support && j < support { p11 } else { p12 };
            if rng::unit_open(rng) < prob {
                edges.push((i, j));
            }
        }
    }
    PriorGraph::new(dim, &edges)
}

/// One full dataset: observed matrix, planted truth, and the two prior
/// graphs, all determined by the spec.
pub fn gen_dataset(spec: &SimSpec) -> Result<(DenseMatrix, GroundTruth, PriorGraph, PriorGraph)> {
    spec.validate()?;
    let mut r = rng::seeded(spec.seed);
    let u_true = gen_signal_vector(spec.n, spec.support_u, spec.sign_mode, VectorRole::Row, &mut r)?;
    let v_true =
        gen_signal_vector(spec.p, spec.support_v, spec.sign_mode, VectorRole::Column, &mut r)?;

    let mut values = Vec::with_capacity(spec.n * spec.p);
    for &ui in &u_true {
        for &vj in &v_true {
            let eps = rng::standard_normal(&mut r);
            values.push(ui * vj + spec.gamma * eps);
        }
    }
    let x = DenseMatrix::new(spec.n, spec.p, values)?;

    let g_rows = gen_block_graph(spec.n, spec.support_u, spec.p11, spec.p12, &mut r)?;
    let g_cols = gen_block_graph(spec.p, spec.support_v, spec.p11, spec.p12, &mut r)?;

    let truth = GroundTruth {
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
    };
    Ok((x, truth, g_rows, g_cols))
}
