//! Extracted rank-one factor.

/// One rank-one factor `(u, v, d)` with `||u||_2 = ||v||_2 = 1` and `d >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorTriple {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub d: f64,
}

impl FactorTriple {
    /// Indices of the nonzero coordinates of `u`.
    pub fn support_u(&self) -> Vec<usize> {
        support(&self.u)
    }

    /// Indices of the nonzero coordinates of `v`.
    pub fn support_v(&self) -> Vec<usize> {
        support(&self.v)
    }
}

fn support(x: &[f64]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, _)| i)
        .collect()
}
