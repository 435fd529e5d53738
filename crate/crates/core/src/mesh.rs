//! Uniform mesh on `[0, 1]`, sampled functions, and running Simpson integrals.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Smallest accepted node count.
pub const MIN_NODES: usize = 257;
/// Node count used when nothing else is configured.
pub const DEFAULT_NODES: usize = 2049;

/// Uniform grid on `[0, 1]` with an odd number of nodes (composite Simpson).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    spacing: f64,
}

impl Grid {
    pub fn uniform(len: usize) -> Result<Self> {
        if len < MIN_NODES || len % 2 == 0 {
            return Err(Error::Validation(format!(
                "grid needs an odd node count >= {MIN_NODES}, got {len}"
            )));
        }
        let panels = (len - 1) as f64;
        let spacing = 1.0 / panels;
        let nodes: Vec<f64> = (0..len).map(|k| k as f64 / panels).collect();
        let weights = (0..len)
            .map(|k| {
                let w = if k == 0 || k == len - 1 {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * spacing / 3.0
            })
            .collect();
        Ok(Self { nodes, weights, spacing })
    }

    pub fn shared(len: usize) -> Result<Arc<Self>> {
        Self::uniform(len).map(Arc::new)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Composite Simpson approximation of `∫₀¹ f`.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values.len())?;
        Ok(values.iter().zip(&self.weights).map(|(f, w)| f * w).sum())
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::Contract(format!(
                "sampled function has {len} values, grid has {} nodes",
                self.len()
            )));
        }
        Ok(())
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }
}

/// Values and first derivatives of a function at every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Arc<Grid>,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>, derivs: Vec<f64>) -> Result<Self> {
        grid.check_len(values.len())?;
        grid.check_len(derivs.len())?;
        if let Some(k) = values.iter().chain(&derivs).position(|v| !v.is_finite()) {
            return Err(Error::Contract(format!("non-finite sample at flat index {k}")));
        }
        Ok(Self { grid, values, derivs })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        Self { grid, values: vec![0.0; n], derivs: vec![0.0; n] }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.values, self.derivs)
    }
}

/// Running integral `F[k] ≈ ∫₀^{x_k} f` with `F[0] = 0`.
///
/// Even nodes use composite Simpson; each odd node adds the integral of the
/// local cubic over its half panel, so every entry is fourth-order accurate
/// and the last entry equals [`Grid::integrate`].
pub fn cumulative_integral(values: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    grid.check_len(values.len())?;
    let n = values.len();
    let h = grid.spacing();
    let f = values;
    let mut out = vec![0.0; n];
    let mut even = 0.0;
    for j in 0..(n - 1) / 2 {
        let k = 2 * j;
        let half = if j == 0 {
            h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
        } else {
            h / 24.0 * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2])
        };
        out[k + 1] = even + half;
        even += h / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
        out[k + 2] = even;
    }
    Ok(out)
}

/// `max_k |f_k - g_k| + |f'_k - g'_k|`.
pub fn max_abs_combined(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    if f.grid.len() != g.grid.len() {
        return Err(Error::Contract(format!(
            "grid mismatch: {} vs {} nodes",
            f.grid.len(),
            g.grid.len()
        )));
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(f.derivs.iter().zip(&g.derivs))
        .map(|((a, b), (da, db))| (a - b).abs() + (da - db).abs())
        .fold(0.0, f64::max))
}

/// Fourth-order first derivative of nodal values with spacing `h`; five-point
/// one-sided stencils at the two nodes nearest each end.
pub fn derivative_fourth_order(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let e = values;
    let c = 1.0 / (12.0 * h);
    let mut out = vec![0.0; n];
    if n < 5 {
        return out;
    }
    out[0] = c * (-25.0 * e[0] + 48.0 * e[1] - 36.0 * e[2] + 16.0 * e[3] - 3.0 * e[4]);
    out[1] = c * (-3.0 * e[0] - 10.0 * e[1] + 18.0 * e[2] - 6.0 * e[3] + e[4]);
    for i in 2..n - 2 {
        out[i] = c * (e[i - 2] - 8.0 * e[i - 1] + 8.0 * e[i + 1] - e[i + 2]);
    }
    let m = n - 1;
    out[m] = -c * (-25.0 * e[m] + 48.0 * e[m - 1] - 36.0 * e[m - 2] + 16.0 * e[m - 3] - 3.0 * e[m - 4]);
    out[m - 1] = -c * (-3.0 * e[m] - 10.0 * e[m - 1] + 18.0 * e[m - 2] - 6.0 * e[m - 3] + e[m - 4]);
    out
}
