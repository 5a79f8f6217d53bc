//! Symmetric uniform tensor grids with weighted quadrature, and complex-valued
//! functions sampled on them.
//!
//! The same grid serves as space and frequency domain; nodes are
//! x_m = -x_max + m·Δx with Δx = 2·x_max/(n-1) and n odd, so 0 is a node and
//! the reflection of a node is a node.  Quadrature weights are the trapezoid
//! weights of the measure μ_k: w = Δx^d · c_k · h_k(node), halved at boundary
//! nodes, and they factor per axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::geometry::ReflectionSetup;
use crate::{DunklError, Result};

/// Which side of the transform a sampled function lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Space,
    Frequency,
}

#[derive(Debug)]
pub struct Grid {
    setup: ReflectionSetup,
    n: usize,
    x_max: f64,
    dx: f64,
    nodes: Vec<f64>,
    axis_weights: Vec<Vec<f64>>,
    weights: Vec<f64>,
    len: usize,
}

impl Grid {
    /// `n` must be odd (so 0 is a node and reflections are exact) and at
    /// least 3.
    pub fn new(setup: ReflectionSetup, n: usize, x_max: f64) -> Result<Self> {
        if n < 3 || n % 2 == 0 {
            return Err(DunklError::InvalidGrid(format!(
                "points per axis must be odd and ≥ 3, got {n}"
            )));
        }
        if !(x_max > 0.0) || !x_max.is_finite() {
            return Err(DunklError::InvalidGrid(format!("x_max must be positive, got {x_max}")));
        }
        let d = setup.dim();
        let len = n
            .checked_pow(d as u32)
            .filter(|&l| l <= 1 << 27)
            .ok_or_else(|| DunklError::InvalidGrid(format!("grid of {n}^{d} nodes is too large")))?;
        let dx = 2.0 * x_max / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|m| -x_max + m as f64 * dx).collect();
        let axis_weights: Vec<Vec<f64>> = (0..d)
            .map(|axis| {
                (0..n)
                    .map(|m| {
                        let boundary = if m == 0 || m == n - 1 { 0.5 } else { 1.0 };
                        boundary * dx * setup.axis_norm(axis) * setup.axis_weight(axis, nodes[m])
                    })
                    .collect()
            })
            .collect();
        let mut weights = vec![0.0f64; len];
        let mut idx = vec![0usize; d];
        for w in weights.iter_mut() {
            *w = idx
                .iter()
                .enumerate()
                .map(|(a, &m)| axis_weights[a][m])
                .product();
            Self::advance(&mut idx, n);
        }
        Ok(Self {
            setup,
            n,
            x_max,
            dx,
            nodes,
            axis_weights,
            weights,
            len,
        })
    }

    fn advance(idx: &mut [usize], n: usize) {
        for pos in (0..idx.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < n {
                return;
            }
            idx[pos] = 0;
        }
    }

    pub fn setup(&self) -> &ReflectionSetup {
        &self.setup
    }

    pub fn dim(&self) -> usize {
        self.setup.dim()
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn spacing(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axis_nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn axis_weights(&self, axis: usize) -> &[f64] {
        &self.axis_weights[axis]
    }

    /// Quadrature weight of a flat node index.
    pub fn weight(&self, flat: usize) -> f64 {
        self.weights[flat]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Multi-index of a flat index (row-major, axis 0 slowest).
    pub fn multi_index(&self, flat: usize, out: &mut [usize]) {
        let mut rest = flat;
        for a in (0..self.dim()).rev() {
            out[a] = rest % self.n;
            rest /= self.n;
        }
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &m| acc * self.n + m)
    }

    /// Coordinates of a flat node index.
    pub fn node(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0usize; self.dim()];
        self.multi_index(flat, &mut idx);
        idx.iter().map(|&m| self.nodes[m]).collect()
    }

    /// Flat index of the node with all coordinates negated.
    pub fn negated_index(&self, flat: usize) -> usize {
        let mut idx = vec![0usize; self.dim()];
        self.multi_index(flat, &mut idx);
        for m in idx.iter_mut() {
            *m = self.n - 1 - *m;
        }
        self.flat_index(&idx)
    }

    /// Flat index of a point that should coincide with a grid node.
    pub fn index_of(&self, point: &[f64]) -> Option<usize> {
        let mut flat = 0usize;
        for &p in point {
            let raw = (p + self.x_max) / self.dx;
            let m = raw.round();
            if (raw - m).abs() > 1e-8 || m < 0.0 || m as usize >= self.n {
                return None;
            }
            flat = flat * self.n + m as usize;
        }
        Some(flat)
    }

    /// Defect of the defining normalization: |Σ w e^{-|x|²/2} - 1|.  Small
    /// (≤ 1e-6) whenever x_max ≥ 12 and the grid resolves the Gaussian.
    pub fn normalization_defect(&self) -> f64 {
        let mut idx = vec![0usize; self.dim()];
        let mut sum = 0.0;
        for flat in 0..self.len {
            self.multi_index(flat, &mut idx);
            let sq: f64 = idx.iter().map(|&m| self.nodes[m] * self.nodes[m]).sum();
            sum += self.weights[flat] * (-0.5 * sq).exp();
        }
        (sum - 1.0).abs()
    }

    /// True when Δx·ξ_max ≤ π/4, the recommended oscillation resolution; a
    /// false value flags that e^{ixξ} at the grid extremes is represented by
    /// fewer than 8 nodes per period.
    pub fn resolution_ok(&self) -> bool {
        self.dx * self.x_max <= std::f64::consts::FRAC_PI_4
    }

    pub fn same_layout(&self, other: &Grid) -> bool {
        self.n == other.n
            && self.x_max == other.x_max
            && self.setup.multiplicities() == other.setup.multiplicities()
    }
}

/// Complex samples of a function on a [`Grid`], tagged with the domain they
/// live in.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: Arc<Grid>,
    domain: Domain,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn from_values(grid: Arc<Grid>, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(DunklError::InvalidGrid(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, domain, values })
    }

    pub fn zeros(grid: Arc<Grid>, domain: Domain) -> Self {
        let len = grid.len();
        Self {
            grid,
            domain,
            values: vec![Complex64::default(); len],
        }
    }

    /// Sample a pointwise rule on every node.
    pub fn from_fn<F>(grid: Arc<Grid>, domain: Domain, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let d = grid.dim();
        let mut values = Vec::with_capacity(grid.len());
        let mut idx = vec![0usize; d];
        let mut point = vec![0.0f64; d];
        for _ in 0..grid.len() {
            for a in 0..d {
                point[a] = grid.axis_nodes()[idx[a]];
            }
            values.push(f(&point));
            Grid::advance(&mut idx, grid.points_per_axis());
        }
        Self { grid, domain, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn has_non_finite(&self) -> bool {
        self.values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    /// self += c · other
    pub fn add_scaled(&mut self, other: &SampledFunction, c: Complex64) -> Result<()> {
        if !self.grid.same_layout(&other.grid) {
            return Err(DunklError::GridMismatch);
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn pointwise_product(&self, other: &SampledFunction) -> Result<SampledFunction> {
        if !self.grid.same_layout(&other.grid) {
            return Err(DunklError::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(SampledFunction {
            grid: Arc::clone(&self.grid),
            domain: self.domain,
            values,
        })
    }

    /// Quadrature L^p norm against μ_k; `p = f64::INFINITY` returns the max
    /// modulus over nodes.  For p < 1 this is the usual quasi-norm.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p == f64::INFINITY {
            return Ok(self
                .values
                .iter()
                .fold(0.0f64, |acc, z| acc.max(z.norm())));
        }
        if !(p > 0.0) {
            return Err(DunklError::NonPositive { name: "exponent p", value: p });
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(self.grid.weights())
            .map(|(z, &w)| w * z.norm().powf(p))
            .sum();
        Ok(sum.powf(1.0 / p))
    }

    /// ∫ f dμ_k by quadrature.
    pub fn integral(&self) -> Complex64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(z, &w)| w * z)
            .sum()
    }

    /// Fraction of the quadrature L¹ mass carried by boundary-adjacent nodes;
    /// a crude tail diagnostic for "effectively supported in the grid".
    pub fn boundary_tail_fraction(&self) -> f64 {
        let n = self.grid.points_per_axis();
        let d = self.grid.dim();
        let mut idx = vec![0usize; d];
        let mut tail = 0.0;
        let mut total = 0.0;
        for flat in 0..self.values.len() {
            self.grid.multi_index(flat, &mut idx);
            let contribution = self.grid.weight(flat) * self.values[flat].norm();
            total += contribution;
            if idx.iter().any(|&m| m < 2 || m >= n - 2) {
                tail += contribution;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let header = SampledFunctionJson {
            d: self.grid.dim(),
            n: self.grid.points_per_axis(),
            x_max: self.grid.x_max(),
            k: self.grid.setup().multiplicities().to_vec(),
            domain_tag: match self.domain {
                Domain::Space => "space".into(),
                Domain::Frequency => "frequency".into(),
            },
            values: self
                .values
                .iter()
                .flat_map(|z| [z.re, z.im])
                .collect(),
        };
        Ok(serde_json::to_string(&header)?)
    }

    pub fn from_json(text: &str) -> Result<SampledFunction> {
        let raw: SampledFunctionJson = serde_json::from_str(text)?;
        let setup = ReflectionSetup::new(raw.k)?;
        if setup.dim() != raw.d {
            return Err(DunklError::DimensionMismatch {
                expected: raw.d,
                got: setup.dim(),
            });
        }
        let grid = Arc::new(Grid::new(setup, raw.n, raw.x_max)?);
        if raw.values.len() != 2 * grid.len() {
            return Err(DunklError::InvalidGrid(format!(
                "expected {} interleaved values, got {}",
                2 * grid.len(),
                raw.values.len()
            )));
        }
        let domain = match raw.domain_tag.as_str() {
            "space" => Domain::Space,
            "frequency" => Domain::Frequency,
            other => {
                return Err(DunklError::InvalidGrid(format!(
                    "unknown domain tag {other:?}"
                )))
            }
        };
        let values = raw
            .values
            .chunks_exact(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        SampledFunction::from_values(grid, domain, values)
    }
}

/// On-disk artifact: header plus interleaved re/im values, row-major.
#[derive(Serialize, Deserialize)]
struct SampledFunctionJson {
    d: usize,
    n: usize,
    x_max: f64,
    k: Vec<f64>,
    domain_tag: String,
    values: Vec<f64>,
}
