//! The discrete Dunkl transform and the operators defined through it:
//! inverse, translation, convolution and the Dunkl operators T_j.
//!
//! The transform F_k f(ξ) = ∫ f(x) E_k(-iξ, x) dμ_k(x) is discretized as a
//! dense separable matrix apply on the shared grid (frequency nodes coincide
//! with space nodes): per axis, K[m,ℓ] = E_k(-iξ_m, x_ℓ) w_ℓ.  No fast
//! algorithm exists for k > 0; the apply is O(n^{d+1}) and parallelized.
//!
//! Translation is defined spectrally by the multiplier E_k(ix₀, ·);
//! convolution by the product of transforms.  Both are therefore defined here
//! only for band-limited grid functions (the L² definition in the continuum);
//! behaviour on rough inputs is undefined by the theory and unchecked here.

use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

use crate::grid::{Domain, Grid, SampledFunction};
use crate::special::kernel_1d;
use crate::{DunklError, Result};

/// Dense per-axis kernel matrices for one grid, reusable across applications.
/// Immutable after construction and safe to share across threads.
#[derive(Debug)]
pub struct TransformPlan {
    grid: Arc<Grid>,
    /// Per axis, the symmetric matrix M[m·n+ℓ] = E_k(i x_m, x_ℓ).
    axis_matrices: Vec<Vec<Complex64>>,
}

impl TransformPlan {
    /// Build a plan and run the construction self-test (round trip on a
    /// band-limited Gaussian must reproduce it to 1e-6).
    pub fn new(grid: Arc<Grid>) -> Result<Self> {
        Self::with_options(grid, true)
    }

    pub fn with_options(grid: Arc<Grid>, self_test: bool) -> Result<Self> {
        let n = grid.points_per_axis();
        let nodes = grid.axis_nodes();
        let mut axis_matrices = Vec::with_capacity(grid.dim());
        for axis in 0..grid.dim() {
            let k = grid.setup().multiplicity(axis);
            let mut mat = vec![Complex64::default(); n * n];
            mat.par_chunks_mut(n).enumerate().for_each(|(m, row)| {
                let xm = nodes[m];
                for (l, entry) in row.iter_mut().enumerate() {
                    *entry = kernel_1d(k, xm * nodes[l]);
                }
            });
            axis_matrices.push(mat);
        }
        let plan = Self { grid, axis_matrices };
        if self_test {
            let g = SampledFunction::from_fn(Arc::clone(&plan.grid), Domain::Space, |x| {
                let sq: f64 = x.iter().map(|t| t * t).sum();
                Complex64::new((-0.5 * sq).exp(), 0.0)
            });
            let round = plan.inverse(&plan.transform(&g)?)?;
            let mut defect = 0.0f64;
            for (a, b) in round.values().iter().zip(g.values()) {
                defect = defect.max((a - b).norm());
            }
            if defect > 1e-6 {
                return Err(DunklError::PlanSelfTest { defect });
            }
        }
        Ok(plan)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// The symmetric per-axis kernel matrix M[m·n+ℓ] = E_k(i x_m, x_ℓ);
    /// probes reuse it to assemble bivariate translation kernels.
    pub fn axis_kernel_matrix(&self, axis: usize) -> &[Complex64] {
        &self.axis_matrices[axis]
    }

    fn check(&self, f: &SampledFunction, expected: Domain) -> Result<()> {
        if !f.grid().same_layout(&self.grid) {
            return Err(DunklError::GridMismatch);
        }
        if f.domain() != expected {
            return Err(DunklError::DomainMismatch {
                expected,
                got: f.domain(),
            });
        }
        if f.has_non_finite() {
            return Err(DunklError::NonFiniteInput);
        }
        Ok(())
    }

    /// Apply the per-axis matrices; `conjugate` selects the forward kernel
    /// E(-iξ, x) instead of E(iξ, x).  Source values are multiplied by the
    /// quadrature weights of the integration side.
    fn apply(&self, values: &[Complex64], conjugate: bool) -> Vec<Complex64> {
        let n = self.grid.points_per_axis();
        let d = self.grid.dim();
        let mut cur = values.to_vec();
        for axis in 0..d {
            let mat = &self.axis_matrices[axis];
            let w = self.grid.axis_weights(axis);
            // weight the source along this axis
            let stride = n.pow((d - 1 - axis) as u32);
            let period = stride * n;
            cur.iter_mut().enumerate().for_each(|(flat, v)| {
                let m = (flat % period) / stride;
                *v *= w[m];
            });
            let src = cur;
            let mut out = vec![Complex64::default(); src.len()];
            // lines: flat = outer·period + m·stride + inner
            out.par_chunks_mut(period)
                .enumerate()
                .for_each(|(outer, chunk)| {
                    let base = outer * period;
                    for m in 0..n {
                        let row = &mat[m * n..(m + 1) * n];
                        for inner in 0..stride {
                            let mut acc = Complex64::default();
                            let mut src_idx = inner;
                            for entry in row.iter().take(n) {
                                let s = src[base + src_idx];
                                acc += if conjugate {
                                    Complex64::new(
                                        entry.re * s.re + entry.im * s.im,
                                        entry.re * s.im - entry.im * s.re,
                                    )
                                } else {
                                    entry * s
                                };
                                src_idx += stride;
                            }
                            chunk[m * stride + inner] = acc;
                        }
                    }
                });
            cur = out;
        }
        cur
    }

    /// F_k f on the frequency grid.
    pub fn transform(&self, f: &SampledFunction) -> Result<SampledFunction> {
        self.check(f, Domain::Space)?;
        let values = self.apply(f.values(), true);
        SampledFunction::from_values(Arc::clone(&self.grid), Domain::Frequency, values)
    }

    /// Inverse transform back to the space grid.
    pub fn inverse(&self, f_hat: &SampledFunction) -> Result<SampledFunction> {
        self.check(f_hat, Domain::Frequency)?;
        let values = self.apply(f_hat.values(), false);
        SampledFunction::from_values(Arc::clone(&self.grid), Domain::Space, values)
    }

    /// Relative Plancherel defect | ‖F_k f‖₂ − ‖f‖₂ | / ‖f‖₂.
    pub fn plancherel_defect(&self, f: &SampledFunction) -> Result<f64> {
        let nf = f.lp_norm(2.0)?;
        if nf == 0.0 {
            return Err(DunklError::ZeroFunction);
        }
        let nt = self.transform(f)?.lp_norm(2.0)?;
        Ok((nt - nf).abs() / nf)
    }

    /// Dunkl translation τ_{x₀} f, defined spectrally by the multiplier
    /// E_k(i x₀, ξ).  For k ≡ 0 it reduces to the classical shift
    /// τ_a f(y) = f(y + a).
    pub fn translate(&self, x0: &[f64], f: &SampledFunction) -> Result<SampledFunction> {
        if x0.len() != self.grid.dim() {
            return Err(DunklError::DimensionMismatch {
                expected: self.grid.dim(),
                got: x0.len(),
            });
        }
        let mut f_hat = self.transform(f)?;
        let d = self.grid.dim();
        let n = self.grid.points_per_axis();
        let nodes = self.grid.axis_nodes();
        let ks = self.grid.setup().multiplicities();
        // per-axis multiplier tables
        let tables: Vec<Vec<Complex64>> = (0..d)
            .map(|a| (0..n).map(|m| kernel_1d(ks[a], x0[a] * nodes[m])).collect())
            .collect();
        let mut idx = vec![0usize; d];
        for flat in 0..f_hat.values().len() {
            self.grid.multi_index(flat, &mut idx);
            let mut m = Complex64::new(1.0, 0.0);
            for a in 0..d {
                m *= tables[a][idx[a]];
            }
            f_hat.values_mut()[flat] *= m;
        }
        self.inverse(&f_hat)
    }

    /// Dunkl convolution f *_k g computed spectrally through
    /// F_k(f *_k g) = F_k f · F_k g.
    pub fn convolve(&self, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
        let fh = self.transform(f)?;
        let gh = self.transform(g)?;
        let prod = fh.pointwise_product(&gh)?;
        self.inverse(&prod)
    }
}

/// Dunkl operator T_axis applied to a sampled function: a 4th-order central
/// difference for the partial derivative plus the exact reflection difference
/// k·(f(x) − f(σx))/x_axis, with the removable singularity on the hyperplane
/// x_axis = 0 filled by k·∂_axis(f − f∘σ) (the L'Hôpital limit).
pub fn dunkl_derivative(f: &SampledFunction, axis: usize) -> Result<SampledFunction> {
    let grid = Arc::clone(f.grid());
    let d = grid.dim();
    if axis >= d {
        return Err(DunklError::AxisOutOfRange { axis, d });
    }
    if f.has_non_finite() {
        return Err(DunklError::NonFiniteInput);
    }
    let n = grid.points_per_axis();
    let dx = grid.spacing();
    let k = grid.setup().multiplicity(axis);
    let stride = n.pow((d - 1 - axis) as u32);
    let period = stride * n;
    let vals = f.values();
    let nodes = grid.axis_nodes();

    // zero extension beyond the grid: callers hold Schwartz-class samples
    let fetch = |base: usize, inner: usize, m: isize| -> Complex64 {
        if m < 0 || m as usize >= n {
            Complex64::default()
        } else {
            vals[base + m as usize * stride + inner]
        }
    };
    // 4th-order first derivative stencil
    let deriv = |base: usize, inner: usize, m: usize| -> Complex64 {
        let mm = m as isize;
        (8.0 * (fetch(base, inner, mm + 1) - fetch(base, inner, mm - 1))
            - (fetch(base, inner, mm + 2) - fetch(base, inner, mm - 2)))
            / (12.0 * dx)
    };

    let mut out = vec![Complex64::default(); vals.len()];
    let outer_count = vals.len() / period;
    for outer in 0..outer_count {
        let base = outer * period;
        for inner in 0..stride {
            for m in 0..n {
                let x = nodes[m];
                let here = vals[base + m * stride + inner];
                let mirrored = vals[base + (n - 1 - m) * stride + inner];
                let mut t = deriv(base, inner, m);
                if k != 0.0 {
                    if x != 0.0 {
                        t += k * (here - mirrored) / x;
                    } else {
                        // ∂_axis of the odd part, via the same stencil applied
                        // to f - f∘σ
                        let odd = |mm: isize| -> Complex64 {
                            if mm < 0 || mm as usize >= n {
                                Complex64::default()
                            } else {
                                let mu = mm as usize;
                                vals[base + mu * stride + inner]
                                    - vals[base + (n - 1 - mu) * stride + inner]
                            }
                        };
                        let mi = m as isize;
                        let dodd = (8.0 * (odd(mi + 1) - odd(mi - 1)) - (odd(mi + 2) - odd(mi - 2)))
                            / (12.0 * dx);
                        t += k * dodd;
                    }
                }
                out[base + m * stride + inner] = t;
            }
        }
    }
    SampledFunction::from_values(grid, Domain::Space, out)
}
