//! Classical Fourier reference implementation for the k ≡ 0 regression gate.
//!
//! At zero multiplicity the Dunkl machinery collapses to classical Fourier
//! analysis against the measure (2π)^{-d/2} dx.  This module recomputes the
//! same discrete sums through an FFT (Bluestein chirp-z, since the shared
//! grid's Δx·Δξ is not 2π/n) with literal cos/sin phases: an independent code
//! path against which every k = 0 operation is compared.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::grid::{Domain, Grid, SampledFunction};
use crate::windows::ParaproductSpec;
use crate::{DunklError, Result};

/// Chirp-z transform z_m = Σ_ℓ a_ℓ e^{-i·δ·ℓ·m} for m, ℓ in 0..n, via
/// Bluestein's reduction to a circular convolution.
struct ChirpZ {
    n: usize,
    fft_len: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    chirp: Vec<Complex64>,
    filter_hat: Vec<Complex64>,
}

impl ChirpZ {
    fn new(n: usize, delta: f64) -> Self {
        let mut planner = FftPlanner::new();
        let fft_len = (2 * n - 1).next_power_of_two();
        let fft = planner.plan_fft_forward(fft_len);
        let ifft = planner.plan_fft_inverse(fft_len);
        // w^{x} = e^{-i δ x}; chirp_ℓ = w^{ℓ²/2}
        let chirp: Vec<Complex64> = (0..n)
            .map(|l| {
                let phase = -0.5 * delta * (l as f64) * (l as f64);
                Complex64::new(phase.cos(), phase.sin())
            })
            .collect();
        let mut filter = vec![Complex64::default(); fft_len];
        for l in 0..n {
            let phase = 0.5 * delta * (l as f64) * (l as f64);
            let v = Complex64::new(phase.cos(), phase.sin());
            filter[l] = v;
            if l > 0 {
                filter[fft_len - l] = v;
            }
        }
        fft.process(&mut filter);
        Self {
            n,
            fft_len,
            fft,
            ifft,
            chirp,
            filter_hat: filter,
        }
    }

    fn run(&self, input: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::default(); self.fft_len];
        for l in 0..self.n {
            buf[l] = input[l] * self.chirp[l];
        }
        self.fft.process(&mut buf);
        for (b, f) in buf.iter_mut().zip(&self.filter_hat) {
            *b *= f;
        }
        self.ifft.process(&mut buf);
        let scale = 1.0 / self.fft_len as f64;
        (0..self.n).map(|m| buf[m] * self.chirp[m] * scale).collect()
    }
}

/// FFT-based classical transform bound to one grid (d = 1, k ≡ 0).
pub struct ClassicalPlan {
    grid: Arc<Grid>,
    forward: ChirpZ,
    backward: ChirpZ,
}

impl ClassicalPlan {
    pub fn new(grid: Arc<Grid>) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(DunklError::DimensionMismatch {
                expected: 1,
                got: grid.dim(),
            });
        }
        if grid.setup().multiplicities().iter().any(|&k| k != 0.0) {
            return Err(DunklError::InvalidGrid(
                "the classical reference requires k = 0".into(),
            ));
        }
        let n = grid.points_per_axis();
        let delta = grid.spacing() * grid.spacing();
        Ok(Self {
            forward: ChirpZ::new(n, delta),
            backward: ChirpZ::new(n, -delta),
            grid,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn apply(&self, values: &[Complex64], sign: f64) -> Vec<Complex64> {
        // F[m] = c₀ Δ e^{-i x₀ ξ_m} Σ_ℓ (τ_ℓ f_ℓ e^{-i x₀ x_ℓ·(Δ-part)}) e^{∓iℓmΔ²},
        // where x_ℓ ξ_m = x₀² + x₀Δ(ℓ+m) + ℓmΔ² on the shared symmetric grid.
        let n = self.grid.points_per_axis();
        let dx = self.grid.spacing();
        let x0 = -self.grid.x_max();
        let c0 = (2.0 * std::f64::consts::PI).sqrt().recip();
        let pre: Vec<Complex64> = (0..n)
            .map(|l| {
                let trapez = if l == 0 || l == n - 1 { 0.5 } else { 1.0 };
                let phase = sign * x0 * dx * l as f64;
                values[l] * trapez * Complex64::new(phase.cos(), phase.sin())
            })
            .collect();
        let chirped = if sign < 0.0 {
            self.forward.run(&pre)
        } else {
            self.backward.run(&pre)
        };
        (0..n)
            .map(|m| {
                let phase = sign * (x0 * x0 + x0 * dx * m as f64);
                c0 * dx * Complex64::new(phase.cos(), phase.sin()) * chirped[m]
            })
            .collect()
    }

    pub fn transform(&self, f: &SampledFunction) -> Result<SampledFunction> {
        if !f.grid().same_layout(&self.grid) {
            return Err(DunklError::GridMismatch);
        }
        let values = self.apply(f.values(), -1.0);
        SampledFunction::from_values(Arc::clone(&self.grid), Domain::Frequency, values)
    }

    pub fn inverse(&self, f_hat: &SampledFunction) -> Result<SampledFunction> {
        if !f_hat.grid().same_layout(&self.grid) {
            return Err(DunklError::GridMismatch);
        }
        let values = self.apply(f_hat.values(), 1.0);
        SampledFunction::from_values(Arc::clone(&self.grid), Domain::Space, values)
    }

    fn multiplier_apply<F>(&self, f: &SampledFunction, m: F) -> Result<SampledFunction>
    where
        F: Fn(f64) -> f64,
    {
        let mut f_hat = self.transform(f)?;
        let nodes = self.grid.axis_nodes().to_vec();
        for (v, &xi) in f_hat.values_mut().iter_mut().zip(&nodes) {
            *v *= m(xi.abs());
        }
        self.inverse(&f_hat)
    }

    pub fn heat_apply(&self, f: &SampledFunction, t: f64) -> Result<SampledFunction> {
        if !(t > 0.0) {
            return Err(DunklError::NonPositive { name: "heat time t", value: t });
        }
        self.multiplier_apply(f, |r| (-t * r * r).exp())
    }

    pub fn fractional_laplacian(&self, f: &SampledFunction, s: f64) -> Result<SampledFunction> {
        if !(s > 0.0) {
            return Err(DunklError::NonPositive { name: "fractional order s", value: s });
        }
        self.multiplier_apply(f, |r| (r * r).powf(s))
    }

    pub fn convolve(&self, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
        let prod = self.transform(f)?.pointwise_product(&self.transform(g)?)?;
        self.inverse(&prod)
    }

    /// Classical paraproduct with the same windows and scale range.
    pub fn paraproduct(
        &self,
        spec: &ParaproductSpec,
        f: &SampledFunction,
        g: &SampledFunction,
    ) -> Result<SampledFunction> {
        if spec.j_min > spec.j_max {
            return Err(DunklError::EmptyScaleRange);
        }
        let band = self.grid.x_max();
        let f_hat = self.transform(f)?;
        let g_hat = self.transform(g)?;
        let nodes = self.grid.axis_nodes().to_vec();
        let mut acc = SampledFunction::zeros(Arc::clone(&self.grid), Domain::Space);
        for j in spec.j_min..=spec.j_max {
            if spec.psi.at_scale(j).support_lo() > band
                || spec.phi.at_scale(j).support_lo() > band
                || spec.theta.at_scale(j).support_lo() > band
            {
                continue;
            }
            let mut pf = f_hat.clone();
            for (v, &xi) in pf.values_mut().iter_mut().zip(&nodes) {
                *v *= spec.psi.at_scale(j).eval_radius(xi.abs());
            }
            let mut pg = g_hat.clone();
            for (v, &xi) in pg.values_mut().iter_mut().zip(&nodes) {
                *v *= spec.phi.at_scale(j).eval_radius(xi.abs());
            }
            let prod = self.inverse(&pf)?.pointwise_product(&self.inverse(&pg)?)?;
            let mut prod_hat = self.transform(&prod)?;
            for (v, &xi) in prod_hat.values_mut().iter_mut().zip(&nodes) {
                *v *= spec.theta.at_scale(j).eval_radius(xi.abs());
            }
            acc.add_scaled(&self.inverse(&prod_hat)?, Complex64::new(1.0, 0.0))?;
        }
        Ok(acc)
    }

    /// Classical three-paraproduct splitting residual with the standard
    /// windows: ‖fg − ΣΠ_i‖_∞ / ‖fg‖_∞.
    pub fn decomposition_residual(
        &self,
        f: &SampledFunction,
        g: &SampledFunction,
        j_cap: i32,
    ) -> Result<f64> {
        let w = crate::windows::DecompositionWindows::standard();
        let fg = f.pointwise_product(g)?;
        let mut residual = fg.clone();
        let minus = Complex64::new(-1.0, 0.0);
        residual.add_scaled(&self.paraproduct(&w.spec1(-j_cap, j_cap)?, f, g)?, minus)?;
        residual.add_scaled(&self.paraproduct(&w.spec2(-j_cap, j_cap)?, f, g)?, minus)?;
        residual.add_scaled(&self.paraproduct(&w.spec3(-j_cap, j_cap)?, f, g)?, minus)?;
        Ok(residual.lp_norm(f64::INFINITY)? / fg.lp_norm(f64::INFINITY)?)
    }
}

/// Continuum-style quadrature oracle for the classical fractional Laplacian
/// of the standard Gaussian e^{-x²/2}: evaluates
/// ∫ |ξ|^{2s} e^{-ξ²/2} e^{ixξ} c₀ dξ on the grid's own frequency nodes
/// (closed-form spectrum, literal trigonometric phases).
pub fn classical_fraclap_gaussian(grid: &Grid, s: f64) -> Result<Vec<Complex64>> {
    if grid.dim() != 1 {
        return Err(DunklError::DimensionMismatch { expected: 1, got: grid.dim() });
    }
    if !(s > 0.0) {
        return Err(DunklError::NonPositive { name: "fractional order s", value: s });
    }
    let n = grid.points_per_axis();
    let nodes = grid.axis_nodes();
    let dx = grid.spacing();
    let c0 = (2.0 * std::f64::consts::PI).sqrt().recip();
    let out = (0..n)
        .map(|ix| {
            let x = nodes[ix];
            let mut acc = Complex64::default();
            for m in 0..n {
                let xi = nodes[m];
                let trapez = if m == 0 || m == n - 1 { 0.5 } else { 1.0 };
                let amp = trapez * (xi * xi).powf(s) * (-0.5 * xi * xi).exp();
                acc += amp * Complex64::new((x * xi).cos(), (x * xi).sin());
            }
            acc * c0 * dx
        })
        .collect();
    Ok(out)
}
