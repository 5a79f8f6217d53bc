//! Numerical Dunkl harmonic analysis for the reflection groups Z₂^d.
//!
//! The crate implements the rational-free-parameter deformation of classical
//! Fourier analysis on R^d attached to the root system {±√2·e_i} with a
//! nonnegative multiplicity k_i per coordinate: the weighted measure
//! dμ_k = c_k Π|√2 x_i|^{2k_i} dx, the Dunkl kernel E_k, the Dunkl transform
//! and its inverse, spectrally defined translation and convolution, the heat
//! semigroup, fractional powers of the Dunkl Laplacian, smooth Littlewood-Paley
//! windows and the paraproduct operators built from them.  Setting k ≡ 0
//! recovers classical Fourier analysis exactly, which the [`classical`] module
//! exploits as an independent FFT-based reference implementation.
//!
//! Everything is computed on symmetric uniform tensor grids with weighted
//! quadrature; the transform is a dense separable matrix apply (no fast
//! algorithm exists for k > 0).

pub mod classical;
pub mod geometry;
pub mod grid;
pub mod operators;
pub mod probes;
pub mod quadrature;
pub mod special;
pub mod transform;
pub mod windows;

pub use geometry::{BallVolumeMode, ReflectionSetup};
pub use grid::{Domain, Grid, SampledFunction};
pub use operators::{
    decay_slope, decompose_product, fractional_laplacian, fractional_laplacian_subordination,
    heat_apply, heat_kernel_bivariate, heat_translation_closed_form, paraproduct,
    ProductDecomposition, SubordinationGrid,
};
pub use special::{dunkl_kernel, dunkl_kernel_1d, gamma, normalized_bessel, BesselOrder};
pub use transform::{dunkl_derivative, TransformPlan};
pub use windows::{DecompositionWindows, ParaproductSpec, SpectralWindow, TransferredWindows};

use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Error)]
pub enum DunklError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("axis {axis} out of range for dimension {d}")]
    AxisOutOfRange { axis: usize, d: usize },
    #[error("multiplicity must be finite and nonnegative, got {0}")]
    NegativeMultiplicity(f64),
    #[error("Bessel order must be a finite number greater than -1, got {0}")]
    BesselOrderOutOfRange(f64),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("radii must satisfy 0 < r1 < r2, got r1={r1}, r2={r2}")]
    RadiusOrder { r1: f64, r2: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("sampled function does not live on this plan's grid")]
    GridMismatch,
    #[error("expected data in the {expected:?} domain, got {got:?}")]
    DomainMismatch { expected: Domain, got: Domain },
    #[error("input contains NaN or infinite values")]
    NonFiniteInput,
    #[error("fractional order s must lie in (0, 1) for subordination, got {0}")]
    FractionalOrderOutOfRange(f64),
    #[error("empty dyadic scale range")]
    EmptyScaleRange,
    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
    #[error("fit-range values fall below the noise floor {floor:e}; shrink the range")]
    NoiseFloor { floor: f64 },
    #[error("window hypothesis violated: {0}")]
    WindowHypothesis(String),
    #[error("transform plan self-test failed: round-trip defect {defect:e}")]
    PlanSelfTest { defect: f64 },
    #[error("singular input: {0}")]
    SingularInput(String),
    #[error("grid too large for this operation: n={n}, limit {limit}")]
    ResourceGuard { n: usize, limit: usize },
    #[error("zero function where a nonzero one is required")]
    ZeroFunction,
    #[error("low-frequency spectral mass {mass:e} exceeds the truncation tolerance {tol:e}")]
    TruncationMass { mass: f64, tol: f64 },
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DunklError>;
