//! The versioned Schwartz-class test-function family used by every suite:
//! Gaussians at three widths, a coordinate-weighted Gaussian, a polynomial
//! Gaussian and band-limited bumps with controlled spectra.

use num_complex::Complex64;
use std::sync::Arc;

use dunkl_core::windows::{SpectralWindow, WindowShape};
use dunkl_core::{Domain, SampledFunction, TransformPlan};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    Gauss { a: f64 },
    CoordGauss,
    PolyGauss,
    BumpBall,
    BumpAnnulus,
}

/// Parse a family identifier ("gauss-0.5", "gauss-1", "gauss-2", "xgauss",
/// "polygauss", "bump-ball", "bump-annulus").
pub fn parse_id(id: &str) -> Option<TestFunction> {
    match id {
        "xgauss" => Some(TestFunction::CoordGauss),
        "polygauss" => Some(TestFunction::PolyGauss),
        "bump-ball" => Some(TestFunction::BumpBall),
        "bump-annulus" => Some(TestFunction::BumpAnnulus),
        _ => {
            let a = id.strip_prefix("gauss-")?.parse::<f64>().ok()?;
            if a > 0.0 {
                Some(TestFunction::Gauss { a })
            } else {
                None
            }
        }
    }
}

impl TestFunction {
    /// Sample the function on the plan's grid (the bumps are inverse
    /// transforms of smooth compactly supported spectral profiles).
    pub fn realize(&self, plan: &TransformPlan) -> SampledFunction {
        let grid = Arc::clone(plan.grid());
        match *self {
            TestFunction::Gauss { a } => SampledFunction::from_fn(grid, Domain::Space, move |x| {
                let sq: f64 = x.iter().map(|t| t * t).sum();
                Complex64::new((-a * sq).exp(), 0.0)
            }),
            TestFunction::CoordGauss => SampledFunction::from_fn(grid, Domain::Space, |x| {
                let sq: f64 = x.iter().map(|t| t * t).sum();
                Complex64::new(x[0] * (-sq).exp(), 0.0)
            }),
            TestFunction::PolyGauss => SampledFunction::from_fn(grid, Domain::Space, |x| {
                let sq: f64 = x.iter().map(|t| t * t).sum();
                Complex64::new((1.0 + sq) * (-sq).exp(), 0.0)
            }),
            TestFunction::BumpBall => {
                let window = SpectralWindow::new(WindowShape::Lowpass { cutoff: 1.0 });
                band_limited(plan, &window)
            }
            TestFunction::BumpAnnulus => {
                let window = SpectralWindow::new(WindowShape::Annulus { lo: 0.5, hi: 1.5 });
                band_limited(plan, &window)
            }
        }
    }
}

fn band_limited(plan: &TransformPlan, window: &SpectralWindow) -> SampledFunction {
    let grid = plan.grid();
    let mult = window.multiplier(grid);
    let spectrum = SampledFunction::from_values(
        Arc::clone(grid),
        Domain::Frequency,
        mult.iter().map(|&m| Complex64::new(m, 0.0)).collect(),
    )
    .expect("multiplier length matches the grid");
    plan.inverse(&spectrum).expect("window spectra are finite")
}

/// Resolve a list of identifiers, skipping none (configs are validated
/// beforehand).
pub fn realize_all(ids: &[String], plan: &TransformPlan) -> Vec<(String, SampledFunction)> {
    ids.iter()
        .filter_map(|id| parse_id(id).map(|f| (id.clone(), f.realize(plan))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dunkl_core::{Grid, ReflectionSetup};

    #[test]
    fn identifiers_round_trip() {
        assert_eq!(parse_id("gauss-0.5"), Some(TestFunction::Gauss { a: 0.5 }));
        assert_eq!(parse_id("xgauss"), Some(TestFunction::CoordGauss));
        assert_eq!(parse_id("bump-annulus"), Some(TestFunction::BumpAnnulus));
        assert_eq!(parse_id("gauss--1"), None);
        assert_eq!(parse_id("mystery"), None);
    }

    #[test]
    fn realizations_are_finite_and_nontrivial() {
        let grid = Arc::new(
            Grid::new(ReflectionSetup::new(vec![1.0]).unwrap(), 129, 12.0).unwrap(),
        );
        let plan = TransformPlan::new(grid).unwrap();
        for id in [
            "gauss-0.5",
            "gauss-1",
            "gauss-2",
            "xgauss",
            "polygauss",
            "bump-ball",
            "bump-annulus",
        ] {
            let f = parse_id(id).unwrap().realize(&plan);
            assert!(!f.has_non_finite(), "{id}");
            assert!(f.lp_norm(2.0).unwrap() > 0.0, "{id}");
        }
    }
}
