//! One-dimensional adaptive quadrature used by the geometry routines and the
//! estimate probes.

use crate::{DunklError, Result};

/// Adaptive Simpson integration of `f` over `[a, b]`.
///
/// `rel_tol` is measured against the magnitude of the whole integral (with a
/// small absolute floor so that integrals near zero terminate).
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    let tol = rel_tol * whole.abs().max(1e-300);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(DunklError::Quadrature(format!(
            "adaptive Simpson did not converge on [{a}, {b}] (residual {:e})",
            delta.abs()
        )));
    }
    let half_tol = 0.5 * tol;
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?)
}

/// Integrate over `[a, b]` splitting at the interior breakpoints first; the
/// integrand may have kinks there.
pub fn adaptive_simpson_split<F>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|t| *t > a && *t < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += adaptive_simpson(f, w[0], w[1], rel_tol, max_depth)?;
    }
    Ok(total)
}

/// Exact integral of the one-axis weight 2^κ|t|^{2κ} over `[a, b]`.
pub fn axis_weight_integral(kappa: f64, a: f64, b: f64) -> f64 {
    let anti = |t: f64| t.signum() * t.abs().powf(2.0 * kappa + 1.0) / (2.0 * kappa + 1.0);
    2f64.powf(kappa) * (anti(b) - anti(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_smooth_functions() {
        let got = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-10, 40).unwrap();
        assert!((got - 2.0).abs() < 1e-9);
    }

    #[test]
    fn split_handles_kinks() {
        // ∫_{-1}^{2} |t| dt = 5/2
        let got = adaptive_simpson_split(&|t: f64| t.abs(), -1.0, 2.0, &[0.0], 1e-10, 40).unwrap();
        assert!((got - 2.5).abs() < 1e-9);
    }

    #[test]
    fn weight_antiderivative() {
        // κ=1: ∫_{-1}^{3} 2t² dt = 2(27+1)/3
        let got = axis_weight_integral(1.0, -1.0, 3.0);
        assert!((got - 2.0 * 28.0 / 3.0).abs() < 1e-12);
        // κ=0: plain length
        assert!((axis_weight_integral(0.0, 2.0, 5.0) - 3.0).abs() < 1e-12);
    }
}
