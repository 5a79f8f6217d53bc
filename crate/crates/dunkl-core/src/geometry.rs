//! Geometry of the reflection group Z₂^d: the root system {±√2·e_i}, sign-flip
//! reflections, the orbit distance, the weight h_k, the normalized measure μ_k
//! and ball-volume formulas.
//!
//! With roots normalized to |λ| = √2, the weight is
//! h_k(x) = Π_i |√2·x_i|^{2k_i} (each pair ±√2·e_i contributes exponent 2k_i),
//! and the normalization constant satisfies
//! c_k⁻¹ = ∫ e^{-|x|²/2} h_k(x) dx = Π_i 2^{2k_i+1/2} Γ(k_i + 1/2).

use crate::quadrature::{adaptive_simpson_split, axis_weight_integral};
use crate::special::{gamma_positive, validate_multiplicity};
use crate::{DunklError, Result};

/// How [`ReflectionSetup::ball_volume`] evaluates μ_k(B(x, r)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallVolumeMode {
    /// Closed-form antiderivative in d = 1, nested adaptive quadrature for
    /// d ≥ 2 (relative tolerance 1e-6).
    Exact,
    /// The surrogate r^d · Π_i (|√2·x_i| + r)^{2k_i}, comparable to the exact
    /// volume up to setup-dependent constants.
    Comparable,
}

/// The Z₂^d reflection setup: dimension, per-coordinate multiplicities and the
/// derived constants γ_k, d_k and c_k.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSetup {
    multiplicities: Vec<f64>,
    gamma_k: f64,
    d_k: f64,
    c_k: f64,
    axis_norms: Vec<f64>,
}

impl ReflectionSetup {
    pub fn new(multiplicities: Vec<f64>) -> Result<Self> {
        if multiplicities.is_empty() {
            return Err(DunklError::InvalidGrid("dimension must be at least 1".into()));
        }
        for &k in &multiplicities {
            validate_multiplicity(k)?;
        }
        let gamma_k = 2.0 * multiplicities.iter().sum::<f64>();
        let d_k = multiplicities.len() as f64 + gamma_k;
        let axis_norms: Vec<f64> = multiplicities
            .iter()
            .map(|&k| 1.0 / (2f64.powf(2.0 * k + 0.5) * gamma_positive(k + 0.5)))
            .collect();
        let c_k = axis_norms.iter().product();
        Ok(Self {
            multiplicities,
            gamma_k,
            d_k,
            c_k,
            axis_norms,
        })
    }

    pub fn dim(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn multiplicities(&self) -> &[f64] {
        &self.multiplicities
    }

    pub fn multiplicity(&self, axis: usize) -> f64 {
        self.multiplicities[axis]
    }

    /// γ_k = Σ_{λ∈R} k(λ) = 2 Σ_i k_i.
    pub fn gamma_k(&self) -> f64 {
        self.gamma_k
    }

    /// Homogeneous dimension d_k = d + γ_k.
    pub fn d_k(&self) -> f64 {
        self.d_k
    }

    /// Normalization constant of μ_k = c_k h_k dx.
    pub fn c_k(&self) -> f64 {
        self.c_k
    }

    /// One-axis factor of c_k.
    pub fn axis_norm(&self, axis: usize) -> f64 {
        self.axis_norms[axis]
    }

    /// The product setup on R^{2d} with duplicated multiplicities; μ_{k²} is
    /// then μ_k ⊗ μ_k and the bilinear objects factor accordingly.
    pub fn product_setup(&self) -> Self {
        let mut k2 = self.multiplicities.clone();
        k2.extend_from_slice(&self.multiplicities);
        Self::new(k2).expect("duplicating a valid setup stays valid")
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(DunklError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            })
        }
    }

    /// Reflection σ along coordinate `axis` (zero-based): negates that
    /// coordinate.
    pub fn reflect(&self, x: &[f64], axis: usize) -> Result<Vec<f64>> {
        self.check_point(x)?;
        if axis >= self.dim() {
            return Err(DunklError::AxisOutOfRange { axis, d: self.dim() });
        }
        let mut out = x.to_vec();
        out[axis] = -out[axis];
        Ok(out)
    }

    /// Orbit distance d_G(x, y) = min_{σ∈G} |σ(x) - y|; for Z₂^d this is
    /// √(Σ_i min(|x_i-y_i|, |x_i+y_i|)²).
    pub fn orbit_distance(&self, x: &[f64], y: &[f64]) -> f64 {
        assert_eq!(x.len(), y.len(), "orbit_distance: dimension mismatch");
        x.iter()
            .zip(y)
            .map(|(&a, &b)| {
                let m = (a - b).abs().min((a + b).abs());
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    /// The weight h_k(x) = Π_i |√2·x_i|^{2k_i}.
    pub fn weight(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        x.iter()
            .zip(&self.multiplicities)
            .map(|(&t, &k)| (2.0 * t * t).powf(k))
            .product()
    }

    /// One-axis weight with the √2 root normalization folded in.
    pub fn axis_weight(&self, axis: usize, t: f64) -> f64 {
        (2.0 * t * t).powf(self.multiplicities[axis])
    }

    /// μ_k(B(x, r)).
    pub fn ball_volume(&self, x: &[f64], r: f64, mode: BallVolumeMode) -> Result<f64> {
        self.check_point(x)?;
        if !(r > 0.0) {
            return Err(DunklError::NonPositive {
                name: "ball radius",
                value: r,
            });
        }
        match mode {
            BallVolumeMode::Comparable => {
                let d = self.dim() as f64;
                let mut v = r.powf(d);
                for (xi, k) in x.iter().zip(&self.multiplicities) {
                    v *= ((2f64).sqrt() * xi.abs() + r).powf(2.0 * k);
                }
                Ok(v)
            }
            BallVolumeMode::Exact => self.ball_volume_exact(x, r),
        }
    }

    fn ball_volume_exact(&self, x: &[f64], r: f64) -> Result<f64> {
        self.nested_ball(0, x, r, false)
    }

    /// Volume of the orbit O(B(x, r)) = {y : d_G(x, y) ≤ r}.  By the
    /// G-invariance of μ_k this equals 2^d times the measure of
    /// B(|x|, r) ∩ {y ≥ 0}, which the nested quadrature computes with
    /// per-axis clipping at 0.
    pub fn orbit_ball_volume(&self, x: &[f64], r: f64) -> Result<f64> {
        self.check_point(x)?;
        if !(r > 0.0) {
            return Err(DunklError::NonPositive {
                name: "ball radius",
                value: r,
            });
        }
        let folded: Vec<f64> = x.iter().map(|t| t.abs()).collect();
        let clipped = self.nested_ball(0, &folded, r, true)?;
        Ok(2f64.powi(self.dim() as i32) * clipped)
    }

    /// Recursive tensor quadrature of c_k h_k over a ball (optionally clipped
    /// to the positive orthant).  The section of a ball is a ball, so axis 0
    /// is integrated with the sine substitution t = x₀ + r sin θ (removing the
    /// boundary square-root singularity) and the remaining axes recurse; the
    /// final axis uses the exact antiderivative of the axis weight.
    fn nested_ball(&self, axis: usize, center: &[f64], r: f64, clip: bool) -> Result<f64> {
        let x0 = center[axis];
        let c = self.axis_norms[axis];
        let kappa = self.multiplicities[axis];
        let (lo, hi) = if clip {
            ((x0 - r).max(0.0), x0 + r)
        } else {
            (x0 - r, x0 + r)
        };
        if hi <= lo {
            return Ok(0.0);
        }
        if axis + 1 == self.dim() {
            return Ok(c * axis_weight_integral(kappa, lo, hi));
        }
        let theta_of = |t: f64| ((t - x0) / r).clamp(-1.0, 1.0).asin();
        let (th_lo, th_hi) = (theta_of(lo), theta_of(hi));
        let integrand = |theta: f64| {
            let t = x0 + r * theta.sin();
            let section = (r * r - (t - x0) * (t - x0)).max(0.0).sqrt();
            if section == 0.0 {
                return 0.0;
            }
            let inner = self
                .nested_ball(axis + 1, center, section, clip)
                .unwrap_or(f64::NAN);
            c * (2.0 * t * t).powf(kappa) * inner * r * theta.cos()
        };
        // kink of |t|^{2κ} at t = 0
        let mut breaks = Vec::new();
        if x0.abs() < r {
            breaks.push(theta_of(0.0));
        }
        let v = adaptive_simpson_split(&integrand, th_lo, th_hi, &breaks, 1e-7, 28)?;
        if v.is_nan() {
            return Err(DunklError::Quadrature("nested ball volume".into()));
        }
        Ok(v)
    }

    /// Doubling behaviour of μ_k: for 0 < r1 < r2 the volume ratio lies
    /// between c·(r1/r2)^{d_k} and C·(r1/r2)^{d}.  Returns the measured ratio
    /// together with the supplied calibrated bounds.
    pub fn doubling_check(
        &self,
        x: &[f64],
        r1: f64,
        r2: f64,
        c_lower: f64,
        c_upper: f64,
    ) -> Result<DoublingCheck> {
        if !(r1 > 0.0 && r2 > r1) {
            return Err(DunklError::RadiusOrder { r1, r2 });
        }
        let v1 = self.ball_volume(x, r1, BallVolumeMode::Exact)?;
        let v2 = self.ball_volume(x, r2, BallVolumeMode::Exact)?;
        let ratio = v1 / v2;
        let lower = c_lower * (r1 / r2).powf(self.d_k);
        let upper = c_upper * (r1 / r2).powf(self.dim() as f64);
        Ok(DoublingCheck {
            ratio,
            lower,
            upper,
            within: ratio >= lower && ratio <= upper,
        })
    }
}

/// Result of a doubling-bound check, carrying the measured ratio and the
/// calibrated bounds it was compared against.
#[derive(Debug, Clone, Copy)]
pub struct DoublingCheck {
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
    pub within: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup_1d(k: f64) -> ReflectionSetup {
        ReflectionSetup::new(vec![k]).unwrap()
    }

    #[test]
    fn derived_constants() {
        let s = ReflectionSetup::new(vec![1.0, 0.5]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!((s.gamma_k() - 3.0).abs() < 1e-15);
        assert!((s.d_k() - 5.0).abs() < 1e-15);
        // k ≡ 0 → c_k = (2π)^{-d/2}
        let s0 = ReflectionSetup::new(vec![0.0, 0.0, 0.0]).unwrap();
        let expect = (2.0 * std::f64::consts::PI).powf(-1.5);
        assert!(((s0.c_k() - expect) / expect).abs() < 1e-14);
        assert!(ReflectionSetup::new(vec![1.0, -0.1]).is_err());
    }

    #[test]
    fn normalization_integral_is_one() {
        // c_k ∫ e^{-|x|²/2} h_k dx = 1, checked by quadrature per axis.
        for &k in &[0.0, 0.5, 1.0, 2.5] {
            let s = setup_1d(k);
            let f = |t: f64| s.c_k() * s.weight(&[t]) * (-0.5 * t * t).exp();
            let got =
                crate::quadrature::adaptive_simpson_split(&f, -14.0, 14.0, &[0.0], 1e-10, 40)
                    .unwrap();
            assert!((got - 1.0).abs() < 1e-8, "k={k}: ∫ = {got}");
        }
    }

    #[test]
    fn reflect_examples() {
        let s = ReflectionSetup::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(s.reflect(&[1.0, 2.0], 0).unwrap(), vec![-1.0, 2.0]);
        let x = [0.3, -1.7];
        let twice = s.reflect(&s.reflect(&x, 1).unwrap(), 1).unwrap();
        assert_eq!(twice, x.to_vec());
        assert_eq!(s.reflect(&[0.0, 3.0], 0).unwrap(), vec![0.0, 3.0]);
        assert!(s.reflect(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn orbit_distance_examples_and_brute_force() {
        let s1 = setup_1d(1.0);
        assert_eq!(s1.orbit_distance(&[2.0], &[-2.0]), 0.0);

        let s2 = ReflectionSetup::new(vec![1.0, 1.0]).unwrap();
        // brute force over the 4 sign flips of x
        let brute = |x: [f64; 2], y: [f64; 2]| {
            let mut best = f64::INFINITY;
            for sx in [-1.0, 1.0] {
                for sy in [-1.0, 1.0] {
                    let d = ((sx * x[0] - y[0]).powi(2) + (sy * x[1] - y[1]).powi(2)).sqrt();
                    best = best.min(d);
                }
            }
            best
        };
        assert!((s2.orbit_distance(&[1.0, 1.0], &[-1.0, 2.0]) - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let x = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let y = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let got = s2.orbit_distance(&x, &y);
            assert!((got - brute(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn orbit_distance_metric_properties() {
        let s = ReflectionSetup::new(vec![1.0, 0.5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut pt = || {
            [
                rng.gen_range(-10.0..10.0f64),
                rng.gen_range(-10.0..10.0f64),
            ]
        };
        for _ in 0..1000 {
            let (x, y, z) = (pt(), pt(), pt());
            let dxy = s.orbit_distance(&x, &y);
            let dyx = s.orbit_distance(&y, &x);
            assert!((dxy - dyx).abs() < 1e-12, "symmetry");
            let euclid = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(dxy <= euclid + 1e-12, "dominated by Euclidean");
            let (dxz, dzy) = (s.orbit_distance(&x, &z), s.orbit_distance(&z, &y));
            assert!(dxy <= dxz + dzy + 1e-12, "triangle inequality");
        }
    }

    #[test]
    fn weight_examples() {
        let s0 = ReflectionSetup::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(s0.weight(&[3.1, -0.4]), 1.0);
        let s = setup_1d(1.0);
        assert!((s.weight(&[3.0]) - 18.0).abs() < 1e-12);
        // G-invariance
        let s2 = ReflectionSetup::new(vec![1.0, 0.5]).unwrap();
        let x = [1.3, -0.7];
        let rx = s2.reflect(&x, 0).unwrap();
        assert_eq!(s2.weight(&x), s2.weight(&rx));
    }

    #[test]
    fn ball_volume_1d_closed_forms() {
        // k = 0: c₀ · 2r
        let s0 = setup_1d(0.0);
        for &(x, r) in &[(0.0, 1.0), (2.0, 0.5), (-3.0, 2.0)] {
            let got = s0.ball_volume(&[x], r, BallVolumeMode::Exact).unwrap();
            let expect = 2.0 * r / (2.0 * std::f64::consts::PI).sqrt();
            assert!((got - expect).abs() < 1e-12);
        }
        // k = 1, centred at 0: c_k ∫_{-r}^{r} 2t² dt = c_k·4r³/3
        let s1 = setup_1d(1.0);
        let r = 1.7;
        let got = s1.ball_volume(&[0.0], r, BallVolumeMode::Exact).unwrap();
        let expect = s1.c_k() * 4.0 * r * r * r / 3.0;
        assert!((got - expect).abs() < 1e-12);
        // cross-check against adaptive quadrature of the weight
        let quad = crate::quadrature::adaptive_simpson_split(
            &|t: f64| s1.c_k() * s1.weight(&[t]),
            -r,
            r,
            &[0.0],
            1e-10,
            40,
        )
        .unwrap();
        assert!((got - quad).abs() < 1e-10);
        assert!(s1.ball_volume(&[0.0], -1.0, BallVolumeMode::Exact).is_err());
    }

    #[test]
    fn ball_volume_2d_against_polar_quadrature() {
        let s = ReflectionSetup::new(vec![1.0, 0.5]).unwrap();
        // polar-coordinate oracle: ∫_0^r ∫_0^{2π} c h_k ρ dθ dρ
        let polar = |cx: f64, cy: f64, r: f64| {
            let f = |rho: f64| {
                let g = |theta: f64| {
                    let x = cx + rho * theta.cos();
                    let y = cy + rho * theta.sin();
                    s.c_k() * s.weight(&[x, y])
                };
                rho * adaptive_simpson_split(&g, 0.0, 2.0 * std::f64::consts::PI, &[], 1e-9, 30)
                    .unwrap()
            };
            adaptive_simpson_split(&f, 0.0, r, &[], 1e-9, 30).unwrap()
        };
        for &(cx, cy, r) in &[(0.0, 0.0, 1.0), (1.5, -0.5, 0.8), (3.0, 2.0, 1.2)] {
            let got = s
                .ball_volume(&[cx, cy], r, BallVolumeMode::Exact)
                .unwrap();
            let expect = polar(cx, cy, r);
            assert!(
                ((got - expect) / expect).abs() < 1e-5,
                "center ({cx},{cy}), r={r}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn comparable_mode_bounded_ratio() {
        let s = setup_1d(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for _ in 0..100 {
            let x = rng.gen_range(-6.0..6.0);
            let r = rng.gen_range(0.05..4.0);
            let exact = s.ball_volume(&[x], r, BallVolumeMode::Exact).unwrap();
            let comp = s.ball_volume(&[x], r, BallVolumeMode::Comparable).unwrap();
            let ratio = exact / comp;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        assert!(hi / lo < 50.0, "comparability spread {}", hi / lo);
    }

    #[test]
    fn doubling_examples() {
        let s = setup_1d(1.0);
        // centred at the origin the weight is homogeneous: ratio = (r1/r2)^{d_k}
        let chk = s.doubling_check(&[0.0], 0.3, 1.2, 1.0, 1.0).unwrap();
        let expect = (0.3f64 / 1.2).powf(s.d_k());
        assert!((chk.ratio - expect).abs() < 1e-12);
        assert!(chk.within);
        // far from the origin the ratio sits between the two power laws
        let chk = s.doubling_check(&[10.0], 0.1, 1.0, 0.9, 1.1).unwrap();
        assert!(chk.ratio > 0.9 * 0.1f64.powf(3.0));
        assert!(chk.ratio < 1.1 * 0.1f64);
        assert!(s.doubling_check(&[0.0], 1.0, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn orbit_volume_examples_and_sandwich() {
        let s = setup_1d(1.0);
        // orbit of a ball centred at a G-fixed point is the ball itself
        let v = s.ball_volume(&[0.0], 1.0, BallVolumeMode::Exact).unwrap();
        let ov = s.orbit_ball_volume(&[0.0], 1.0).unwrap();
        assert!((v - ov).abs() < 1e-8);
        // disjoint orbit copies: twice the volume
        let v = s.ball_volume(&[10.0], 1.0, BallVolumeMode::Exact).unwrap();
        let ov = s.orbit_ball_volume(&[10.0], 1.0).unwrap();
        assert!(((ov - 2.0 * v) / v).abs() < 1e-8);

        let s2 = ReflectionSetup::new(vec![1.0, 0.5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let x = [rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)];
            let r = rng.gen_range(0.1..3.0);
            let v = s2.ball_volume(&x, r, BallVolumeMode::Exact).unwrap();
            let ov = s2.orbit_ball_volume(&x, r).unwrap();
            assert!(ov >= v * (1.0 - 1e-6), "lower sandwich at {x:?}, r={r}");
            assert!(ov <= 4.0 * v * (1.0 + 1e-6), "upper sandwich at {x:?}, r={r}");
        }
    }

    #[test]
    fn volume_comparison_at_orbit_distance() {
        // V_G(x, y, d_G(x,y)) ~ μ_k(B(x, d_G(x,y))): report the max ratio.
        let s = setup_1d(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut max_ratio = 0.0f64;
        for _ in 0..200 {
            let x = [rng.gen_range(-6.0..6.0)];
            let y = [rng.gen_range(-6.0..6.0)];
            let rho = s.orbit_distance(&x, &y);
            if rho < 1e-3 {
                continue;
            }
            let vx = s.ball_volume(&x, rho, BallVolumeMode::Exact).unwrap();
            let vy = s.ball_volume(&y, rho, BallVolumeMode::Exact).unwrap();
            max_ratio = max_ratio.max(vx.max(vy) / vx);
        }
        assert!(max_ratio.is_finite() && max_ratio < 100.0, "max ratio {max_ratio}");
    }

    #[test]
    fn volumes_positive_and_monotone() {
        let s = ReflectionSetup::new(vec![1.0, 0.5]).unwrap();
        let x = [1.0, -2.0];
        let mut prev = 0.0;
        for i in 1..=10 {
            let r = 0.3 * i as f64;
            let v = s.ball_volume(&x, r, BallVolumeMode::Exact).unwrap();
            assert!(v > prev, "volume must grow with r");
            prev = v;
        }
    }

    proptest::proptest! {
        #[test]
        fn global_sign_flip_invariance(
            x0 in -5.0f64..5.0, x1 in -5.0f64..5.0,
            y0 in -5.0f64..5.0, y1 in -5.0f64..5.0,
            r in 0.1f64..2.0,
        ) {
            let s = ReflectionSetup::new(vec![1.0, 0.5]).unwrap();
            let x = [x0, x1];
            let y = [y0, y1];
            let mx = [-x0, -x1];
            let my = [-y0, -y1];
            proptest::prop_assert_eq!(s.weight(&x), s.weight(&mx));
            proptest::prop_assert_eq!(s.orbit_distance(&x, &y), s.orbit_distance(&mx, &my));
            let v = s.ball_volume(&x, r, BallVolumeMode::Comparable).unwrap();
            let mv = s.ball_volume(&mx, r, BallVolumeMode::Comparable).unwrap();
            proptest::prop_assert_eq!(v, mv);
        }
    }
}
