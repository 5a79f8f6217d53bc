//! Gamma function and normalized Bessel series: the building blocks of the
//! rank-one Dunkl kernel.
//!
//! The normalized Bessel function used throughout is
//!
//! ```text
//! j_α(u) = Γ(α+1) Σ_n (-1)^n (u/2)^{2n} / (n! Γ(n+α+1)),     j_α(0) = 1,
//! ```
//!
//! with the closed forms j_{-1/2}(u) = cos u and j_{1/2}(u) = sin(u)/u.  The
//! rank-one kernel on the imaginary axis is then
//!
//! ```text
//! E_k(ix, y) = j_{k-1/2}(xy) + i·(xy/(2k+1))·j_{k+1/2}(xy),
//! ```
//!
//! which tensorizes over coordinate axes for the Z₂^d root system.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::geometry::ReflectionSetup;
use crate::{DunklError, Result};

/// Series/asymptotic crossover for the Bessel evaluations.  Below the seam the
/// power series keeps full accuracy in f64; above it the Hankel asymptotic
/// expansion takes over before series cancellation eats the mantissa.
pub const BESSEL_SEAM: f64 = 30.0;

// Lanczos approximation, g = 607/128, Godfrey's 15-term coefficient set.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162e-6,
];

/// Gamma function for positive arguments, relative error below 1e-12 on
/// [0.1, 50].
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(DunklError::NonPositive {
            name: "gamma argument",
            value: x,
        });
    }
    Ok(gamma_positive(x))
}

pub(crate) fn gamma_positive(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFF[0];
    for (i, c) in LANCZOS_COEFF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Order of a normalized Bessel function; must exceed -1 so that every
/// Γ(n+α+1) in the series is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(pub(crate) f64);

impl BesselOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > -1.0 {
            Ok(Self(alpha))
        } else {
            Err(DunklError::BesselOrderOutOfRange(alpha))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }
}

/// Normalized Bessel function j_α(u).
pub fn normalized_bessel(order: BesselOrder, u: f64) -> f64 {
    let alpha = order.0;
    let v = u.abs();
    if alpha == -0.5 {
        return v.cos();
    }
    if alpha == 0.5 {
        return sinc(v);
    }
    if v <= BESSEL_SEAM {
        bessel_series(alpha, v, -1.0)
    } else {
        bessel_asymptotic(alpha, v)
    }
}

fn sinc(v: f64) -> f64 {
    if v < 1e-8 {
        1.0 - v * v / 6.0
    } else {
        v.sin() / v
    }
}

/// Power series Σ_n sign^n (v/2)^{2n} Γ(α+1)/(n! Γ(n+α+1)); `sign = -1` gives
/// the oscillatory j_α, `sign = +1` the modified direction j_α(iv).
fn bessel_series(alpha: f64, v: f64, sign: f64) -> f64 {
    let q = sign * 0.25 * v * v;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for n in 0..500 {
        let nf = n as f64;
        term *= q / ((nf + 1.0) * (nf + 1.0 + alpha));
        sum += term;
        if term.abs() < 1e-16 * sum.abs().max(1e-280) {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion of J_α, rewritten for the normalized function.
/// The divergent tail is truncated at the smallest term.
fn bessel_asymptotic(alpha: f64, v: f64) -> f64 {
    let mu = 4.0 * alpha * alpha;
    let chi = v - (0.5 * alpha + 0.25) * PI;
    let mut p = 1.0f64;
    let mut q = 0.0f64;
    let mut a = 1.0f64;
    let mut prev = f64::INFINITY;
    for m in 1..=18u32 {
        let mf = f64::from(m);
        a *= (mu - (2.0 * mf - 1.0).powi(2)) / (mf * 8.0);
        let term = a / v.powi(m as i32);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        match m % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let bessel_j = (2.0 / (PI * v)).sqrt() * (p * chi.cos() - q * chi.sin());
    gamma_positive(alpha + 1.0) * (0.5 * v).powf(-alpha) * bessel_j
}

/// Exponentially scaled modified direction: e^{-v}·j_α(iv) for v ≥ 0.
///
/// j_α(iv) grows like e^v, so the scaled form is what every caller that
/// multiplies by a Gaussian actually needs; it never overflows.
pub fn scaled_modified_bessel(order: BesselOrder, v: f64) -> f64 {
    debug_assert!(v >= 0.0);
    let alpha = order.0;
    if alpha == -0.5 {
        // e^{-v} cosh v
        return 0.5 * (1.0 + (-2.0 * v).exp());
    }
    if alpha == 0.5 {
        // e^{-v} sinh(v)/v
        return if v < 1e-8 {
            1.0 - v + v * v / 3.0
        } else {
            -(-2.0 * v).exp_m1() / (2.0 * v)
        };
    }
    if v <= BESSEL_SEAM {
        bessel_series(alpha, v, 1.0) * (-v).exp()
    } else {
        // I_α asymptotics: e^{-v} j_α(iv) = Γ(α+1)(v/2)^{-α}(2πv)^{-1/2} Σ (-1)^m a_m/v^m
        let mu = 4.0 * alpha * alpha;
        let mut s = 1.0f64;
        let mut a = 1.0f64;
        let mut prev = f64::INFINITY;
        for m in 1..=18u32 {
            let mf = f64::from(m);
            a *= (mu - (2.0 * mf - 1.0).powi(2)) / (mf * 8.0);
            let term = a / v.powi(m as i32);
            if term.abs() >= prev {
                break;
            }
            prev = term.abs();
            if m % 2 == 1 {
                s -= term;
            } else {
                s += term;
            }
        }
        gamma_positive(alpha + 1.0) * (0.5 * v).powf(-alpha) * (2.0 * PI * v).sqrt().recip() * s
    }
}

/// Rank-one Dunkl kernel E_k(ix, y) for multiplicity k ≥ 0.
pub fn dunkl_kernel_1d(multiplicity: f64, x: f64, y: f64) -> Result<Complex64> {
    validate_multiplicity(multiplicity)?;
    Ok(kernel_1d(multiplicity, x * y))
}

pub(crate) fn validate_multiplicity(k: f64) -> Result<()> {
    if k.is_finite() && k >= 0.0 {
        Ok(())
    } else {
        Err(DunklError::NegativeMultiplicity(k))
    }
}

/// E_k(ix, y) as a function of the product u = x·y (the kernel depends on the
/// arguments only through it).
pub(crate) fn kernel_1d(k: f64, u: f64) -> Complex64 {
    if k == 0.0 {
        return Complex64::new(u.cos(), u.sin());
    }
    let re = normalized_bessel(BesselOrder(k - 0.5), u);
    let im = u / (2.0 * k + 1.0) * normalized_bessel(BesselOrder(k + 0.5), u);
    Complex64::new(re, im)
}

/// Dunkl kernel E_k(ix, y) on R^d for the Z₂^d setup: the product of the
/// per-axis rank-one kernels.
pub fn dunkl_kernel(setup: &ReflectionSetup, x: &[f64], y: &[f64]) -> Result<Complex64> {
    if x.len() != setup.dim() {
        return Err(DunklError::DimensionMismatch {
            expected: setup.dim(),
            got: x.len(),
        });
    }
    if y.len() != setup.dim() {
        return Err(DunklError::DimensionMismatch {
            expected: setup.dim(),
            got: y.len(),
        });
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for axis in 0..setup.dim() {
        acc *= kernel_1d(setup.multiplicity(axis), x[axis] * y[axis]);
    }
    Ok(acc)
}

/// Exponentially scaled real-argument rank-one kernel e^{-|ab|}·E_k(a, b).
///
/// The unscaled kernel grows like e^{|ab|}; callers pairing it with Gaussian
/// factors fold the exponent analytically.
pub fn scaled_real_kernel_1d(multiplicity: f64, a: f64, b: f64) -> Result<f64> {
    validate_multiplicity(multiplicity)?;
    Ok(scaled_real_kernel_axis(multiplicity, a, b))
}

pub(crate) fn scaled_real_kernel_axis(k: f64, a: f64, b: f64) -> f64 {
    let u = a * b;
    let v = u.abs();
    if k == 0.0 {
        return (u - v).exp();
    }
    let even = scaled_modified_bessel(BesselOrder(k - 0.5), v);
    let odd = u / (2.0 * k + 1.0) * scaled_modified_bessel(BesselOrder(k + 0.5), v);
    even + odd
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // ------------------------------------------------------------------
    // Double-double arithmetic: an extended-precision oracle for the
    // Bessel series, used to validate the series/asymptotic seam.
    // ------------------------------------------------------------------
    #[derive(Clone, Copy, Debug)]
    struct Dd {
        hi: f64,
        lo: f64,
    }

    impl Dd {
        fn from(x: f64) -> Self {
            Dd { hi: x, lo: 0.0 }
        }

        fn two_sum(a: f64, b: f64) -> (f64, f64) {
            let s = a + b;
            let bb = s - a;
            let err = (a - (s - bb)) + (b - bb);
            (s, err)
        }

        fn two_prod(a: f64, b: f64) -> (f64, f64) {
            let p = a * b;
            let err = a.mul_add(b, -p);
            (p, err)
        }

        fn add(self, other: Dd) -> Dd {
            let (s, e) = Dd::two_sum(self.hi, other.hi);
            let e = e + self.lo + other.lo;
            let (hi, lo) = Dd::two_sum(s, e);
            Dd { hi, lo }
        }

        fn mul(self, other: Dd) -> Dd {
            let (p, e) = Dd::two_prod(self.hi, other.hi);
            let e = e + self.hi * other.lo + self.lo * other.hi;
            let (hi, lo) = Dd::two_sum(p, e);
            Dd { hi, lo }
        }

        fn div_f64(self, d: f64) -> Dd {
            let q1 = self.hi / d;
            let (p, e) = Dd::two_prod(q1, d);
            let r = ((self.hi - p) - e + self.lo) / d;
            let (hi, lo) = Dd::two_sum(q1, r);
            Dd { hi, lo }
        }

        fn value(self) -> f64 {
            self.hi + self.lo
        }
    }

    /// 200-term normalized Bessel series in double-double arithmetic.
    fn bessel_series_dd(alpha: f64, u: f64, sign: f64) -> f64 {
        let q = Dd::from(sign * 0.25).mul(Dd::from(u).mul(Dd::from(u)));
        let mut term = Dd::from(1.0);
        let mut sum = Dd::from(1.0);
        for n in 0..200 {
            let nf = n as f64;
            term = term.mul(q).div_f64(nf + 1.0).div_f64(nf + 1.0 + alpha);
            sum = sum.add(term);
            if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-200) {
                break;
            }
        }
        sum.value()
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-13);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-11);
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
    }

    #[test]
    fn gamma_recurrence_on_random_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x: f64 = rng.gen_range(0.1..49.0);
            let ratio = gamma(x + 1.0).unwrap() / (x * gamma(x).unwrap());
            assert!(
                (ratio - 1.0).abs() < 1e-12,
                "recurrence defect {:e} at x={x}",
                (ratio - 1.0).abs()
            );
        }
    }

    #[test]
    fn bessel_closed_form_orders() {
        let half = BesselOrder::new(0.5).unwrap();
        let neg_half = BesselOrder::new(-0.5).unwrap();
        assert!((normalized_bessel(neg_half, PI) + 1.0).abs() < 1e-12);
        assert!((normalized_bessel(half, 0.0) - 1.0).abs() < 1e-15);
        // j_{3/2}(1) = 3(sin 1 - cos 1)
        let t32 = BesselOrder::new(1.5).unwrap();
        let expect = 3.0 * (1f64.sin() - 1f64.cos());
        assert!((normalized_bessel(t32, 1.0) - expect).abs() < 1e-13);
        assert!((normalized_bessel(t32, 1.0) - 0.903_506_6).abs() < 1e-6);
        assert!(BesselOrder::new(-1.0).is_err());
    }

    #[test]
    fn bessel_seam_matches_extended_precision_series() {
        // The dd series keeps ~32 digits; cancellation at u≈34 costs at most
        // ~15 of them, leaving a reference good to well below 1e-12.
        for &alpha in &[-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5] {
            let order = BesselOrder::new(alpha).unwrap();
            let mut u = 26.0;
            while u <= 34.0 {
                let reference = bessel_series_dd(alpha, u, -1.0);
                let got = normalized_bessel(order, u);
                assert!(
                    (got - reference).abs() < 1e-10,
                    "seam defect {:e} at alpha={alpha}, u={u}",
                    (got - reference).abs()
                );
                u += 0.25;
            }
        }
    }

    #[test]
    fn scaled_modified_bessel_seam() {
        for &alpha in &[0.0, 1.0, 1.5, 2.0, 3.0] {
            let order = BesselOrder::new(alpha).unwrap();
            for &v in &[28.0, 29.5, 30.0, 30.5, 32.0, 40.0] {
                let reference = bessel_series_dd(alpha, v, 1.0) * (-v).exp();
                let got = scaled_modified_bessel(order, v);
                assert!(
                    ((got - reference) / reference).abs() < 1e-10,
                    "modified seam defect at alpha={alpha}, v={v}"
                );
            }
        }
    }

    #[test]
    fn kernel_reduces_to_exponential_at_zero_multiplicity() {
        let e = dunkl_kernel_1d(0.0, 1.0, PI).unwrap();
        assert!((e.re + 1.0).abs() < 1e-12);
        assert!(e.im.abs() < 1e-12);
        // generic series path must agree with e^{ixy} too
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x: f64 = rng.gen_range(-20.0..20.0);
            let y: f64 = rng.gen_range(-20.0..20.0);
            let u = x * y;
            let generic = Complex64::new(
                normalized_bessel(BesselOrder(-0.5), u),
                u * normalized_bessel(BesselOrder(0.5), u),
            );
            let exact = Complex64::new(u.cos(), u.sin());
            assert!((generic - exact).norm() < 1e-12);
        }
    }

    #[test]
    fn kernel_normalization_and_reference_value() {
        for &k in &[0.0, 0.5, 1.0, 2.5] {
            for &y in &[0.0, 0.7, -3.0, 12.0] {
                let e = dunkl_kernel_1d(k, 0.0, y).unwrap();
                assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            }
        }
        // E_1(i·1, 1) = sin 1 + i (sin 1 - cos 1)
        let e = dunkl_kernel_1d(1.0, 1.0, 1.0).unwrap();
        let expect = Complex64::new(1f64.sin(), 1f64.sin() - 1f64.cos());
        assert!((e - expect).norm() < 1e-13);
        assert!((e - Complex64::new(0.841_471_0, 0.301_168_9)).norm() < 1e-6);
        assert!(dunkl_kernel_1d(-0.25, 1.0, 1.0).is_err());
    }

    #[test]
    fn kernel_modulus_bounded_by_one() {
        let setup = ReflectionSetup::new(vec![1.0, 0.5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut max_norm = 0.0f64;
        for _ in 0..10_000 {
            let x = [rng.gen_range(-25.0..25.0), rng.gen_range(-25.0..25.0)];
            let y = [rng.gen_range(-25.0..25.0), rng.gen_range(-25.0..25.0)];
            let e = dunkl_kernel(&setup, &x, &y).unwrap();
            max_norm = max_norm.max(e.norm());
        }
        assert!(max_norm <= 1.0 + 1e-10, "max |E_k| = {max_norm}");
    }

    #[test]
    fn kernel_eigen_equation_via_finite_differences() {
        // T_x applied to x ↦ E_k(ix, y) equals iy·E_k(ix, y); the difference
        // part of T is exact, the derivative is a central difference, so the
        // residual is O(h²) and drops by ~4 when h is halved.
        for &k in &[0.5, 1.0, 2.5] {
            for &(x, y) in &[(0.8, 1.3), (2.0, -0.7), (-1.4, 2.2), (5.0, 3.0)] {
                let f = |t: f64| kernel_1d(k, t * y);
                let residual = |h: f64| {
                    let deriv = (f(x + h) - f(x - h)) / (2.0 * h);
                    let refl = k * (f(x) - f(-x)) / x;
                    (deriv + refl - Complex64::i() * y * f(x)).norm()
                };
                let h = 1e-4 * x.abs().max(1.0);
                let (r1, r2) = (residual(h), residual(0.5 * h));
                assert!(r1 < 1e-6, "eigen residual {r1:e} at k={k}, x={x}, y={y}");
                if r1 > 1e-11 {
                    let ratio = r1 / r2;
                    assert!(
                        (2.5..6.0).contains(&ratio),
                        "halving h gave ratio {ratio} (k={k}, x={x}, y={y})"
                    );
                }
            }
        }
    }

    #[test]
    fn scaled_real_kernel_matches_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let a: f64 = rng.gen_range(-8.0..8.0);
            let b: f64 = rng.gen_range(-8.0..8.0);
            let got = scaled_real_kernel_1d(0.0, a, b).unwrap();
            assert!((got - (a * b - (a * b).abs()).exp()).abs() < 1e-14);
        }
        // k > 0: dominated by 1 (E_k(a,b) ≤ e^{|a||b|} for real arguments)
        for _ in 0..200 {
            let a: f64 = rng.gen_range(-40.0..40.0);
            let b: f64 = rng.gen_range(-40.0..40.0);
            let got = scaled_real_kernel_1d(1.0, a, b).unwrap();
            assert!(got.is_finite() && got >= 0.0 && got <= 1.0 + 1e-12);
        }
    }

    proptest::proptest! {
        #[test]
        fn kernel_symmetry_scaling_conjugation(
            k in 0.0f64..3.0,
            x in -15.0f64..15.0,
            y in -15.0f64..15.0,
            t in 0.1f64..4.0,
        ) {
            let e = kernel_1d(k, x * y);
            // symmetry: same series argument
            let swapped = kernel_1d(k, y * x);
            proptest::prop_assert!((e - swapped).norm() == 0.0);
            // scaling E(i t x, y) = E(i x, t y)
            let lhs = kernel_1d(k, (t * x) * y);
            let rhs = kernel_1d(k, x * (t * y));
            proptest::prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
            // conjugation: conj E(ix,y) = E(-ix,y)
            let conj = kernel_1d(k, -x * y);
            proptest::prop_assert!((e.conj() - conj).norm() < 1e-14);
        }
    }
}
