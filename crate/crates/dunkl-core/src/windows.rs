//! Smooth compactly supported frequency windows, the dyadic Littlewood-Paley
//! partition, the window triples used to split a pointwise product into three
//! paraproducts, and the |ξ|^{±2s} window transfer that rewrites the
//! fractional Laplacian of a paraproduct.
//!
//! Every window is radial and built from the exp-inverse mollifier cutoff
//! η(r): η = 1 on r ≤ 1, η = 0 on r ≥ 2, smooth in between.  The annulus
//! window ψ(ξ) = η(|ξ|) − η(2|ξ|) generates the dyadic partition
//! Σ_j ψ(ξ/2^j) = 1 for ξ ≠ 0.

use serde::{Deserialize, Serialize};

use crate::grid::Grid;
use crate::{DunklError, Result};

/// Smooth ramp built from s(t) = e^{-1/t}: 0 for t ≤ 0, 1 for t ≥ 1.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Radial cutoff η: 1 on r ≤ 1, supported in r ≤ 2.
pub fn eta(r: f64) -> f64 {
    smooth_step(2.0 - r.abs())
}

/// Radial profile of a window, before dyadic scaling.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowShape {
    /// η(r/cutoff): equals 1 on r ≤ cutoff, supported in r ≤ 2·cutoff.
    Lowpass { cutoff: f64 },
    /// η(r/hi) − η(r/lo): supported in [lo, 2·hi], equals 1 on [2·lo, hi]
    /// (requires hi ≥ 2·lo for a nonempty plateau).
    Annulus { lo: f64, hi: f64 },
    /// r^{exponent} · base(r); used for the |ξ|^{±2s} transferred windows.
    Power {
        base: Box<WindowShape>,
        exponent: f64,
    },
}

impl WindowShape {
    pub fn profile(&self, r: f64) -> f64 {
        let r = r.abs();
        match self {
            WindowShape::Lowpass { cutoff } => eta(r / cutoff),
            WindowShape::Annulus { lo, hi } => eta(r / hi) - eta(r / lo),
            WindowShape::Power { base, exponent } => {
                let b = base.profile(r);
                if b == 0.0 {
                    0.0
                } else {
                    r.powf(*exponent) * b
                }
            }
        }
    }

    /// Declared support [lo, hi] (lo = 0 means a ball).
    pub fn support(&self) -> (f64, f64) {
        match self {
            WindowShape::Lowpass { cutoff } => (0.0, 2.0 * cutoff),
            WindowShape::Annulus { lo, hi } => (*lo, 2.0 * hi),
            WindowShape::Power { base, .. } => base.support(),
        }
    }

    /// Region where the profile is identically 1 (empty for Power shapes).
    pub fn plateau(&self) -> Option<(f64, f64)> {
        match self {
            WindowShape::Lowpass { cutoff } => Some((0.0, *cutoff)),
            WindowShape::Annulus { lo, hi } => {
                if *hi >= 2.0 * lo {
                    Some((2.0 * lo, *hi))
                } else {
                    None
                }
            }
            WindowShape::Power { .. } => None,
        }
    }
}

/// A radial frequency window at dyadic scale `j`: evaluates
/// profile(|ξ| / 2^j).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWindow {
    pub shape: WindowShape,
    pub j: i32,
}

impl SpectralWindow {
    pub fn new(shape: WindowShape) -> Self {
        Self { shape, j: 0 }
    }

    pub fn at_scale(&self, j: i32) -> Self {
        Self {
            shape: self.shape.clone(),
            j,
        }
    }

    pub fn scale_factor(&self) -> f64 {
        2f64.powi(self.j)
    }

    pub fn eval_radius(&self, r: f64) -> f64 {
        self.shape.profile(r / self.scale_factor())
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        let r = xi.iter().map(|t| t * t).sum::<f64>().sqrt();
        self.eval_radius(r)
    }

    /// Scaled support bounds.
    pub fn support_lo(&self) -> f64 {
        self.shape.support().0 * self.scale_factor()
    }

    pub fn support_hi(&self) -> f64 {
        self.shape.support().1 * self.scale_factor()
    }

    pub fn contains_zero(&self) -> bool {
        self.shape.support().0 == 0.0
    }

    /// A Power window over a zero-containing base is not smooth at the origin
    /// unless its exponent is an even nonnegative integer.
    pub fn smooth_at_zero(&self) -> bool {
        match &self.shape {
            WindowShape::Power { base, exponent } => {
                let base_win = SpectralWindow::new((**base).clone());
                !base_win.contains_zero()
                    || (*exponent >= 0.0
                        && (exponent / 2.0 - (exponent / 2.0).round()).abs() < 1e-12)
            }
            _ => true,
        }
    }

    /// Max magnitude of the profile on a fine radial sample outside the
    /// declared support; should be 0 up to 1e-14.
    pub fn support_leakage(&self, r_max: f64, samples: usize) -> f64 {
        let (lo, hi) = (self.support_lo(), self.support_hi());
        let mut worst = 0.0f64;
        for i in 0..=samples {
            let r = r_max * i as f64 / samples as f64;
            if r < lo * (1.0 - 1e-12) || r > hi * (1.0 + 1e-12) {
                worst = worst.max(self.eval_radius(r).abs());
            }
        }
        worst
    }

    /// Smoothness proxy: max |finite-difference derivative| of the profile up
    /// to the given order on a fine radial sample over the support.
    pub fn smoothness_proxy(&self, order: usize, samples: usize) -> f64 {
        let (lo, hi) = (self.support_lo(), self.support_hi());
        let span = (hi - lo).max(1e-6);
        let h = span / samples as f64;
        let mut vals: Vec<f64> = (0..=samples)
            .map(|i| self.eval_radius(lo + i as f64 * h))
            .collect();
        let mut worst = 0.0f64;
        for _ in 0..order {
            vals = vals.windows(2).map(|w| (w[1] - w[0]) / h).collect();
            worst = worst.max(vals.iter().fold(0.0f64, |a, &b| a.max(b.abs())));
        }
        worst
    }

    /// Sample the window as a real multiplier on a grid's frequency nodes.
    pub fn multiplier(&self, grid: &Grid) -> Vec<f64> {
        let d = grid.dim();
        let mut idx = vec![0usize; d];
        (0..grid.len())
            .map(|flat| {
                grid.multi_index(flat, &mut idx);
                let r = idx
                    .iter()
                    .map(|&m| {
                        let t = grid.axis_nodes()[m];
                        t * t
                    })
                    .sum::<f64>()
                    .sqrt();
                self.eval_radius(r)
            })
            .collect()
    }

    pub fn to_json(&self) -> WindowJson {
        let (tag, exponent) = match &self.shape {
            WindowShape::Lowpass { .. } => ("lowpass", None),
            WindowShape::Annulus { .. } => ("annulus", None),
            WindowShape::Power { exponent, base } => {
                let b = SpectralWindow::new((**base).clone());
                (
                    if b.contains_zero() {
                        "power-lowpass"
                    } else {
                        "power-annulus"
                    },
                    Some(*exponent),
                )
            }
        };
        let plateau = self.shape.plateau();
        WindowJson {
            window_type: tag.into(),
            support_lo: self.support_lo(),
            support_hi: self.support_hi(),
            plateau_lo: plateau.map(|p| p.0 * self.scale_factor()),
            plateau_hi: plateau.map(|p| p.1 * self.scale_factor()),
            exponent,
            j: self.j,
            mollifier: "exp-inverse".into(),
        }
    }
}

/// Exportable window description, consumed by the classical reference
/// implementation so both sides filter with identical windows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowJson {
    pub window_type: String,
    pub support_lo: f64,
    pub support_hi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plateau_lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plateau_hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    pub j: i32,
    pub mollifier: String,
}

/// The dyadic Littlewood-Paley window ψ(ξ) = η(ξ) − η(2ξ), supported in
/// 1/2 ≤ |ξ| ≤ 2 with Σ_j ψ(ξ/2^j) = 1 for ξ ≠ 0.
pub fn lp_partition() -> SpectralWindow {
    SpectralWindow::new(WindowShape::Annulus { lo: 0.5, hi: 1.0 })
}

/// Max deviation of Σ_{|j|≤J} ψ(r/2^j) from 1 on the dyadic annulus
/// [2^{-J+1}, 2^{J-1}], probed on a log-spaced radial sample.
pub fn partition_defect(j_half_range: i32, samples: usize) -> f64 {
    let psi = lp_partition();
    let r_lo = 2f64.powi(-j_half_range + 1);
    let r_hi = 2f64.powi(j_half_range - 1);
    let mut worst = 0.0f64;
    for i in 0..=samples {
        let r = r_lo * (r_hi / r_lo).powf(i as f64 / samples as f64);
        let sum: f64 = (-j_half_range..=j_half_range)
            .map(|j| psi.at_scale(j).eval_radius(r))
            .sum();
        worst = worst.max((sum - 1.0).abs());
    }
    worst
}

/// A paraproduct operator specification: three windows and the dyadic
/// truncation range.
#[derive(Debug, Clone)]
pub struct ParaproductSpec {
    pub theta: SpectralWindow,
    pub psi: SpectralWindow,
    pub phi: SpectralWindow,
    pub j_min: i32,
    pub j_max: i32,
}

impl ParaproductSpec {
    pub fn new(
        theta: SpectralWindow,
        psi: SpectralWindow,
        phi: SpectralWindow,
        j_min: i32,
        j_max: i32,
    ) -> Result<Self> {
        if j_min > j_max {
            return Err(DunklError::EmptyScaleRange);
        }
        Ok(Self {
            theta,
            psi,
            phi,
            j_min,
            j_max,
        })
    }

    /// Boundedness hypothesis: the supports of at least two of the three
    /// windows stay away from 0.
    pub fn supports_hypothesis(&self) -> bool {
        let away = [&self.theta, &self.psi, &self.phi]
            .iter()
            .filter(|w| !w.contains_zero())
            .count();
        away >= 2
    }
}

/// The nine windows of the three-paraproduct splitting of a pointwise
/// product fg = Π₁ + Π₂ + Π₃:
///
/// * Π₁ pairs comparable scales: ψ⁽¹⁾ the dyadic annulus, φ⁽¹⁾ the
///   telescoped band Σ_{|j|≤4} ψ_j, θ⁽¹⁾ a low-pass plateau window equal to 1
///   on |ξ| ≤ 2⁶ and supported in |ξ| ≤ 2⁷.
/// * Π₂ pairs a high slot with a strictly lower one: φ⁽²⁾ = Σ_{j<-4} ψ_j in
///   its exact telescoped form η(2⁴ξ), θ⁽²⁾ an annulus equal to 1 on
///   [2⁻², 2²] and supported in [2⁻³, 2³].
/// * Π₃ mirrors Π₂ with the slots swapped.
#[derive(Debug, Clone)]
pub struct DecompositionWindows {
    pub psi1: SpectralWindow,
    pub phi1: SpectralWindow,
    pub theta1: SpectralWindow,
    pub psi2: SpectralWindow,
    pub phi2: SpectralWindow,
    pub theta2: SpectralWindow,
    pub psi3: SpectralWindow,
    pub phi3: SpectralWindow,
    pub theta3: SpectralWindow,
}

impl DecompositionWindows {
    pub fn standard() -> Self {
        let psi = lp_partition();
        let annulus_theta = SpectralWindow::new(WindowShape::Annulus { lo: 0.125, hi: 4.0 });
        Self {
            psi1: psi.clone(),
            phi1: SpectralWindow::new(WindowShape::Annulus {
                lo: 2f64.powi(-5),
                hi: 2f64.powi(4),
            }),
            theta1: SpectralWindow::new(WindowShape::Lowpass { cutoff: 64.0 }),
            psi2: psi.clone(),
            phi2: SpectralWindow::new(WindowShape::Lowpass {
                cutoff: 2f64.powi(-4),
            }),
            theta2: annulus_theta.clone(),
            psi3: SpectralWindow::new(WindowShape::Lowpass {
                cutoff: 2f64.powi(-4),
            }),
            phi3: psi,
            theta3: annulus_theta,
        }
    }

    pub fn spec1(&self, j_min: i32, j_max: i32) -> Result<ParaproductSpec> {
        ParaproductSpec::new(
            self.theta1.clone(),
            self.psi1.clone(),
            self.phi1.clone(),
            j_min,
            j_max,
        )
    }

    pub fn spec2(&self, j_min: i32, j_max: i32) -> Result<ParaproductSpec> {
        ParaproductSpec::new(
            self.theta2.clone(),
            self.psi2.clone(),
            self.phi2.clone(),
            j_min,
            j_max,
        )
    }

    pub fn spec3(&self, j_min: i32, j_max: i32) -> Result<ParaproductSpec> {
        ParaproductSpec::new(
            self.theta3.clone(),
            self.psi3.clone(),
            self.phi3.clone(),
            j_min,
            j_max,
        )
    }

    /// Transfer by |ξ|^{±2s}: rewrite (−Δ_k)^s Π_i(f, g) as a paraproduct in
    /// which the fractional Laplacian falls on a single slot.  θ̃⁽¹⁾ = |ξ|^{2s}θ⁽¹⁾
    /// is not smooth at 0 (unless 2s is an even integer) and is flagged; all
    /// other transferred windows keep annulus supports and stay smooth.
    pub fn transfer(&self, s: f64) -> Result<TransferredWindows> {
        if !(s > 0.0) {
            return Err(DunklError::NonPositive {
                name: "fractional order s",
                value: s,
            });
        }
        let pow = |w: &SpectralWindow, e: f64| {
            SpectralWindow::new(WindowShape::Power {
                base: Box::new(w.shape.clone()),
                exponent: e,
            })
        };
        let t = TransferredWindows {
            tilde_theta1: pow(&self.theta1, 2.0 * s),
            tilde_psi1: pow(&self.psi1, -2.0 * s),
            tilde_phi1: self.phi1.clone(),
            tilde_theta2: pow(&self.theta2, 2.0 * s),
            tilde_psi2: pow(&self.psi2, -2.0 * s),
            tilde_phi2: self.phi2.clone(),
            tilde_theta3: pow(&self.theta3, 2.0 * s),
            tilde_psi3: self.psi3.clone(),
            tilde_phi3: pow(&self.phi3, -2.0 * s),
            s,
        };
        Ok(t)
    }
}

/// Transferred (tilde) windows: the fractional Laplacian moved onto the first
/// slot for Π₁ and Π₂, onto the second slot for Π₃.
#[derive(Debug, Clone)]
pub struct TransferredWindows {
    pub tilde_theta1: SpectralWindow,
    pub tilde_psi1: SpectralWindow,
    pub tilde_phi1: SpectralWindow,
    pub tilde_theta2: SpectralWindow,
    pub tilde_psi2: SpectralWindow,
    pub tilde_phi2: SpectralWindow,
    pub tilde_theta3: SpectralWindow,
    pub tilde_psi3: SpectralWindow,
    pub tilde_phi3: SpectralWindow,
    pub s: f64,
}

impl TransferredWindows {
    /// θ̃⁽¹⁾ is the only transferred window whose support contains 0.
    pub fn theta1_smooth(&self) -> bool {
        self.tilde_theta1.smooth_at_zero()
    }

    /// Pointwise defect of the multiplier-chain identity at one scale j: the
    /// chain |ξ|^{2s}·θ(ξ/2^j)·[ψ(ζ/2^j) on the f slot] must equal
    /// 2^{2js}·θ̃(ξ/2^j)·[ψ̃(ζ/2^j)·|ζ|^{2s} on the f slot] factor by factor.
    /// Returns (outer defect, slot defect) maximized over the given radii.
    pub fn chain_defect(
        &self,
        original_theta: &SpectralWindow,
        original_psi: &SpectralWindow,
        j: i32,
        radii: &[f64],
    ) -> (f64, f64) {
        let two_js = 2f64.powi(j).powf(2.0 * self.s);
        let mut outer = 0.0f64;
        let mut slot = 0.0f64;
        for &r in radii {
            let lhs_outer = r.powf(2.0 * self.s) * original_theta.at_scale(j).eval_radius(r);
            let rhs_outer = two_js * self.tilde_theta1.at_scale(j).eval_radius(r);
            outer = outer.max((lhs_outer - rhs_outer).abs());

            let lhs_slot = two_js * original_psi.at_scale(j).eval_radius(r);
            let rhs_slot = if r == 0.0 {
                0.0
            } else {
                self.tilde_psi1.at_scale(j).eval_radius(r) * r.powf(2.0 * self.s)
            };
            slot = slot.max((lhs_slot - rhs_slot).abs());
        }
        (outer, slot)
    }
}
