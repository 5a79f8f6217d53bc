//! Suite configuration: setup, grid, sweep parameters and exact-rational
//! Lebesgue exponents.

use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

/// A positive rational exponent, kept exact so Hölder relations can be
/// verified without rounding.  Serialized as "num/den" (or a bare integer).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if num <= 0 || den <= 0 {
            return Err(HarnessError::Config(format!(
                "exponent {num}/{den} must be positive"
            )));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact check of 1/p = 1/p1 + 1/p2, i.e. p1·p2·... cross-multiplied in
    /// integers.
    pub fn holder_consistent(p: Rational, p1: Rational, p2: Rational) -> bool {
        // 1/p - 1/p1 - 1/p2 = 0  ⇔  den_p·num_p1·num_p2 = num_p·(den_p1·num_p2 + den_p2·num_p1)
        let lhs = (p.den as i128) * (p1.num as i128) * (p2.num as i128);
        let rhs = (p.num as i128)
            * ((p1.den as i128) * (p2.num as i128) + (p2.den as i128) * (p1.num as i128));
        lhs == rhs
    }

    pub fn greater_than_one(&self) -> bool {
        self.num > self.den
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Rational {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| -> Result<i64> {
            t.trim()
                .parse::<i64>()
                .map_err(|_| HarnessError::Config(format!("cannot parse exponent part {t:?}")))
        };
        match s.split_once('/') {
            Some((a, b)) => Rational::new(parse(a)?, parse(b)?),
            None => Rational::new(parse(s)?, 1),
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(de)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(v) => Rational::new(v, 1).map_err(serde::de::Error::custom),
        }
    }
}

/// Exponent tuple for the Leibniz-rule sweeps.  The tilde and bar pairs
/// default to (p1, p2) when omitted.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExponentTuple {
    pub p: Rational,
    pub p1: Rational,
    pub p2: Rational,
    #[serde(default)]
    pub pt1: Option<Rational>,
    #[serde(default)]
    pub pt2: Option<Rational>,
    #[serde(default)]
    pub pb1: Option<Rational>,
    #[serde(default)]
    pub pb2: Option<Rational>,
}

impl ExponentTuple {
    pub fn tilde(&self) -> (Rational, Rational) {
        (self.pt1.unwrap_or(self.p1), self.pt2.unwrap_or(self.p2))
    }

    pub fn bar(&self) -> (Rational, Rational) {
        (self.pb1.unwrap_or(self.p1), self.pb2.unwrap_or(self.p2))
    }

    /// Hölder consistency of every pair against p, exactly as rationals.
    pub fn validate(&self) -> Result<()> {
        let (pt1, pt2) = self.tilde();
        let (pb1, pb2) = self.bar();
        for (a, b) in [(self.p1, self.p2), (pt1, pt2), (pb1, pb2)] {
            if !Rational::holder_consistent(self.p, a, b) {
                return Err(HarnessError::Config(format!(
                    "exponents 1/{} ≠ 1/{a} + 1/{b}",
                    self.p
                )));
            }
        }
        Ok(())
    }

    /// The fractional-Leibniz hypothesis needs every exponent in (1, ∞).
    pub fn validate_leibniz(&self) -> Result<()> {
        self.validate()?;
        let (pt1, pt2) = self.tilde();
        let (pb1, pb2) = self.bar();
        for e in [self.p, self.p1, self.p2, pt1, pt2, pb1, pb2] {
            if !e.greater_than_one() {
                return Err(HarnessError::Config(format!(
                    "Leibniz sweeps need exponents in (1, ∞); got {e}"
                )));
            }
        }
        Ok(())
    }

    /// Paraproduct bounds only need 1 < p1, p2 < ∞; p may drop below 1.
    pub fn validate_paraproduct(&self) -> Result<()> {
        self.validate()?;
        for e in [self.p1, self.p2] {
            if !e.greater_than_one() {
                return Err(HarnessError::Config(format!(
                    "paraproduct sweeps need 1 < p1, p2 < ∞; got {e}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetupConfig {
    pub d: usize,
    pub k: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridConfig {
    pub n: usize,
    pub x_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default = "default_s_values")]
    pub s: Vec<f64>,
    /// (s₁, s₂) splittings for the split Leibniz rule; s = s₁ + s₂.
    #[serde(default = "default_s_split")]
    pub s_split: Vec<(f64, f64)>,
    #[serde(default = "default_exponents")]
    pub exponents: Vec<ExponentTuple>,
    /// Identifiers from the versioned test-function family.
    #[serde(default = "default_functions")]
    pub functions: Vec<String>,
    #[serde(default = "default_j_min")]
    pub j_min: i32,
    #[serde(default = "default_j_max")]
    pub j_max: i32,
    /// Decay exponent L; defaults to ⌈3 d_k⌉ + 1, the smallest integer
    /// satisfying the L > 3 d_k hypothesis.
    #[serde(default)]
    pub l_exponent: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_s_values() -> Vec<f64> {
    vec![0.5, 1.0]
}

fn default_s_split() -> Vec<(f64, f64)> {
    vec![(0.25, 0.25)]
}

fn default_exponents() -> Vec<ExponentTuple> {
    let r = |n, d| Rational::new(n, d).expect("static");
    vec![
        ExponentTuple {
            p: r(2, 1),
            p1: r(4, 1),
            p2: r(4, 1),
            pt1: None,
            pt2: None,
            pb1: None,
            pb2: None,
        },
        ExponentTuple {
            p: r(2, 1),
            p1: r(8, 3),
            p2: r(8, 1),
            pt1: Some(r(8, 1)),
            pt2: Some(r(8, 3)),
            pb1: None,
            pb2: None,
        },
        ExponentTuple {
            p: r(3, 2),
            p1: r(3, 1),
            p2: r(3, 1),
            pt1: None,
            pt2: None,
            pb1: None,
            pb2: None,
        },
    ]
}

fn default_functions() -> Vec<String> {
    vec![
        "gauss-0.5".into(),
        "gauss-1".into(),
        "gauss-2".into(),
        "xgauss".into(),
        "polygauss".into(),
        "bump-ball".into(),
    ]
}

fn default_j_min() -> i32 {
    -12
}

fn default_j_max() -> i32 {
    12
}

fn default_samples() -> usize {
    0 // 0 = per-suite default
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub setup: SetupConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default = "default_sweep")]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output: Option<std::path::PathBuf>,
    #[serde(default)]
    pub csv: Option<std::path::PathBuf>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Run the refinement pass and report stability factors.
    #[serde(default = "default_refine")]
    pub refine: bool,
}

fn default_sweep() -> SweepConfig {
    serde_json::from_str("{}").expect("all sweep fields have defaults")
}

fn default_seed() -> u64 {
    42
}

fn default_refine() -> bool {
    true
}

impl SuiteConfig {
    pub fn default_for(d: usize, k: Vec<f64>) -> Self {
        let grid = if d == 1 {
            GridConfig { n: 1025, x_max: 20.0 }
        } else {
            GridConfig { n: 129, x_max: 10.0 }
        };
        Self {
            setup: SetupConfig { d, k },
            grid,
            suites: Vec::new(),
            sweep: default_sweep(),
            output: None,
            csv: None,
            seed: default_seed(),
            refine: default_refine(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.setup.d == 0 {
            return Err(HarnessError::Config("dimension must be ≥ 1".into()));
        }
        if self.setup.k.len() != self.setup.d {
            return Err(HarnessError::Config(format!(
                "expected {} multiplicities, got {}",
                self.setup.d,
                self.setup.k.len()
            )));
        }
        if self.setup.k.iter().any(|&k| !(k >= 0.0) || !k.is_finite()) {
            return Err(HarnessError::Config(
                "multiplicities must be finite and nonnegative".into(),
            ));
        }
        if self.grid.n < 3 || self.grid.n % 2 == 0 {
            return Err(HarnessError::Config(format!(
                "points per axis must be odd and ≥ 3, got {}",
                self.grid.n
            )));
        }
        if !(self.grid.x_max > 0.0) {
            return Err(HarnessError::Config("x_max must be positive".into()));
        }
        if self.sweep.j_min > self.sweep.j_max {
            return Err(HarnessError::Config("empty dyadic range".into()));
        }
        for s in &self.sweep.s {
            if !(*s > 0.0) {
                return Err(HarnessError::Config(format!("s must be positive, got {s}")));
            }
        }
        for (s1, s2) in &self.sweep.s_split {
            if !(*s1 > 0.0 && *s2 > 0.0) {
                return Err(HarnessError::Config(format!(
                    "split orders must be positive, got ({s1}, {s2})"
                )));
            }
        }
        for t in &self.sweep.exponents {
            t.validate()?;
        }
        for name in &self.sweep.functions {
            crate::testfns::parse_id(name)
                .ok_or_else(|| HarnessError::Config(format!("unknown test function {name:?}")))?;
        }
        Ok(())
    }

    pub fn l_exponent(&self) -> f64 {
        self.sweep.l_exponent.unwrap_or_else(|| {
            let d_k = self.setup.d as f64 + 2.0 * self.setup.k.iter().sum::<f64>();
            (3.0 * d_k).ceil() + 1.0
        })
    }

    /// Refined copy: n → 2n − 1 halves the spacing and keeps the node set.
    pub fn refined(&self) -> Self {
        let mut c = self.clone();
        c.grid.n = 2 * self.grid.n - 1;
        c.refine = false;
        c
    }
}
