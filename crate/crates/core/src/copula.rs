//! n-copulas used to couple attack events: independence, the two
//! Fréchet–Hoeffding extremes, Clayton, Frank, and the equicorrelated Gaussian.
//!
//! All families here are exchangeable, so evaluation is invariant under
//! permutation of the arguments. Coordinates equal to 1 are dropped before
//! evaluation (an exact reduction for every family), which keeps the marginal
//! axiom exact even for the quadrature-backed Gaussian family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal;

/// Tolerance for copula axioms on closed-form families.
pub const TOL: f64 = 1e-9;

/// Tolerance for the Gaussian family at dimension > 2 (Gauss–Hermite quadrature).
pub const GAUSSIAN_QUADRATURE_TOL: f64 = 1e-6;

/// Archimedean parameters at or below this are rejected, not mapped to independence.
pub const MIN_ARCHIMEDEAN_PARAM: f64 = 1e-8;

/// Largest dimension accepted by [`CopulaSpec::rectangle_volume`] (2^n vertices).
pub const MAX_BOX_DIM: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopulaFamily {
    Independence,
    FrechetLower,
    FrechetUpper,
    Clayton,
    Frank,
    #[serde(rename = "gaussian")]
    GaussianEqui,
}

impl CopulaFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Independence => "independence",
            Self::FrechetLower => "frechet_lower",
            Self::FrechetUpper => "frechet_upper",
            Self::Clayton => "clayton",
            Self::Frank => "frank",
            Self::GaussianEqui => "gaussian",
        }
    }

    pub fn takes_param(self) -> bool {
        matches!(self, Self::Clayton | Self::Frank | Self::GaussianEqui)
    }
}

impl fmt::Display for CopulaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CopulaFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "independence" => Self::Independence,
            "frechet_lower" => Self::FrechetLower,
            "frechet_upper" => Self::FrechetUpper,
            "clayton" => Self::Clayton,
            "frank" => Self::Frank,
            "gaussian" => Self::GaussianEqui,
            other => return Err(Error::Config(format!("unknown copula family {other:?}"))),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    family: CopulaFamily,
    #[serde(default)]
    param: Option<f64>,
}

/// A validated copula family plus parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct CopulaSpec {
    family: CopulaFamily,
    param: Option<f64>,
}

impl TryFrom<RawSpec> for CopulaSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        Self::new(raw.family, raw.param)
    }
}

impl From<CopulaSpec> for RawSpec {
    fn from(spec: CopulaSpec) -> Self {
        RawSpec {
            family: spec.family,
            param: spec.param,
        }
    }
}

impl CopulaSpec {
    pub fn new(family: CopulaFamily, param: Option<f64>) -> Result<Self> {
        let invalid = |reason| Error::InvalidParameter {
            family,
            param,
            reason,
        };
        match (family.takes_param(), param) {
            (false, Some(_)) => return Err(invalid("family takes no parameter")),
            (true, None) => return Err(invalid("parameter required")),
            (true, Some(p)) if !p.is_finite() => return Err(invalid("must be finite")),
            _ => {}
        }
        match family {
            CopulaFamily::Clayton | CopulaFamily::Frank => {
                if param.unwrap() <= MIN_ARCHIMEDEAN_PARAM {
                    return Err(invalid("must be > 1e-8"));
                }
            }
            CopulaFamily::GaussianEqui => {
                let s = param.unwrap();
                if !(s > -1.0 && s < 1.0) {
                    return Err(invalid("correlation must lie in (-1, 1)"));
                }
            }
            _ => {}
        }
        Ok(Self { family, param })
    }

    pub fn independence() -> Self {
        Self {
            family: CopulaFamily::Independence,
            param: None,
        }
    }

    pub fn frechet_lower() -> Self {
        Self {
            family: CopulaFamily::FrechetLower,
            param: None,
        }
    }

    pub fn frechet_upper() -> Self {
        Self {
            family: CopulaFamily::FrechetUpper,
            param: None,
        }
    }

    pub fn clayton(theta: f64) -> Result<Self> {
        Self::new(CopulaFamily::Clayton, Some(theta))
    }

    pub fn frank(xi: f64) -> Result<Self> {
        Self::new(CopulaFamily::Frank, Some(xi))
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(CopulaFamily::GaussianEqui, Some(sigma))
    }

    pub fn family(&self) -> CopulaFamily {
        self.family
    }

    pub fn param(&self) -> Option<f64> {
        self.param
    }

    /// Whether the family can be evaluated at dimension `n`.
    pub fn supports_dim(&self, n: usize) -> bool {
        match self.family {
            _ if n == 0 => false,
            CopulaFamily::GaussianEqui if n > 2 => self.param.unwrap() >= 0.0,
            _ => true,
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.supports_dim(n) {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension {
                family: self.family,
                dim: n,
                param: self.param,
            })
        }
    }

    /// Axiom tolerance for this family at dimension `n`.
    pub fn tolerance(&self, n: usize) -> f64 {
        if self.family == CopulaFamily::GaussianEqui && n > 2 {
            GAUSSIAN_QUADRATURE_TOL
        } else {
            TOL
        }
    }

    /// Evaluate `C(u_1, …, u_n)`. A single argument evaluates to itself.
    pub fn eval(&self, u: &[f64]) -> Result<f64> {
        self.check_dim(u.len())?;
        for (index, &value) in u.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidArgument { index, value });
            }
        }
        Ok(self.eval_unchecked(u))
    }

    /// Evaluation without dimension or range checks; callers guarantee both.
    pub(crate) fn eval_unchecked(&self, u: &[f64]) -> f64 {
        if u.contains(&0.0) {
            return 0.0;
        }
        let active = u.iter().filter(|&&x| x < 1.0).count();
        match active {
            0 => return 1.0,
            1 => return u.iter().copied().fold(1.0, f64::min),
            _ => {}
        }
        let free = || u.iter().copied().filter(|&x| x < 1.0);
        match self.family {
            CopulaFamily::Independence => free().product(),
            CopulaFamily::FrechetUpper => free().fold(1.0, f64::min),
            CopulaFamily::FrechetLower => {
                let s: f64 = free().map(|x| 1.0 - x).sum();
                (1.0 - s).max(0.0)
            }
            CopulaFamily::Clayton => {
                let theta = self.param.unwrap();
                // Σ u^-θ − n + 1 written as 1 + Σ expm1(−θ ln u) to keep digits near u = 1.
                let inner = 1.0 + free().map(|x| (-theta * x.ln()).exp_m1()).sum::<f64>();
                clayton_outer(inner, theta)
            }
            CopulaFamily::Frank => {
                let xi = self.param.unwrap();
                let denom = (-xi).exp_m1();
                let ratio: f64 = free().map(|x| (-xi * x).exp_m1() / denom).product();
                -(ratio * denom).ln_1p() / xi
            }
            CopulaFamily::GaussianEqui => {
                let sigma = self.param.unwrap();
                if active == 2 {
                    let mut it = free();
                    let (a, b) = (it.next().unwrap(), it.next().unwrap());
                    normal::bivariate_cdf(normal::inv_cdf(a), normal::inv_cdf(b), sigma)
                } else if sigma == 0.0 {
                    free().product()
                } else {
                    one_factor_gaussian(sigma, free().map(normal::inv_cdf))
                }
            }
        }
    }

    /// Diagonal section `δ(u) = C(u, …, u)` at dimension `n`.
    pub fn diagonal(&self, u: f64, n: usize) -> Result<f64> {
        self.check_dim(n)?;
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::InvalidArgument { index: 0, value: u });
        }
        Ok(self.diagonal_unchecked(u, n))
    }

    pub(crate) fn diagonal_unchecked(&self, u: f64, n: usize) -> f64 {
        if u == 0.0 || u == 1.0 || n == 1 {
            return u;
        }
        let nf = n as f64;
        match self.family {
            CopulaFamily::Independence => u.powi(n as i32),
            CopulaFamily::FrechetUpper => u,
            CopulaFamily::FrechetLower => (nf * u - nf + 1.0).max(0.0),
            CopulaFamily::Clayton => {
                let theta = self.param.unwrap();
                clayton_outer(1.0 + nf * (-theta * u.ln()).exp_m1(), theta)
            }
            CopulaFamily::Frank => {
                let xi = self.param.unwrap();
                let denom = (-xi).exp_m1();
                let ratio = ((-xi * u).exp_m1() / denom).powi(n as i32);
                -(ratio * denom).ln_1p() / xi
            }
            CopulaFamily::GaussianEqui => {
                let sigma = self.param.unwrap();
                let x = normal::inv_cdf(u);
                if n == 2 {
                    normal::bivariate_cdf(x, x, sigma)
                } else if sigma == 0.0 {
                    u.powi(n as i32)
                } else {
                    let load = sigma.sqrt();
                    let scale = (1.0 - sigma).sqrt();
                    normal::integrate_standard_normal(|z| {
                        normal::cdf((x - load * z) / scale).powi(n as i32)
                    })
                    .clamp(0.0, 1.0)
                }
            }
        }
    }

    /// C-volume of the box `[lo, hi]`: the alternating-sign sum over its vertices.
    pub fn rectangle_volume(&self, lo: &[f64], hi: &[f64]) -> Result<f64> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        let n = lo.len();
        if n > MAX_BOX_DIM {
            return Err(Error::UnsupportedDimension {
                family: self.family,
                dim: n,
                param: self.param,
            });
        }
        self.check_dim(n)?;
        for (index, (&a, &b)) in lo.iter().zip(hi).enumerate() {
            for value in [a, b] {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::InvalidArgument { index, value });
                }
            }
            if a > b {
                return Err(Error::InvertedBox(index));
            }
        }
        let mut vertex = vec![0.0; n];
        let mut volume = 0.0;
        for mask in 0u32..(1u32 << n) {
            let mut lows = 0;
            for (j, v) in vertex.iter_mut().enumerate() {
                if mask & (1 << j) != 0 {
                    *v = lo[j];
                    lows += 1;
                } else {
                    *v = hi[j];
                }
            }
            let c = self.eval_unchecked(&vertex);
            volume += if lows % 2 == 0 { c } else { -c };
        }
        Ok(volume)
    }
}

/// `inner^(-1/θ)`, where `inner = Σ u^-θ − n + 1 ≥ 1`.
fn clayton_outer(inner: f64, theta: f64) -> f64 {
    if inner.is_infinite() {
        0.0
    } else {
        (-inner.ln() / theta).exp()
    }
}

/// `∫ φ(z) Π_j Φ((x_j − √σ z)/√(1−σ)) dz` for σ ∈ (0, 1).
fn one_factor_gaussian(sigma: f64, quantiles: impl Iterator<Item = f64> + Clone) -> f64 {
    let load = sigma.sqrt();
    let scale = (1.0 - sigma).sqrt();
    normal::integrate_standard_normal(|z| {
        quantiles
            .clone()
            .map(|x| normal::cdf((x - load * z) / scale))
            .product()
    })
    .clamp(0.0, 1.0)
}

/// Sampled check that `a ≤ b` pointwise (concordance order) on a regular grid
/// with `grid_points` per axis. A falsification test, not a proof.
pub fn concordance_leq(a: &CopulaSpec, b: &CopulaSpec, n: usize, grid_points: usize) -> Result<bool> {
    a.check_dim(n)?;
    b.check_dim(n)?;
    let g = grid_points.max(2);
    let tol = a.tolerance(n).max(b.tolerance(n));
    let mut idx = vec![0usize; n];
    let mut u = vec![0.0; n];
    loop {
        for (x, &i) in u.iter_mut().zip(&idx) {
            *x = i as f64 / (g - 1) as f64;
        }
        if a.eval_unchecked(&u) > b.eval_unchecked(&u) + tol {
            return Ok(false);
        }
        // Odometer increment.
        let mut j = 0;
        loop {
            if j == n {
                return Ok(true);
            }
            idx[j] += 1;
            if idx[j] < g {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

impl fmt::Display for CopulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(p) => write!(f, "{}:{}", self.family, p),
            None => write!(f, "{}", self.family),
        }
    }
}

/// Parses `family[:param]`, e.g. `clayton:1.5` or `independence`.
impl FromStr for CopulaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((name, p)) => {
                let p: f64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad copula parameter in {s:?}")))?;
                (name, Some(p))
            }
            None => (s, None),
        };
        Self::new(name.parse()?, param)
    }
}
