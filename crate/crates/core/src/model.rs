//! Epidemic parameters, the dependence model, and the per-node
//! "stays secure" probability that every other module builds on.

use serde::{Deserialize, Serialize};

use crate::copula::CopulaSpec;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Pull-infection (`alpha`), cure (`beta`) and per-edge push-infection
/// (`gamma`) probabilities per time step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct EpidemicParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl TryFrom<RawParams> for EpidemicParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.alpha, raw.beta, raw.gamma)
    }
}

impl From<EpidemicParams> for RawParams {
    fn from(p: EpidemicParams) -> Self {
        RawParams {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
        }
    }
}

impl EpidemicParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { name, value });
            }
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub(crate) fn require_cure(&self) -> Result<()> {
        if self.beta > 0.0 {
            Ok(())
        } else {
            Err(Error::ZeroCure)
        }
    }

    /// Equilibrium of the pull-only recursion, `α / (α + β)`.
    pub fn pull_only_equilibrium(&self) -> f64 {
        if self.alpha == 0.0 {
            0.0
        } else {
            self.alpha / (self.alpha + self.beta)
        }
    }
}

/// Outer 2-copula between push and pull attacks, and the per-node copula
/// family coupling the push attacks against one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceModel {
    pub outer: CopulaSpec,
    pub node: CopulaSpec,
}

impl DependenceModel {
    pub fn new(outer: CopulaSpec, node: CopulaSpec) -> Self {
        Self { outer, node }
    }

    pub fn independent() -> Self {
        Self::new(CopulaSpec::independence(), CopulaSpec::independence())
    }

    /// Checks that the outer copula is bivariate-capable and the node copula
    /// can be evaluated at every degree present in `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.validate_degrees(g.degrees())
    }

    pub(crate) fn validate_degrees(&self, degrees: impl IntoIterator<Item = usize>) -> Result<()> {
        self.outer.eval(&[0.5, 0.5])?;
        for d in degrees {
            if d >= 2 && !self.node.supports_dim(d) {
                return Err(Error::UnsupportedDimension {
                    family: self.node.family(),
                    dim: d,
                    param: self.node.param(),
                });
            }
        }
        Ok(())
    }

    /// Node copula applied to push-survival arguments. No neighbors means no
    /// push attack (value 1); a single argument passes through unchanged.
    pub(crate) fn node_survival(&self, args: &[f64]) -> f64 {
        match args.len() {
            0 => 1.0,
            1 => args[0],
            _ => self.node.eval_unchecked(args),
        }
    }

    /// `C(C_v(1 − γ x_{u_1}, …, 1 − γ x_{u_deg}), 1 − α)`: the probability
    /// that a secure node `v` stays secure for one step given neighbor
    /// infection probabilities `x`.
    pub fn stay_secure(
        &self,
        g: &Graph,
        v: usize,
        x: &[f64],
        p: &EpidemicParams,
        buf: &mut Vec<f64>,
    ) -> f64 {
        buf.clear();
        buf.extend(g.neighbors(v).iter().map(|&u| 1.0 - p.gamma * x[u]));
        let push = self.node_survival(buf);
        self.outer.eval_unchecked(&[push, 1.0 - p.alpha])
    }

    /// As [`Self::stay_secure`] with every neighbor at the same value `x`:
    /// `C(δ_{C_v}(1 − γ x), 1 − α)` at dimension `deg`.
    pub fn stay_secure_uniform(&self, deg: usize, x: f64, p: &EpidemicParams) -> f64 {
        let push = match deg {
            0 => 1.0,
            _ => self.node.diagonal_unchecked(1.0 - p.gamma * x, deg),
        };
        self.outer.eval_unchecked(&[push, 1.0 - p.alpha])
    }
}

/// Infection probabilities of every node at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub i: Vec<f64>,
    pub t: usize,
}

impl StateVector {
    pub fn new(i: Vec<f64>, t: usize) -> Result<Self> {
        for (node, &value) in i.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::StateOutOfRange { node, value });
            }
        }
        Ok(Self { i, t })
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n], 0)
    }

    pub fn len(&self) -> usize {
        self.i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }
}
