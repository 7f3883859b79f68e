//! Sufficient conditions for the dynamics to enter the unique equilibrium.

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::graph::{Graph, DEFAULT_EIG_MAX_ITER, DEFAULT_EIG_TOL};
use crate::model::EpidemicParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition6 {
    pub holds: bool,
    pub rho_a: f64,
    /// `(β + α)²/(γβ)`; infinite when γ = 0.
    pub rhs: f64,
    pub margin: f64,
}

/// Uniqueness condition `ρ(A) < (β + α)²/(γβ)`.
pub fn condition6(g: &Graph, p: &EpidemicParams) -> Result<Condition6> {
    p.require_cure()?;
    Ok(condition6_with_rho(g.rho(), p))
}

fn condition6_with_rho(rho_a: f64, p: &EpidemicParams) -> Condition6 {
    let rhs = cond6_rhs(p);
    Condition6 {
        holds: rho_a < rhs,
        rho_a,
        rhs,
        margin: rhs - rho_a,
    }
}

/// `(β + α)²/(γβ)`, infinite when γ = 0.
pub fn cond6_rhs(p: &EpidemicParams) -> f64 {
    let s = p.alpha() + p.beta();
    if p.gamma() == 0.0 {
        f64::INFINITY
    } else {
        s * s / (p.gamma() * p.beta())
    }
}

/// `|1 − β/(1 − x)|`.
fn h(beta: f64, node: usize, x: f64) -> Result<f64> {
    if x >= 1.0 {
        return Err(Error::SaturatedNode { node });
    }
    Ok((1.0 - beta / (1.0 - x)).abs())
}

/// Per-node `h_v = |1 − β/(1 − i_v*)|`.
pub fn h_values(p: &EpidemicParams, i_star: &[f64]) -> Result<Vec<f64>> {
    i_star.iter().enumerate().map(|(v, &x)| h(p.beta(), v, x)).collect()
}

fn check_len(g: &Graph, i_star: &[f64]) -> Result<()> {
    if i_star.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            got: i_star.len(),
        });
    }
    Ok(())
}

/// Spectral radius of `W = D + γA`, `D = diag(h_v)`.
pub fn rho_w(g: &Graph, p: &EpidemicParams, i_star: &[f64]) -> Result<f64> {
    check_len(g, i_star)?;
    let d = h_values(p, i_star)?;
    Ok(g
        .dominant_eigenvalue(Some(&d), p.gamma(), DEFAULT_EIG_TOL, DEFAULT_EIG_MAX_ITER)
        .value)
}

/// `τ = min{(1 − max_v h_v)/γ, (β + α)²/(γβ)}`.
pub fn tau(p: &EpidemicParams, i_star: &[f64]) -> Result<f64> {
    if p.gamma() == 0.0 {
        return Err(Error::ZeroInfectionRate("gamma"));
    }
    p.require_cure()?;
    let max_h = h_values(p, i_star)?.into_iter().fold(0.0, f64::max);
    Ok(((1.0 - max_h) / p.gamma()).min(cond6_rhs(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem2 {
    pub holds: bool,
    /// Printed bound-only threshold, capped at the uniqueness threshold.
    pub rhs: f64,
    /// `(1 − max_v max{h(i^{*−}), h(i_v^{*+})})/γ` without the cap.
    pub raw_rhs: f64,
}

/// Threshold that needs only the copula-free equilibrium bounds.
///
/// The raw value can exceed `(β + α)²/(γβ)` when the lower bound is
/// `(γ − β)/γ`, so the cap keeps the condition inside the regime where the
/// equilibrium is unique.
pub fn theorem2_threshold(g: &Graph, p: &EpidemicParams) -> Result<Theorem2> {
    theorem2_with_rho(g, p, g.rho())
}

fn theorem2_with_rho(g: &Graph, p: &EpidemicParams, rho_a: f64) -> Result<Theorem2> {
    if p.gamma() == 0.0 {
        return Err(Error::ZeroInfectionRate("gamma"));
    }
    let b = bounds::general_bounds(g, p)?;
    let beta = p.beta();
    let mut worst = h(beta, 0, b.lower)?;
    for (v, &u) in b.upper.iter().enumerate() {
        worst = worst.max(h(beta, v, u)?);
    }
    let raw_rhs = (1.0 - worst) / p.gamma();
    let rhs = raw_rhs.min(cond6_rhs(p));
    Ok(Theorem2 {
        holds: rho_a <= rhs,
        rhs,
        raw_rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    #[serde(rename = "rho_A")]
    pub rho_a: f64,
    pub cond6_rhs: f64,
    pub cond6_holds: bool,
    #[serde(rename = "rho_W")]
    pub rho_w: Option<f64>,
    pub tau: Option<f64>,
    pub cond8_holds: Option<bool>,
    pub thm2_rhs: Option<f64>,
    pub thm2_holds: Option<bool>,
    pub h_values: Option<Vec<f64>>,
}

/// Every condition at once. Quantities that need `i_star` are omitted when it
/// is `None`; those that need γ > 0 are omitted when γ = 0.
pub fn report(g: &Graph, p: &EpidemicParams, i_star: Option<&[f64]>) -> Result<ThresholdReport> {
    p.require_cure()?;
    let rho_a = g.rho();
    let c6 = condition6_with_rho(rho_a, p);
    let mut r = ThresholdReport {
        rho_a,
        cond6_rhs: c6.rhs,
        cond6_holds: c6.holds,
        rho_w: None,
        tau: None,
        cond8_holds: None,
        thm2_rhs: None,
        thm2_holds: None,
        h_values: None,
    };
    if p.gamma() > 0.0 {
        let t2 = theorem2_with_rho(g, p, rho_a)?;
        r.thm2_rhs = Some(t2.rhs);
        r.thm2_holds = Some(t2.holds);
    }
    if let Some(x) = i_star {
        check_len(g, x)?;
        r.h_values = Some(h_values(p, x)?);
        r.rho_w = Some(rho_w(g, p, x)?);
        if p.gamma() > 0.0 {
            let t = tau(p, x)?;
            r.tau = Some(t);
            r.cond8_holds = Some(rho_a <= t);
        }
    }
    Ok(r)
}
