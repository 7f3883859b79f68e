//! Closed-form bounds on equilibrium and long-run infection probabilities.
//!
//! The equilibrium bounds hold for every choice of copulas; the
//! non-equilibrium bounds depend on the dependence model and bracket the
//! liminf/limsup of each trajectory whether or not it converges.

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::model::{DependenceModel, EpidemicParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsKind {
    General,
    Star,
    Regular,
    Nonequilibrium,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarExtras {
    pub hub_upper: f64,
    /// Valid leaf bound: the leaf recursion evaluated at the hub bound.
    pub leaf_upper: f64,
    /// Positive root of `γx² + (α+β−γ)x − α = 0` (the hub formula with a
    /// single neighbor). It assumes the hub is no more infected than a leaf,
    /// which is the opposite of the actual ordering, so it can fall below
    /// the leaf equilibrium. Reported for comparison only.
    pub leaf_upper_closed_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonEquilibrium {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// `μ_v = max{1 − β, min{γ deg(v) + α, 1}}`, an eventual upper bound on `i_v(t)`.
    pub mu: Vec<f64>,
    /// `ν = min{1 − β, α}`, an eventual lower bound on every `i_v(t)`.
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub kind: BoundsKind,
    /// Lower bound shared by every node.
    pub lower: f64,
    /// Per-node upper bound.
    pub upper: Vec<f64>,
    pub star: Option<StarExtras>,
    pub nonequilibrium: Option<NonEquilibrium>,
}

/// Copula-free lower bound on every equilibrium probability.
///
/// When `γ > α + β` the bound `(γ − β)/γ` relies on every node having at
/// least one neighbor; with an isolated node present the bound falls back to
/// the pull-only value, which that node attains exactly.
pub fn equilibrium_lower(p: &EpidemicParams, has_isolated: bool) -> f64 {
    let (a, b, c) = (p.alpha(), p.beta(), p.gamma());
    if c > a + b && !has_isolated {
        (c - b) / c
    } else {
        p.pull_only_equilibrium()
    }
}

/// Copula-free upper bound for a node of degree `deg`: `M/(β + M)` with
/// `M = min{α + γ deg/(β + 1), 1}`.
pub fn equilibrium_upper(p: &EpidemicParams, deg: usize) -> f64 {
    let m = (p.alpha() + p.gamma() * deg as f64 / (p.beta() + 1.0)).min(1.0);
    if m == 0.0 {
        0.0
    } else {
        m / (p.beta() + m)
    }
}

/// General bounds valid on any graph and for any copulas.
pub fn general_bounds(g: &Graph, p: &EpidemicParams) -> Result<BoundsReport> {
    p.require_cure()?;
    Ok(BoundsReport {
        kind: BoundsKind::General,
        lower: equilibrium_lower(p, g.has_isolated_node()),
        upper: g.degrees().into_iter().map(|d| equilibrium_upper(p, d)).collect(),
        star: None,
        nonequilibrium: None,
    })
}

/// Positive root of `a x² + (α + β − a) x − α = 0` for `a > 0`, written to
/// avoid cancellation when the linear coefficient is positive.
fn positive_root(a: f64, alpha: f64, beta: f64) -> f64 {
    let b = alpha + beta - a;
    let disc = (b * b + 4.0 * a * alpha).sqrt();
    if b > 0.0 {
        2.0 * alpha / (b + disc)
    } else {
        (-b + disc) / (2.0 * a)
    }
}

/// Upper fixed point of `x = min{α + a x, 1} / (β + min{α + a x, 1})`
/// where `a` is the effective push rate (γ times the neighbor count).
fn refined_upper(a: f64, p: &EpidemicParams) -> f64 {
    let (alpha, beta) = (p.alpha(), p.beta());
    if a == 0.0 {
        return p.pull_only_equilibrium();
    }
    // 1/(β+1) ≥ (1−α)/a, without dividing by a.
    if a >= (1.0 - alpha) * (beta + 1.0) {
        1.0 / (beta + 1.0)
    } else {
        positive_root(a, alpha, beta)
    }
}

/// Refined bounds for `Graph::star(n)`; node 0 is the hub.
pub fn star_bounds(n: usize, p: &EpidemicParams) -> Result<BoundsReport> {
    if n < 2 {
        return Err(crate::Error::GraphParams(format!("star needs n >= 2, got {n}")));
    }
    p.require_cure()?;
    let hub_upper = refined_upper((n - 1) as f64 * p.gamma(), p);
    let m = (p.alpha() + p.gamma() * hub_upper).min(1.0);
    let leaf_upper = if m == 0.0 { 0.0 } else { m / (p.beta() + m) };
    let leaf_upper_closed_form = refined_upper(p.gamma(), p);
    let mut upper = vec![leaf_upper; n];
    upper[0] = hub_upper;
    Ok(BoundsReport {
        kind: BoundsKind::Star,
        lower: equilibrium_lower(p, false),
        upper,
        star: Some(StarExtras {
            hub_upper,
            leaf_upper,
            leaf_upper_closed_form,
        }),
        nonequilibrium: None,
    })
}

/// `(lower, upper)` shared by every node of a `d`-regular graph.
pub fn regular_bounds(d: usize, p: &EpidemicParams) -> Result<(f64, f64)> {
    p.require_cure()?;
    Ok((equilibrium_lower(p, d == 0), refined_upper(d as f64 * p.gamma(), p)))
}

/// Bounds for `g`, using the star or regular refinement when `g` has that shape.
pub fn equilibrium_bounds(g: &Graph, p: &EpidemicParams) -> Result<BoundsReport> {
    if let Some(n) = g.star_size() {
        return star_bounds(n, p);
    }
    if let Some(d) = g.regular_degree() {
        let (lower, upper) = regular_bounds(d, p)?;
        return Ok(BoundsReport {
            kind: BoundsKind::Regular,
            lower,
            upper: vec![upper; g.node_count()],
            star: None,
            nonequilibrium: None,
        });
    }
    general_bounds(g, p)
}

fn affine_limit(secure: f64, beta: f64) -> f64 {
    (1.0 - secure) / (beta + 1.0 - secure)
}

/// Bounds on `liminf i_v(t)` and `limsup i_v(t)` for the given copulas.
///
/// Both branches agree when the stay-secure probability equals β, so the
/// ratio branch is used there.
pub fn nonequilibrium_bounds(
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
) -> Result<BoundsReport> {
    p.require_cure()?;
    m.validate(g)?;
    let (alpha, beta, gamma) = (p.alpha(), p.beta(), p.gamma());
    let nu = (1.0 - beta).min(alpha);
    let mu: Vec<f64> = g
        .degrees()
        .into_iter()
        .map(|d| (1.0 - beta).max((gamma * d as f64 + alpha).min(1.0)))
        .collect();

    let mut lower = Vec::with_capacity(g.node_count());
    let mut upper = Vec::with_capacity(g.node_count());
    let mut buf = Vec::new();
    for v in 0..g.node_count() {
        let k_lo = m.stay_secure_uniform(g.degree(v), nu, p);
        let lo = if k_lo >= beta {
            affine_limit(k_lo, beta)
        } else {
            (beta - k_lo) * (1.0 - mu[v]) + 1.0 - beta
        };
        let k_hi = m.stay_secure(g, v, &mu, p, &mut buf);
        let hi = if k_hi >= beta {
            affine_limit(k_hi, beta)
        } else {
            (beta - k_hi) * (1.0 - lo) + 1.0 - beta
        };
        lower.push(lo);
        upper.push(hi);
    }
    let eq = general_bounds(g, p)?;
    Ok(BoundsReport {
        kind: BoundsKind::Nonequilibrium,
        lower: eq.lower,
        upper: eq.upper,
        star: None,
        nonequilibrium: Some(NonEquilibrium {
            lower,
            upper,
            mu,
            nu,
        }),
    })
}
