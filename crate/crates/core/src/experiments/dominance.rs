use std::collections::BTreeSet;

use serde::Serialize;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{DependenceModel, EpidemicParams, StateVector};

/// Default grid points per axis for the sampled concordance check.
pub const COND16_GRID: usize = 9;
/// Largest full grid evaluated per degree; beyond it quasi-random points are used.
pub const COND16_BUDGET: usize = 100_000;
pub const COND16_QUASI_POINTS: usize = 2000;
/// A trajectory dips below its comparison by more than this before we call it a violation.
pub const DOMINANCE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition18 {
    pub holds: bool,
    pub min_value: f64,
    pub mu: f64,
}

/// `min_v C(δ_{C_v}(1 − γμ), 1 − α) ≥ β` with `μ = max{1 − β, min{α + γ Deg, 1}}`.
pub fn condition18(g: &Graph, p: &EpidemicParams, m: &DependenceModel) -> Result<Condition18> {
    m.validate(g)?;
    let deg_max = g.max_degree() as f64;
    let mu = (1.0 - p.beta()).max((p.alpha() + p.gamma() * deg_max).min(1.0));
    let degrees: BTreeSet<usize> = g.degrees().into_iter().collect();
    let min_value = degrees
        .into_iter()
        .map(|d| m.stay_secure_uniform(d, mu, p))
        .fold(f64::INFINITY, f64::min);
    // An empty graph has no nodes to constrain.
    let min_value = if min_value.is_finite() { min_value } else { 1.0 };
    Ok(Condition18 {
        holds: min_value >= p.beta(),
        min_value,
        mu,
    })
}

/// Additive-recurrence low-discrepancy sequence in `dim` dimensions.
fn quasi_points(dim: usize, count: usize) -> impl Iterator<Item = Vec<f64>> {
    // Root of x^(dim+1) = x + 1.
    let mut phi = 2.0_f64;
    for _ in 0..50 {
        let f = phi.powi(dim as i32 + 1) - phi - 1.0;
        let df = (dim as f64 + 1.0) * phi.powi(dim as i32) - 1.0;
        phi -= f / df;
    }
    let steps: Vec<f64> = (1..=dim).map(|j| (1.0 / phi.powi(j as i32)).fract()).collect();
    (1..=count).map(move |k| steps.iter().map(|a| (0.5 + k as f64 * a).fract()).collect())
}

fn grid_points(dim: usize, g: usize) -> impl Iterator<Item = Vec<f64>> {
    let total = g.pow(dim as u32);
    (0..total).map(move |mut k| {
        (0..dim)
            .map(|_| {
                let i = k % g;
                k /= g;
                i as f64 / (g - 1) as f64
            })
            .collect()
    })
}

/// Sampled check of `C(C_v(u), u₀) ≤ C′(C′_v(u), u₀)` at every degree present
/// in `g`. A falsification test: `true` means no sampled point violated it.
pub fn condition16_sampled(
    g: &Graph,
    m: &DependenceModel,
    m2: &DependenceModel,
    grid: usize,
) -> Result<bool> {
    m.validate(g)?;
    m2.validate(g)?;
    let grid = grid.max(2);
    let degrees: BTreeSet<usize> = g.degrees().into_iter().filter(|&d| d > 0).collect();
    for d in degrees {
        let tol = m.outer.tolerance(2) + m.node.tolerance(d) + m2.outer.tolerance(2) + m2.node.tolerance(d);
        let secure = |model: &DependenceModel, u: &[f64]| {
            let push = model.node_survival(&u[1..]);
            model.outer.eval_unchecked(&[push, u[0]])
        };
        let violated = |u: &Vec<f64>| secure(m, u) > secure(m2, u) + tol;
        let full = (d + 1) as u32;
        let fits = grid.checked_pow(full).is_some_and(|n| n <= COND16_BUDGET);
        let bad = if fits {
            grid_points(d + 1, grid).any(|u| violated(&u))
        } else {
            quasi_points(d + 1, COND16_QUASI_POINTS).any(|u| violated(&u))
        };
        if bad {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub cond16_sampled: bool,
    pub cond18: Condition18,
    /// `i(t) ≥ i′(t)` componentwise for every `t ≤ horizon`.
    pub dominated: bool,
    /// First `(t, node)` where it failed.
    pub first_violation: Option<(usize, usize)>,
}

fn first_violation(
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
    m2: &DependenceModel,
    i0: &StateVector,
    horizon: usize,
) -> Result<Option<(usize, usize)>> {
    let mut a = i0.clone();
    let mut b = i0.clone();
    for t in 1..=horizon {
        a = dynamics::step(&a, g, p, m)?;
        b = dynamics::step(&b, g, p, m2)?;
        if let Some(v) = (0..a.len()).find(|&v| a.i[v] < b.i[v] - DOMINANCE_SLACK) {
            return Ok(Some((t, v)));
        }
    }
    Ok(None)
}

/// Checks both sufficient conditions for `m` to dominate `m2` and simulates
/// both models from `i0` to see whether dominance actually held.
pub fn dominance_check(
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
    m2: &DependenceModel,
    i0: &StateVector,
    horizon: usize,
    grid: usize,
) -> Result<DominanceReport> {
    if i0.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            got: i0.len(),
        });
    }
    let cond16_sampled = condition16_sampled(g, m, m2, grid)?;
    let cond18 = condition18(g, p, m)?;
    let violation = first_violation(g, p, m, m2, i0, horizon)?;
    Ok(DominanceReport {
        cond16_sampled,
        cond18,
        dominated: violation.is_none(),
        first_violation: violation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub graph: Graph,
    pub t: usize,
    pub node: usize,
}

/// Scans every graph on `i0.len()` labelled nodes (edge subsets in increasing
/// bitmask order, bit `k` for the `k`-th pair in lexicographic order) and
/// returns the first on which `m` fails to dominate `m2` within `horizon` steps.
/// With `connected_only`, disconnected graphs are skipped.
pub fn find_dominance_counterexample(
    p: &EpidemicParams,
    m: &DependenceModel,
    m2: &DependenceModel,
    i0: &StateVector,
    horizon: usize,
    connected_only: bool,
) -> Result<Option<Counterexample>> {
    let n = i0.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    if pairs.len() >= 31 {
        return Err(Error::GraphParams(format!("exhaustive search over {n} nodes is too large")));
    }
    for mask in 0u32..(1 << pairs.len()) {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e);
        let g = Graph::from_edges(n, edges)?;
        if connected_only && !g.is_connected() {
            continue;
        }
        if m.validate(&g).is_err() || m2.validate(&g).is_err() {
            continue;
        }
        if let Some((t, node)) = first_violation(&g, p, m, m2, i0, horizon)? {
            return Ok(Some(Counterexample { graph: g, t, node }));
        }
    }
    Ok(None)
}
