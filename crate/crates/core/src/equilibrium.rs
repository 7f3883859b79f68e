//! Equilibrium infection probabilities by Picard iteration of
//! `x_v ← (1 − K_v(x)) / (β + 1 − K_v(x))`, where `K_v` is the one-step
//! probability that a secure node stays secure.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{DependenceModel, EpidemicParams};
use crate::thresholds;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Damping applied once the update norm has grown on two consecutive sweeps.
const DAMPING: f64 = 0.5;

const PARALLEL_MIN_NODES: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Keep every sweep's update norm in [`EquilibriumResult::residuals`].
    pub record_residuals: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            record_residuals: false,
        }
    }
}

impl SolverOptions {
    pub fn new(tol: f64, max_iter: usize) -> Result<Self> {
        if !(tol > 0.0) || max_iter == 0 {
            return Err(Error::Config(format!(
                "solver needs tol > 0 and max_iter >= 1 (got {tol}, {max_iter})"
            )));
        }
        Ok(Self {
            tol,
            max_iter,
            record_residuals: false,
        })
    }

    pub fn recording(mut self) -> Self {
        self.record_residuals = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumResult {
    pub i_star: Vec<f64>,
    pub iterations: usize,
    /// Max-norm of the last fixed-point defect `f(x) − x`.
    pub residual: f64,
    /// Whether the uniqueness/contraction condition on ρ(A) held.
    pub uniqueness_certified: bool,
    pub converged: bool,
    /// Whether damping was switched on.
    pub damped: bool,
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

#[inline]
fn fixed_point_value(secure: f64, beta: f64) -> f64 {
    let infect = 1.0 - secure;
    infect / (beta + infect)
}

fn sweep(g: &Graph, p: &EpidemicParams, m: &DependenceModel, x: &[f64], out: &mut [f64]) {
    let beta = p.beta();
    if x.len() >= PARALLEL_MIN_NODES {
        out.par_iter_mut().enumerate().for_each_init(Vec::new, |buf, (v, y)| {
            *y = fixed_point_value(m.stay_secure(g, v, x, p, buf), beta);
        });
    } else {
        let mut buf = Vec::new();
        for (v, y) in out.iter_mut().enumerate() {
            *y = fixed_point_value(m.stay_secure(g, v, x, p, &mut buf), beta);
        }
    }
}

/// Picard iteration driver shared by the general and star solvers.
/// `map(x, out)` writes the fixed-point map image of `x` into `out`.
fn picard(
    start: Vec<f64>,
    opts: &SolverOptions,
    mut map: impl FnMut(&[f64], &mut [f64]),
) -> (Vec<f64>, usize, f64, bool, bool, Vec<f64>) {
    let mut x = start;
    let mut y = vec![0.0; x.len()];
    let mut residuals = Vec::new();
    let mut prev = f64::INFINITY;
    let mut growth = 0;
    let mut damped = false;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        map(&x, &mut y);
        residual = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if opts.record_residuals {
            residuals.push(residual);
        }
        if residual < opts.tol {
            return (y, it, residual, true, damped, residuals);
        }
        if residual > prev {
            growth += 1;
            if growth >= 2 {
                damped = true;
            }
        } else {
            growth = 0;
        }
        prev = residual;
        if damped {
            for (xi, yi) in x.iter_mut().zip(&y) {
                *xi += DAMPING * (yi - *xi);
            }
        } else {
            std::mem::swap(&mut x, &mut y);
        }
    }
    (x, opts.max_iter, residual, false, damped, residuals)
}

/// Solve the equilibrium system on `g`. Starts at the pull-only value
/// `α/(α+β)` on every node. Non-convergence is reported through
/// `converged = false` together with the last iterate.
pub fn solve(
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
    opts: &SolverOptions,
) -> Result<EquilibriumResult> {
    let cond6 = thresholds::condition6(g, p)?;
    solve_certified(g, p, m, opts, cond6.holds)
}

/// As [`solve`], with the uniqueness certificate supplied by the caller
/// (saves recomputing ρ(A) across parameter sweeps on one graph).
pub fn solve_certified(
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
    opts: &SolverOptions,
    certified: bool,
) -> Result<EquilibriumResult> {
    p.require_cure()?;
    m.validate(g)?;
    let start = vec![p.pull_only_equilibrium(); g.node_count()];
    let (i_star, iterations, residual, converged, damped, residuals) =
        picard(start, opts, |x, out| sweep(g, p, m, x, out));
    Ok(EquilibriumResult {
        i_star,
        iterations,
        residual,
        uniqueness_certified: certified,
        converged,
        damped,
        residuals,
    })
}

/// Per-node defect of the equilibrium equation
/// `|(1 − K_v)(1 − x_v) − β x_v|` at `x`.
pub fn defect(g: &Graph, p: &EpidemicParams, m: &DependenceModel, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            got: x.len(),
        });
    }
    m.validate(g)?;
    let mut buf = Vec::new();
    Ok((0..x.len())
        .map(|v| {
            let secure = m.stay_secure(g, v, x, p, &mut buf);
            ((1.0 - secure) * (1.0 - x[v]) - p.beta() * x[v]).abs()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarEquilibrium {
    pub hub: f64,
    pub leaf: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

impl StarEquilibrium {
    /// Per-node vector for `Graph::star(n)` (hub first).
    pub fn expand(&self, n: usize) -> Vec<f64> {
        let mut v = vec![self.leaf; n];
        v[0] = self.hub;
        v
    }
}

/// Two-dimensional equilibrium system of a star with `n` nodes: the hub
/// sees `n − 1` leaves through the diagonal section of the node copula,
/// each leaf sees only the hub.
pub fn solve_star(
    n: usize,
    p: &EpidemicParams,
    m: &DependenceModel,
    opts: &SolverOptions,
) -> Result<StarEquilibrium> {
    if n < 2 {
        return Err(Error::GraphParams(format!("star needs n >= 2, got {n}")));
    }
    p.require_cure()?;
    m.validate_degrees([n - 1, 1])?;
    let beta = p.beta();
    let start = vec![p.pull_only_equilibrium(); 2];
    let (x, iterations, residual, converged, _, _) = picard(start, opts, |x, out| {
        let (hub, leaf) = (x[0], x[1]);
        out[0] = fixed_point_value(m.stay_secure_uniform(n - 1, leaf, p), beta);
        out[1] = fixed_point_value(m.stay_secure_uniform(1, hub, p), beta);
    });
    Ok(StarEquilibrium {
        hub: x[0],
        leaf: x[1],
        iterations,
        residual,
        converged,
    })
}
