use rayon::prelude::*;
use serde::Serialize;

use super::stats::least_squares;
use crate::bounds;
use crate::equilibrium::{solve_certified, SolverOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{DependenceModel, EpidemicParams};
use crate::thresholds;

/// Fewest pooled (node, triple) samples accepted for the regression.
pub const MIN_SAMPLES: usize = 4;

const REGRESSORS: [&str; 4] = ["intercept", "lower", "upper", "degree"];

const ALPHAS: [f64; 7] = [0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5];

/// The (α, β, γ) grid of the approximation study. With `subsample`, every
/// other value along each axis is kept.
pub fn study_grid(subsample: bool) -> Vec<EpidemicParams> {
    let betas: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let gammas: Vec<f64> = (1..=10).map(|k| k as f64 / 100.0).collect();
    let step = if subsample { 2 } else { 1 };
    let mut out = Vec::new();
    for &a in ALPHAS.iter().step_by(step) {
        for &b in betas.iter().step_by(step) {
            for &c in gammas.iter().step_by(step) {
                out.push(EpidemicParams::new(a, b, c).expect("grid values are probabilities"));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxRow {
    /// Index into [`ApproxModel::triples`].
    pub triple: usize,
    pub node: usize,
    pub degree: usize,
    pub i_star: f64,
    pub lower: f64,
    pub upper: f64,
    pub i_tilde: f64,
    pub i_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleErrors {
    pub params: EpidemicParams,
    /// `Σ_v (î_v − i_v*)`.
    pub err_g: f64,
    /// `Σ_v (i_v^{*+} − i_v*)`.
    pub upper_err: f64,
    /// `Σ_v (i^{*−} − i_v*)`.
    pub lower_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxModel {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    /// Mean over surviving triples of `Σ_v (î_v − i_v*)`; positive means overestimation.
    #[serde(rename = "err_G")]
    pub err_g: f64,
    pub upper_err: f64,
    pub lower_err: f64,
    /// Regressors dropped as collinear; non-empty means the fit is degenerate.
    pub dropped: Vec<&'static str>,
    pub grid_size: usize,
    /// Triples skipped because the solver did not converge.
    pub unconverged: usize,
    #[serde(skip)]
    pub triples: Vec<TripleErrors>,
    #[serde(skip)]
    pub rows: Vec<ApproxRow>,
}

impl ApproxModel {
    pub fn degenerate(&self) -> bool {
        !self.dropped.is_empty()
    }

    pub fn predict(&self, lower: f64, upper: f64, degree: usize) -> f64 {
        self.k0 + self.k1 * lower + self.k2 * upper + self.k3 * degree as f64
    }
}

struct Solved {
    params: EpidemicParams,
    i_star: Vec<f64>,
    lower: f64,
    upper: Vec<f64>,
}

enum Outcome {
    Unconverged,
    /// Converged but outside the certified convergence regime.
    Rejected,
    Kept(Solved),
}

/// Solves every triple of `grid` on `g`, keeps those satisfying the
/// post-solve spectral condition `ρ(A) ≤ τ`, and regresses `i_v*` on
/// `[1, i^{*−}, i_v^{*+}, deg(v)]` over the pooled nodes. The fitted value
/// `ĩ_v` is averaged with the upper bound to give `î_v`. Fit and error are
/// computed on the same data.
pub fn fit_approximation(
    g: &Graph,
    grid: &[EpidemicParams],
    m: &DependenceModel,
    opts: &SolverOptions,
) -> Result<ApproxModel> {
    m.validate(g)?;
    let rho = g.rho();
    let outcomes = grid
        .par_iter()
        .map(|p| -> Result<Outcome> {
            let certified = rho < thresholds::cond6_rhs(p);
            let eq = solve_certified(g, p, m, opts, certified)?;
            if !eq.converged {
                return Ok(Outcome::Unconverged);
            }
            if p.gamma() > 0.0 && rho > thresholds::tau(p, &eq.i_star)? {
                return Ok(Outcome::Rejected);
            }
            let b = bounds::general_bounds(g, p)?;
            Ok(Outcome::Kept(Solved {
                params: *p,
                i_star: eq.i_star,
                lower: b.lower,
                upper: b.upper,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let unconverged = outcomes.iter().filter(|o| matches!(o, Outcome::Unconverged)).count();
    let kept: Vec<Solved> = outcomes
        .into_iter()
        .filter_map(|o| match o {
            Outcome::Kept(s) => Some(s),
            _ => None,
        })
        .collect();

    let n = g.node_count();
    let samples = kept.len() * n;
    if samples < MIN_SAMPLES {
        return Err(Error::Regression(format!(
            "{samples} samples survive the grid filter, need at least {MIN_SAMPLES}"
        )));
    }
    let degrees = g.degrees();
    let mut cols: Vec<Vec<f64>> = (0..4).map(|_| Vec::with_capacity(samples)).collect();
    let mut y = Vec::with_capacity(samples);
    for s in &kept {
        for v in 0..n {
            cols[0].push(1.0);
            cols[1].push(s.lower);
            cols[2].push(s.upper[v]);
            cols[3].push(degrees[v] as f64);
            y.push(s.i_star[v]);
        }
    }
    let fit = least_squares(&cols, &y)?;
    let mut model = ApproxModel {
        k0: fit.coef[0],
        k1: fit.coef[1],
        k2: fit.coef[2],
        k3: fit.coef[3],
        err_g: 0.0,
        upper_err: 0.0,
        lower_err: 0.0,
        dropped: fit.dropped.iter().map(|&j| REGRESSORS[j]).collect(),
        grid_size: grid.len(),
        unconverged,
        triples: Vec::with_capacity(kept.len()),
        rows: Vec::with_capacity(samples),
    };
    for (t, s) in kept.iter().enumerate() {
        let mut e = TripleErrors {
            params: s.params,
            err_g: 0.0,
            upper_err: 0.0,
            lower_err: 0.0,
        };
        for v in 0..n {
            let i_tilde = model.predict(s.lower, s.upper[v], degrees[v]);
            let i_hat = 0.5 * (i_tilde + s.upper[v]);
            e.err_g += i_hat - s.i_star[v];
            e.upper_err += s.upper[v] - s.i_star[v];
            e.lower_err += s.lower - s.i_star[v];
            model.rows.push(ApproxRow {
                triple: t,
                node: v,
                degree: degrees[v],
                i_star: s.i_star[v],
                lower: s.lower,
                upper: s.upper[v],
                i_tilde,
                i_hat,
            });
        }
        model.triples.push(e);
    }
    let k = kept.len() as f64;
    model.err_g = model.triples.iter().map(|e| e.err_g).sum::<f64>() / k;
    model.upper_err = model.triples.iter().map(|e| e.upper_err).sum::<f64>() / k;
    model.lower_err = model.triples.iter().map(|e| e.lower_err).sum::<f64>() / k;
    Ok(model)
}
