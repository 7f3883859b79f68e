//! Synchronous mean-field iteration of node infection probabilities.
//!
//! `i_v(t+1) = (1−β) i_v(t) + [1 − C(C_v(1−γ i_{u_1}(t), …), 1−α)] (1 − i_v(t))`
//!
//! Neighbor terms use the neighbors' marginal infection probabilities, taken
//! in ascending node id order. Every node reads only the previous state
//! (Jacobi update), so the per-node work is parallel.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{DependenceModel, EpidemicParams, StateVector};

/// Values this far outside [0, 1] are rounding noise and get clamped;
/// anything further out is an error.
const CLAMP_SLACK: f64 = 1e-12;

/// Below this many nodes a step runs on the calling thread.
const PARALLEL_MIN_NODES: usize = 2048;

pub(crate) fn clamp_probability(node: usize, value: f64) -> Result<f64> {
    if (-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&value) {
        Ok(value.clamp(0.0, 1.0))
    } else {
        Err(Error::StateOutOfRange { node, value })
    }
}

fn update(
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
    x: &[f64],
    v: usize,
    buf: &mut Vec<f64>,
) -> Result<f64> {
    let secure = m.stay_secure(g, v, x, p, buf);
    let next = (1.0 - p.beta()) * x[v] + (1.0 - secure) * (1.0 - x[v]);
    clamp_probability(v, next)
}

/// One synchronous step of the mean-field map.
pub fn step(
    state: &StateVector,
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
) -> Result<StateVector> {
    let n = g.node_count();
    if state.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: state.len(),
        });
    }
    m.validate(g)?;
    step_unchecked(state, g, p, m)
}

fn step_unchecked(
    state: &StateVector,
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
) -> Result<StateVector> {
    let x = &state.i;
    let n = x.len();
    let i = if n >= PARALLEL_MIN_NODES {
        (0..n)
            .into_par_iter()
            .map_init(Vec::new, |buf, v| update(g, p, m, x, v, buf))
            .collect::<Result<Vec<_>>>()?
    } else {
        let mut buf = Vec::new();
        (0..n)
            .map(|v| update(g, p, m, x, v, &mut buf))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(StateVector { i, t: state.t + 1 })
}

/// Trajectory of length `horizon + 1` starting with `state0`.
pub fn simulate(
    state0: &StateVector,
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
    horizon: usize,
) -> Result<Vec<StateVector>> {
    let mut traj = Vec::with_capacity(horizon + 1);
    traj.push(state0.clone());
    if horizon == 0 {
        return Ok(traj);
    }
    traj.push(step(state0, g, p, m)?);
    for _ in 1..horizon {
        let next = step_unchecked(traj.last().unwrap(), g, p, m)?;
        traj.push(next);
    }
    Ok(traj)
}

/// Runs `horizon` steps keeping only the running per-node minimum and maximum
/// over steps `t > burn_in`, plus the final state. Avoids storing long
/// trajectories.
pub fn tail_envelope(
    state0: &StateVector,
    g: &Graph,
    p: &EpidemicParams,
    m: &DependenceModel,
    horizon: usize,
    burn_in: usize,
) -> Result<(Vec<f64>, Vec<f64>, StateVector)> {
    let n = g.node_count();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    let mut state = state0.clone();
    if horizon > 0 {
        state = step(&state, g, p, m)?;
    }
    for t in 1..=horizon {
        if t > 1 {
            state = step_unchecked(&state, g, p, m)?;
        }
        if t > burn_in {
            for (v, &x) in state.i.iter().enumerate() {
                lo[v] = lo[v].min(x);
                hi[v] = hi[v].max(x);
            }
        }
    }
    Ok((lo, hi, state))
}
