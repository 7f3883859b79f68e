//! Shared fixtures for the benchmarks.

use depnet::{CopulaSpec, DependenceModel, EpidemicParams, Graph};

/// Parameters of the first published star sweep.
pub fn params() -> EpidemicParams {
    EpidemicParams::new(0.2, 0.5, 0.05).expect("valid parameters")
}

pub fn model() -> DependenceModel {
    DependenceModel::new(
        CopulaSpec::gaussian(0.2).expect("valid correlation"),
        CopulaSpec::clayton(2.0).expect("valid theta"),
    )
}

/// Sparse random graph with mean degree about 10.
pub fn er_graph(n: usize) -> Graph {
    Graph::erdos_renyi(n, 10.0 / n as f64, 42).expect("valid generator parameters")
}

pub fn plaw_graph(n: usize) -> Graph {
    Graph::power_law(n, 3 * n, 2.5, 42).expect("valid generator parameters")
}
