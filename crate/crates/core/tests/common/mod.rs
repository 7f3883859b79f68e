//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use depnet::{CopulaSpec, DependenceModel, EpidemicParams, Graph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn params(rng: &mut ChaCha8Rng) -> EpidemicParams {
    EpidemicParams::new(
        rng.gen_range(0.01..0.9),
        rng.gen_range(0.05..0.95),
        rng.gen_range(0.005..0.5),
    )
    .unwrap()
}

/// A mix of star, regular, Erdős–Rényi and power-law graphs.
pub fn graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let seed = rng.gen();
    match rng.gen_range(0..4) {
        0 => Graph::star(rng.gen_range(3..=max_n)).unwrap(),
        1 => loop {
            let n = rng.gen_range(6..=max_n);
            let d = rng.gen_range(2..=4);
            if let Ok(g) = Graph::random_regular(n, d, seed) {
                break g;
            }
        },
        2 => {
            let n = rng.gen_range(5..=max_n);
            Graph::erdos_renyi(n, rng.gen_range(0.1..0.4), seed).unwrap()
        }
        _ => {
            let n = rng.gen_range(8..=max_n);
            Graph::power_law(n, 2 * n, rng.gen_range(2.1..3.0), seed).unwrap()
        }
    }
}

pub fn outer_copula(rng: &mut ChaCha8Rng) -> CopulaSpec {
    match rng.gen_range(0..6) {
        0 => CopulaSpec::independence(),
        1 => CopulaSpec::frechet_lower(),
        2 => CopulaSpec::frechet_upper(),
        3 => CopulaSpec::clayton(rng.gen_range(0.1..8.0)).unwrap(),
        4 => CopulaSpec::frank(rng.gen_range(0.1..15.0)).unwrap(),
        _ => CopulaSpec::gaussian(rng.gen_range(-0.9..0.9)).unwrap(),
    }
}

/// Node copulas that are genuine copulas at every dimension.
pub fn node_copula(rng: &mut ChaCha8Rng) -> CopulaSpec {
    match rng.gen_range(0..5) {
        0 => CopulaSpec::independence(),
        1 => CopulaSpec::frechet_upper(),
        2 => CopulaSpec::clayton(rng.gen_range(0.1..8.0)).unwrap(),
        3 => CopulaSpec::frank(rng.gen_range(0.1..15.0)).unwrap(),
        _ => CopulaSpec::gaussian(rng.gen_range(0.0..0.9)).unwrap(),
    }
}

pub fn model(rng: &mut ChaCha8Rng) -> DependenceModel {
    DependenceModel::new(outer_copula(rng), node_copula(rng))
}

/// Parameters satisfying the uniqueness condition on `g`.
pub fn unique_params(rng: &mut ChaCha8Rng, g: &Graph) -> EpidemicParams {
    let rho = g.rho();
    loop {
        let p = params(rng);
        if rho < depnet::thresholds::cond6_rhs(&p) {
            return p;
        }
    }
}
