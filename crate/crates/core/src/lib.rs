//! Push/pull epidemic dynamics on graphs with copula-dependent attacks:
//! mean-field simulation, equilibrium solving, closed-form bounds,
//! convergence thresholds, and the comparative experiments built on them.

pub mod bounds;
pub mod copula;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod model;
pub mod normal;
pub mod thresholds;

pub use bounds::{BoundsKind, BoundsReport};
pub use copula::{CopulaFamily, CopulaSpec};
pub use equilibrium::{EquilibriumResult, SolverOptions, StarEquilibrium};
pub use error::{Error, Result};
pub use graph::Graph;
pub use model::{DependenceModel, EpidemicParams, StateVector};
pub use thresholds::ThresholdReport;
