use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::copula::{concordance_leq, CopulaSpec};
use crate::equilibrium::{solve_star, SolverOptions};
use crate::error::{Error, Result};
use crate::model::{DependenceModel, EpidemicParams};
use crate::thresholds;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub node: CopulaSpec,
    pub outer: CopulaSpec,
    pub i_h: f64,
    pub i_l: f64,
    pub tau: f64,
    pub converged: bool,
}

impl SweepRow {
    /// Parameter of the node copula, 0 for parameter-free families.
    pub fn node_param(&self) -> f64 {
        self.node.param().unwrap_or(0.0)
    }

    pub fn outer_param(&self) -> f64 {
        self.outer.param().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub params: EpidemicParams,
    pub n: usize,
    /// Node-copula major, outer-copula minor.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

/// Solves the star equilibrium and τ for every (node, outer) copula pair.
/// Non-converged cells are kept and flagged.
pub fn dependence_sweep(
    n: usize,
    p: &EpidemicParams,
    outer: &[CopulaSpec],
    node: &[CopulaSpec],
    opts: &SolverOptions,
) -> Result<SweepResult> {
    let cells: Vec<(CopulaSpec, CopulaSpec)> = node
        .iter()
        .flat_map(|&c| outer.iter().map(move |&o| (c, o)))
        .collect();
    let rows = cells
        .into_par_iter()
        .map(|(node, outer)| {
            let m = DependenceModel::new(outer, node);
            let eq = solve_star(n, p, &m, opts)?;
            let tau = thresholds::tau(p, &[eq.hub, eq.leaf])?;
            Ok(SweepRow {
                node,
                outer,
                i_h: eq.hub,
                i_l: eq.leaf,
                tau,
                converged: eq.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        params: *p,
        n,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReproTable {
    Table1,
    Table2,
}

impl FromStr for ReproTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(Self::Table1),
            "table2" => Ok(Self::Table2),
            _ => Err(Error::Config(format!("unknown table '{s}' (expected table1 or table2)"))),
        }
    }
}

impl fmt::Display for ReproTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Table1 => "table1",
            Self::Table2 => "table2",
        })
    }
}

impl ReproTable {
    pub fn params(self) -> EpidemicParams {
        let (a, b, c) = match self {
            Self::Table1 => (0.2, 0.5, 0.05),
            Self::Table2 => (0.4, 0.7, 0.05),
        };
        EpidemicParams::new(a, b, c).expect("table parameters are valid")
    }

    /// Gaussian outer correlations, in column order.
    pub fn outer(self) -> Vec<CopulaSpec> {
        [0.5, 0.0, -0.5]
            .iter()
            .map(|&s| CopulaSpec::gaussian(s).expect("valid correlation"))
            .collect()
    }

    /// Clayton node parameters θ = 1.0, 1.5, …, 6.0.
    pub fn node(self) -> Vec<CopulaSpec> {
        (0..=10)
            .map(|k| CopulaSpec::clayton(1.0 + 0.5 * k as f64).expect("valid theta"))
            .collect()
    }
}

/// The published star experiment: 11 nodes, 11 × 3 cells.
pub fn repro_table(table: ReproTable, opts: &SolverOptions) -> Result<SweepResult> {
    dependence_sweep(11, &table.params(), &table.outer(), &table.node(), opts)
}

/// Sign of dependence relative to the product copula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dependence {
    Positive,
    Independent,
    Negative,
    /// Neither above nor below the product copula everywhere.
    Unordered,
}

/// Classifies a bivariate copula by sampled concordance comparison with the
/// product copula on a 9-point grid.
pub fn classify_dependence(c: &CopulaSpec) -> Result<Dependence> {
    let ind = CopulaSpec::independence();
    let below = concordance_leq(c, &ind, 2, 9)?;
    let above = concordance_leq(&ind, c, 2, 9)?;
    Ok(match (below, above) {
        (true, true) => Dependence::Independent,
        (false, true) => Dependence::Positive,
        (true, false) => Dependence::Negative,
        (false, false) => Dependence::Unordered,
    })
}
