//! Run configuration: a JSON file merged with command-line flags, flags winning.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use depnet::equilibrium::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use depnet::{CopulaSpec, DependenceModel, EpidemicParams, Graph, SolverOptions};
use serde::Deserialize;

use crate::error::CliError;

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    EdgeList(PathBuf),
    Star { n: usize },
    Regular { n: usize, d: usize, seed: u64 },
    Er { n: usize, p: f64, seed: u64 },
    PowerLaw { n: usize, m: usize, exponent: f64, seed: u64 },
}

fn fields<T: FromStr>(spec: &str, text: &str, want: usize) -> Result<Vec<T>, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != want {
        return Err(CliError::input(format!("graph spec '{spec}' needs {want} comma-separated values")));
    }
    parts
        .iter()
        .map(|s| s.parse().map_err(|_| CliError::input(format!("graph spec '{spec}': bad value '{s}'"))))
        .collect()
}

impl FromStr for GraphSource {
    type Err = CliError;

    /// `star:N`, `regular:N,D,SEED`, `er:N,P,SEED`, `plaw:N,M,EXP,SEED`, or a path.
    fn from_str(spec: &str) -> Result<Self, CliError> {
        let Some((kind, rest)) = spec.split_once(':') else {
            return Ok(Self::EdgeList(spec.into()));
        };
        match kind {
            "star" => Ok(Self::Star { n: fields(spec, rest, 1)?[0] }),
            "regular" => {
                let v: Vec<u64> = fields(spec, rest, 3)?;
                Ok(Self::Regular { n: v[0] as usize, d: v[1] as usize, seed: v[2] })
            }
            "er" => {
                let v: Vec<f64> = fields(spec, rest, 3)?;
                let seed = fields::<u64>(spec, rest.rsplit(',').next().unwrap_or(""), 1)?[0];
                Ok(Self::Er { n: v[0] as usize, p: v[1], seed })
            }
            "plaw" => {
                let v: Vec<f64> = fields(spec, rest, 4)?;
                let seed = fields::<u64>(spec, rest.rsplit(',').next().unwrap_or(""), 1)?[0];
                Ok(Self::PowerLaw { n: v[0] as usize, m: v[1] as usize, exponent: v[2], seed })
            }
            // Anything else with a colon (e.g. a Windows drive) is a path.
            _ => Ok(Self::EdgeList(spec.into())),
        }
    }
}

impl GraphSource {
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            Self::Regular { n, d, .. } => Self::Regular { n, d, seed },
            Self::Er { n, p, .. } => Self::Er { n, p, seed },
            Self::PowerLaw { n, m, exponent, .. } => Self::PowerLaw { n, m, exponent, seed },
            other => other,
        }
    }

    pub fn build(&self) -> Result<Graph, CliError> {
        let g = match self {
            Self::EdgeList(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
                Graph::from_edge_list(&text)?
            }
            Self::Star { n } => Graph::star(*n)?,
            Self::Regular { n, d, seed } => Graph::random_regular(*n, *d, *seed)?,
            Self::Er { n, p, seed } => Graph::erdos_renyi(*n, *p, *seed)?,
            Self::PowerLaw { n, m, exponent, seed } => Graph::power_law(*n, *m, *exponent, *seed)?,
        };
        Ok(g)
    }
}

/// A graph given either as a spec string or as a tagged object.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum GraphRepr {
    Text(String),
    Tagged(GraphSource),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    outer: Option<CopulaSpec>,
    node: Option<CopulaSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverFile {
    tol: Option<f64>,
    max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    outer: Option<Vec<CopulaSpec>>,
    node: Option<Vec<CopulaSpec>>,
    n: Option<usize>,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    params: Option<ParamsFile>,
    model: Option<ModelFile>,
    graph: Option<GraphRepr>,
    solver: Option<SolverFile>,
    output: Option<PathBuf>,
    horizon: Option<usize>,
    seed: Option<u64>,
    full_precision: Option<bool>,
    initial: Option<String>,
    sweep: Option<SweepFile>,
    grid: Option<Vec<[f64; 3]>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("config {}: {e}", path.display())))
    }
}

/// Command-line values that can override the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub graph: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub outer: Vec<CopulaSpec>,
    pub node: Vec<CopulaSpec>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub horizon: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub full_precision: bool,
    pub initial: Option<String>,
}

/// Fully merged configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    graph: Option<GraphSource>,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    pub outer: Vec<CopulaSpec>,
    pub node: Vec<CopulaSpec>,
    pub solver: SolverOptions,
    pub horizon: usize,
    pub out: Option<PathBuf>,
    pub full_precision: bool,
    pub initial: Option<String>,
    pub star_size: Option<usize>,
    pub grid: Option<Vec<[f64; 3]>>,
}

pub const DEFAULT_HORIZON: usize = 100;

impl RunConfig {
    pub fn merge(file: ConfigFile, cli: Overrides) -> Result<Self, CliError> {
        let params = file.params.unwrap_or_default();
        let model = file.model.unwrap_or_default();
        let solver = file.solver.unwrap_or_default();
        let sweep = file.sweep.unwrap_or_default();

        let graph = match (cli.graph, file.graph) {
            (Some(s), _) | (None, Some(GraphRepr::Text(s))) => Some(s.parse()?),
            (None, Some(GraphRepr::Tagged(g))) => Some(g),
            (None, None) => None,
        };
        let seed = cli.seed.or(file.seed);
        let graph = match (graph, seed) {
            (Some(g), Some(s)) => Some(g.with_seed(s)),
            (g, _) => g,
        };

        let pick = |cli: Vec<CopulaSpec>, list: Option<Vec<CopulaSpec>>, single: Option<CopulaSpec>| {
            if !cli.is_empty() {
                cli
            } else if let Some(l) = list {
                l
            } else {
                single.into_iter().collect()
            }
        };
        let outer = pick(cli.outer, sweep.outer, model.outer);
        let node = pick(cli.node, sweep.node, model.node);

        let tol = cli.tol.or(solver.tol).unwrap_or(DEFAULT_TOL);
        let max_iter = cli.max_iter.or(solver.max_iter).unwrap_or(DEFAULT_MAX_ITER);
        Ok(Self {
            graph,
            alpha: cli.alpha.or(params.alpha),
            beta: cli.beta.or(params.beta),
            gamma: cli.gamma.or(params.gamma),
            outer,
            node,
            solver: SolverOptions::new(tol, max_iter)?,
            horizon: cli.horizon.or(file.horizon).unwrap_or(DEFAULT_HORIZON),
            out: cli.out.or(file.output),
            full_precision: cli.full_precision || file.full_precision.unwrap_or(false),
            initial: cli.initial.or(file.initial),
            star_size: sweep.n,
            grid: file.grid,
        })
    }

    pub fn graph(&self) -> Result<Graph, CliError> {
        self.graph
            .as_ref()
            .ok_or_else(|| CliError::input("no graph given (use --graph or a config 'graph' key)"))?
            .build()
    }

    pub fn has_graph(&self) -> bool {
        self.graph.is_some()
    }

    pub fn params(&self) -> Result<EpidemicParams, CliError> {
        let get = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::input(format!("missing --{name} (or params.{name} in the config)")))
        };
        Ok(EpidemicParams::new(get(self.alpha, "alpha")?, get(self.beta, "beta")?, get(self.gamma, "gamma")?)?)
    }

    /// The single dependence model; independence where a copula is not given.
    pub fn model(&self) -> Result<DependenceModel, CliError> {
        let one = |list: &[CopulaSpec], flag: &str| match list {
            [] => Ok(CopulaSpec::independence()),
            [c] => Ok(*c),
            _ => Err(CliError::input(format!("--{flag} given more than once; only 'sweep' takes lists"))),
        };
        Ok(DependenceModel::new(one(&self.outer, "outer")?, one(&self.node, "node")?))
    }

    /// Output path `PREFIX_suffix`, or `None` to write to stdout.
    pub fn output(&self, suffix: &str) -> Option<PathBuf> {
        self.out.as_ref().map(|prefix| {
            let mut name = prefix.as_os_str().to_owned();
            name.push(format!("_{suffix}"));
            PathBuf::from(name)
        })
    }
}
