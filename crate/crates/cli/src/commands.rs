use std::fs::{self, File};
use std::io::{self, BufWriter, Write};

use depnet::bounds::{equilibrium_bounds, nonequilibrium_bounds};
use depnet::dynamics::simulate;
use depnet::equilibrium::solve;
use depnet::experiments::{dependence_sweep, fit_approximation, study_grid, repro_table, ReproTable, SweepResult};
use depnet::graph::{DEFAULT_EIG_MAX_ITER, DEFAULT_EIG_TOL};
use depnet::io::{self as csv, Precision};
use depnet::{thresholds, CopulaSpec, EpidemicParams, StateVector};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;

/// Star size used by `sweep` when the graph is not itself a star.
pub const DEFAULT_SWEEP_STAR: usize = 11;

fn precision(cfg: &RunConfig) -> Precision {
    if cfg.full_precision {
        Precision::Full
    } else {
        Precision::Short
    }
}

/// Writes to `PREFIX_suffix` when an output prefix is set, else to stdout.
fn emit(
    cfg: &RunConfig,
    suffix: &str,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match cfg.output(suffix) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            let mut out = BufWriter::new(File::create(&path)?);
            write(&mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write(&mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Secondary JSON output: a file next to the primary one, or stderr.
fn emit_side_json(cfg: &RunConfig, suffix: &str, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(io::Error::from)?;
    match cfg.output(suffix) {
        Some(path) => fs::write(path, text + "\n")?,
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

pub fn spectral(cfg: &RunConfig) -> Result<(), CliError> {
    let g = cfg.graph()?;
    let est = g.spectral_radius(DEFAULT_EIG_TOL, DEFAULT_EIG_MAX_ITER);
    let degrees = g.degrees();
    let report = json!({
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "rho_A": est.value,
        "iterations": est.iterations,
        "converged": est.converged,
        "degree": {
            "min": degrees.iter().min().copied().unwrap_or(0),
            "max": g.max_degree(),
            "mean": g.mean_degree(),
            "isolated": degrees.iter().filter(|&&d| d == 0).count(),
        },
    });
    emit(cfg, "spectral.json", |out| write_json(out, &report))?;
    if !est.converged {
        return Err(CliError::NotConverged(format!(
            "power iteration did not converge in {} iterations",
            est.iterations
        )));
    }
    Ok(())
}

/// `--initial` is a uniform value or a CSV file of per-node values, either
/// one value per line or `node,value` rows, with an optional header.
fn initial_state(spec: Option<&str>, n: usize) -> Result<StateVector, CliError> {
    let Some(spec) = spec else {
        return Err(CliError::input("simulate needs --initial VALUE|PATH"));
    };
    if let Ok(v) = spec.trim().parse::<f64>() {
        return Ok(StateVector::uniform(n, v)?);
    }
    let text = fs::read_to_string(spec).map_err(|e| CliError::input(format!("cannot read {spec}: {e}")))?;
    let mut values = vec![None; n];
    let mut next = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || CliError::input(format!("{spec}:{}: cannot parse '{line}'", lineno + 1));
        let (node, value) = match fields.as_slice() {
            [v] => (next, v.parse::<f64>()),
            [node, v] => match node.parse::<usize>() {
                Ok(node) => (node, v.parse::<f64>()),
                Err(_) if lineno == 0 => continue,
                Err(_) => return Err(bad()),
            },
            _ => return Err(bad()),
        };
        let value = match value {
            Ok(v) => v,
            Err(_) if lineno == 0 => continue,
            Err(_) => return Err(bad()),
        };
        let slot = values
            .get_mut(node)
            .ok_or_else(|| CliError::input(format!("{spec}: node {node} out of range for {n} nodes")))?;
        *slot = Some(value);
        next = node + 1;
    }
    let i = values
        .into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| CliError::input(format!("{spec}: no value for node {v}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StateVector::new(i, 0)?)
}

pub fn simulate_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let g = cfg.graph()?;
    let p = cfg.params()?;
    let m = cfg.model()?;
    let i0 = initial_state(cfg.initial.as_deref(), g.node_count())?;
    let traj = simulate(&i0, &g, &p, &m, cfg.horizon)?;
    emit(cfg, "trajectory.csv", |out| csv::write_trajectory(out, &traj, precision(cfg)))
}

pub fn equilibrium(cfg: &RunConfig) -> Result<(), CliError> {
    let g = cfg.graph()?;
    let p = cfg.params()?;
    let m = cfg.model()?;
    let eq = solve(&g, &p, &m, &cfg.solver)?;
    emit(cfg, "equilibrium.csv", |out| csv::write_equilibrium(out, &g, &eq.i_star, precision(cfg)))?;
    let report = thresholds::report(&g, &p, Some(&eq.i_star))?;
    let summary = json!({
        "converged": eq.converged,
        "iterations": eq.iterations,
        "residual": eq.residual,
        "uniqueness_certified": eq.uniqueness_certified,
        "damped": eq.damped,
        "thresholds": report,
    });
    emit_side_json(cfg, "threshold.json", &summary)?;
    not_converged(eq.converged, eq.iterations, eq.residual)
}

fn not_converged(converged: bool, iterations: usize, residual: f64) -> Result<(), CliError> {
    if converged {
        Ok(())
    } else {
        Err(CliError::NotConverged(format!(
            "equilibrium solver stopped after {iterations} iterations with residual {residual:e}; output is the last iterate"
        )))
    }
}

pub fn bounds(cfg: &RunConfig) -> Result<(), CliError> {
    let g = cfg.graph()?;
    let p = cfg.params()?;
    let m = cfg.model()?;
    let mut report = equilibrium_bounds(&g, &p)?;
    report.nonequilibrium = nonequilibrium_bounds(&g, &p, &m)?.nonequilibrium;
    emit(cfg, "bounds.csv", |out| csv::write_bounds(out, &g, &report, precision(cfg)))?;
    let summary = json!({
        "kind": report.kind,
        "lower": report.lower,
        "star": report.star,
        "nu": report.nonequilibrium.as_ref().map(|ne| ne.nu),
    });
    emit_side_json(cfg, "bounds.json", &summary)
}

pub fn threshold(cfg: &RunConfig) -> Result<(), CliError> {
    let g = cfg.graph()?;
    let p = cfg.params()?;
    let m = cfg.model()?;
    let eq = solve(&g, &p, &m, &cfg.solver)?;
    let report = thresholds::report(&g, &p, Some(&eq.i_star))?;
    let summary = json!({
        "converged": eq.converged,
        "iterations": eq.iterations,
        "thresholds": report,
    });
    emit(cfg, "threshold.json", |out| write_json(out, &summary))?;
    not_converged(eq.converged, eq.iterations, eq.residual)
}

fn finish_sweep(cfg: &RunConfig, sweep: &SweepResult) -> Result<(), CliError> {
    emit(cfg, "sweep.csv", |out| csv::write_sweep(out, sweep, precision(cfg)))?;
    let failed = sweep.rows.iter().filter(|r| !r.converged).count();
    if failed > 0 {
        return Err(CliError::NotConverged(format!(
            "{failed} of {} sweep cells did not converge; their rows hold the last iterate",
            sweep.rows.len()
        )));
    }
    Ok(())
}

pub fn sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let p = cfg.params()?;
    let n = match cfg.star_size {
        Some(n) => n,
        None if cfg.has_graph() => {
            let g = cfg.graph()?;
            g.star_size()
                .ok_or_else(|| CliError::input("sweep runs on a star; use --graph star:N"))?
        }
        None => DEFAULT_SWEEP_STAR,
    };
    let or_independent = |list: &[CopulaSpec]| {
        if list.is_empty() {
            vec![CopulaSpec::independence()]
        } else {
            list.to_vec()
        }
    };
    let result = dependence_sweep(n, &p, &or_independent(&cfg.outer), &or_independent(&cfg.node), &cfg.solver)?;
    finish_sweep(cfg, &result)
}

pub fn repro(cfg: &RunConfig, table: &str) -> Result<(), CliError> {
    let table: ReproTable = table.parse()?;
    let result = repro_table(table, &cfg.solver)?;
    finish_sweep(cfg, &result)
}

/// Grid for `approx`: the config's explicit list, else the study grid.
fn approx_grid(cfg: &RunConfig, full: bool) -> Result<Vec<EpidemicParams>, CliError> {
    match &cfg.grid {
        Some(list) => Ok(list
            .iter()
            .map(|&[a, b, c]| EpidemicParams::new(a, b, c))
            .collect::<Result<_, _>>()?),
        None => Ok(study_grid(!full)),
    }
}

pub fn approx(cfg: &RunConfig, full_grid: bool) -> Result<(), CliError> {
    let g = cfg.graph()?;
    let m = cfg.model()?;
    let grid = approx_grid(cfg, full_grid)?;
    let model = fit_approximation(&g, &grid, &m, &cfg.solver)?;
    emit(cfg, "approx.csv", |out| csv::write_approx(out, &model, precision(cfg)))?;
    let summary = json!({
        "k0": model.k0,
        "k1": model.k1,
        "k2": model.k2,
        "k3": model.k3,
        "err_G": model.err_g,
        "upper_err": model.upper_err,
        "lower_err": model.lower_err,
        "degenerate": model.degenerate(),
        "dropped": model.dropped,
        "grid_size": model.grid_size,
        "triples_used": model.triples.len(),
        "unconverged": model.unconverged,
    });
    emit_side_json(cfg, "model.json", &summary)?;
    if model.degenerate() {
        eprintln!(
            "warning: degenerate fit, collinear regressors dropped: {}",
            model.dropped.join(", ")
        );
    }
    Ok(())
}
