//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use depnet::bounds::{equilibrium_bounds, general_bounds, nonequilibrium_bounds, star_bounds};
use depnet::copula::concordance_leq;
use depnet::dynamics::tail_envelope;
use depnet::equilibrium::{solve, solve_star};
use depnet::experiments::{
    dominance_check, find_dominance_counterexample, fit_approximation, study_grid, repro_table,
    ReproTable, SweepResult, COND16_GRID,
};
use depnet::{thresholds, CopulaSpec, DependenceModel, EpidemicParams, Graph, SolverOptions, StateVector};
use rand::Rng;

const PROB_TOL: f64 = 0.01;
const TAU_TOL: f64 = 0.05;
const SPECTRAL_TOL: f64 = 1e-7;
const ARCSIN_TOL: f64 = 1e-8;
const SANDWICH_TOL: f64 = 1e-9;
const HUB_LEAF_TOL: f64 = 1e-12;
const MONOTONE_TOL: f64 = 1e-9;
const CONTAINMENT_TOL: f64 = 1e-6;
const RATE_SLACK: f64 = 0.05;
/// Residuals below this are dominated by rounding and excluded from rate estimates.
const RESIDUAL_FLOOR: f64 = 1e-13;

/// `(i_h, i_l, τ)` per θ row, columns σ = 0.5, 0, −0.5.
type Published = [[(f64, f64, f64); 3]; 11];

const TABLE1: Published = [
    [(0.35, 0.29, 14.11), (0.38, 0.30, 14.31), (0.40, 0.31, 14.40)],
    [(0.35, 0.29, 14.11), (0.38, 0.30, 14.30), (0.40, 0.31, 14.39)],
    [(0.35, 0.29, 14.11), (0.38, 0.30, 14.30), (0.39, 0.31, 14.39)],
    [(0.34, 0.29, 14.11), (0.38, 0.30, 14.30), (0.39, 0.31, 14.39)],
    [(0.34, 0.29, 14.11), (0.37, 0.30, 14.30), (0.39, 0.30, 14.39)],
    [(0.34, 0.29, 14.11), (0.37, 0.30, 14.30), (0.39, 0.30, 14.38)],
    [(0.34, 0.29, 14.11), (0.37, 0.30, 14.30), (0.39, 0.30, 14.38)],
    [(0.34, 0.29, 14.11), (0.37, 0.30, 14.29), (0.38, 0.30, 14.38)],
    [(0.34, 0.29, 14.11), (0.37, 0.30, 14.29), (0.38, 0.30, 14.38)],
    [(0.34, 0.29, 14.11), (0.37, 0.30, 14.29), (0.38, 0.30, 14.38)],
    [(0.33, 0.29, 14.11), (0.36, 0.30, 14.29), (0.38, 0.30, 14.38)],
];

const TABLE2: Published = [
    [(0.39, 0.37, 17.11), (0.41, 0.37, 16.09), (0.44, 0.38, 15.20)],
    [(0.39, 0.37, 17.15), (0.41, 0.37, 16.16), (0.43, 0.38, 15.29)],
    [(0.39, 0.37, 17.18), (0.41, 0.37, 16.21), (0.43, 0.38, 15.36)],
    [(0.39, 0.37, 17.21), (0.41, 0.37, 16.26), (0.43, 0.38, 15.43)],
    [(0.38, 0.37, 17.24), (0.41, 0.37, 16.31), (0.43, 0.38, 15.50)],
    [(0.38, 0.37, 17.27), (0.41, 0.37, 16.35), (0.43, 0.38, 15.56)],
    [(0.38, 0.37, 17.30), (0.41, 0.37, 16.39), (0.43, 0.38, 15.62)],
    [(0.38, 0.37, 17.31), (0.41, 0.37, 16.43), (0.42, 0.38, 15.67)],
    [(0.38, 0.37, 17.33), (0.41, 0.37, 16.47), (0.42, 0.38, 15.72)],
    [(0.38, 0.37, 17.35), (0.40, 0.37, 16.50), (0.42, 0.38, 15.77)],
    [(0.38, 0.37, 17.37), (0.40, 0.37, 16.53), (0.42, 0.38, 15.81)],
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn table_check(table: ReproTable, published: &Published) -> Outcome {
    let start = Instant::now();
    let sweep = match repro_table(table, &opts()) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("sweep failed: {e}")),
    };
    let elapsed = start.elapsed();
    let (mut prob_err, mut tau_err) = (0.0f64, 0.0f64);
    for (k, row) in sweep.rows.iter().enumerate() {
        let (h, l, t) = published[k / 3][k % 3];
        prob_err = prob_err.max((row.i_h - h).abs()).max((row.i_l - l).abs());
        tau_err = tau_err.max((row.tau - t).abs());
    }
    let pass = sweep.rows.len() == 33
        && sweep.all_converged()
        && prob_err <= PROB_TOL
        && tau_err <= TAU_TOL
        && elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "33 cells, max |Δprob| = {prob_err:.4} (≤ {PROB_TOL}), max |Δτ| = {tau_err:.4} (≤ {TAU_TOL}), {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn spectral() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=200 {
        let g = Graph::star(n).unwrap();
        worst = worst.max((g.rho() - ((n - 1) as f64).sqrt()).abs());
    }
    let mut cases = 0;
    for (k, &(n, d)) in [(10, 2), (12, 3), (50, 4), (100, 5), (200, 7), (64, 10), (31, 6)].iter().enumerate() {
        let g = Graph::random_regular(n, d, k as u64).unwrap();
        worst = worst.max((g.rho() - d as f64).abs());
        cases += 1;
    }
    outcome(
        worst <= SPECTRAL_TOL,
        format!("199 stars + {cases} regular graphs, max error {worst:.2e} (≤ {SPECTRAL_TOL:.0e})"),
    )
}

fn copula_axioms() -> Outcome {
    let mut rng = common::rng(4);
    let families = [
        CopulaSpec::independence(),
        CopulaSpec::frechet_lower(),
        CopulaSpec::frechet_upper(),
        CopulaSpec::clayton(0.7).unwrap(),
        CopulaSpec::clayton(5.0).unwrap(),
        CopulaSpec::frank(0.5).unwrap(),
        CopulaSpec::frank(12.0).unwrap(),
        CopulaSpec::gaussian(-0.7).unwrap(),
        CopulaSpec::gaussian(0.6).unwrap(),
    ];
    const SAMPLES: usize = 10_000;
    let mut failures = Vec::new();
    for c in &families {
        let fam = c.to_string();
        let mut bad = 0usize;
        for _ in 0..SAMPLES {
            // Lower Fréchet and negative Gaussian are copulas only in 2 dimensions.
            let max_dim = if c.supports_dim(4) && c.family() != depnet::CopulaFamily::FrechetLower { 4 } else { 2 };
            let n = rng.gen_range(2..=max_dim);
            let tol = c.tolerance(n);
            let u: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let cu = c.eval(&u).unwrap();
            let cw = c.eval(&w).unwrap();
            // Fréchet–Hoeffding sandwich.
            let lower = (u.iter().sum::<f64>() - (n as f64 - 1.0)).max(0.0);
            let upper = u.iter().copied().fold(1.0, f64::min);
            if cu < lower - tol || cu > upper + tol {
                bad += 1;
            }
            // Lipschitz in the L1 norm.
            let l1: f64 = u.iter().zip(&w).map(|(a, b)| (a - b).abs()).sum();
            if (cu - cw).abs() > l1 + 2.0 * tol {
                bad += 1;
            }
            // Grounded and uniform margins.
            let j = rng.gen_range(0..n);
            let mut z = u.clone();
            z[j] = 0.0;
            if c.eval(&z).unwrap().abs() > tol {
                bad += 1;
            }
            let mut m = vec![1.0; n];
            m[j] = u[j];
            if (c.eval(&m).unwrap() - u[j]).abs() > tol {
                bad += 1;
            }
            // Nonnegative volume of a random box.
            let lo: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a.min(*b)).collect();
            let hi: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a.max(*b)).collect();
            if c.rectangle_volume(&lo, &hi).unwrap() < -((1u32 << n) as f64) * tol {
                bad += 1;
            }
        }
        if bad > 0 {
            failures.push(format!("{fam}: {bad}"));
        }
    }
    let mut arcsin_err = 0.0f64;
    for k in -9..=9 {
        let s = k as f64 / 10.0;
        let c = CopulaSpec::gaussian(s).unwrap();
        let want = 0.25 + s.asin() / (2.0 * std::f64::consts::PI);
        arcsin_err = arcsin_err.max((c.eval(&[0.5, 0.5]).unwrap() - want).abs());
    }
    outcome(
        failures.is_empty() && arcsin_err <= ARCSIN_TOL,
        format!(
            "{} families × {SAMPLES} points/boxes, violations: [{}]; Gaussian(0.5,0.5) arcsin error {arcsin_err:.1e}",
            families.len(),
            failures.join(", ")
        ),
    )
}

fn bound_sandwich() -> Outcome {
    let mut rng = common::rng(5);
    let (mut instances, mut refined, mut bad) = (0, 0, Vec::new());
    while instances < 240 {
        let g = common::graph(&mut rng, 40);
        let p = common::unique_params(&mut rng, &g);
        let m = common::model(&mut rng);
        let eq = solve(&g, &p, &m, &opts()).unwrap();
        if !eq.converged {
            bad.push(format!("#{instances} unconverged"));
            instances += 1;
            continue;
        }
        let general = general_bounds(&g, &p).unwrap();
        for (v, &x) in eq.i_star.iter().enumerate() {
            if x < general.lower - SANDWICH_TOL || x > general.upper[v] + SANDWICH_TOL {
                bad.push(format!("#{instances} node {v}: {x} ∉ [{}, {}]", general.lower, general.upper[v]));
                break;
            }
        }
        let sharp = equilibrium_bounds(&g, &p).unwrap();
        if sharp.kind != depnet::BoundsKind::General {
            refined += 1;
            for (v, &x) in eq.i_star.iter().enumerate() {
                if sharp.upper[v] > general.upper[v] + SANDWICH_TOL || x > sharp.upper[v] + SANDWICH_TOL {
                    bad.push(format!(
                        "#{instances} {:?} node {v}: i*={x}, refined {}, general {}",
                        sharp.kind, sharp.upper[v], general.upper[v]
                    ));
                    break;
                }
            }
        }
        instances += 1;
    }
    outcome(
        bad.is_empty(),
        format!("{instances} instances ({refined} star/regular refined), violations: {bad:?}"),
    )
}

fn hub_dominates_leaves() -> Outcome {
    let mut rng = common::rng(6);
    let mut worst = f64::INFINITY;
    let mut unconverged = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=60);
        let g = Graph::star(n).unwrap();
        let p = common::unique_params(&mut rng, &g);
        let m = common::model(&mut rng);
        let eq = solve_star(n, &p, &m, &opts()).unwrap();
        if !eq.converged {
            unconverged += 1;
        }
        worst = worst.min(eq.hub - eq.leaf);
    }
    outcome(
        worst >= -HUB_LEAF_TOL && unconverged == 0,
        format!("100 stars, min(i_h − i_l) = {worst:.3e}, unconverged {unconverged}"),
    )
}

fn ordered(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x - y).fold(f64::INFINITY, f64::min)
}

fn monotonicity() -> Outcome {
    let mut rng = common::rng(7);
    let mut worst = f64::INFINITY;
    let mut checked = 0;
    for k in 0..50 {
        let g = common::graph(&mut rng, 30);
        let p = common::unique_params(&mut rng, &g);
        let d = g.max_degree().max(2);
        let (weak, strong) = if k % 2 == 0 {
            let t1 = rng.gen_range(0.2..4.0);
            let t2 = t1 + rng.gen_range(0.5..5.0);
            let outer = common::outer_copula(&mut rng);
            let (a, b) = (CopulaSpec::clayton(t1).unwrap(), CopulaSpec::clayton(t2).unwrap());
            assert!(concordance_leq(&a, &b, d.min(4), 5).unwrap());
            (DependenceModel::new(outer, a), DependenceModel::new(outer, b))
        } else {
            let s1 = rng.gen_range(-0.9..0.5);
            let s2 = rng.gen_range(s1..0.9);
            let node = common::node_copula(&mut rng);
            let (a, b) = (CopulaSpec::gaussian(s1).unwrap(), CopulaSpec::gaussian(s2).unwrap());
            assert!(concordance_leq(&a, &b, 2, 9).unwrap());
            (DependenceModel::new(a, node), DependenceModel::new(b, node))
        };
        let x = solve(&g, &p, &weak, &opts()).unwrap();
        let y = solve(&g, &p, &strong, &opts()).unwrap();
        worst = worst.min(ordered(&x.i_star, &y.i_star));
        checked += 1;
    }
    let sweep = repro_table(ReproTable::Table1, &opts()).unwrap();
    let ind = |theta: f64| {
        sweep
            .rows
            .iter()
            .find(|r| r.node_param() == theta && r.outer_param() == 0.0)
            .unwrap()
            .i_h
    };
    let (h1, h6) = (ind(1.0), ind(6.0));
    let spot = (h1 - 0.38).abs() <= PROB_TOL && (h6 - 0.36).abs() <= PROB_TOL;
    outcome(
        worst >= -MONOTONE_TOL && spot,
        format!(
            "{checked} ordered pairs, min(i* − i′*) = {worst:.3e}; σ=0 hub θ=1: {h1:.4}, θ=6: {h6:.4}"
        ),
    )
}

/// Largest violation of "τ moves in direction `sign`" along θ (fixed σ) and
/// along increasing σ (fixed θ).
fn tau_trend(sweep: &SweepResult, sign: f64) -> f64 {
    let tau = |row: usize, col: usize| sweep.rows[row * 3 + col].tau;
    let mut worst = 0.0f64;
    for col in 0..3 {
        for row in 1..11 {
            worst = worst.max(-sign * (tau(row, col) - tau(row - 1, col)));
        }
    }
    // Columns are σ = 0.5, 0, −0.5, so increasing σ runs right to left.
    for row in 0..11 {
        for col in 1..3 {
            worst = worst.max(-sign * (tau(row, col - 1) - tau(row, col)));
        }
    }
    worst
}

fn tau_regimes() -> Outcome {
    let t1 = repro_table(ReproTable::Table1, &opts()).unwrap();
    let t2 = repro_table(ReproTable::Table2, &opts()).unwrap();
    let p1 = ReproTable::Table1.params();
    let p2 = ReproTable::Table2.params();
    let hub_upper = star_bounds(11, &p1).unwrap().star.unwrap().hub_upper;
    let lower2 = general_bounds(&Graph::star(11).unwrap(), &p2).unwrap().lower;
    let regime1 = 1.0 - p1.beta() >= hub_upper;
    let regime2 = 1.0 - p2.beta() <= lower2;
    let v1 = tau_trend(&t1, -1.0);
    let v2 = tau_trend(&t2, 1.0);
    outcome(
        regime1 && regime2 && v1 <= MONOTONE_TOL && v2 <= MONOTONE_TOL,
        format!(
            "table1: 1−β=0.5 ≥ i_h+={hub_upper:.4}, τ nonincreasing (max rise {v1:.1e}); \
             table2: 1−β=0.3 ≤ i−={lower2:.4}, τ nondecreasing (max drop {v2:.1e})"
        ),
    )
}

fn containment() -> Outcome {
    let mut rng = common::rng(9);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for k in 0..50 {
        let g = common::graph(&mut rng, 20);
        let p = common::params(&mut rng);
        let m = common::model(&mut rng);
        let i0 = StateVector::new((0..g.node_count()).map(|_| rng.gen()).collect(), 0).unwrap();
        let ne = nonequilibrium_bounds(&g, &p, &m).unwrap().nonequilibrium.unwrap();
        let (lo, hi, _) = tail_envelope(&i0, &g, &p, &m, 5000, 4000).unwrap();
        for v in 0..g.node_count() {
            let excess = (ne.lower[v] - lo[v]).max(hi[v] - ne.upper[v]);
            worst = worst.max(excess);
            if excess > CONTAINMENT_TOL {
                failures.push(format!("#{k} node {v}"));
                break;
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("50 instances to t=5000, tail window t∈(4000,5000], max excursion {worst:.2e}; failures {failures:?}"),
    )
}

fn dominance() -> Outcome {
    let mut rng = common::rng(10);
    let (mut tried, mut eligible, mut violations) = (0, 0, 0);
    while eligible < 100 && tried < 20_000 {
        tried += 1;
        let g = common::graph(&mut rng, 15);
        let p = EpidemicParams::new(
            rng.gen_range(0.01..0.3),
            rng.gen_range(0.02..0.4),
            rng.gen_range(0.005..0.1),
        )
        .unwrap();
        let (t1, t2) = {
            let a = rng.gen_range(0.2..5.0);
            (a, a + rng.gen_range(0.0..5.0))
        };
        let (e1, e2) = {
            let a = rng.gen_range(0.2..5.0);
            (a, a + rng.gen_range(0.0..5.0))
        };
        let m = DependenceModel::new(CopulaSpec::clayton(t1).unwrap(), CopulaSpec::clayton(e1).unwrap());
        let m2 = DependenceModel::new(CopulaSpec::clayton(t2).unwrap(), CopulaSpec::clayton(e2).unwrap());
        let i0 = StateVector::new((0..g.node_count()).map(|_| rng.gen_range(0.0..1.0 - p.beta())).collect(), 0).unwrap();
        let r = dominance_check(&g, &p, &m, &m2, &i0, 200, COND16_GRID).unwrap();
        if r.cond16_sampled && r.cond18.holds {
            eligible += 1;
            if !r.dominated {
                violations += 1;
            }
        }
    }
    let p = EpidemicParams::new(0.9, 0.9, 0.8).unwrap();
    let m = DependenceModel::new(CopulaSpec::clayton(1.0).unwrap(), CopulaSpec::clayton(1.5).unwrap());
    let m2 = DependenceModel::new(CopulaSpec::clayton(10.0).unwrap(), CopulaSpec::clayton(15.0).unwrap());
    let i0 = StateVector::new(vec![0.2, 0.1, 0.3, 0.3, 0.6, 0.2], 0).unwrap();
    let found = find_dominance_counterexample(&p, &m, &m2, &i0, 10, true).unwrap();
    let negative = match &found {
        Some(c) => format!(
            "connected counterexample with edges [{}], violation at t={} node {}",
            c.graph.edges().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(" "),
            c.t,
            c.node
        ),
        None => "no 6-node counterexample".into(),
    };
    outcome(
        eligible >= 100 && violations == 0 && found.as_ref().is_some_and(|c| c.t <= 10),
        format!("{eligible} instances with both conditions, {violations} violations; {negative}"),
    )
}

fn approximation() -> Outcome {
    let start = Instant::now();
    let g = Graph::erdos_renyi(200, 0.05, 2024).unwrap();
    let grid = study_grid(true);
    let pairs = [
        ("gaussian/frank", CopulaSpec::frank(0.1).unwrap()),
        ("gaussian/clayton", CopulaSpec::clayton(0.1).unwrap()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, node) in pairs {
        let m = DependenceModel::new(CopulaSpec::gaussian(0.1).unwrap(), node);
        match fit_approximation(&g, &grid, &m, &opts()) {
            Ok(fit) => {
                let ok = fit.lower_err < fit.err_g && fit.err_g < fit.upper_err && fit.err_g.abs() < fit.upper_err;
                pass &= ok;
                parts.push(format!(
                    "{name}: {} triples, lower {:.2} < err_G {:.2} < upper {:.2}",
                    fit.triples.len(),
                    fit.lower_err,
                    fit.err_g,
                    fit.upper_err
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        pass && elapsed < Duration::from_secs(600),
        format!("{}; {:.1}s", parts.join("; "), elapsed.as_secs_f64()),
    )
}

fn convergence_rate() -> Outcome {
    let mut rng = common::rng(12);
    let (mut rate_checked, mut worst_gap, mut order_bad) = (0, f64::NEG_INFINITY, 0);
    for _ in 0..120 {
        let g = common::graph(&mut rng, 30);
        let p = common::unique_params(&mut rng, &g);
        let m = common::model(&mut rng);
        let eq = solve(&g, &p, &m, &opts().recording()).unwrap();
        if !eq.converged {
            continue;
        }
        let report = thresholds::report(&g, &p, Some(&eq.i_star)).unwrap();
        if let (Some(thm2), Some(tau)) = (report.thm2_rhs, report.tau) {
            if thm2 > tau + 1e-12 {
                order_bad += 1;
            }
        }
        let rho_w = report.rho_w.unwrap();
        let tail: Vec<f64> = eq.residuals.iter().copied().filter(|&r| r > RESIDUAL_FLOOR).collect();
        if rho_w >= 1.0 || tail.len() < 3 || eq.damped {
            continue;
        }
        let tail = &tail[tail.len().saturating_sub(51)..];
        let steps = (tail.len() - 1) as f64;
        let ratio = (tail[tail.len() - 1] / tail[0]).powf(1.0 / steps);
        worst_gap = worst_gap.max(ratio - rho_w);
        rate_checked += 1;
    }
    outcome(
        worst_gap <= RATE_SLACK && order_bad == 0 && rate_checked > 0,
        format!(
            "{rate_checked} instances with ρ(W) < 1, max(observed ratio − ρ(W)) = {worst_gap:.3}; \
             bound-based threshold above τ on {order_bad} instances"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("star table, (α,β,γ)=(0.2,0.5,0.05)", || table_check(ReproTable::Table1, &TABLE1)),
        ("star table, (α,β,γ)=(0.4,0.7,0.05)", || table_check(ReproTable::Table2, &TABLE2)),
        ("spectral radius of stars and regular graphs", spectral),
        ("copula axioms", copula_axioms),
        ("equilibrium bound sandwich", bound_sandwich),
        ("hub at least as infected as leaves", hub_dominates_leaves),
        ("equilibrium monotone in concordance", monotonicity),
        ("τ trend regimes", tau_regimes),
        ("long-run containment in non-equilibrium bounds", containment),
        ("trajectory dominance", dominance),
        ("regression approximation error ordering", approximation),
        ("Picard rate vs ρ(W), threshold ordering", convergence_rate),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = run();
        let tag = if r.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {:>2}: {name} ({:.1}s) - {}",
            k + 1,
            start.elapsed().as_secs_f64(),
            r.detail
        );
        if !r.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
