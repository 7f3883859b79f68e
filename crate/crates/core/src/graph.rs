//! Undirected simple graphs: construction, random generators, and the
//! dominant eigenvalue of nonnegative symmetric operators built on them.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default convergence tolerance on successive Rayleigh quotients.
pub const DEFAULT_EIG_TOL: f64 = 1e-10;
pub const DEFAULT_EIG_MAX_ITER: usize = 100_000;

/// Diagonal shift applied during power iteration so that a ±ρ eigenvalue
/// pair (bipartite graphs) does not make the iterates oscillate.
const POWER_SHIFT: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl Graph {
    /// Build from an edge iterator; duplicates collapse, self-loops are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut sets = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::GraphParams(format!("edge ({u}, {v}) out of range for {n} nodes")));
            }
            if u == v {
                return Err(Error::GraphParams(format!("self-loop at node {u}")));
            }
            sets[u].insert(v);
            sets[v].insert(u);
        }
        Ok(Self {
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    /// Parse an edge-list document: one `u v` pair per line, `#` comments.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_id = None::<usize>;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::EdgeList { line: i + 1, reason };
            let mut tokens = line.split_whitespace();
            let mut id = || -> Result<usize> {
                let tok = tokens.next().ok_or_else(|| err("expected two node ids".into()))?;
                tok.parse().map_err(|_| err(format!("bad node id {tok:?}")))
            };
            let (u, v) = (id()?, id()?);
            if tokens.next().is_some() {
                return Err(err("trailing tokens".into()));
            }
            if u == v {
                return Err(err(format!("self-loop at node {u}")));
            }
            max_id = Some(max_id.unwrap_or(0).max(u).max(v));
            edges.push((u, v));
        }
        let n = max_id.ok_or(Error::EmptyEdgeList)? + 1;
        Self::from_edges(n, edges)
    }

    /// Sorted unique `u v` pairs with `u < v`, one per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    /// Star with hub 0 and leaves 1..n.
    pub fn star(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::GraphParams(format!("star needs n >= 2, got {n}")));
        }
        Self::from_edges(n, (1..n).map(|v| (0, v)))
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        Self { adj }
    }

    /// G(n, p): every unordered pair is an edge independently with probability p.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::GraphParams(format!("edge probability {p} outside [0, 1]")));
        }
        if n == 0 {
            return Err(Error::GraphParams("erdos_renyi needs n >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Self::from_edges(n, edges)
    }

    /// Static-model power-law graph: node weights `w_v ∝ (v+1)^(-1/(exponent-1))`,
    /// `m` weighted pair draws, self-loops and repeated pairs discarded. The
    /// resulting edge count is at most `m`.
    pub fn power_law(n: usize, m: usize, exponent: f64, seed: u64) -> Result<Self> {
        if n < 2 || m < 1 {
            return Err(Error::GraphParams("power_law needs n >= 2 and m >= 1".into()));
        }
        if !(exponent > 2.0) {
            return Err(Error::GraphParams(format!("power-law exponent {exponent} must exceed 2")));
        }
        if m > n * (n - 1) / 2 {
            return Err(Error::GraphParams(format!("{m} edges infeasible on {n} nodes")));
        }
        let alpha = 1.0 / (exponent - 1.0);
        let weights: Vec<f64> = (0..n).map(|v| ((v + 1) as f64).powf(-alpha)).collect();
        let dist = WeightedIndex::new(&weights).map_err(|e| Error::GraphParams(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if m == 1 {
            // A single draw may collide; keep drawing until the one edge exists.
            loop {
                let (u, v) = (dist.sample(&mut rng), dist.sample(&mut rng));
                if u != v {
                    return Self::from_edges(n, [(u, v)]);
                }
            }
        }
        let edges = (0..m)
            .map(|_| (dist.sample(&mut rng), dist.sample(&mut rng)))
            .filter(|(u, v)| u != v)
            .collect::<Vec<_>>();
        Self::from_edges(n, edges)
    }

    /// Uniform-ish random d-regular graph via stub pairing with local rejection
    /// of loops and repeated pairs, restarting when the pairing gets stuck.
    pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Self> {
        if d >= n || !(n * d).is_multiple_of(2) {
            return Err(Error::GraphParams(format!(
                "no simple {d}-regular graph on {n} nodes (need d < n and n*d even)"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        'restart: for _ in 0..10_000 {
            let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
            stubs.shuffle(&mut rng);
            let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
            while !stubs.is_empty() {
                let mut placed = false;
                for _ in 0..(50 * stubs.len()).max(100) {
                    let i = rng.gen_range(0..stubs.len());
                    let j = rng.gen_range(0..stubs.len());
                    let (u, v) = (stubs[i], stubs[j]);
                    if i == j || u == v || adj[u].contains(&v) {
                        continue;
                    }
                    adj[u].insert(v);
                    adj[v].insert(u);
                    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                    stubs.swap_remove(hi);
                    stubs.swap_remove(lo);
                    placed = true;
                    break;
                }
                if !placed {
                    continue 'restart;
                }
            }
            return Ok(Self {
                adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
            });
        }
        Err(Error::GraphParams(format!("failed to sample a {d}-regular graph on {n} nodes")))
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adj.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count() as f64 / self.adj.len() as f64
        }
    }

    pub fn has_isolated_node(&self) -> bool {
        self.adj.iter().any(Vec::is_empty)
    }

    /// Common degree if every node has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first()?.len();
        self.adj.iter().all(|nb| nb.len() == d).then_some(d)
    }

    /// `Some(n)` when this is exactly `Graph::star(n)` (hub at node 0).
    pub fn star_size(&self) -> Option<usize> {
        let n = self.adj.len();
        if n < 2 || self.adj[0].len() != n - 1 {
            return None;
        }
        self.adj[1..]
            .iter()
            .all(|nb| nb.as_slice() == [0])
            .then_some(n)
    }

    /// Whether every node is reachable from node 0. The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// Spectral radius of the adjacency matrix.
    pub fn spectral_radius(&self, tol: f64, max_iter: usize) -> SpectralEstimate {
        self.dominant_eigenvalue(None, 1.0, tol, max_iter)
    }

    /// Largest eigenvalue of `diag(d) + scale·A` for nonnegative `d` and `scale`.
    ///
    /// Power iteration on the shifted operator from the all-ones vector,
    /// stopping when successive Rayleigh quotients differ by less than `tol`.
    pub fn dominant_eigenvalue(
        &self,
        diagonal: Option<&[f64]>,
        scale: f64,
        tol: f64,
        max_iter: usize,
    ) -> SpectralEstimate {
        let n = self.adj.len();
        let diag_at = |v: usize| diagonal.map_or(0.0, |d| d[v]);
        if n == 0 {
            return SpectralEstimate {
                value: 0.0,
                iterations: 0,
                converged: true,
            };
        }
        if self.edge_count() == 0 || scale == 0.0 {
            let value = (0..n).map(diag_at).fold(0.0, f64::max);
            return SpectralEstimate {
                value,
                iterations: 0,
                converged: true,
            };
        }
        let apply = |x: &[f64], y: &mut [f64]| {
            for (v, out) in y.iter_mut().enumerate() {
                let off: f64 = self.adj[v].iter().map(|&u| x[u]).sum();
                *out = (diag_at(v) + POWER_SHIFT) * x[v] + scale * off;
            }
        };
        let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();

        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut y = vec![0.0; n];
        let mut prev = f64::NAN;
        let mut rayleigh = 0.0;
        for it in 1..=max_iter {
            apply(&x, &mut y);
            // x has unit norm, so x·y is the Rayleigh quotient.
            rayleigh = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
            let ny = norm(&y);
            for (xi, yi) in x.iter_mut().zip(&y) {
                *xi = yi / ny;
            }
            if (rayleigh - prev).abs() < tol {
                return SpectralEstimate {
                    value: rayleigh - POWER_SHIFT,
                    iterations: it,
                    converged: true,
                };
            }
            prev = rayleigh;
        }
        SpectralEstimate {
            value: rayleigh - POWER_SHIFT,
            iterations: max_iter,
            converged: false,
        }
    }

    /// Spectral radius with default tolerance and iteration cap.
    pub fn rho(&self) -> f64 {
        self.spectral_radius(DEFAULT_EIG_TOL, DEFAULT_EIG_MAX_ITER).value
    }
}
