//! Exact discrete W1 by min-cost flow (successive shortest paths).

use std::collections::VecDeque;

use super::divergence::check_pair;
use crate::error::{Error, Result};

/// Mass below this is treated as already transported.
const MASS_EPS: f64 = 1e-15;
/// Relative slack for accepting a shorter residual path.
const COST_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct MetricTable {
    n: usize,
    d: Vec<f64>,
}

impl MetricTable {
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: d.len() });
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::InvalidInput(format!("metric has nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let x = d[i * n + j];
                if !x.is_finite() || x < 0.0 || (x - d[j * n + i]).abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!("metric entry ({i},{j}) is invalid")));
                }
            }
        }
        Ok(Self { n, d })
    }

    pub fn discrete(n: usize) -> Self {
        let d = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { 1.0 }).collect();
        Self { n, d }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(n, (0..n * n).map(|k| f(k / n, k % n)).collect())
    }

    /// Sup-norm distance between error profiles.
    pub fn err_profile_sup(profiles: &[Vec<f64>]) -> Result<Self> {
        Self::from_fn(profiles.len(), |i, j| {
            profiles[i].iter().zip(&profiles[j]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

struct Edge {
    to: usize,
    cap: f64,
    cost: f64,
}

struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(n: usize) -> Self {
        Self { edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add(&mut self, from: usize, to: usize, cap: f64, cost: f64) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap, cost });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0.0, cost: -cost });
    }

    /// Shortest path by SPFA on the residual graph; returns the edge path.
    fn shortest_path(&self, s: usize, t: usize) -> Result<Option<Vec<usize>>> {
        let n = self.adj.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut via = vec![usize::MAX; n];
        let mut queued = vec![false; n];
        let mut pops = vec![0usize; n];
        let mut queue = VecDeque::from([s]);
        dist[s] = 0.0;
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            // Rounding can leave a negative cycle of size ~1e-16; a node popped
            // more than n times means we are circling it.
            pops[u] += 1;
            if pops[u] > n {
                return Err(Error::InvalidInput("negative cycle in the transport residual graph".into()));
            }
            for &e in &self.adj[u] {
                let edge = &self.edges[e];
                let cand = dist[u] + edge.cost;
                let old = dist[edge.to];
                if edge.cap > MASS_EPS && (old.is_infinite() || cand < old - COST_EPS * (1.0 + old.abs())) {
                    dist[edge.to] = cand;
                    via[edge.to] = e;
                    if !queued[edge.to] {
                        queued[edge.to] = true;
                        queue.push_back(edge.to);
                    }
                }
            }
        }
        if !dist[t].is_finite() {
            return Ok(None);
        }
        let mut path = Vec::new();
        let mut v = t;
        while v != s {
            if path.len() > n {
                return Err(Error::InvalidInput("cyclic predecessor chain in the transport solver".into()));
            }
            let e = via[v];
            path.push(e);
            v = self.edges[e ^ 1].to;
        }
        Ok(Some(path))
    }
}

/// W1(p, q) under `metric`, solved exactly as a transportation problem.
pub fn w1_emd(p: &[f64], q: &[f64], metric: &MetricTable) -> Result<f64> {
    check_pair(p, q)?;
    if metric.len() != p.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: metric.len() });
    }
    // Shared mass stays put at zero cost; only the excess has to move.
    let excess: Vec<(usize, f64)> =
        p.iter().zip(q).enumerate().filter(|(_, (a, b))| *a - *b > MASS_EPS).map(|(i, (a, b))| (i, a - b)).collect();
    let deficit: Vec<(usize, f64)> =
        p.iter().zip(q).enumerate().filter(|(_, (a, b))| *b - *a > MASS_EPS).map(|(i, (a, b))| (i, b - a)).collect();
    if excess.is_empty() || deficit.is_empty() {
        return Ok(0.0);
    }
    if deficit.len() == 1 {
        let j = deficit[0].0;
        return Ok(excess.iter().map(|&(i, m)| m * metric.get(i, j)).sum());
    }
    if excess.len() == 1 {
        let i = excess[0].0;
        return Ok(deficit.iter().map(|&(j, m)| m * metric.get(i, j)).sum());
    }

    let (ns, nt) = (excess.len(), deficit.len());
    let source = ns + nt;
    let sink = source + 1;
    let mut net = Network::new(ns + nt + 2);
    for (a, &(_, m)) in excess.iter().enumerate() {
        net.add(source, a, m, 0.0);
    }
    for (b, &(_, m)) in deficit.iter().enumerate() {
        net.add(ns + b, sink, m, 0.0);
    }
    for (a, &(i, _)) in excess.iter().enumerate() {
        for (b, &(j, _)) in deficit.iter().enumerate() {
            net.add(a, ns + b, f64::INFINITY, metric.get(i, j));
        }
    }
    let mut cost = 0.0;
    let mut rounds = 0;
    while let Some(path) = net.shortest_path(source, sink)? {
        rounds += 1;
        if rounds > 4 * (ns + nt) * (ns + nt) + 16 {
            return Err(Error::InvalidInput("transport solver failed to terminate".into()));
        }
        let push = path.iter().map(|&e| net.edges[e].cap).fold(f64::INFINITY, f64::min);
        if push <= MASS_EPS {
            break;
        }
        for &e in &path {
            net.edges[e].cap -= push;
            net.edges[e ^ 1].cap += push;
            cost += push * net.edges[e].cost;
        }
    }
    Ok(cost.max(0.0))
}
