//! Couplings of `X` and its reduced Palm version that differ by at most one point.
//!
//! Existence is decided by a max-flow on the bipartite graph with source arcs
//! `P(X = S)`, sink arcs `P(X^u = T)` and middle arcs `S -> T` for `T = S`
//! and `T = S \ {v}`. A flow of value 1 is a coupling.

use super::{FiniteDpp, SubsetLaw};
use crate::error::{Error, Result};
use rand::Rng;
use std::collections::VecDeque;

/// Largest ground set for which [`coupling_feasible`] builds the flow graph.
pub const MAX_COUPLING_SITES: usize = 12;

/// Flow deficit accepted as a full coupling.
pub const FLOW_TOLERANCE: f64 = 1e-8;

const RESIDUAL_EPS: f64 = 1e-15;

/// Joint law of `(X, X^u)` supported on `T subset S`, `|S \ T| <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    pub n: usize,
    pub anchor: usize,
    /// `(S, T, probability)` with positive probability.
    pub joint: Vec<(usize, usize, f64)>,
}

impl CouplingTable {
    pub fn row_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; 1 << self.n];
        for &(s, _, p) in &self.joint {
            out[s] += p;
        }
        out
    }

    pub fn column_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; 1 << self.n];
        for &(_, t, p) in &self.joint {
            out[t] += p;
        }
        out
    }

    pub fn total(&self) -> f64 {
        self.joint.iter().map(|e| e.2).sum()
    }

    /// Diagonal coupling `S = T` of a law with itself.
    pub fn identity(law: &SubsetLaw, anchor: usize) -> CouplingTable {
        CouplingTable {
            n: law.n(),
            anchor,
            joint: law.support().map(|(s, p)| (s, s, p)).collect(),
        }
    }
}

/// The displaced point: `p = P(S != T)` and the law of the single site in `S \ T`.
#[derive(Debug, Clone, PartialEq)]
pub struct XiLaw {
    pub p: f64,
    /// Indexed by site minus one.
    pub density: Vec<f64>,
}

struct Edge {
    to: usize,
    cap: f64,
}

/// Dinic's algorithm on a graph with real capacities.
struct FlowNetwork {
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        Self {
            edges: Vec::new(),
            adjacency: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            cursor: vec![0; nodes],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap });
        self.edges.push(Edge { to: from, cap: 0.0 });
        self.adjacency[from].push(id);
        self.adjacency[to].push(id + 1);
        id
    }

    fn bfs(&mut self, source: usize, sink: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adjacency[v] {
                let Edge { to, cap } = self.edges[e];
                if cap > RESIDUAL_EPS && self.level[to] < 0 {
                    self.level[to] = self.level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
        self.level[sink] >= 0
    }

    fn dfs(&mut self, v: usize, sink: usize, pushed: f64) -> f64 {
        if v == sink {
            return pushed;
        }
        while self.cursor[v] < self.adjacency[v].len() {
            let e = self.adjacency[v][self.cursor[v]];
            let Edge { to, cap } = self.edges[e];
            if cap > RESIDUAL_EPS && self.level[to] == self.level[v] + 1 {
                let got = self.dfs(to, sink, pushed.min(cap));
                if got > 0.0 {
                    self.edges[e].cap -= got;
                    self.edges[e ^ 1].cap += got;
                    return got;
                }
            }
            self.cursor[v] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> f64 {
        let mut flow = 0.0;
        while self.bfs(source, sink) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let pushed = self.dfs(source, sink, f64::INFINITY);
                if pushed <= 0.0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// Flow carried by a forward edge.
    fn flow_on(&self, id: usize) -> f64 {
        self.edges[id ^ 1].cap
    }
}

/// Max-flow value and, when it reaches `1 - 1e-8`, a coupling table built from the flow.
pub fn coupling_feasible(law_x: &SubsetLaw, law_xu: &SubsetLaw, u: usize) -> Result<(f64, Option<CouplingTable>)> {
    let n = law_x.n();
    if law_xu.n() != n {
        return Err(Error::SiteMismatch(format!("laws on {n} and {} sites", law_xu.n())));
    }
    if n > MAX_COUPLING_SITES {
        return Err(Error::SizeGuard {
            what: "coupling sites",
            size: n,
            max: MAX_COUPLING_SITES,
        });
    }
    if u == 0 || u > n {
        return Err(Error::SiteMismatch(format!("anchor {u} outside 1..={n}")));
    }
    let bit = 1usize << (u - 1);
    let charged: f64 = law_xu.support().filter(|&(t, _)| t & bit != 0).map(|(_, p)| p).sum();
    if charged > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "Palm law puts mass {charged:e} on subsets containing the anchor"
        )));
    }

    let states = 1usize << n;
    let source = 2 * states;
    let sink = source + 1;
    let mut net = FlowNetwork::new(2 * states + 2);
    let mut middle = Vec::new();
    for (s, p) in law_x.support() {
        net.add_edge(source, s, p);
    }
    for (t, p) in law_xu.support() {
        net.add_edge(states + t, sink, p);
    }
    for (s, _) in law_x.support() {
        let mut targets = vec![s];
        targets.extend(super::mask_sites(s).map(|i| s & !(1 << i)));
        for t in targets {
            if law_xu.prob(t) > 0.0 {
                middle.push((s, t, net.add_edge(s, states + t, f64::INFINITY)));
            }
        }
    }
    let flow = net.max_flow(source, sink).min(1.0);
    if flow < 1.0 - FLOW_TOLERANCE {
        return Ok((flow, None));
    }
    let joint = middle
        .into_iter()
        .filter_map(|(s, t, id)| {
            let f = net.flow_on(id);
            (f > 0.0).then_some((s, t, f))
        })
        .collect();
    Ok((flow, Some(CouplingTable { n, anchor: u, joint })))
}

/// Law of `xi_u = S \ T` under a coupling table.
pub fn xi_law(table: &CouplingTable, dpp: &FiniteDpp, u: usize) -> Result<XiLaw> {
    if table.n != dpp.n() || table.anchor != u {
        return Err(Error::SiteMismatch(format!(
            "table on {} sites anchored at {} used with {} sites at {u}",
            table.n,
            table.anchor,
            dpp.n()
        )));
    }
    let mut mass = vec![0.0; table.n];
    for &(s, t, p) in &table.joint {
        let diff = s & !t;
        if diff != 0 {
            mass[diff.trailing_zeros() as usize] += p;
        }
    }
    let p: f64 = mass.iter().sum();
    let density = mass.iter().map(|m| if p > 0.0 { m / p } else { 0.0 }).collect();
    Ok(XiLaw { p, density })
}

/// One draw `(S, T)` from a coupling table.
pub fn sample_coupled(table: &CouplingTable, rng: &mut impl Rng) -> (usize, usize) {
    let total = table.total();
    let mut x = rng.random::<f64>() * total;
    for &(s, t, p) in &table.joint {
        if x < p {
            return (s, t);
        }
        x -= p;
    }
    let &(s, t, _) = table.joint.last().expect("coupling table is nonempty");
    (s, t)
}
