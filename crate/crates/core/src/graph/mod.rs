//! Weighted undirected graphs, exact distance oracles and weight rounding.

mod gen;
pub(crate) mod io;
mod paths;

pub use gen::{GenError, GeneratorSpec, PRNG};
pub use io::{parse_edge_list, read_edge_list, write_edge_list, ParseError};
pub use paths::{
    all_pairs, bellman_ford_hops, dijkstra_bounded, dijkstra_multi, hop_diameter, hop_layers,
    DistanceTable, HopDistanceTable,
};

use crate::arith::Rational;
use thiserror::Error;

pub type NodeId = usize;
/// Extended non-negative distance; [`INF`] encodes ∞.
pub type Dist = u64;
pub const INF: Dist = u64::MAX;

/// `a + b` with ∞ absorbing.
#[inline]
pub fn add(a: Dist, b: Dist) -> Dist {
    if a == INF || b == INF {
        INF
    } else {
        a.checked_add(b).expect("distance overflow")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {0}-{1}")]
    Duplicate(NodeId, NodeId),
    #[error("node {node} out of range for n={n}")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("weight {w} of edge {u}-{v} outside 1..={bound}")]
    WeightOutOfRange { u: NodeId, v: NodeId, w: u64, bound: u64 },
    #[error("graph is disconnected")]
    Disconnected,
}

/// Undirected graph on nodes `0..n` with positive integer weights.
///
/// Edges are stored once with `u < v`, sorted, plus a CSR adjacency whose
/// per-node lists are sorted by neighbour ID.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    w_bound: u64,
    edges: Vec<(NodeId, NodeId, u64)>,
    offsets: Vec<usize>,
    adj: Vec<(NodeId, u64)>,
}

impl Graph {
    /// Strict constructor enforcing every invariant, including `w ≤ w_bound`.
    pub fn new(
        n: usize,
        w_bound: u64,
        edges: impl IntoIterator<Item = (NodeId, NodeId, u64)>,
    ) -> Result<Graph, GraphError> {
        let mut list = Vec::new();
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if w == 0 || w > w_bound {
                return Err(GraphError::WeightOutOfRange { u, v, w, bound: w_bound });
            }
            list.push((u.min(v), u.max(v), w));
        }
        list.sort_unstable();
        if let Some(pair) = list.windows(2).find(|p| (p[0].0, p[0].1) == (p[1].0, p[1].1)) {
            return Err(GraphError::Duplicate(pair[0].0, pair[0].1));
        }
        Ok(Self::assemble(n, w_bound, list))
    }

    /// Strict constructor with `W` taken as the largest weight present.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId, u64)>,
    ) -> Result<Graph, GraphError> {
        let list: Vec<_> = edges.into_iter().collect();
        let w = list.iter().map(|e| e.2).max().unwrap_or(1).max(1);
        Graph::new(n, w, list)
    }

    /// Union constructor: parallel edges collapse to their minimum weight.
    /// Panics on invalid endpoints, self-loops or zero weights, which only
    /// arise from internal bugs.
    pub fn from_edges_min(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId, u64)>) -> Graph {
        let mut list: Vec<_> = edges
            .into_iter()
            .map(|(u, v, w)| {
                assert!(u < n && v < n && u != v && w > 0, "invalid edge {u}-{v} ({w})");
                (u.min(v), u.max(v), w)
            })
            .collect();
        list.sort_unstable();
        list.dedup_by(|later, earlier| (later.0, later.1) == (earlier.0, earlier.1));
        let w = list.iter().map(|e| e.2).max().unwrap_or(1);
        Self::assemble(n, w, list)
    }

    fn assemble(n: usize, w_bound: u64, edges: Vec<(NodeId, NodeId, u64)>) -> Graph {
        let mut degree = vec![0usize; n + 1];
        for &(u, v, _) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![(0, 0); 2 * edges.len()];
        for &(u, v, w) in &edges {
            adj[fill[u]] = (v, w);
            fill[u] += 1;
            adj[fill[v]] = (u, w);
            fill[v] += 1;
        }
        for u in 0..n {
            adj[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Graph { n, w_bound, edges, offsets, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// The weight bound W.
    pub fn max_weight(&self) -> u64 {
        self.w_bound
    }

    /// Canonical edge list, `u < v`, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId, u64)] {
        &self.edges
    }

    /// Neighbours of `u` with edge weights, sorted by neighbour ID.
    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, u64)] {
        &self.adj[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<u64> {
        let nb = self.neighbors(u);
        nb.binary_search_by_key(&v, |e| e.0).ok().map(|i| nb[i].1)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Same edges with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Graph {
        let edges = self.edges.iter().map(|&(u, v, w)| (u, v, w.checked_mul(factor).expect("weight overflow")));
        Graph::assemble(self.n, self.w_bound * factor, edges.collect())
    }
}

/// The scale ρ = num/den of a rounding `w ↦ ⌈w/ρ⌉`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    pub num: u128,
    pub den: u128,
}

impl Scale {
    pub fn new(num: u128, den: u128) -> Scale {
        assert!(num > 0 && den > 0, "scale must be positive");
        let g = num_integer::gcd(num, den);
        Scale { num: num / g, den: den / g }
    }

    pub fn from_rational(r: Rational) -> Scale {
        Scale::new(*r.numer() as u128, *r.denom() as u128)
    }

    /// ⌈w/ρ⌉.
    #[inline]
    pub fn round(&self, w: u64) -> u64 {
        let v = (w as u128 * self.den).div_ceil(self.num);
        u64::try_from(v).expect("rounded weight overflow")
    }

    /// ρ·d as a rational with denominator `den`; returns the numerator.
    pub fn scale_back_numer(&self, d: Dist) -> u128 {
        d as u128 * self.num
    }
}

/// `G_ρ`: every weight replaced by ⌈w/ρ⌉; W becomes ⌈W/ρ⌉.
pub fn round_weights(g: &Graph, rho: Rational) -> Graph {
    round_by(g, Scale::from_rational(rho))
}

pub fn round_by(g: &Graph, rho: Scale) -> Graph {
    let edges = g.edges.iter().map(|&(u, v, w)| (u, v, rho.round(w))).collect();
    Graph::assemble(g.n, rho.round(g.w_bound), edges)
}
