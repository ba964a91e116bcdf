use super::{add, Dist, Graph, GraphError, NodeId, INF};
use crate::par;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

/// Shortest-path distances up to a range, from one or more zero-initialised roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    pub sources: Vec<NodeId>,
    pub range: Dist,
    pub dist: Vec<Dist>,
    pub parent: Vec<Option<NodeId>>,
}

impl DistanceTable {
    pub fn source(&self) -> NodeId {
        self.sources[0]
    }

    /// Nodes with a finite distance.
    pub fn reached(&self) -> impl Iterator<Item = (NodeId, Dist)> + '_ {
        self.dist.iter().enumerate().filter(|e| *e.1 != INF).map(|(v, &d)| (v, d))
    }
}

/// Minimum weight over paths with at most `h` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopDistanceTable {
    pub source: NodeId,
    pub h: usize,
    pub dist: Vec<Dist>,
}

/// d(s, ·, R, G): exact distances that are ≤ `range`, ∞ otherwise.
///
/// Heap entries are keyed by (distance, node); among tight predecessors
/// the parent is the one with the smallest ID.
pub fn dijkstra_bounded(g: &Graph, s: NodeId, range: Dist) -> DistanceTable {
    dijkstra_multi(g, &[s], range)
}

pub fn dijkstra_multi(g: &Graph, roots: &[NodeId], range: Dist) -> DistanceTable {
    let n = g.n();
    let mut dist = vec![INF; n];
    let mut parent = vec![None; n];
    let mut heap = BinaryHeap::new();
    for &r in roots {
        assert!(r < n, "root {r} out of range");
        if dist[r] != 0 {
            dist[r] = 0;
            heap.push(Reverse((0, r)));
        }
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in g.neighbors(u) {
            let nd = add(d, w);
            if nd > range {
                continue;
            }
            if nd < dist[v] {
                dist[v] = nd;
                parent[v] = Some(u);
                heap.push(Reverse((nd, v)));
            } else if nd == dist[v] && parent[v].is_some_and(|p| u < p) {
                parent[v] = Some(u);
            }
        }
    }
    let mut sources = roots.to_vec();
    sources.dedup();
    DistanceTable { sources, range, dist, parent }
}

/// All layers d^0..d^h from `s`; layer k is exactly d^k(s, ·, G).
pub fn hop_layers(g: &Graph, s: NodeId, h: usize) -> Vec<Vec<Dist>> {
    let n = g.n();
    let mut cur = vec![INF; n];
    cur[s] = 0;
    let mut layers = vec![cur.clone()];
    let mut stable = false;
    for _ in 0..h {
        if stable {
            layers.push(cur.clone());
            continue;
        }
        let mut next = cur.clone();
        for &(u, v, w) in g.edges() {
            if cur[u] != INF {
                next[v] = next[v].min(cur[u] + w);
            }
            if cur[v] != INF {
                next[u] = next[u].min(cur[v] + w);
            }
        }
        stable = next == cur;
        cur = next;
        layers.push(cur.clone());
    }
    layers
}

/// d^h(s, ·, G) by synchronous relaxation; stops early at a fixpoint.
pub fn bellman_ford_hops(g: &Graph, s: NodeId, h: usize) -> HopDistanceTable {
    let n = g.n();
    if h + 1 >= n {
        // Shortest paths are simple, so n−1 hops suffice.
        return HopDistanceTable { source: s, h, dist: dijkstra_bounded(g, s, INF).dist };
    }
    let mut cur = vec![INF; n];
    cur[s] = 0;
    for _ in 0..h {
        let mut next = cur.clone();
        for &(u, v, w) in g.edges() {
            if cur[u] != INF {
                next[v] = next[v].min(cur[u] + w);
            }
            if cur[v] != INF {
                next[u] = next[u].min(cur[v] + w);
            }
        }
        if next == cur {
            break;
        }
        cur = next;
    }
    HopDistanceTable { source: s, h, dist: cur }
}

/// Unweighted diameter via BFS from every node.
pub fn hop_diameter(g: &Graph) -> Result<u64, GraphError> {
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    let ecc = par::map_range(n, |s| {
        let mut seen = vec![u64::MAX; n];
        seen[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut far = 0;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            far = seen[u];
            for &(v, _) in g.neighbors(u) {
                if seen[v] == u64::MAX {
                    seen[v] = seen[u] + 1;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        (count == n).then_some(far)
    });
    ecc.into_iter().try_fold(0, |acc, e| e.map(|e| acc.max(e)).ok_or(GraphError::Disconnected))
}

/// Exact all-pairs distances, one Dijkstra per node.
pub fn all_pairs(g: &Graph) -> Vec<Vec<Dist>> {
    par::map_range(g.n(), |s| dijkstra_bounded(g, s, INF).dist)
}
