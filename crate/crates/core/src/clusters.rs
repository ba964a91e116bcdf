//! Deterministic priorities by greedy hitting sets, and range-restricted
//! Thorup–Zwick clusters.

use crate::arith::{ceil_div, ceil_root, ln_upper, LN_UNIT};
use crate::detection::{detect_rtz, DetectionList};
use crate::graph::{add, dijkstra_multi, Dist, Graph, NodeId, INF};
use crate::par;
use serde::Serialize;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HittingSetError {
    #[error("set {0} of the collection is empty")]
    Unhittable(usize),
    #[error("element {0} is not in the universe")]
    OutsideUniverse(NodeId),
}

/// Nested sets V = A_0 ⊇ A_1 ⊇ … ⊇ A_p = ∅.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PriorityHierarchy {
    pub p: usize,
    pub q: usize,
    levels: Vec<Vec<NodeId>>,
    priority: Vec<usize>,
}

impl PriorityHierarchy {
    /// Validates nesting and the boundary conditions.
    pub fn from_levels(n: usize, q: usize, mut levels: Vec<Vec<NodeId>>) -> PriorityHierarchy {
        let p = levels.len() - 1;
        assert!(p >= 1, "need at least A_0 and A_p");
        for l in &mut levels {
            l.sort_unstable();
            l.dedup();
        }
        assert_eq!(levels[0], (0..n).collect::<Vec<_>>(), "A_0 must be V");
        assert!(levels[p].is_empty(), "A_p must be empty");
        let mut priority = vec![0; n];
        for i in 1..=p {
            for &v in &levels[i] {
                assert!(levels[i - 1].binary_search(&v).is_ok(), "A_{i} not nested in A_{}", i - 1);
                priority[v] = i;
            }
        }
        PriorityHierarchy { p, q, levels, priority }
    }

    /// (V, ∅).
    pub fn trivial(n: usize, q: usize) -> PriorityHierarchy {
        PriorityHierarchy::from_levels(n, q, vec![(0..n).collect(), Vec::new()])
    }

    pub fn n(&self) -> usize {
        self.priority.len()
    }

    pub fn level(&self, i: usize) -> &[NodeId] {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[Vec<NodeId>] {
        &self.levels
    }

    pub fn priority(&self, v: NodeId) -> usize {
        self.priority[v]
    }

    /// Whether A_1 = ∅, so every cluster is a full ball.
    pub fn is_trivial(&self) -> bool {
        self.levels[1].is_empty()
    }

    /// Levels i ≥ 1 with |A_i| > n^{1−i/p}, reported rather than asserted.
    pub fn shrinkage_violations(&self) -> Vec<usize> {
        let n = self.n() as u128;
        (1..self.p)
            .filter(|&i| {
                // |A_i|^p > n^{p−i}
                let size = self.levels[i].len() as u128;
                let lhs = size.checked_pow(self.p as u32);
                let rhs = n.checked_pow((self.p - i) as u32);
                match (lhs, rhs) {
                    (Some(l), Some(r)) => l > r,
                    _ => false,
                }
            })
            .collect()
    }
}

/// q = ⌈2·n^{1/p}·ln(3n)·(1 + ln n)⌉ with every factor rounded up.
pub fn list_size(n: usize, p: usize) -> usize {
    let n64 = n.max(1) as u64;
    let root = ceil_root(n64 as u128, p as u32);
    let ln3n = ln_upper(3 * n64);
    let ln_n = ln_upper(n64);
    ceil_div(2 * root * ln3n * (LN_UNIT + ln_n), LN_UNIT * LN_UNIT) as usize
}

/// Greedy hitting set: repeatedly take the element hitting the most
/// un-hit sets, smallest ID on ties.
pub fn greedy_hitting_set(collection: &[Vec<NodeId>], universe: &[NodeId]) -> Result<Vec<NodeId>, HittingSetError> {
    if let Some(i) = collection.iter().position(Vec::is_empty) {
        return Err(HittingSetError::Unhittable(i));
    }
    let mut universe = universe.to_vec();
    universe.sort_unstable();
    universe.dedup();
    let index: HashMap<NodeId, usize> = universe.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let collection: Vec<Vec<NodeId>> = collection
        .iter()
        .map(|set| {
            let mut set = set.clone();
            set.sort_unstable();
            set.dedup();
            set
        })
        .collect();
    let mut member_of = vec![Vec::new(); universe.len()];
    for (s, set) in collection.iter().enumerate() {
        for &e in set {
            let &i = index.get(&e).ok_or(HittingSetError::OutsideUniverse(e))?;
            member_of[i].push(s);
        }
    }
    let mut count: Vec<usize> = member_of.iter().map(Vec::len).collect();
    let mut hit = vec![false; collection.len()];
    let mut remaining = collection.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        // Strictly greater keeps the first, i.e. smallest, ID on ties.
        let mut best = 0;
        for i in 1..universe.len() {
            if count[i] > count[best] {
                best = i;
            }
        }
        chosen.push(universe[best]);
        for &s in &member_of[best] {
            if !hit[s] {
                hit[s] = true;
                remaining -= 1;
                for &e in &collection[s] {
                    count[index[&e]] -= 1;
                }
            }
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Procedure Priorities with the default q.
pub fn compute_priorities(g: &Graph, p: usize, range: Dist) -> PriorityHierarchy {
    compute_priorities_with_list_size(g, p, range, list_size(g.n(), p))
}

pub fn compute_priorities_with_list_size(g: &Graph, p: usize, range: Dist, q: usize) -> PriorityHierarchy {
    priorities_by(g.n(), p, q, |a| detect_rtz(g, a, range, q))
}

/// Procedure Priorities over an arbitrary (S, R, q)-detection routine.
pub fn priorities_by(
    n: usize,
    p: usize,
    q: usize,
    mut detect: impl FnMut(&[NodeId]) -> DetectionList,
) -> PriorityHierarchy {
    assert!(p >= 1 && q >= 1);
    let mut levels = vec![(0..n).collect::<Vec<NodeId>>()];
    for i in 0..p - 1 {
        let a_i = &levels[i];
        let next = if a_i.is_empty() {
            Vec::new()
        } else {
            let lists = detect(a_i);
            let full: Vec<Vec<NodeId>> = (0..n)
                .filter(|&v| lists.is_full(v))
                .map(|v| lists.list(v).iter().map(|e| e.1).collect())
                .collect();
            greedy_hitting_set(&full, a_i).expect("detection lists are non-empty subsets of A_i")
        };
        levels.push(next);
    }
    levels.push(Vec::new());
    PriorityHierarchy::from_levels(n, q, levels)
}

/// For each v: C(v) with exact distances, members sorted by ID.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMap {
    pub range: Dist,
    clusters: Vec<Vec<(NodeId, Dist)>>,
}

impl ClusterMap {
    pub fn from_clusters(range: Dist, mut clusters: Vec<Vec<(NodeId, Dist)>>) -> ClusterMap {
        for c in &mut clusters {
            c.sort_unstable();
        }
        ClusterMap { range, clusters }
    }

    pub fn n(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster(&self, v: NodeId) -> &[(NodeId, Dist)] {
        &self.clusters[v]
    }

    pub fn delta(&self, v: NodeId, u: NodeId) -> Option<Dist> {
        let c = &self.clusters[v];
        c.binary_search_by_key(&u, |e| e.0).ok().map(|i| c[i].1)
    }

    /// Σ_v |C(v)|.
    pub fn total_size(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }

    /// B(u) = {v : u ∈ C(v)} with δ(v, u), centers sorted.
    pub fn bunches(&self) -> Vec<Vec<(NodeId, Dist)>> {
        let mut b = vec![Vec::new(); self.n()];
        for (v, c) in self.clusters.iter().enumerate() {
            for &(u, d) in c {
                b[u].push((v, d));
            }
        }
        b
    }

    /// Lines `center member distance`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (v, c) in self.clusters.iter().enumerate() {
            for &(u, d) in c {
                writeln!(out, "{v} {u} {d}").unwrap();
            }
        }
        out
    }
}

/// d(·, A_i, R) for i = 0..=p; row p is all ∞.
pub fn level_distances(g: &Graph, h: &PriorityHierarchy, range: Dist) -> Vec<Vec<Dist>> {
    (0..=h.p)
        .map(|i| if h.level(i).is_empty() { vec![INF; g.n()] } else { dijkstra_multi(g, h.level(i), range).dist })
        .collect()
}

/// Procedure Clusters with the default level distances.
pub fn compute_clusters(g: &Graph, h: &PriorityHierarchy, range: Dist) -> ClusterMap {
    let bounds = level_distances(g, h, range);
    clusters_with_bounds(g, h, range, &bounds)
}

pub fn clusters_with_bounds(g: &Graph, h: &PriorityHierarchy, range: Dist, bounds: &[Vec<Dist>]) -> ClusterMap {
    let clusters = par::map_range(g.n(), |v| cluster_of(g, v, &bounds[h.priority(v) + 1], range));
    ClusterMap::from_clusters(range, clusters)
}

/// Pruned search from `center`: a node joins only if δ < bound(node), and
/// only joined nodes relax their edges.
pub fn cluster_of(g: &Graph, center: NodeId, bound: &[Dist], range: Dist) -> Vec<(NodeId, Dist)> {
    let mut dist: HashMap<NodeId, Dist> = HashMap::from([(center, 0)]);
    let mut heap = BinaryHeap::from([Reverse((0, center))]);
    let mut members = Vec::new();
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[&u] < d {
            continue;
        }
        if d >= bound[u] {
            continue;
        }
        members.push((u, d));
        for &(x, w) in g.neighbors(u) {
            let nd = add(d, w);
            if nd <= range && dist.get(&x).is_none_or(|&old| nd < old) {
                dist.insert(x, nd);
                heap.push(Reverse((nd, x)));
            }
        }
    }
    members.sort_unstable();
    members
}
