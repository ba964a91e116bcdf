//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's own shortest-path code.
#![allow(dead_code)]

use dsssp::graph::{Dist, Graph, NodeId, INF};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random graph on n nodes: a random spanning tree when `connected`,
/// plus `extra` random edges, weights in 1..=w.
pub fn random_graph(r: &mut ChaCha8Rng, n: usize, extra: usize, w: u64, connected: bool) -> Graph {
    let mut edges = Vec::new();
    if connected {
        for v in 1..n {
            edges.push((r.gen_range(0..v), v, r.gen_range(1..=w)));
        }
    }
    if n >= 2 {
        for _ in 0..extra {
            let a = r.gen_range(0..n);
            let b = r.gen_range(0..n);
            if a != b {
                edges.push((a, b, r.gen_range(1..=w)));
            }
        }
    }
    Graph::from_edges_min(n, edges)
}

fn adjacency(g: &Graph) -> Vec<Vec<Dist>> {
    let n = g.n();
    let mut m = vec![vec![INF; n]; n];
    for (v, row) in m.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(u, v, w) in g.edges() {
        m[u][v] = m[u][v].min(w);
        m[v][u] = m[v][u].min(w);
    }
    m
}

fn plus(a: Dist, b: Dist) -> Dist {
    if a == INF || b == INF {
        INF
    } else {
        a + b
    }
}

/// Floyd–Warshall.
pub fn floyd(g: &Graph) -> Vec<Vec<Dist>> {
    let n = g.n();
    let mut d = adjacency(g);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = plus(d[i][k], d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// d^h(s, ·) by the hop-indexed recurrence over the adjacency matrix.
pub fn hop_limited(g: &Graph, s: NodeId, h: usize) -> Vec<Dist> {
    let a = adjacency(g);
    let n = g.n();
    let mut d = vec![INF; n];
    d[s] = 0;
    for _ in 0..h {
        let mut next = d.clone();
        for v in 0..n {
            for u in 0..n {
                next[v] = next[v].min(plus(d[u], a[u][v]));
            }
        }
        d = next;
    }
    d
}

/// Ratio a/b ≤ num/den, all exact.
pub fn at_most(a: u128, b: u128, num: u128, den: u128) -> bool {
    a * den <= num * b
}

/// Binary-heap Dijkstra from `s`.
pub fn dijkstra(g: &Graph, s: NodeId) -> Vec<Dist> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut d = vec![INF; g.n()];
    let mut heap = BinaryHeap::from([Reverse((0, s))]);
    d[s] = 0;
    while let Some(Reverse((x, u))) = heap.pop() {
        if x > d[u] {
            continue;
        }
        for &(v, w) in g.neighbors(u) {
            if x + w < d[v] {
                d[v] = x + w;
                heap.push(Reverse((x + w, v)));
            }
        }
    }
    d
}

/// Eq. (1)-(3) for every pair, hop bound h < n and scale i with
/// 2^i ≤ d^h ≤ 2^{i+1}, for ε ∈ {1, 1/2, 1/4}. Returns (cases, violations).
pub fn rounding_lemma_cases(g: &Graph) -> (usize, Vec<String>) {
    use dsssp::graph::{round_by, Scale};
    let n = g.n();
    let exact = floyd(g);
    let mut cases = 0;
    let mut bad = Vec::new();
    for (num, den) in [(1u128, 1u128), (1, 2), (1, 4)] {
        for h in 1..n.max(2) {
            let hop: Vec<Vec<Dist>> = (0..n).map(|s| hop_limited(g, s, h)).collect();
            let top = (n as u64 * g.max_weight().max(1)).ilog2();
            for i in 0..=top {
                // ρ = ε·2^i/h
                let di = floyd(&round_by(g, Scale::new(num << i, den * h as u128)));
                for u in 0..n {
                    for v in u + 1..n {
                        let dh = hop[u][v];
                        if dh == INF || !((1u64 << i) <= dh && dh <= (2u64 << i)) {
                            continue;
                        }
                        cases += 1;
                        let (d, dh, di, hh) = (exact[u][v] as u128, dh as u128, di[u][v] as u128, h as u128);
                        let scaled = (num << i) * di;
                        let eqs = [scaled >= d * den * hh, di * num <= (num + 2 * den) * hh, scaled <= (num + den) * dh * hh];
                        for (k, ok) in eqs.iter().enumerate() {
                            if !ok {
                                bad.push(format!("Eq.({}) {:?} u={u} v={v} h={h} i={i} eps={num}/{den}", k + 1, g.edges()));
                            }
                        }
                    }
                }
            }
        }
    }
    (cases, bad)
}
