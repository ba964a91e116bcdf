mod common;

use common::{floyd, random_graph, rng};
use dsssp::detection::{detect_brute, detect_nearest, detect_rtz, detect_rtz_with, solve_phase, DetectionList};
use dsssp::graph::{Dist, Graph, NodeId, INF};
use rand::seq::SliceRandom;
use rand::Rng;

/// The definition: σ smallest (d, source) pairs with d ≤ γ, from all-pairs distances.
fn definitional(g: &Graph, sources: &[NodeId], gamma: Dist, sigma: usize) -> Vec<Vec<(Dist, NodeId)>> {
    let d = floyd(g);
    (0..g.n())
        .map(|u| {
            let mut l: Vec<(Dist, NodeId)> =
                sources.iter().map(|&s| (d[u][s], s)).filter(|&(x, _)| x != INF && x <= gamma).collect();
            l.sort_unstable();
            l.dedup();
            l.truncate(sigma);
            l
        })
        .collect()
}

fn instance(seed: u64) -> (Graph, Vec<NodeId>, Dist, usize) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=30);
    let (extra, w, connected) = (r.gen_range(0..2 * n), r.gen_range(1..=10), r.gen_bool(0.8));
    let g = random_graph(&mut r, n, extra, w, connected);
    let mut nodes: Vec<NodeId> = (0..n).collect();
    nodes.shuffle(&mut r);
    let k = r.gen_range(0..=n);
    let sources = nodes[..k].to_vec();
    let gamma = if r.gen_bool(0.2) { INF } else { r.gen_range(0..=40) };
    let sigma = r.gen_range(1..=n.max(1) + 1);
    (g, sources, gamma, sigma)
}

#[test]
fn all_detectors_match_the_definition() {
    for seed in 0..1200 {
        let (g, sources, gamma, sigma) = instance(seed);
        let want = definitional(&g, &sources, gamma, sigma);
        let brute = detect_brute(&g, &sources, gamma, sigma);
        assert_eq!(brute.lists, want, "seed {seed}");
        assert_eq!(detect_rtz(&g, &sources, gamma, sigma), brute, "seed {seed}");
        assert_eq!(detect_nearest(&g, &sources, gamma, sigma), brute, "seed {seed}");
    }
}

#[test]
fn rtz_phase_j_finds_the_jth_entry() {
    for seed in 0..200 {
        let (g, sources, gamma, sigma) = instance(seed);
        let want = definitional(&g, &sources, gamma, sigma);
        let (_, stats) = detect_rtz_with(&g, &sources, gamma, sigma, solve_phase);
        for st in &stats {
            let expect = want.iter().filter(|l| l.len() >= st.phase).count();
            assert_eq!(st.found, expect, "seed {seed} phase {}", st.phase);
        }
    }
}

#[test]
fn path_example() {
    // 0-1-2-3-4 unit weights, S = {0, 4}, γ = 3, σ = 1
    let g = Graph::from_edges(5, (0..4).map(|i| (i, i + 1, 1))).unwrap();
    let l: DetectionList = detect_rtz(&g, &[0, 4], 3, 1);
    assert_eq!(l.list(2), &[(2, 0)]);
    assert_eq!(l.list(3), &[(1, 4)]);
    assert!(l.is_full(1));
    let l2 = detect_rtz(&g, &[0, 4], 3, 2);
    assert_eq!(l2.list(2), &[(2, 0), (2, 4)]);
    assert_eq!(l2.list(0), &[(0, 0)]);
    assert!(!l2.is_full(0));
}
