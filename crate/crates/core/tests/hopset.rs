mod common;

use common::{floyd, hop_limited, random_graph, rng};
use dsssp::arith::{wide, Rational, Wide};
use dsssp::graph::{Graph, INF};
use dsssp::hopset::{
    hop_reduction, hop_reduction_additive_with, hop_reduction_forced, hop_set_with, verify_hop_set, HopSetConfig,
    HopSetEdges, HopSetError, Overrides,
};
use dsssp::engine::Sequential;
use num_traits::One;
use rand::Rng;

const EPS: [(u64, u64); 3] = [(1, 1), (1, 2), (1, 4)];

/// Sandwich d·M ≤ d^h(G ∪ F) ≤ bound·d·M on all pairs, from independent oracles.
fn sandwich(g: &Graph, f: &HopSetEdges, hops: u64, bound: Wide) -> Wide {
    let exact = floyd(g);
    let h = f.union_graph(g);
    let unit = f.unit() as u128;
    let mut worst = Wide::one();
    for s in 0..g.n() {
        let hop = hop_limited(&h, s, hops as usize);
        for v in 0..g.n() {
            if v == s || exact[s][v] == INF {
                continue;
            }
            let d = exact[s][v] as u128 * unit;
            assert!(hop[v] != INF, "{s}->{v} unreachable within {hops} hops");
            let got = hop[v] as u128;
            assert!(got >= d, "{s}->{v}: {got} < {d}");
            let ratio = Wide::new(got, d);
            assert!(ratio <= bound, "{s}->{v}: ratio {ratio} > {bound}");
            worst = worst.max(ratio);
        }
    }
    worst
}

#[test]
fn hop_sets_on_random_graphs() {
    let mut r = rng(21);
    for seed in 0..60 {
        let n = r.gen_range(2..=36);
        let (extra, w, connected) = (r.gen_range(0..2 * n), r.gen_range(1..=64), r.gen_bool(0.9));
        let g = random_graph(&mut r, n, extra, w, connected);
        let (en, ed) = EPS[seed % 3];
        let eps = Rational::new(en, ed);
        let hs = hop_set_with(&mut Sequential, &g, g.max_weight(), eps, HopSetConfig::default());
        assert!(hs.factor <= Wide::one() + wide(eps), "seed {seed}: factor {}", hs.factor);
        sandwich(&g, &hs.edges, hs.hop_bound, Wide::one() + wide(eps));
        let d = floyd(&g);
        for (u, v, x) in hs.edges.edges() {
            assert!(x as u128 >= d[u][v] as u128 * hs.edges.unit() as u128, "seed {seed}: shortcut below d");
        }
    }
}

#[test]
fn forced_hierarchies_keep_the_certified_factor() {
    let mut r = rng(22);
    for seed in 0..40 {
        let n = r.gen_range(8..=36);
        let (extra, w) = (r.gen_range(0..n), r.gen_range(1..=8));
        let g = random_graph(&mut r, n, extra, w, true);
        let (en, ed) = EPS[seed % 3];
        let eps = Rational::new(en, ed);
        let cfg = HopSetConfig { overrides: Overrides { p: Some(2), q: Some(r.gen_range(2..=4)) } };
        let hs = hop_set_with(&mut Sequential, &g, g.max_weight(), eps, cfg);
        sandwich(&g, &hs.edges, hs.hop_bound, hs.factor);
    }
}

#[test]
fn additive_reduction_properties() {
    let mut r = rng(23);
    for seed in 0..120 {
        let n = r.gen_range(2..=30);
        let (extra, w) = (r.gen_range(0..n), r.gen_range(1..=5));
        let g = random_graph(&mut r, n, extra, w, true);
        let (en, ed) = EPS[seed % 3];
        let eps = Rational::new(en, ed);
        let ov = Overrides { p: Some(r.gen_range(1..=3)), q: Some(r.gen_range(1..=5)) };
        let delta = r.gen_range(1..=4);
        let red = hop_reduction_additive_with(&g, delta, eps, ov);
        let p = &red.params;
        assert!(p.beta_bound_holds(), "seed {seed}");
        assert!(p.growth_bound_holds(), "seed {seed}");
        assert_eq!(p.beta, 2 * p.r.iter().sum::<u64>());
        for i in 1..p.r.len() {
            let before: u64 = p.r[..i].iter().sum();
            assert!(en as u128 * p.r[i] as u128 >= (4 * ed as u128 + 2 * en as u128) * before as u128);
        }
        let d = floyd(&g);
        for (u, v, x) in red.edges.edges() {
            assert_eq!(x, d[u][v], "seed {seed}: additive shortcuts carry exact distances");
            assert!(x <= p.range);
        }
    }
}

#[test]
fn single_reduction_certificates() {
    let mut r = rng(24);
    for seed in 0..30 {
        let n = r.gen_range(4..=24);
        let g = random_graph(&mut r, n, n, 6, true);
        let eps = Rational::new(1, 2);
        let h = n as u64;
        let red = hop_reduction_forced(&g, 2, h, eps, g.max_weight(), Overrides::default());
        let c = &red.certificate;
        // 1+ε/6 per the single-reduction lemma (ball) or (1+ε′)² + ε′β/h
        sandwich(&g, &red.edges, c.hops, c.factor.max(Wide::one()));
        assert!(c.kind == "ball" || c.kind == "lemma", "seed {seed}");
    }
}

#[test]
fn precondition_errors() {
    let g = Graph::from_edges(64, (1..64).map(|v| (v - 1, v, 1))).unwrap();
    match hop_reduction(&g, 4, 1, Rational::new(1, 2), 1) {
        Err(HopSetError::PreconditionViolated { h, required }) => {
            assert_eq!(h, 1);
            assert!(required > 1);
        }
        other => panic!("expected a precondition error, got {:?}", other.map(|r| r.certificate)),
    }
}

#[test]
fn edges_text_round_trip_and_checker() {
    let mut r = rng(25);
    let g = random_graph(&mut r, 40, 60, 12, true);
    let eps = Rational::new(1, 4);
    let hs = hop_set_with(&mut Sequential, &g, 12, eps, HopSetConfig::default());
    let text = hs.edges.to_text(eps);
    let back = HopSetEdges::from_text(&text).unwrap();
    assert_eq!(back.len(), hs.edges.len());
    assert_eq!(hs.edges.unit() % back.unit(), 0);
    for (u, v, _) in hs.edges.edges() {
        assert_eq!(back.real_weight(u, v), hs.edges.real_weight(u, v));
    }
    let all: Vec<usize> = (0..40).collect();
    let chk = verify_hop_set(&g, &hs.edges, hs.hop_bound, Wide::one() + wide(eps), &all);
    assert!(chk.ok());
    assert_eq!(chk.worst_ratio, sandwich(&g, &hs.edges, hs.hop_bound, Wide::one() + wide(eps)));
    // an empty F with one hop fails on any path of two edges
    let empty = HopSetEdges::new(40, 1);
    assert!(!verify_hop_set(&g, &empty, 1, Wide::one() + wide(eps), &all).ok());
}
