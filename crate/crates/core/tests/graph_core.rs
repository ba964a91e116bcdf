mod common;

use common::{floyd, hop_limited, random_graph, rng, rounding_lemma_cases};
use dsssp::arith::Rational;
use dsssp::graph::{
    all_pairs, bellman_ford_hops, hop_diameter, parse_edge_list, round_weights, write_edge_list, Graph, GraphError, INF,
};
use rand::Rng;

#[test]
fn rounding_examples() {
    let g = Graph::from_edges(2, [(0, 1, 5)]).unwrap();
    assert_eq!(round_weights(&g, Rational::from_integer(2)).weight(0, 1), Some(3));
    let g = Graph::from_edges(2, [(0, 1, 1)]).unwrap();
    assert_eq!(round_weights(&g, Rational::from_integer(1)).weight(0, 1), Some(1));

    // ε = 1, h = 2, i = 2: ρ = 2
    let g = Graph::from_edges(3, [(0, 1, 3), (1, 2, 3)]).unwrap();
    let gi = round_weights(&g, Rational::from_integer(2));
    assert_eq!((gi.weight(0, 1), gi.weight(1, 2)), (Some(2), Some(2)));
    let d = floyd(&gi)[0][2];
    assert_eq!(d, 4);
    assert!(d <= 6);
    assert!(2 * d <= 12);
    assert!(2 * d >= 6);
}

fn check_rounding_lemma(g: &Graph) -> usize {
    let (cases, bad) = rounding_lemma_cases(g);
    assert!(bad.is_empty(), "{}", bad.join("\n"));
    cases
}

#[test]
fn rounding_lemma_all_small_graphs() {
    // every graph on 4 labelled nodes with weights in {1, 2, 3}
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut cases = 0;
    for code in 0..4usize.pow(6) {
        let mut c = code;
        let mut edges = Vec::new();
        for &(u, v) in &pairs {
            let w = (c % 4) as u64;
            c /= 4;
            if w > 0 {
                edges.push((u, v, w));
            }
        }
        cases += check_rounding_lemma(&Graph::from_edges(4, edges).unwrap());
    }
    assert!(cases > 10_000);
}

#[test]
fn rounding_lemma_random_graphs_up_to_12() {
    let mut r = rng(12);
    for _ in 0..300 {
        let n = r.gen_range(5..=12);
        let (extra, w) = (r.gen_range(0..2 * n), r.gen_range(1..=16));
        let g = random_graph(&mut r, n, extra, w, true);
        check_rounding_lemma(&g);
    }
}

#[test]
fn exact_oracles_agree() {
    let mut r = rng(7);
    for _ in 0..200 {
        let n = r.gen_range(1..=24);
        let (extra, connected) = (r.gen_range(0..3 * n), r.gen_bool(0.7));
        let g = random_graph(&mut r, n, extra, 20, connected);
        let fw = floyd(&g);
        assert_eq!(all_pairs(&g), fw);
        for s in 0..n {
            for h in [0, 1, 2, 5, n] {
                assert_eq!(bellman_ford_hops(&g, s, h).dist, hop_limited(&g, s, h));
            }
        }
        let unit = Graph::from_edges_min(n, g.edges().iter().map(|&(u, v, _)| (u, v, 1)));
        let bfs = floyd(&unit);
        match hop_diameter(&g) {
            Ok(d) => assert_eq!(d, bfs.iter().flatten().copied().max().unwrap()),
            Err(e) => {
                assert_eq!(e, GraphError::Disconnected);
                assert!(bfs.iter().flatten().any(|&x| x == INF));
            }
        }
    }
}

#[test]
fn edge_list_round_trip_and_errors() {
    let mut r = rng(3);
    let g = random_graph(&mut r, 30, 40, 9, true);
    assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);

    let bad = "3 2 5\n0 1 2\n# comment\n1 2 x\n";
    assert_eq!(parse_edge_list(bad).unwrap_err().line, 4);
    let heavy = "2 1 5\n0 1 6\n";
    assert_eq!(parse_edge_list(heavy).unwrap_err().line, 2);
    let loops = "2 1 5\n1 1 1\n";
    assert_eq!(parse_edge_list(loops).unwrap_err().line, 2);
}

#[test]
fn strict_constructor_rejects_invalid_input() {
    assert_eq!(Graph::new(2, 3, [(0, 0, 1)]), Err(GraphError::SelfLoop(0)));
    assert_eq!(Graph::new(2, 3, [(0, 1, 4)]), Err(GraphError::WeightOutOfRange { u: 0, v: 1, w: 4, bound: 3 }));
    assert_eq!(Graph::new(2, 3, [(0, 2, 1)]), Err(GraphError::NodeOutOfRange { node: 2, n: 2 }));
    assert_eq!(Graph::new(2, 3, [(0, 1, 1), (1, 0, 2)]), Err(GraphError::Duplicate(0, 1)));
}
