mod common;

use common::{floyd, hop_limited, random_graph, rng};
use dsssp::arith::{wide, Rational, Wide};
use dsssp::graph::{round_by, Dist, Graph, NodeId, INF};
use dsssp::overlay::{
    approx_weighted_diameter, combine, compute_types, distances_to_centers, extract_path, overlay_sssp, path_weight,
    select_centers, Estimates, OverlayParams, PathError, INF_WIDE,
};
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn case(r: &mut ChaCha8Rng) -> (Graph, OverlayParams) {
    let n = r.gen_range(2..=40);
    let (extra, w) = (r.gen_range(0..n), r.gen_range(1..=8));
    let g = random_graph(r, n, extra, w, true);
    let eps = [Rational::new(1, 1), Rational::new(1, 2), Rational::new(1, 4)][r.gen_range(0..3)];
    let ell = r.gen_range(2..=8);
    let params = OverlayParams::new(n, g.max_weight(), eps, Some(ell), 1);
    (g, params)
}

/// t(u) = smallest i with |{v : d(u, v, G_i) ≤ h′}| ≥ h.
fn brute_types(g: &Graph, p: &OverlayParams) -> Vec<Option<u32>> {
    let mut t = vec![None; g.n()];
    for i in 0..=p.top_scale {
        let d = floyd(&round_by(g, p.type_scale(i)));
        for u in 0..g.n() {
            let ball = d[u].iter().filter(|&&x| x <= p.h_prime).count() as u64;
            if t[u].is_none() && ball >= p.h {
                t[u] = Some(i);
            }
        }
    }
    t
}

fn random_simple_path(r: &mut ChaCha8Rng, g: &Graph, edges: usize) -> Option<Vec<NodeId>> {
    let mut path = vec![r.gen_range(0..g.n())];
    while path.len() <= edges {
        let x = *path.last().unwrap();
        let next: Vec<NodeId> = g.neighbors(x).iter().map(|e| e.0).filter(|v| !path.contains(v)).collect();
        path.push(*next.choose(r)?);
    }
    Some(path)
}

#[test]
fn types_match_brute_force_and_hit_long_paths() {
    let mut r = rng(31);
    let mut paths_checked = 0;
    for seed in 0..150 {
        let (g, p) = case(&mut r);
        let types = compute_types(&g, &p);
        assert_eq!(types.types, brute_types(&g, &p), "seed {seed}");
        let (num, den) = (*p.epsilon.numer() as u128, *p.epsilon.denom() as u128);
        for _ in 0..30 {
            let Some(path) = random_simple_path(&mut r, &g, p.ell as usize) else { continue };
            paths_checked += 1;
            let w = path_weight(&g, &path).unwrap() as u128;
            let hit = path.iter().any(|&u| types.types[u].is_some_and(|t| (1u128 << t) * den <= 2 * num * w));
            assert!(hit, "seed {seed}: no node of small type on {path:?}");
        }
    }
    assert!(paths_checked > 1000);
}

#[test]
fn type_examples() {
    let g = Graph::from_edges(1, []).unwrap();
    let p = OverlayParams::new(1, 1, Rational::new(1, 2), Some(2), 1);
    assert_eq!(p.h, 1);
    assert_eq!(compute_types(&g, &p).types, vec![Some(0)]);
    let p = OverlayParams::new(1, 1, Rational::new(1, 1), Some(2), 1);
    assert_eq!(p.h, 2);
    assert_eq!(compute_types(&g, &p).types, vec![None]);
    // a clique of h nodes with unit weights: G_0 already has every node within h′
    let h = 3;
    let edges: Vec<_> = (0..h).flat_map(|u| (u + 1..h).map(move |v| (u, v, 1))).collect();
    let g = Graph::from_edges(h, edges).unwrap();
    let p = OverlayParams::new(h, 1, Rational::new(1, 1), Some(h as u64), 1);
    assert_eq!(p.h, h as u64);
    assert!(compute_types(&g, &p).types.iter().all(|&t| t == Some(0)));
}

#[test]
fn centers_and_distance_tables() {
    let mut r = rng(32);
    for seed in 0..150 {
        let (g, p) = case(&mut r);
        let n = g.n();
        let s = r.gen_range(0..n);
        let types = compute_types(&g, &p);
        let sel = select_centers(&g, &types, &p, s);
        assert!(sel.centers.contains(&s));
        assert!(sel.rulings_ok(), "seed {seed}");
        for tr in &sel.rulings {
            assert!(tr.result.members.len() as u64 * p.h <= n as u64, "seed {seed}: |T_{}| too large", tr.scale);
        }
        let net = distances_to_centers(&g, &sel.centers, &p);
        let d = floyd(&g);
        let m = net.unit as u128;
        let (num, den) = (*p.epsilon.numer() as u128, *p.epsilon.denom() as u128);
        let k = (p.k as usize).min(n);
        for (j, &c) in net.centers.iter().enumerate() {
            let dk = hop_limited(&g, c, k);
            for u in 0..n {
                let hat = net.d_hat(u, j);
                if u == c {
                    assert_eq!(hat, 0);
                }
                if dk[u] == INF {
                    continue;
                }
                assert!(hat != INF, "seed {seed}: d̂({u},{c}) missing");
                let hat = hat as u128;
                assert!(hat >= d[u][c] as u128 * m, "seed {seed}: d̂ below d");
                assert!(hat * den <= (num + den) * dk[u] as u128 * m, "seed {seed}: d̂ above (1+ε)d^k");
            }
        }
    }
}

#[test]
fn single_edge_distance_estimate() {
    let g = Graph::from_edges(2, [(0, 1, 7)]).unwrap();
    let p = OverlayParams::new(2, 7, Rational::new(1, 2), Some(2), 1);
    let net = distances_to_centers(&g, &[0, 1], &p);
    let hat = Wide::new(net.d_hat(0, 1) as u128, net.unit as u128);
    assert!(hat >= Wide::from_integer(7));
    assert!(hat <= Wide::from_integer(7) * Wide::new(3, 2));
}

#[test]
fn pipeline_sandwiches() {
    let mut r = rng(33);
    let mut extracted = 0;
    for seed in 0..80 {
        let (g, p) = case(&mut r);
        let s = r.gen_range(0..g.n());
        let run = overlay_sssp(&g, s, &p);
        let d = floyd(&g);
        let est = &run.estimates;
        // end to end
        for v in 0..g.n() {
            let x = est.values[v];
            assert_ne!(x, INF_WIDE, "seed {seed}");
            assert!(x >= d[s][v] as u128 * est.unit, "seed {seed}: estimate below d at {v}");
            assert!(Wide::new(x, est.unit) <= run.alpha * Wide::from_integer(d[s][v] as u128), "seed {seed}");
        }
        assert_eq!(est.values[s], 0);
        // final steps on G′: d(s, v, G′) ≤ d̃ ≤ (1+ε) d^{hb}(s, v, G′ ∪ F)
        let net = &run.network;
        let js = net.index[s].unwrap();
        let dg = floyd(&net.graph);
        let h = run.hopset.edges.union_graph(&net.graph);
        let hop = hop_limited(&h, js, run.hopset.hop_bound as usize);
        let (mo, mh) = (net.unit as u128, run.hopset.edges.unit() as u128);
        let (num, den) = (*p.epsilon.numer() as u128, *p.epsilon.denom() as u128);
        let fe = &run.finish.estimates;
        for j in 0..net.n_centers() {
            let a = fe.values[j];
            assert!(a != INF_WIDE);
            assert!(a * mo >= dg[js][j] as u128 * fe.unit, "seed {seed}: d̃ below d(G′)");
            assert!(a * mo * mh * den <= (num + den) * hop[j] as u128 * fe.unit, "seed {seed}: d̃ above bound");
            let u = net.centers[j];
            assert!(combine(net, fe, s, u) <= a, "seed {seed}: combine ignores the v = u term");
        }
        // path recovery and the diameter bracket
        for u in 0..g.n() {
            match extract_path(&g, est, s, u) {
                Ok(path) => {
                    extracted += 1;
                    assert_eq!((path[0], *path.last().unwrap()), (s, u));
                    let w = path_weight(&g, &path).expect("path uses graph edges") as u128;
                    assert!(w >= d[s][u] as u128);
                    assert!(w * est.unit <= est.values[u]);
                }
                Err(PathError::PropertyViolated { .. }) => {}
                Err(e) => panic!("seed {seed}: {e}"),
            }
        }
        let wd = d.iter().flatten().copied().filter(|&x| x != INF).max().unwrap() as u128;
        let approx = approx_weighted_diameter(est).unwrap();
        assert!(approx * Wide::from_integer(2) >= Wide::from_integer(wd), "seed {seed}");
        assert!(approx <= run.alpha * Wide::from_integer(wd), "seed {seed}");
    }
    assert!(extracted > 0);
}

fn exact_estimates(d: &[Dist]) -> Estimates {
    Estimates { unit: 1, values: d.iter().map(|&x| if x == INF { INF_WIDE } else { x as u128 }).collect() }
}

#[test]
fn path_recovery_and_diameter_examples() {
    let g = Graph::from_edges(5, (0..4).map(|i| (i, i + 1, i as u64 + 1))).unwrap();
    let est = exact_estimates(&floyd(&g)[0]);
    assert_eq!(extract_path(&g, &est, 0, 4), Ok(vec![0, 1, 2, 3, 4]));
    assert_eq!(extract_path(&g, &est, 0, 0), Ok(vec![0]));
    assert_eq!(approx_weighted_diameter(&est), Some(Wide::from_integer(10)));

    let star = Graph::from_edges(5, (1..5).map(|v| (0, v, 1))).unwrap();
    let est = exact_estimates(&floyd(&star)[0]);
    let approx = approx_weighted_diameter(&est).unwrap();
    assert_eq!(approx, Wide::one());
    assert!(approx * Wide::from_integer(2) >= Wide::from_integer(2));

    // an estimate that is too small at node 1 breaks the recovery property there
    let bad = Estimates { unit: 1, values: vec![0, 0, 3, 6, 10] };
    assert!(matches!(extract_path(&g, &bad, 0, 1), Err(PathError::PropertyViolated { at: 1 })));
}

#[test]
fn alpha_chains_the_factors() {
    let p = OverlayParams::new(256, 4, Rational::new(1, 2), None, 1);
    let f = Wide::new(49, 48);
    let alpha = p.alpha(f, p.epsilon);
    let one = Wide::one();
    let e = wide(p.epsilon);
    assert_eq!(alpha, (one + e) * (one + e) * f * (one + Wide::from_integer(2) * p.segment_slack()));
    assert!(alpha > one + e);
}
