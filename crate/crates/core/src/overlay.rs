//! Deterministic overlay networks: node types, ruling-set centers, partial
//! distance estimation, and the final SSSP combination.
//!
//! All estimates are exact rationals. Distances to centers are integers in
//! units of 1/M_o with M_o = den(ε)·k, and the final per-node estimates are
//! numerators over a common unit reported alongside them.

use crate::arith::{ceil_log2, floor_log2, ser_rational, ser_wide, to_f64, wide, Rational, Wide};
use crate::detection::{detect_brute, detect_nearest};
use crate::engine::{Engine, Sequential};
use crate::graph::{dijkstra_bounded, round_by, Dist, Graph, NodeId, Scale, INF};
use crate::hopset::{hop_set_with, HopSet, HopSetConfig};
use crate::layer::{EdgeScan, Layer};
use crate::ruling::{check_ruling, id_bits, ruling_set, RulingCheck, RulingSetResult};
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

/// Marks an unreachable estimate.
pub const INF_WIDE: u128 = u128::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlayParams {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    /// Segment length; the default is n^{1/2}.
    pub ell: u64,
    pub a: u32,
    /// ⌊ε·ell⌋, at least 1.
    pub h: u64,
    /// ⌊(1 + 2/ε)h⌋.
    pub h_prime: u64,
    /// Ruling-set separation 2h′ + 1.
    pub ruling_c: u64,
    /// Ruling-set coverage b·(2h′+1) with b = a⌈log2 n⌉.
    pub ruling_beta: u64,
    /// max(9a·ell·⌈log2 n⌉, ruling_beta).
    pub h_star: u64,
    /// 2h* + 2·ell.
    pub k: u64,
    /// ⌊(1 + 2/ε)k⌋.
    pub k_prime: u64,
    /// Rounding scales i = 0..=top_scale, top_scale = ⌊log2(nW)⌋.
    pub top_scale: u32,
}

fn stretch(eps: Rational, x: u64) -> u64 {
    // ⌊(1 + 2/ε)x⌋
    let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
    u64::try_from((num + 2 * den) * x as u128 / num).expect("parameter overflow")
}

impl OverlayParams {
    /// `ell` defaults to ⌈√n⌉.
    pub fn new(n: usize, w: u64, eps: Rational, ell: Option<u64>, a: u32) -> OverlayParams {
        assert!(crate::arith::valid_epsilon(eps) && a >= 1 && w >= 1);
        let n128 = n.max(1) as u128;
        let ell = ell.unwrap_or_else(|| crate::arith::ceil_sqrt(n128) as u64).max(1);
        let h = ((*eps.numer() as u128 * ell as u128) / *eps.denom() as u128).max(1) as u64;
        let h_prime = stretch(eps, h);
        let ruling_c = 2 * h_prime + 1;
        let bits = id_bits(n, a) as u64;
        let ruling_beta = bits * ruling_c;
        let log_n = ceil_log2(n128).max(1) as u64;
        let h_star = (9 * a as u64 * ell * log_n).max(ruling_beta);
        let k = 2 * h_star + 2 * ell;
        OverlayParams {
            n,
            epsilon: eps,
            ell,
            a,
            h,
            h_prime,
            ruling_c,
            ruling_beta,
            h_star,
            k,
            k_prime: stretch(eps, k),
            top_scale: floor_log2(n128 * w as u128),
        }
    }

    /// Default choice ε = 1/⌈log2 n⌉², ell = ⌈√n⌉, a = 1.
    pub fn standard(n: usize, w: u64) -> OverlayParams {
        let l = ceil_log2(n.max(2) as u128) as u64;
        OverlayParams::new(n, w, Rational::new(1, l * l), None, 1)
    }

    /// ρ_i = ε2^i/h.
    pub fn type_scale(&self, i: u32) -> Scale {
        Scale::new(*self.epsilon.numer() as u128 * (1u128 << i), *self.epsilon.denom() as u128 * self.h as u128)
    }

    /// φ_i = ε2^i/k.
    pub fn pde_scale(&self, i: u32) -> Scale {
        Scale::new(*self.epsilon.numer() as u128 * (1u128 << i), *self.epsilon.denom() as u128 * self.k as u128)
    }

    /// M_o = den(ε)·k, the unit of every d̂ value.
    pub fn pde_unit(&self) -> u64 {
        *self.epsilon.denom() * self.k
    }

    /// The bound x on d^{h*}(u_i, v_i)/w(π_i) for a segment π_i of ell
    /// edges: (ε/h)·ruling_beta·(2/⌈ell/h⌉).
    pub fn segment_slack(&self) -> Wide {
        let l = self.ell.div_ceil(self.h) as u128;
        wide(self.epsilon) * Wide::new(2 * self.ruling_beta as u128, self.h as u128 * l)
    }

    /// α = (1+ε)·(1+ε_f)·F·(1 + 2x): PDE, final rounding and hop-set
    /// factors times the segment detour.
    pub fn alpha(&self, hopset_factor: Wide, finish_eps: Rational) -> Wide {
        let one = Wide::one();
        (one + wide(self.epsilon))
            * (one + wide(finish_eps))
            * hopset_factor
            * (one + Wide::from_integer(2) * self.segment_slack())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeAssignment {
    pub types: Vec<Option<u32>>,
    pub top_scale: u32,
}

impl TypeAssignment {
    pub fn of_type(&self, i: u32) -> Vec<NodeId> {
        (0..self.types.len()).filter(|&v| self.types[v] == Some(i)).collect()
    }
}

/// t(u) = the smallest i with |B(u, G_i, h′)| ≥ h, from (V, h′, h)-detection on G_i.
pub fn compute_types(g: &Graph, params: &OverlayParams) -> TypeAssignment {
    let n = g.n();
    let all: Vec<NodeId> = (0..n).collect();
    let mut types = vec![None; n];
    for i in 0..=params.top_scale {
        if types.iter().all(Option::is_some) {
            break;
        }
        let gi = round_by(g, params.type_scale(i));
        let lists = detect_nearest(&gi, &all, params.h_prime, params.h as usize);
        for (u, t) in types.iter_mut().enumerate() {
            if t.is_none() && lists.is_full(u) {
                *t = Some(i);
            }
        }
    }
    TypeAssignment { types, top_scale: params.top_scale }
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeRuling {
    pub scale: u32,
    pub base: usize,
    pub result: RulingSetResult,
    pub check: RulingCheck,
}

#[derive(Debug, Clone, Serialize)]
pub struct CenterSelection {
    pub centers: Vec<NodeId>,
    pub rulings: Vec<TypeRuling>,
}

impl CenterSelection {
    pub fn rulings_ok(&self) -> bool {
        self.rulings.iter().all(|r| r.check.pairwise_ok && r.check.coverage_ok)
    }
}

/// V′ = ∪_i T_i ∪ {s}, T_i a (2h′+1, b·(2h′+1))-ruling set of the type-i nodes on G_i.
pub fn select_centers(g: &Graph, types: &TypeAssignment, params: &OverlayParams, s: NodeId) -> CenterSelection {
    let mut centers = vec![s];
    let mut rulings = Vec::new();
    for i in 0..=types.top_scale {
        let base = types.of_type(i);
        if base.is_empty() {
            continue;
        }
        let gi = round_by(g, params.type_scale(i));
        let result = ruling_set(&gi, &base, params.ruling_c, params.a).expect("IDs fit in a⌈log2 n⌉ bits");
        let check = check_ruling(&gi, &base, &result);
        centers.extend_from_slice(&result.members);
        rulings.push(TypeRuling { scale: i, base: base.len(), result, check });
    }
    centers.sort_unstable();
    centers.dedup();
    CenterSelection { centers, rulings }
}

/// G′ plus the per-node table d̂(u, v) for every node u and center v.
#[derive(Debug, Clone)]
pub struct OverlayNetwork {
    pub centers: Vec<NodeId>,
    /// Node → its index in `centers`.
    pub index: Vec<Option<usize>>,
    /// Every d̂ is an integer multiple of 1/unit.
    pub unit: u64,
    /// `table[u][j]` = d̂(u, centers[j]) in units of 1/unit; ∞ if unknown.
    pub table: Vec<Vec<Dist>>,
    /// Complete graph on center indices weighted by d̂.
    pub graph: Graph,
}

impl OverlayNetwork {
    pub fn n_centers(&self) -> usize {
        self.centers.len()
    }

    pub fn d_hat(&self, u: NodeId, j: usize) -> Dist {
        self.table[u][j]
    }
}

/// d̂(u, v) = min_i φ_i·d(u, v, k′, Ĝ_i) from (V′, k′, |V′|)-detection on each Ĝ_i.
pub fn distances_to_centers(g: &Graph, centers: &[NodeId], params: &OverlayParams) -> OverlayNetwork {
    let n = g.n();
    let mut centers = centers.to_vec();
    centers.sort_unstable();
    centers.dedup();
    let mut index = vec![None; n];
    for (j, &c) in centers.iter().enumerate() {
        index[c] = Some(j);
    }
    let mut table = vec![vec![INF; centers.len()]; n];
    if !centers.is_empty() {
        for i in 0..=params.top_scale {
            let gi = round_by(g, params.pde_scale(i));
            let lists = detect_brute(&gi, &centers, params.k_prime, centers.len());
            // φ_i·d in units of 1/(den(ε)·k) is num(ε)·2^i·d.
            let factor = *params.epsilon.numer() as u128 * (1u128 << i);
            for (u, row) in table.iter_mut().enumerate() {
                for &(d, c) in lists.list(u) {
                    let j = index[c].expect("detected source is a center");
                    let v = u64::try_from(factor * d as u128).expect("d̂ overflow");
                    row[j] = row[j].min(v);
                }
            }
        }
    }
    let mut edges = Vec::new();
    for (a, &ca) in centers.iter().enumerate() {
        for b in a + 1..centers.len() {
            let w = table[ca][b];
            if w != INF {
                edges.push((a, b, w));
            }
        }
    }
    let graph = Graph::from_edges_min(centers.len(), edges);
    OverlayNetwork { centers, index, unit: params.pde_unit(), table, graph }
}

/// Per-node estimates numer/unit; [`INF_WIDE`] marks unreachable nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Estimates {
    pub unit: u128,
    pub values: Vec<u128>,
}

impl Estimates {
    pub fn value(&self, v: NodeId) -> Option<Wide> {
        (self.values[v] != INF_WIDE).then(|| Wide::new(self.values[v], self.unit))
    }

    /// Estimate divided by `exact`; `None` for unreachable or zero distance.
    pub fn ratio(&self, v: NodeId, exact: Dist) -> Option<Wide> {
        if exact == 0 || exact == INF || self.values[v] == INF_WIDE {
            return None;
        }
        Some(Wide::new(self.values[v], self.unit * exact as u128))
    }

    /// Whether every reachable estimate is ≥ the exact distance (and
    /// unreachable ones are ∞).
    pub fn lower_bound_violations(&self, exact: &[Dist]) -> Vec<NodeId> {
        (0..exact.len())
            .filter(|&v| match (exact[v], self.values[v]) {
                (INF, x) => x != INF_WIDE,
                (_, INF_WIDE) => false,
                (d, x) => x < d as u128 * self.unit,
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vals: Vec<serde_json::Value> = self
            .values
            .iter()
            .map(|&x| {
                if x == INF_WIDE {
                    serde_json::Value::Null
                } else {
                    serde_json::Value::String(crate::arith::fmt_ratio(&Wide::new(x, self.unit)))
                }
            })
            .collect();
        serde_json::json!({ "unit": self.unit.to_string(), "estimates": vals })
    }
}

/// d̃(s, ·) on the centers, numer over `unit`.
#[derive(Debug, Clone)]
pub struct Finish {
    pub hop_bound: u64,
    pub range: Dist,
    pub epsilon: Rational,
    pub estimates: Estimates,
}

/// R = ⌈(1 + 2/ε)h⌉.
pub fn finish_range(h: u64, eps: Rational) -> Dist {
    let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
    ((num + 2 * den) * h as u128).div_ceil(num) as Dist
}

/// d̃(s, v) = min_i ρ_i·d(s, v, R, H′_i), ρ_i = ε2^i/h, where H = unit·base ∪ extra
/// has integer weights at most `w_max`.
///
/// The result is over `den(ε)·h` in the units of H.
#[allow(clippy::too_many_arguments)]
pub fn finish_on<E: Engine>(
    engine: &mut E,
    base: &dyn EdgeScan,
    base_unit: u64,
    extra: &[(NodeId, NodeId, u64)],
    w_max: u64,
    s: NodeId,
    hop_bound: u64,
    eps: Rational,
) -> Finish {
    let n = base.node_count();
    let range = finish_range(hop_bound, eps);
    let unit = *eps.denom() as u128 * hop_bound as u128;
    let mut values = vec![INF_WIDE; n];
    values[s] = 0;
    let top = floor_log2(n.max(1) as u128 * w_max.max(1) as u128);
    for i in 0..=top {
        let num = *eps.numer() as u128 * (1u128 << i);
        let layer = Layer::new(base, base_unit, extra, Some(Scale::new(num, unit)));
        let t = engine.bounded_sssp(&layer, &[s], range);
        for (v, d) in t.reached() {
            values[v] = values[v].min(num * d as u128);
        }
    }
    Finish { hop_bound, range, epsilon: eps, estimates: Estimates { unit, values } }
}

/// Final steps on G′: H = G′ ∪ F with the hop set's bound, then `finish_on`.
/// The estimates are rescaled to real units (over unit·M_o·M_h).
pub fn finish_sssp<E: Engine>(engine: &mut E, overlay: &OverlayNetwork, hs: &HopSet, s: NodeId, eps: Rational) -> Finish {
    let j = overlay.index[s].expect("source is a center");
    let m_h = hs.edges.unit();
    let extra = hs.edges.edges();
    let w_max = extra.iter().map(|e| e.2).chain([overlay.graph.max_weight() * m_h]).max().unwrap_or(1);
    let mut f = finish_on(engine, &overlay.graph, m_h, &extra, w_max, j, hs.hop_bound, eps);
    f.estimates.unit *= overlay.unit as u128 * m_h as u128;
    f
}

/// min(d̂(u, s), min_v d̃(s, v) + d̂(u, v)) over the estimate's unit.
pub fn combine(overlay: &OverlayNetwork, dtilde: &Estimates, s: NodeId, u: NodeId) -> u128 {
    assert_eq!(dtilde.unit % overlay.unit as u128, 0);
    let lift = dtilde.unit / overlay.unit as u128;
    if u == s {
        return 0;
    }
    let hat = |j: usize| {
        let d = overlay.d_hat(u, j);
        (d != INF).then(|| d as u128 * lift)
    };
    let mut best = overlay.index[s].and_then(hat).unwrap_or(INF_WIDE);
    for j in 0..overlay.n_centers() {
        if let (Some(x), y) = (hat(j), dtilde.values[j]) {
            if y != INF_WIDE {
                best = best.min(x + y);
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("no neighbour of node {at} satisfies d'(s,v) + w(u,v) <= d'(s,u)")]
    PropertyViolated { at: NodeId },
    #[error("node {0} has no estimate")]
    Unreachable(NodeId),
}

/// Greedy walk from `u` to `s` through neighbours with d′(s,v) + w(u,v) ≤ d′(s,u),
/// smallest ID first. Returns the path from `s` to `u`.
pub fn extract_path(g: &Graph, est: &Estimates, s: NodeId, u: NodeId) -> Result<Vec<NodeId>, PathError> {
    if est.values[u] == INF_WIDE {
        return Err(PathError::Unreachable(u));
    }
    let mut path = vec![u];
    let mut x = u;
    while x != s {
        let here = est.values[x];
        let next = g.neighbors(x).iter().find(|&&(v, w)| {
            est.values[v] != INF_WIDE && est.values[v] + w as u128 * est.unit <= here && est.values[v] < here
        });
        match next {
            Some(&(v, _)) => {
                path.push(v);
                x = v;
            }
            None => return Err(PathError::PropertyViolated { at: x }),
        }
    }
    path.reverse();
    Ok(path)
}

pub fn path_weight(g: &Graph, path: &[NodeId]) -> Option<u64> {
    path.windows(2).map(|e| g.weight(e[0], e[1])).sum()
}

/// max_v d′(s, v); a 2α-approximation of the weighted diameter.
pub fn approx_weighted_diameter(est: &Estimates) -> Option<Wide> {
    est.values.iter().filter(|&&x| x != INF_WIDE).max().map(|&x| Wide::new(x, est.unit))
}

/// Everything one overlay SSSP run produced.
#[derive(Debug, Clone)]
pub struct OverlayRun {
    pub params: OverlayParams,
    pub source: NodeId,
    pub types: TypeAssignment,
    pub selection: CenterSelection,
    pub network: OverlayNetwork,
    pub hopset: HopSet,
    pub finish: Finish,
    pub estimates: Estimates,
    pub alpha: Wide,
}

/// The overlay pipeline with the sequential engine.
pub fn overlay_sssp(g: &Graph, s: NodeId, params: &OverlayParams) -> OverlayRun {
    overlay_sssp_with(&mut Sequential, g, s, params, HopSetConfig::default())
}

/// Types, centers and d̂ on G; hop set and final steps on G′ through `engine`.
pub fn overlay_sssp_with<E: Engine>(
    engine: &mut E,
    g: &Graph,
    s: NodeId,
    params: &OverlayParams,
    cfg: HopSetConfig,
) -> OverlayRun {
    let types = compute_types(g, params);
    let selection = select_centers(g, &types, params, s);
    let network = distances_to_centers(g, &selection.centers, params);
    overlay_finish(engine, g, s, params, types, selection, network, cfg)
}

/// The overlay-level half of the pipeline, once G′ is known.
#[allow(clippy::too_many_arguments)]
pub fn overlay_finish<E: Engine>(
    engine: &mut E,
    g: &Graph,
    s: NodeId,
    params: &OverlayParams,
    types: TypeAssignment,
    selection: CenterSelection,
    network: OverlayNetwork,
    cfg: HopSetConfig,
) -> OverlayRun {
    let w_h = network.graph.max_weight().max(1);
    let hopset = hop_set_with(engine, &network.graph, w_h, params.epsilon, cfg);
    let finish = finish_sssp(engine, &network, &hopset, s, params.epsilon);
    let values = (0..g.n()).map(|u| combine(&network, &finish.estimates, s, u)).collect();
    let estimates = Estimates { unit: finish.estimates.unit, values };
    let alpha = params.alpha(hopset.factor, params.epsilon);
    OverlayRun { params: params.clone(), source: s, types, selection, network, hopset, finish, estimates, alpha }
}

/// Ratio statistics of estimates against exact distances.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub pairs: usize,
    #[serde(serialize_with = "ser_wide")]
    pub alpha: Wide,
    pub lower_violations: usize,
    pub upper_violations: usize,
    #[serde(serialize_with = "ser_wide")]
    pub worst_ratio: Wide,
    pub worst_node: Option<NodeId>,
    /// Counts of ratios in [1, 1.01), [1.01, 1.1), [1.1, 1.5), [1.5, 2), [2, ∞).
    pub histogram: [usize; 5],
}

impl RatioReport {
    pub fn ok(&self) -> bool {
        self.lower_violations == 0 && self.upper_violations == 0
    }
}

pub fn ratio_report(est: &Estimates, exact: &[Dist], alpha: Wide) -> RatioReport {
    let mut r = RatioReport {
        pairs: 0,
        alpha,
        lower_violations: est.lower_bound_violations(exact).len(),
        upper_violations: 0,
        worst_ratio: Wide::one(),
        worst_node: None,
        histogram: [0; 5],
    };
    for (v, &d) in exact.iter().enumerate() {
        if d == INF && est.values[v] == INF_WIDE {
            continue;
        }
        if d != INF && est.values[v] == INF_WIDE {
            r.upper_violations += 1;
            continue;
        }
        let Some(q) = est.ratio(v, d) else { continue };
        r.pairs += 1;
        if q > alpha {
            r.upper_violations += 1;
        }
        if r.worst_node.is_none() || q > r.worst_ratio {
            r.worst_ratio = q.max(r.worst_ratio);
            r.worst_node = Some(v);
        }
        let f = to_f64(q);
        let bucket = [1.01, 1.1, 1.5, 2.0].iter().position(|&b| f < b).unwrap_or(4);
        r.histogram[bucket] += 1;
    }
    r
}

/// Exact d(s, ·, G) for reports.
pub fn exact_from(g: &Graph, s: NodeId) -> Vec<Dist> {
    dijkstra_bounded(g, s, INF).dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_chain() {
        let p = OverlayParams::new(16, 4, Rational::new(1, 2), None, 1);
        assert_eq!((p.ell, p.h, p.h_prime), (4, 2, 10));
        assert_eq!(p.ruling_c, 21);
        assert_eq!(p.ruling_beta, 4 * 21);
        assert_eq!(p.h_star, (9 * 4 * 4u64));
        assert_eq!(p.k, 2 * p.h_star + 8);
        assert!(p.k_prime >= p.k && p.h_prime >= p.h);
        assert_eq!(p.top_scale, 6);
    }

    #[test]
    fn single_edge_pde() {
        let g = Graph::from_edges(2, [(0, 1, 7)]).unwrap();
        let p = OverlayParams::new(2, 7, Rational::new(1, 2), Some(2), 1);
        let net = distances_to_centers(&g, &[0, 1], &p);
        assert_eq!(net.d_hat(0, 0), 0);
        let d = Wide::new(net.d_hat(0, 1) as u128, net.unit as u128);
        assert!(d >= Wide::from_integer(7) && d <= Wide::new(21, 2), "{d}");
    }

    #[test]
    fn extract_path_on_exact_estimates() {
        let g = Graph::from_edges(4, [(0, 1, 2), (1, 2, 3), (2, 3, 1)]).unwrap();
        let est = Estimates { unit: 1, values: vec![0, 2, 5, 6] };
        assert_eq!(extract_path(&g, &est, 0, 3).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(extract_path(&g, &est, 0, 0).unwrap(), vec![0]);
        let bad = Estimates { unit: 1, values: vec![0, 2, 4, 6] };
        assert_eq!(extract_path(&g, &bad, 0, 2), Err(PathError::PropertyViolated { at: 2 }));
    }

    #[test]
    fn diameter_of_star() {
        let est = Estimates { unit: 1, values: vec![0, 1, 1, 1] };
        assert_eq!(approx_weighted_diameter(&est), Some(Wide::one()));
    }
}
