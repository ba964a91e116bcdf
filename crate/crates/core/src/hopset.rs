//! Hop sets: additive-error hop reduction, multiplicative hop reduction by
//! weight scaling, and the hierarchical (n^{1/p}, ε)-hop set.
//!
//! Shortcut weights are rationals ρ·δ. An edge set therefore carries a
//! `unit` M and stores integer weights in multiples of 1/M; M is chosen so
//! that every scale ρ_j becomes an integer in that unit and no rounding of
//! shortcut weights is ever needed.

use crate::arith::{
    ceil_div, ceil_log2, ceil_root, ceil_sqrt, floor_log2, fmt_ratio, lcm, ser_rational, ser_wide,
    sqrt_log_ratio, wide, Rational, Wide,
};
use crate::clusters::list_size;
use crate::engine::{Engine, Sequential};
use crate::graph::{bellman_ford_hops, dijkstra_bounded, Dist, Graph, NodeId, ParseError, Scale, INF};
use crate::layer::{EdgeScan, Layer};
use crate::par;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopSetError {
    #[error("hop bound h={h} is below the required n^(1/p)·Δ/(p+2) = {required}")]
    PreconditionViolated { h: u64, required: u64 },
}

/// Shortcut edges keyed by unordered pair; weights are multiples of 1/unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopSetEdges {
    n: usize,
    unit: u64,
    map: HashMap<(NodeId, NodeId), u64>,
}

impl HopSetEdges {
    pub fn new(n: usize, unit: u64) -> HopSetEdges {
        assert!(unit >= 1);
        HopSetEdges { n, unit, map: HashMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Keeps the minimum weight per pair; self-pairs are dropped.
    pub fn insert_min(&mut self, u: NodeId, v: NodeId, w: u64) {
        assert!(u < self.n && v < self.n && w > 0);
        if u == v {
            return;
        }
        let slot = self.map.entry((u.min(v), u.max(v))).or_insert(w);
        *slot = (*slot).min(w);
    }

    /// Weight in units of 1/unit.
    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<u64> {
        self.map.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn real_weight(&self, u: NodeId, v: NodeId) -> Option<Rational> {
        self.weight(u, v).map(|w| Rational::new(w, self.unit))
    }

    /// Sorted `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, u64)> {
        let mut e: Vec<_> = self.map.iter().map(|(&(u, v), &w)| (u, v, w)).collect();
        e.sort_unstable();
        e
    }

    /// Merges `other`, which must use the same unit.
    pub fn merge(&mut self, other: &HopSetEdges) {
        assert_eq!(self.unit, other.unit, "unit mismatch");
        for (&(u, v), &w) in &other.map {
            self.insert_min(u, v, w);
        }
    }

    /// `unit·G ∪ F`, in units of 1/unit.
    pub fn union_graph(&self, g: &Graph) -> Graph {
        let base = g.edges().iter().map(|&(u, v, w)| (u, v, w * self.unit));
        Graph::from_edges_min(g.n(), base.chain(self.edges()))
    }

    /// Edge-list text: header `# hopset n=<n> eps=<num>/<den>`, then `u v w`
    /// with `w` an exact rational.
    pub fn to_text(&self, eps: Rational) -> String {
        let mut out = format!("# hopset n={} eps={}/{}\n", self.n, eps.numer(), eps.denom());
        for (u, v, w) in self.edges() {
            writeln!(out, "{u} {v} {}", fmt_ratio(&Rational::new(w, self.unit))).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<HopSetEdges, ParseError> {
        let bad = |line: usize, message: &str| ParseError { line, message: message.to_string() };
        let header = text.lines().next().ok_or_else(|| bad(0, "empty hop-set file"))?;
        let n = header
            .split_whitespace()
            .find_map(|t| t.strip_prefix("n="))
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| bad(1, "missing `# hopset n=<n> eps=<num>/<den>` header"))?;
        let mut rows = Vec::new();
        let mut unit = 1u64;
        for (i, line) in text.lines().enumerate().skip(1) {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [u, v, w] = parts[..] else { return Err(bad(i + 1, "expected `u v w`")) };
            let u: usize = u.parse().map_err(|_| bad(i + 1, "bad node"))?;
            let v: usize = v.parse().map_err(|_| bad(i + 1, "bad node"))?;
            let w = crate::arith::parse_rational(w).ok_or_else(|| bad(i + 1, "bad weight"))?;
            if u >= n || v >= n || u == v || w <= Rational::from_integer(0) {
                return Err(bad(i + 1, "invalid edge"));
            }
            unit = lcm(unit, *w.denom());
            rows.push((u, v, w));
        }
        let mut f = HopSetEdges::new(n, unit);
        for (u, v, w) in rows {
            f.insert_min(u, v, w.numer() * (unit / w.denom()));
        }
        Ok(f)
    }
}

/// Optional replacements for the default p and q, so small instances can
/// exercise non-trivial hierarchies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Overrides {
    pub p: Option<usize>,
    pub q: Option<usize>,
}

/// p = max(1, ⌊√(log n / log(9/ε))⌋).
pub fn additive_p(n: usize, eps: Rational) -> usize {
    let base = Wide::from_integer(9) / wide(eps);
    sqrt_log_ratio(n.max(1) as u128, base).max(1) as usize
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditiveParams {
    pub n: usize,
    pub delta: u64,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    pub p: usize,
    pub q: usize,
    /// ⌈n^{1/p}⌉·Δ.
    pub nominal_range: u64,
    /// The range actually used, enlarged so that β ≤ ε·R/(p+2).
    pub range: u64,
    pub r: Vec<u64>,
    pub beta: u64,
}

impl AdditiveParams {
    pub fn new(n: usize, delta: u64, eps: Rational, ov: Overrides) -> AdditiveParams {
        assert!(delta >= 1 && crate::arith::valid_epsilon(eps));
        let p = ov.p.unwrap_or_else(|| additive_p(n, eps)).max(1);
        let q = ov.q.unwrap_or_else(|| list_size(n, p)).max(1);
        let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
        // r_i = ⌈(4 + 2ε)·Σ_{j<i} r_j / ε⌉ on the already rounded values,
        // which keeps ε·r_i ≥ (4 + 2ε)·Σ_{j<i} r_j.
        let mut r = vec![delta as u128];
        let mut sum = delta as u128;
        for _ in 1..p {
            let next = ceil_div((4 * den + 2 * num) * sum, num);
            r.push(next);
            sum += next;
        }
        let beta = 2 * sum;
        let root = ceil_root(n.max(1) as u128, p as u32);
        let nominal = root * delta as u128;
        let needed = ceil_div(beta * (p as u128 + 2) * den, num);
        let to64 = |x: u128| u64::try_from(x).expect("parameter overflow");
        AdditiveParams {
            n,
            delta,
            epsilon: eps,
            p,
            q,
            nominal_range: to64(nominal),
            range: to64(nominal.max(needed)),
            r: r.into_iter().map(to64).collect(),
            beta: to64(beta),
        }
    }

    pub fn enlarged(&self) -> bool {
        self.range > self.nominal_range
    }

    /// β ≤ ε·R/(p+2).
    pub fn beta_bound_holds(&self) -> bool {
        let (num, den) = (*self.epsilon.numer() as u128, *self.epsilon.denom() as u128);
        self.beta as u128 * (self.p as u128 + 2) * den <= num * self.range as u128
    }

    /// Σ_{j≤i} r_j ≤ 7^i·Δ/ε^i for every i.
    pub fn growth_bound_holds(&self) -> bool {
        let (num, den) = (*self.epsilon.numer(), *self.epsilon.denom());
        let mut sum = Wide::from_integer(0);
        for (i, &ri) in self.r.iter().enumerate() {
            sum += Wide::from_integer(ri as u128);
            let bound = Wide::from_integer(self.delta as u128)
                * crate::arith::pow_wide(Wide::new(7 * den as u128, num as u128), i as u32);
            if sum > bound {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone)]
pub struct AdditiveReduction {
    pub edges: HopSetEdges,
    pub params: AdditiveParams,
    pub hierarchy: crate::clusters::PriorityHierarchy,
}

/// Procedure HopReductionAdditiveError: F = {(u, v) : v ∈ C(u)} with weight δ(u, v).
pub fn hop_reduction_additive(g: &Graph, delta: u64, eps: Rational) -> AdditiveReduction {
    hop_reduction_additive_with(g, delta, eps, Overrides::default())
}

pub fn hop_reduction_additive_with(g: &Graph, delta: u64, eps: Rational, ov: Overrides) -> AdditiveReduction {
    let params = AdditiveParams::new(g.n(), delta, eps, ov);
    let (pairs, hierarchy) = additive_on(&mut Sequential, &Layer::plain(g), &params);
    let mut edges = HopSetEdges::new(g.n(), 1);
    for (u, v, w) in pairs {
        edges.insert_min(u, v, w);
    }
    AdditiveReduction { edges, params, hierarchy }
}

/// Cluster pairs of one additive reduction on `layer`.
pub fn additive_on<E: Engine>(
    engine: &mut E,
    layer: &Layer,
    params: &AdditiveParams,
) -> (Vec<(NodeId, NodeId, Dist)>, crate::clusters::PriorityHierarchy) {
    let hierarchy = engine.priorities(layer, params.p, params.range, params.q);
    let clusters = engine.clusters(layer, &hierarchy, params.range);
    let mut pairs = Vec::new();
    for v in 0..layer.n() {
        for &(u, d) in clusters.cluster(v) {
            if u != v {
                pairs.push((u.min(v), u.max(v), d));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup_by_key(|e| (e.0, e.1));
    (pairs, hierarchy)
}

/// What a reduction level certifies: d^{hops}(G ∪ F) ≤ factor · d^h(G).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub hops: u64,
    #[serde(serialize_with = "ser_wide")]
    pub factor: Wide,
    /// `ball` when every scale had A_1 = ∅ (clusters are full balls, one hop
    /// suffices); `lemma` for the general (p+1)⌈L/Δ′⌉ argument.
    pub kind: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionParams {
    pub delta: u64,
    pub h: u64,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    /// ε′ = ε/6.
    #[serde(serialize_with = "ser_rational")]
    pub eps_inner: Rational,
    /// Δ′ = ⌈3Δ/ε′⌉.
    pub delta_inner: u64,
    /// Scales j = 0..=top_scale, top_scale = ⌊log2(nW)⌋.
    pub top_scale: u32,
    /// ⌈(1 + 2/ε′)·h⌉, the largest rounded distance that matters.
    pub rounded_bound: u64,
    /// ⌈n^{1/p}⌉·Δ/(p+2), rounded up.
    pub required_h: u64,
    pub additive: AdditiveParams,
}

impl ReductionParams {
    pub fn new(n: usize, delta: u64, h: u64, eps: Rational, w: u64, ov: Overrides) -> ReductionParams {
        assert!(h >= 1 && w >= 1);
        let eps_inner = eps / 6;
        let delta_inner =
            ceil_div(3 * delta as u128 * *eps_inner.denom() as u128, *eps_inner.numer() as u128) as u64;
        let additive = AdditiveParams::new(n, delta_inner, eps_inner, ov);
        let p = additive.p as u128;
        let root = ceil_root(n.max(1) as u128, p as u32);
        let (en, ed) = (*eps_inner.numer() as u128, *eps_inner.denom() as u128);
        let rounded_bound = ceil_div((en + 2 * ed) * h as u128, en) as u64;
        ReductionParams {
            delta,
            h,
            epsilon: eps,
            eps_inner,
            delta_inner,
            top_scale: floor_log2(n.max(1) as u128 * w as u128),
            rounded_bound,
            required_h: ceil_div(root * delta as u128, p + 2) as u64,
            additive,
        }
    }

    /// h ≥ n^{1/p}Δ/(p+2), and the additive error fits in 3h so that it
    /// costs at most a factor 1+ε after scaling back.
    pub fn precondition_holds(&self) -> bool {
        self.h >= self.required_h && self.additive.beta <= 3 * self.h
    }

    /// Unit in which every ρ_j = ε′2^j/h is an integer.
    pub fn unit(&self) -> u64 {
        *(self.eps_inner / Rational::from_integer(self.h)).denom()
    }

    /// ρ_j expressed in `unit`; panics if `unit` is not a multiple of [`Self::unit`].
    pub fn rho_in(&self, unit: u64, j: u32) -> u128 {
        let num = unit as u128 * *self.eps_inner.numer() as u128 * (1u128 << j);
        let den = *self.eps_inner.denom() as u128 * self.h as u128;
        assert_eq!(num % den, 0, "unit {unit} does not make ρ_{j} integral");
        num / den
    }

    /// The general certificate: (p+1)⌈L/Δ′⌉ hops with factor (1+ε′)² + ε′β/h.
    pub fn lemma_certificate(&self) -> Certificate {
        let e = wide(self.eps_inner);
        let one = Wide::one();
        let factor = (one + e) * (one + e) + e * Wide::new(self.additive.beta as u128, self.h as u128);
        let hops = (self.additive.p as u64 + 1) * self.rounded_bound.div_ceil(self.delta_inner);
        Certificate { hops, factor, kind: "lemma" }
    }

    /// With full-ball clusters every pair within the rounded bound gets a
    /// direct edge, so one hop suffices up to the rounding factor 1+ε′.
    pub fn ball_certificate(&self) -> Option<Certificate> {
        (self.additive.range >= self.rounded_bound)
            .then(|| Certificate { hops: 1, factor: Wide::one() + wide(self.eps_inner), kind: "ball" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleReport {
    pub scale: u32,
    pub pairs: usize,
    pub trivial_hierarchy: bool,
}

#[derive(Debug, Clone)]
pub struct HopReduction {
    pub edges: HopSetEdges,
    pub params: ReductionParams,
    pub certificate: Certificate,
    pub scales: Vec<ScaleReport>,
}

/// Procedure HopReduction on G; errors if the lemma's precondition fails.
pub fn hop_reduction(g: &Graph, delta: u64, h: u64, eps: Rational, w: u64) -> Result<HopReduction, HopSetError> {
    let params = ReductionParams::new(g.n(), delta, h, eps, w, Overrides::default());
    if !params.precondition_holds() {
        return Err(HopSetError::PreconditionViolated { h, required: params.required_h.max(params.additive.beta.div_ceil(3)) });
    }
    Ok(hop_reduction_forced(g, delta, h, eps, w, Overrides::default()))
}

/// Procedure HopReduction without the precondition check; the returned
/// certificate states what still holds.
pub fn hop_reduction_forced(g: &Graph, delta: u64, h: u64, eps: Rational, w: u64, ov: Overrides) -> HopReduction {
    let params = ReductionParams::new(g.n(), delta, h, eps, w, ov);
    let unit = params.unit();
    let layer = Layer::new(g, unit, &[], None);
    hop_reduction_on(&mut Sequential, &layer, unit, params, 0)
}

/// One HopReduction on `layer`, whose weights are in multiples of 1/unit.
pub fn hop_reduction_on<E: Engine>(
    engine: &mut E,
    layer: &Layer,
    unit: u64,
    params: ReductionParams,
    level: usize,
) -> HopReduction {
    let mut edges = HopSetEdges::new(layer.n(), unit);
    let mut scales = Vec::new();
    let mut all_trivial = true;
    for j in 0..=params.top_scale {
        let rho = params.rho_in(unit, j);
        let scaled = layer.rounded(Scale::new(rho, 1));
        let (pairs, hierarchy) = additive_on(engine, &scaled, &params.additive);
        all_trivial &= hierarchy.is_trivial();
        let mut added = 0;
        for (u, v, d) in pairs {
            // Shortcuts too heavy for a u64 can never be the cheapest route.
            if let Ok(w) = u64::try_from(d as u128 * rho) {
                edges.insert_min(u, v, w);
                added += 1;
            }
        }
        engine.scale_done(level, j, added);
        scales.push(ScaleReport { scale: j, pairs: added, trivial_hierarchy: hierarchy.is_trivial() });
    }
    let certificate = match (all_trivial, params.ball_certificate()) {
        (true, Some(c)) => c,
        _ => params.lemma_certificate(),
    };
    HopReduction { edges, params, certificate, scales }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub h: u64,
    /// Hop budget known to hold for H_level before this level.
    pub budget_in: u64,
    /// Whether the level's certificate could be chained (budget_in ≤ h).
    pub chained: bool,
    pub precondition_holds: bool,
    pub certificate: Certificate,
    pub pairs: usize,
}

#[derive(Debug, Clone)]
pub struct HopSet {
    pub edges: HopSetEdges,
    pub epsilon: Rational,
    pub p: usize,
    pub delta: u64,
    /// ε′ = ε/(2⌈√⌈log2 n⌉⌉).
    pub eps_level: Rational,
    /// ⌈n^{1/p}⌉, the theorem's hop bound.
    pub nominal_hop_bound: u64,
    /// The hop bound certified by chaining the level certificates.
    pub hop_bound: u64,
    /// d^{hop_bound}(G ∪ F) ≤ factor · d(G).
    pub factor: Wide,
    pub levels: Vec<LevelReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HopSetSummary {
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    pub p: usize,
    pub delta: u64,
    pub size: usize,
    pub unit: u64,
    pub nominal_hop_bound: u64,
    pub hop_bound: u64,
    #[serde(serialize_with = "ser_wide")]
    pub factor: Wide,
    pub levels: Vec<LevelReport>,
}

impl HopSet {
    pub fn summary(&self) -> HopSetSummary {
        HopSetSummary {
            epsilon: self.epsilon,
            p: self.p,
            delta: self.delta,
            size: self.edges.len(),
            unit: self.edges.unit(),
            nominal_hop_bound: self.nominal_hop_bound,
            hop_bound: self.hop_bound,
            factor: self.factor,
            levels: self.levels.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HopSetConfig {
    pub overrides: Overrides,
}

/// Procedure HopSet with the default parameters.
pub fn hop_set(g: &Graph, eps: Rational, w: u64) -> HopSet {
    hop_set_with(&mut Sequential, g, w, eps, HopSetConfig::default())
}

/// Level parameters (p, Δ, h_i, ε′, W′) for `n` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopSetPlan {
    pub p: usize,
    pub delta: u64,
    pub eps_level: Rational,
    pub hops: Vec<u64>,
    pub w_prime: u64,
    pub unit: u64,
    pub levels: Vec<ReductionParams>,
}

impl HopSetPlan {
    pub fn new(n: usize, w: u64, eps: Rational, ov: Overrides) -> HopSetPlan {
        let n128 = n.max(1) as u128;
        let sqrt_log = ceil_sqrt(ceil_log2(n128).max(1) as u128) as u64;
        let eps_level = eps / (2 * sqrt_log);
        // 54/ε′ = 9/(ε′/6), so this p agrees with the one inside every reduction.
        let p = ov.p.unwrap_or_else(|| additive_p(n, eps_level / 6)).max(1);
        let ov = Overrides { p: Some(p), q: ov.q };
        let root = ceil_root(n128, p as u32);
        let delta = (p as u64 + 2) * root as u64;
        let hops: Vec<u64> =
            (0..=p).map(|i| ceil_root(n128.pow((p - i) as u32), p as u32) as u64).collect();
        let (en, ed) = (*eps.numer() as u128, *eps.denom() as u128);
        let w_prime = ceil_div((en + ed) * n128 * w as u128, ed) as u64;
        let levels: Vec<ReductionParams> =
            (0..p).map(|i| ReductionParams::new(n, delta, hops[i], eps_level, w_prime, ov)).collect();
        let unit = levels.iter().fold(1, |acc, l| lcm(acc, l.unit()));
        HopSetPlan { p, delta, eps_level, hops, w_prime, unit, levels }
    }
}

/// Procedure HopSet over any engine and edge source.
pub fn hop_set_with<E: Engine>(
    engine: &mut E,
    base: &dyn EdgeScan,
    w: u64,
    eps: Rational,
    cfg: HopSetConfig,
) -> HopSet {
    assert!(crate::arith::valid_epsilon(eps));
    let n = base.node_count();
    let plan = HopSetPlan::new(n, w, eps, cfg.overrides);
    let mut f = HopSetEdges::new(n, plan.unit);
    let mut budget = n.max(1) as u64;
    let mut factor = Wide::one();
    let mut reports = Vec::new();
    if n >= 2 {
        for (i, params) in plan.levels.iter().enumerate() {
            let extra = f.edges();
            let layer = Layer::new(base, plan.unit, &extra, None);
            let h = params.h;
            let precondition = params.precondition_holds();
            let red = hop_reduction_on(engine, &layer, plan.unit, params.clone(), i);
            let chained = budget <= h;
            if chained {
                budget = red.certificate.hops;
                factor *= red.certificate.factor;
            }
            f.merge(&red.edges);
            reports.push(LevelReport {
                level: i,
                h,
                budget_in: if chained { h.min(n as u64) } else { budget },
                chained,
                precondition_holds: precondition,
                certificate: red.certificate,
                pairs: red.edges.len(),
            });
        }
    }
    HopSet {
        edges: f,
        epsilon: eps,
        p: plan.p,
        delta: plan.delta,
        eps_level: plan.eps_level,
        nominal_hop_bound: ceil_root(n.max(1) as u128, plan.p as u32) as u64,
        hop_bound: budget,
        factor,
        levels: reports,
    }
}

/// Outcome of checking d(G) ≤ d^H(G ∪ F) ≤ bound·d(G).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichCheck {
    pub pairs: u64,
    pub hop_bound: u64,
    #[serde(serialize_with = "ser_wide")]
    pub bound: Wide,
    pub lower_violations: u64,
    pub upper_violations: u64,
    #[serde(serialize_with = "ser_wide")]
    pub worst_ratio: Wide,
    pub worst_pair: Option<(NodeId, NodeId)>,
}

impl SandwichCheck {
    pub fn ok(&self) -> bool {
        self.lower_violations == 0 && self.upper_violations == 0
    }
}

/// All sources for n ≤ 256, otherwise enough seeded sources for ≥ `min_pairs` pairs.
pub fn sample_sources(n: usize, min_pairs: usize, seed: u64) -> Vec<NodeId> {
    if n <= 256 {
        return (0..n).collect();
    }
    let k = min_pairs.div_ceil(n - 1).max(1).min(n);
    let mut all: Vec<NodeId> = (0..n).collect();
    all.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    let mut pick = all[..k].to_vec();
    pick.sort_unstable();
    pick
}

/// Checks the hop-set sandwich from every source in `sources` to every node.
pub fn verify_hop_set(g: &Graph, f: &HopSetEdges, hop_bound: u64, bound: Wide, sources: &[NodeId]) -> SandwichCheck {
    let h = f.union_graph(g);
    let unit = f.unit() as u128;
    let rows = par::map_slice(sources, |&s| {
        let exact = dijkstra_bounded(g, s, INF).dist;
        let hop = bellman_ford_hops(&h, s, hop_bound as usize).dist;
        (s, exact, hop)
    });
    let mut check = SandwichCheck {
        pairs: 0,
        hop_bound,
        bound,
        lower_violations: 0,
        upper_violations: 0,
        worst_ratio: Wide::one(),
        worst_pair: None,
    };
    for (s, exact, hop) in rows {
        for v in 0..g.n() {
            if v == s || exact[v] == INF {
                continue;
            }
            check.pairs += 1;
            let d = exact[v] as u128 * unit;
            if hop[v] == INF {
                check.upper_violations += 1;
                continue;
            }
            let ratio = Wide::new(hop[v] as u128, d);
            if (hop[v] as u128) < d {
                check.lower_violations += 1;
            }
            if ratio > bound {
                check.upper_violations += 1;
            }
            if ratio > check.worst_ratio || check.worst_pair.is_none() {
                check.worst_ratio = ratio.max(check.worst_ratio);
                check.worst_pair = Some((s, v));
            }
        }
    }
    check
}
