//! Round accounting for the CONGEST and congested-clique models.
//!
//! Base-network primitives (types, ruling sets, partial distance
//! estimation) are computed exactly and charged by their round formulas.
//! Overlay-level primitives run as level-synchronous broadcast phases whose
//! message counts are measured. Every O(·) constant is 1.

use crate::clusters::{priorities_by, ClusterMap, PriorityHierarchy};
use crate::detection::{detect_rtz_with, DetectionList, PhaseGraph, PhaseTree};
use crate::engine::Engine;
use crate::graph::{add, hop_diameter, Dist, DistanceTable, Graph, GraphError, NodeId, INF};
use crate::hopset::HopSetConfig;
use crate::layer::Layer;
use crate::overlay::{compute_types, distances_to_centers, overlay_finish, select_centers, OverlayParams, OverlayRun};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CostModel {
    Congest,
    Clique,
    Streaming,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("broadcast charges are undefined for the {0:?} model")]
    WrongModel(CostModel),
}

/// What an entry paid for; `units` is a function of these fields and the ledger's model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Charge {
    /// One broadcast of `messages` messages.
    Broadcast { messages: u64 },
    /// Level-synchronous search up to `range`; `levels` lists (L, m_L) for non-empty levels.
    LevelSearch { range: Dist, levels: Vec<(Dist, u64)> },
    /// RTZ phases that found nothing and were not simulated, each an empty level search.
    IdlePhases { phases: u64, range: Dist },
    /// Lenzen–Peleg source detection on the base network.
    Detection { gamma: Dist, sigma: u64, sources: u64 },
    /// Bitwise ruling set with `bits` iterations of c−1 rounds.
    Ruling { bits: u64, c: Dist },
    /// Marker for stages whose communication is charged elsewhere.
    Marker { note: String },
}

impl Charge {
    pub fn formula(&self, model: CostModel) -> &'static str {
        match (self, model) {
            (Charge::Broadcast { .. }, CostModel::Congest) => "D + m",
            (Charge::Broadcast { .. }, _) => "2*ceil(m/n)",
            (Charge::LevelSearch { .. }, CostModel::Congest) => "(R+1)*D + sum_L m_L",
            (Charge::LevelSearch { .. }, _) => "sum_L 2*ceil(m_L/n)",
            (Charge::IdlePhases { .. }, CostModel::Congest) => "phases*(R+1)*D",
            (Charge::IdlePhases { .. }, _) => "0",
            (Charge::Detection { .. }, _) => "min(gamma,D) + min(sigma,|S|)",
            (Charge::Ruling { .. }, _) => "bits*(c-1)",
            (Charge::Marker { .. }, _) => "0",
        }
    }

    /// Units under `model` with hop diameter `d` and clique size `n`.
    pub fn units(&self, model: CostModel, d: u64, n: u64) -> u64 {
        let clique = |m: u64| if m == 0 { 0 } else { 2 * m.div_ceil(n.max(1)) };
        match (self, model) {
            (Charge::Broadcast { messages }, CostModel::Congest) => d + messages,
            (Charge::Broadcast { messages }, _) => clique(*messages),
            (Charge::LevelSearch { range, levels }, CostModel::Congest) => {
                (range + 1) * d + levels.iter().map(|l| l.1).sum::<u64>()
            }
            (Charge::LevelSearch { levels, .. }, _) => levels.iter().map(|l| clique(l.1)).sum(),
            (Charge::IdlePhases { phases, range }, CostModel::Congest) => phases * (range + 1) * d,
            (Charge::IdlePhases { .. }, _) => 0,
            (Charge::Detection { gamma, sigma, sources }, _) => (*gamma).min(d) + (*sigma).min(*sources),
            (Charge::Ruling { bits, c }, _) => bits * (c - 1),
            (Charge::Marker { .. }, _) => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub stage: String,
    pub formula: &'static str,
    pub charge: Charge,
    pub units: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostLedger {
    pub model: CostModel,
    /// Hop diameter of the underlying network (congest only).
    #[serde(rename = "D")]
    pub d: u64,
    /// Number of network nodes (the clique broadcast divisor).
    pub n: u64,
    pub entries: Vec<Entry>,
    #[serde(skip)]
    stage: String,
}

impl CostLedger {
    pub fn congest(d: u64, n: usize) -> CostLedger {
        CostLedger { model: CostModel::Congest, d, n: n as u64, entries: Vec::new(), stage: String::new() }
    }

    pub fn clique(n: usize) -> CostLedger {
        CostLedger { model: CostModel::Clique, d: 1, n: n as u64, entries: Vec::new(), stage: String::new() }
    }

    pub fn streaming(n: usize) -> CostLedger {
        CostLedger { model: CostModel::Streaming, d: 0, n: n as u64, entries: Vec::new(), stage: String::new() }
    }

    pub fn set_stage(&mut self, stage: &str) {
        self.stage = stage.to_string();
    }

    pub fn stage(&self) -> &str {
        &self.stage
    }

    /// Appends an entry under the current stage and returns its units.
    pub fn charge(&mut self, charge: Charge) -> u64 {
        let units = charge.units(self.model, self.d, self.n);
        let formula = charge.formula(self.model);
        self.entries.push(Entry { stage: self.stage.clone(), formula, charge, units });
        units
    }

    /// Congest: D + m′. Clique: 2⌈m′/n⌉, or 0 when m′ = 0.
    pub fn charge_broadcast(&mut self, m_prime: u64) -> Result<u64, LedgerError> {
        if self.model == CostModel::Streaming {
            return Err(LedgerError::WrongModel(self.model));
        }
        Ok(self.charge(Charge::Broadcast { messages: m_prime }))
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.units).sum()
    }

    /// Stage names in first-appearance order.
    pub fn stages(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.stage.as_str()) {
                out.push(&e.stage);
            }
        }
        out
    }

    pub fn totals_by_stage(&self) -> BTreeMap<String, u64> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.stage.clone()).or_insert(0) += e.units;
        }
        m
    }

    /// Entries whose units differ from their formula.
    pub fn nonconforming(&self) -> Vec<usize> {
        (0..self.entries.len())
            .filter(|&i| {
                let e = &self.entries[i];
                e.units != e.charge.units(self.model, self.d, self.n) || e.formula != e.charge.formula(self.model)
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": self.model,
            "D": self.d,
            "n": self.n,
            "entries": self.entries,
            "by_stage": self.totals_by_stage(),
            "total": self.total(),
        })
    }
}

/// Level-synchronous relaxation from `seeds`: in iteration L every node at
/// tentative (L, label) broadcasts, and neighbours relax with the smallest
/// (distance, label). Returns per-node results and (L, m_L) per non-empty level.
fn level_sync(
    g: &Graph,
    seeds: impl IntoIterator<Item = (NodeId, Dist, NodeId)>,
    range: Dist,
) -> (Vec<Option<(Dist, NodeId)>>, Vec<Option<NodeId>>, Vec<(Dist, u64)>) {
    let n = g.n();
    let mut best: Vec<Option<(Dist, NodeId)>> = vec![None; n];
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut buckets: BTreeMap<Dist, Vec<NodeId>> = BTreeMap::new();
    for (v, d, label) in seeds {
        if d <= range && best[v].is_none_or(|b| (d, label) < b) {
            best[v] = Some((d, label));
            buckets.entry(d).or_default().push(v);
        }
    }
    let mut levels = Vec::new();
    while let Some((level, mut nodes)) = buckets.pop_first() {
        nodes.sort_unstable();
        nodes.dedup();
        nodes.retain(|&u| best[u].is_some_and(|b| b.0 == level));
        if nodes.is_empty() {
            continue;
        }
        levels.push((level, nodes.len() as u64));
        for &u in &nodes {
            let label = best[u].unwrap().1;
            for &(v, w) in g.neighbors(u) {
                let nd = add(level, w);
                if nd > range {
                    continue;
                }
                match best[v] {
                    Some(b) if (nd, label) >= b => {
                        if nd == b.0 && parent[v].is_some_and(|p| u < p) && label == b.1 {
                            parent[v] = Some(u);
                        }
                    }
                    _ => {
                        best[v] = Some((nd, label));
                        parent[v] = Some(u);
                        buckets.entry(nd).or_default().push(v);
                    }
                }
            }
        }
    }
    (best, parent, levels)
}

/// Bounded SSSP on an overlay by broadcast iterations L = 0..=R.
pub fn bounded_sssp_overlay(g: &Graph, roots: &[NodeId], range: Dist, ledger: &mut CostLedger) -> DistanceTable {
    assert!(range != INF, "overlay searches need a finite range");
    let (best, mut parent, levels) = level_sync(g, roots.iter().map(|&r| (r, 0, 0)), range);
    let settled: u64 = levels.iter().map(|l| l.1).sum();
    assert!(settled <= g.n() as u64, "more broadcasts than centers");
    ledger.charge(Charge::LevelSearch { range, levels });
    let dist: Vec<Dist> = best.iter().map(|b| b.map_or(INF, |b| b.0)).collect();
    for &r in roots {
        parent[r] = None;
    }
    let mut sources = roots.to_vec();
    sources.dedup();
    DistanceTable { sources, range, dist, parent }
}

/// Runs one RTZ phase as a level-synchronous broadcast search.
fn simulate_phase(pg: &PhaseGraph, ledger: &mut CostLedger) -> PhaseTree {
    let (best, _, levels) = level_sync(&pg.kept, pg.seeds.iter().copied(), pg.gamma);
    ledger.charge(Charge::LevelSearch { range: pg.gamma, levels });
    best
}

/// RTZ detection with every phase simulated; phases skipped after an empty
/// one are charged as idle phases.
pub fn detect_rtz_overlay(
    g: &Graph,
    sources: &[NodeId],
    gamma: Dist,
    sigma: usize,
    ledger: &mut CostLedger,
) -> DetectionList {
    let (lists, stats) = detect_rtz_with(g, sources, gamma, sigma, |pg| simulate_phase(pg, ledger));
    let idle = sigma as u64 - stats.len() as u64;
    if idle > 0 && !stats.is_empty() {
        ledger.charge(Charge::IdlePhases { phases: idle, range: gamma });
    }
    lists
}

/// Clusters by R+1 broadcast iterations shared by all centers; a node
/// broadcasts for C(u) when it joins at its level.
pub fn clusters_overlay(g: &Graph, h: &PriorityHierarchy, range: Dist, ledger: &mut CostLedger) -> ClusterMap {
    let n = g.n();
    let mut bounds = vec![vec![INF; n]; h.p + 1];
    for (i, row) in bounds.iter_mut().enumerate().skip(1) {
        if !h.level(i).is_empty() {
            *row = bounded_sssp_overlay(g, h.level(i), range, ledger).dist;
        }
    }
    let (clusters, levels) = grow_clusters(g, h, &bounds, range);
    let total: u64 = levels.iter().map(|l| l.1).sum();
    let map = ClusterMap::from_clusters(range, clusters);
    assert_eq!(total, map.total_size() as u64, "one message per cluster member");
    ledger.charge(Charge::LevelSearch { range, levels });
    map
}

/// All pruned cluster searches advanced level by level in lockstep.
pub fn grow_clusters(
    g: &Graph,
    h: &PriorityHierarchy,
    bounds: &[Vec<Dist>],
    range: Dist,
) -> (Vec<Vec<(NodeId, Dist)>>, Vec<(Dist, u64)>) {
    let n = g.n();
    let bound = |root: NodeId, v: NodeId| bounds[h.priority(root) + 1][v];
    let mut tentative: Vec<HashMap<NodeId, Dist>> = (0..n).map(|u| HashMap::from([(u, 0)])).collect();
    let mut buckets: BTreeMap<Dist, Vec<(NodeId, NodeId)>> = BTreeMap::new();
    buckets.insert(0, (0..n).map(|u| (u, u)).collect());
    let mut clusters = vec![Vec::new(); n];
    let mut levels = Vec::new();
    while let Some((level, mut items)) = buckets.pop_first() {
        items.sort_unstable();
        items.dedup();
        let mut joined = 0u64;
        for &(root, v) in &items {
            if tentative[root][&v] != level || level >= bound(root, v) {
                continue;
            }
            joined += 1;
            clusters[root].push((v, level));
            for &(x, w) in g.neighbors(v) {
                let nd = add(level, w);
                if nd <= range && tentative[root].get(&x).is_none_or(|&old| nd < old) {
                    tentative[root].insert(x, nd);
                    buckets.entry(nd).or_default().push((root, x));
                }
            }
        }
        if joined > 0 {
            levels.push((level, joined));
        }
    }
    (clusters, levels)
}

/// Engine whose overlay-level primitives are simulated and charged to a ledger.
pub struct OverlayEngine<'a> {
    pub ledger: &'a mut CostLedger,
}

impl Engine for OverlayEngine<'_> {
    fn detect(&mut self, layer: &Layer, sources: &[NodeId], gamma: Dist, sigma: usize) -> DetectionList {
        detect_rtz_overlay(layer.graph(), sources, gamma, sigma, self.ledger)
    }

    fn priorities(&mut self, layer: &Layer, p: usize, range: Dist, q: usize) -> PriorityHierarchy {
        self.ledger.set_stage("priorities");
        self.ledger.charge(Charge::Marker { note: format!("p={p} q={q}: {} detection runs", p - 1) });
        if p == 1 {
            return PriorityHierarchy::trivial(layer.n(), q);
        }
        priorities_by(layer.n(), p, q, |a| self.detect(layer, a, range, q))
    }

    fn clusters(&mut self, layer: &Layer, hierarchy: &PriorityHierarchy, range: Dist) -> ClusterMap {
        self.ledger.set_stage("clusters");
        clusters_overlay(layer.graph(), hierarchy, range, self.ledger)
    }

    fn bounded_sssp(&mut self, layer: &Layer, roots: &[NodeId], range: Dist) -> DistanceTable {
        self.ledger.set_stage("finalsssp");
        bounded_sssp_overlay(layer.graph(), roots, range, self.ledger)
    }

    fn scale_done(&mut self, level: usize, scale: u32, added: usize) {
        self.ledger.set_stage("hopreduce");
        self.ledger.charge(Charge::Marker { note: format!("level {level} scale {scale}: {added} pairs, local") });
    }
}

/// The full CONGEST pipeline: overlay construction on G, hop set and final
/// steps on G′, then one broadcast of the |V′| center estimates.
pub fn run_congest_pipeline(
    g: &Graph,
    s: NodeId,
    params: &OverlayParams,
    cfg: HopSetConfig,
) -> Result<(OverlayRun, CostLedger), GraphError> {
    let d = hop_diameter(g)?;
    let n = g.n();
    let mut ledger = CostLedger::congest(d, n);

    ledger.set_stage("types");
    let types = compute_types(g, params);
    for _ in 0..=params.top_scale {
        ledger.charge(Charge::Detection { gamma: params.h_prime, sigma: params.h, sources: n as u64 });
    }

    ledger.set_stage("ruling");
    let selection = select_centers(g, &types, params, s);
    for r in &selection.rulings {
        ledger.charge(Charge::Ruling { bits: r.result.bits as u64, c: r.result.c });
    }

    ledger.set_stage("pde");
    let network = distances_to_centers(g, &selection.centers, params);
    let nc = network.n_centers() as u64;
    for _ in 0..=params.top_scale {
        ledger.charge(Charge::Detection { gamma: params.k_prime, sigma: nc, sources: nc });
    }

    let run = overlay_finish(&mut OverlayEngine { ledger: &mut ledger }, g, s, params, types, selection, network, cfg);
    ledger.set_stage("broadcast");
    ledger.charge_broadcast(nc).expect("congest ledger");
    Ok((run, ledger))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::dijkstra_multi;

    #[test]
    fn broadcast_formulas() {
        let mut l = CostLedger::congest(3, 10);
        assert_eq!(l.charge_broadcast(5), Ok(8));
        assert_eq!(l.charge_broadcast(0), Ok(3));
        let mut c = CostLedger::clique(10);
        assert_eq!(c.charge_broadcast(5), Ok(2));
        assert_eq!(c.charge_broadcast(0), Ok(0));
        assert_eq!(c.charge_broadcast(21), Ok(6));
        let mut s = CostLedger::streaming(10);
        assert_eq!(s.charge_broadcast(1), Err(LedgerError::WrongModel(CostModel::Streaming)));
    }

    #[test]
    fn three_center_path() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut l = CostLedger::congest(1, 3);
        let t = bounded_sssp_overlay(&g, &[0], 2, &mut l);
        assert_eq!(t, dijkstra_multi(&g, &[0], 2));
        assert_eq!(l.total(), 3 + 3);
    }

    #[test]
    fn all_roots() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut l = CostLedger::congest(1, 3);
        let t = bounded_sssp_overlay(&g, &[0, 1, 2], 4, &mut l);
        assert!(t.dist.iter().all(|&d| d == 0));
        assert_eq!(l.entries[0].charge, Charge::LevelSearch { range: 4, levels: vec![(0, 3)] });
    }

    #[test]
    fn trivial_hierarchy_clusters_are_balls() {
        let g = Graph::from_edges(4, [(0, 1, 1), (1, 2, 2), (2, 3, 1)]).unwrap();
        let h = PriorityHierarchy::trivial(4, 2);
        let mut l = CostLedger::congest(2, 4);
        let c = clusters_overlay(&g, &h, 3, &mut l);
        assert_eq!(c, crate::clusters::compute_clusters(&g, &h, 3));
        let balls: usize = (0..4).map(|u| dijkstra_multi(&g, &[u], 3).reached().count()).sum();
        assert_eq!(c.total_size(), balls);
        assert_eq!(l.total(), 4 * 2 + balls as u64);
    }
}
