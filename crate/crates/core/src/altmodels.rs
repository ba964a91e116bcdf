//! The congested-clique variant (hop set, then Bellman–Ford on G ∪ F) and
//! the multi-pass streaming variant with pass and space accounting.

use crate::arith::{ceil_log2, wide, Rational, Wide};
use crate::clusters::{compute_clusters, ClusterMap, PriorityHierarchy};
use crate::detection::{detect_rtz_with, solve_phase, DetectionList};
use crate::engine::{Engine, Sequential};
use crate::graph::io::{data_lines, parse_edge, parse_header};
use crate::graph::{add, dijkstra_multi, hop_layers, Dist, DistanceTable, Graph, HopDistanceTable, NodeId, ParseError, INF};
use crate::hopset::{hop_set_with, HopSet, HopSetConfig};
use crate::layer::{EdgeScan, Layer};
use crate::overlay::{finish_on, Estimates, Finish};
use crate::simharness::{CostLedger, OverlayEngine};
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;
use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Hop set plus the final-steps recipe on H = G ∪ F.
#[derive(Debug, Clone)]
pub struct HopSetSssp {
    pub hopset: HopSet,
    pub finish: Finish,
    /// Real-valued estimates d′(s, ·).
    pub estimates: Estimates,
    /// d′ ≤ alpha·d: the hop-set factor times the rounding factor 1+ε.
    pub alpha: Wide,
}

/// The in-memory pipeline.
pub fn hopset_sssp(g: &Graph, s: NodeId, eps: Rational, w: u64, cfg: HopSetConfig) -> HopSetSssp {
    hopset_sssp_with(&mut Sequential, g, s, eps, w, cfg)
}

pub fn hopset_sssp_with<E: Engine>(
    engine: &mut E,
    base: &dyn EdgeScan,
    s: NodeId,
    eps: Rational,
    w: u64,
    cfg: HopSetConfig,
) -> HopSetSssp {
    let hopset = hop_set_with(engine, base, w, eps, cfg);
    let unit = hopset.edges.unit();
    let extra = hopset.edges.edges();
    let w_max = extra.iter().map(|e| e.2).chain([w * unit]).max().unwrap();
    let finish = finish_on(engine, base, unit, &extra, w_max, s, hopset.hop_bound, eps);
    let mut estimates = finish.estimates.clone();
    estimates.unit *= unit as u128;
    let alpha = hopset.factor * (Wide::one() + wide(eps));
    HopSetSssp { hopset, finish, estimates, alpha }
}

#[derive(Debug, Clone)]
pub struct CliqueRun {
    /// d^h(s, ·, G ∪ F) in units of 1/unit, h the hop set's bound.
    pub table: HopDistanceTable,
    pub unit: u64,
    pub hopset: HopSet,
    pub ledger: CostLedger,
    /// Rounds k whose δ differed from d^k(s, ·, H).
    pub round_mismatches: Vec<usize>,
}

impl CliqueRun {
    pub fn estimates(&self) -> Estimates {
        let values = self.table.dist.iter().map(|&d| if d == INF { u128::MAX } else { d as u128 }).collect();
        Estimates { unit: self.unit as u128, values }
    }
}

/// Hop set under clique broadcast charges, then h rounds of Bellman–Ford on
/// H = G ∪ F, each round one broadcast of n messages.
pub fn clique_sssp(g: &Graph, s: NodeId, eps: Rational, cfg: HopSetConfig) -> CliqueRun {
    let n = g.n();
    let mut ledger = CostLedger::clique(n);
    let hopset = hop_set_with(&mut OverlayEngine { ledger: &mut ledger }, g, g.max_weight().max(1), eps, cfg);
    let h = hopset.edges.union_graph(g);
    let rounds = hopset.hop_bound as usize;
    let oracle = hop_layers(&h, s, rounds);
    ledger.set_stage("bellmanford");
    let mut delta = vec![INF; n];
    delta[s] = 0;
    let mut round_mismatches = Vec::new();
    for k in 1..=rounds {
        ledger.charge_broadcast(n as u64).expect("clique ledger");
        let prev = delta.clone();
        for &(u, v, w) in h.edges() {
            delta[v] = delta[v].min(add(prev[u], w));
            delta[u] = delta[u].min(add(prev[v], w));
        }
        if delta != oracle[k] {
            round_mismatches.push(k);
        }
    }
    CliqueRun {
        table: HopDistanceTable { source: s, h: rounds, dist: delta },
        unit: hopset.edges.unit(),
        hopset,
        ledger,
        round_mismatches,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StreamError {
    #[error("the stream cannot be rewound for another pass")]
    NonRewindableStream,
    #[error("stream I/O: {0}")]
    Io(String),
    #[error("stream parse error: {0}")]
    Parse(ParseError),
}

/// A sequential edge source; `rewind` starts the next pass.
pub trait EdgeStream {
    fn node_count(&self) -> usize;
    fn rewind(&mut self) -> Result<(), StreamError>;
    fn next_edge(&mut self) -> Option<Result<(NodeId, NodeId, u64), StreamError>>;
}

/// An in-memory stream in a fixed order.
#[derive(Debug, Clone)]
pub struct VecStream {
    n: usize,
    edges: Vec<(NodeId, NodeId, u64)>,
    pos: usize,
}

impl VecStream {
    pub fn new(n: usize, edges: Vec<(NodeId, NodeId, u64)>) -> VecStream {
        VecStream { n, edges, pos: 0 }
    }

    /// The edges of `g` in an order shuffled by `seed`, endpoints randomly swapped.
    pub fn shuffled(g: &Graph, seed: u64) -> VecStream {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut edges = g.edges().to_vec();
        edges.shuffle(&mut rng);
        for e in &mut edges {
            if rand::Rng::gen_bool(&mut rng, 0.5) {
                *e = (e.1, e.0, e.2);
            }
        }
        VecStream::new(g.n(), edges)
    }
}

impl EdgeStream for VecStream {
    fn node_count(&self) -> usize {
        self.n
    }

    fn rewind(&mut self) -> Result<(), StreamError> {
        self.pos = 0;
        Ok(())
    }

    fn next_edge(&mut self) -> Option<Result<(NodeId, NodeId, u64), StreamError>> {
        let e = self.edges.get(self.pos).copied()?;
        self.pos += 1;
        Some(Ok(e))
    }
}

/// A stream that can be read once.
#[derive(Debug, Clone)]
pub struct OneShotStream(pub VecStream);

impl EdgeStream for OneShotStream {
    fn node_count(&self) -> usize {
        self.0.n
    }

    fn rewind(&mut self) -> Result<(), StreamError> {
        Err(StreamError::NonRewindableStream)
    }

    fn next_edge(&mut self) -> Option<Result<(NodeId, NodeId, u64), StreamError>> {
        self.0.next_edge()
    }
}

/// An edge-list file read line by line; rewinding reopens it.
pub struct FileStream {
    path: PathBuf,
    n: usize,
    w: u64,
    lines: Option<std::io::Lines<BufReader<std::fs::File>>>,
    line_no: usize,
}

impl FileStream {
    pub fn open(path: &Path) -> Result<FileStream, StreamError> {
        let mut s = FileStream { path: path.to_path_buf(), n: 0, w: 1, lines: None, line_no: 0 };
        s.rewind()?;
        Ok(s)
    }

    pub fn weight_bound(&self) -> u64 {
        self.w
    }

    fn next_data_line(&mut self) -> Option<Result<(usize, String), StreamError>> {
        let lines = self.lines.as_mut()?;
        for line in lines {
            self.line_no += 1;
            match line {
                Err(e) => return Some(Err(StreamError::Io(e.to_string()))),
                Ok(l) => {
                    if let Some((_, d)) = data_lines(&l).next() {
                        return Some(Ok((self.line_no, d.to_string())));
                    }
                }
            }
        }
        None
    }
}

impl EdgeStream for FileStream {
    fn node_count(&self) -> usize {
        self.n
    }

    fn rewind(&mut self) -> Result<(), StreamError> {
        let f = std::fs::File::open(&self.path).map_err(|e| StreamError::Io(format!("{}: {e}", self.path.display())))?;
        self.lines = Some(BufReader::new(f).lines());
        self.line_no = 0;
        let (no, header) = match self.next_data_line() {
            Some(r) => r?,
            None => return Err(StreamError::Parse(ParseError { line: 0, message: "missing header `n m W`".into() })),
        };
        let (n, _, w) = parse_header(no, &header).map_err(StreamError::Parse)?;
        self.n = n;
        self.w = w;
        Ok(())
    }

    fn next_edge(&mut self) -> Option<Result<(NodeId, NodeId, u64), StreamError>> {
        match self.next_data_line()? {
            Err(e) => Some(Err(e)),
            Ok((no, l)) => Some(parse_edge(no, &l, self.n, self.w).map_err(StreamError::Parse)),
        }
    }
}

/// Adapts a stream to [`EdgeScan`]: every scan after the first rewinds.
/// The first error is kept and ends all later scans.
pub struct StreamSource<S: EdgeStream> {
    stream: RefCell<S>,
    n: usize,
    passes: Cell<u64>,
    error: RefCell<Option<StreamError>>,
}

impl<S: EdgeStream> StreamSource<S> {
    pub fn new(stream: S) -> StreamSource<S> {
        let n = stream.node_count();
        StreamSource { stream: RefCell::new(stream), n, passes: Cell::new(0), error: RefCell::new(None) }
    }

    pub fn passes(&self) -> u64 {
        self.passes.get()
    }

    pub fn error(&self) -> Option<StreamError> {
        self.error.borrow().clone()
    }
}

impl<S: EdgeStream> EdgeScan for StreamSource<S> {
    fn node_count(&self) -> usize {
        self.n
    }

    fn scan(&self, f: &mut dyn FnMut(NodeId, NodeId, u64)) {
        if self.error.borrow().is_some() {
            return;
        }
        let mut stream = self.stream.borrow_mut();
        if self.passes.get() > 0 {
            if let Err(e) = stream.rewind() {
                *self.error.borrow_mut() = Some(e);
                return;
            }
        }
        self.passes.set(self.passes.get() + 1);
        while let Some(item) = stream.next_edge() {
            match item {
                Ok((u, v, w)) => f(u, v, w),
                Err(e) => {
                    *self.error.borrow_mut() = Some(e);
                    return;
                }
            }
        }
    }
}

/// One primitive invocation of the streaming run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StreamPhase {
    pub label: &'static str,
    pub passes: u64,
    pub peak_space_words: u64,
    /// Words held for the whole phase: F edges plus, for clusters, the bound rows.
    pub overhead_words: u64,
}

/// Passes and space; a word is one stored (node, distance) record or one stored edge.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StreamLedger {
    pub passes: u64,
    pub peak_space_words: u64,
    pub current_space_words: u64,
    pub phases: Vec<StreamPhase>,
}

impl StreamLedger {
    fn begin(&mut self, label: &'static str, overhead_words: u64) {
        self.phases.push(StreamPhase { label, passes: 0, peak_space_words: 0, overhead_words });
    }

    fn pass(&mut self) {
        self.passes += 1;
        self.phases.last_mut().expect("pass outside a phase").passes += 1;
    }

    fn space(&mut self, words: u64) {
        self.current_space_words = words;
        self.peak_space_words = self.peak_space_words.max(words);
        let ph = self.phases.last_mut().expect("space outside a phase");
        ph.peak_space_words = ph.peak_space_words.max(words);
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": "streaming",
            "passes": self.passes,
            "peak_space_words": self.peak_space_words,
            "phases": self.phases,
        })
    }
}

/// Engine whose primitives read the layer only through full scans.
#[derive(Debug, Default)]
pub struct StreamEngine {
    pub ledger: StreamLedger,
}

impl StreamEngine {
    fn scan(&mut self, layer: &Layer, f: &mut dyn FnMut(NodeId, NodeId, u64)) {
        self.ledger.pass();
        layer.scan(f);
    }

    fn sssp(&mut self, layer: &Layer, roots: &[NodeId], range: Dist, label: &'static str) -> DistanceTable {
        let n = layer.n();
        let held = layer.extra().len() as u64;
        self.ledger.begin(label, held);
        let mut dist = vec![INF; n];
        let mut parent: Vec<Option<NodeId>> = vec![None; n];
        let mut levels = BTreeSet::new();
        for &r in roots {
            dist[r] = 0;
            levels.insert(0);
        }
        let mut reached = roots.iter().collect::<BTreeSet<_>>().len() as u64;
        self.ledger.space(held + reached);
        let mut frontier = vec![false; n];
        while let Some(level) = levels.pop_first() {
            for v in 0..n {
                frontier[v] = dist[v] == level;
            }
            if !frontier.contains(&true) {
                continue;
            }
            let mut newly = Vec::new();
            self.scan(layer, &mut |a, b, w| {
                for (u, v) in [(a, b), (b, a)] {
                    if !frontier[u] {
                        continue;
                    }
                    let nd = add(level, w);
                    if nd > range {
                        continue;
                    }
                    if nd < dist[v] {
                        if dist[v] == INF {
                            reached += 1;
                        }
                        dist[v] = nd;
                        parent[v] = Some(u);
                        newly.push(nd);
                    } else if nd == dist[v] && parent[v].is_some_and(|p| u < p) {
                        parent[v] = Some(u);
                    }
                }
            });
            levels.extend(newly);
            self.ledger.space(held + reached);
        }
        let mut sources = roots.to_vec();
        sources.dedup();
        DistanceTable { sources, range, dist, parent }
    }
}

impl Engine for StreamEngine {
    fn detect(&mut self, layer: &Layer, sources: &[NodeId], gamma: Dist, sigma: usize) -> DetectionList {
        let n = layer.n();
        let held = layer.extra().len() as u64;
        self.ledger.begin("detect", held);
        let mut sources = sources.to_vec();
        sources.sort_unstable();
        sources.dedup();
        let mut lists: Vec<Vec<(Dist, NodeId)>> = vec![Vec::new(); n];
        let mut ids: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut stored = 0u64;
        if sources.is_empty() {
            return DetectionList { gamma, sigma, lists };
        }
        for phase in 1..=sigma {
            let mut seeds: Vec<(NodeId, Dist, NodeId)> = Vec::new();
            if phase == 1 {
                seeds.extend(sources.iter().map(|&s| (s, 0, s)));
            } else {
                self.scan(layer, &mut |a, b, w| {
                    if ids[a] == ids[b] {
                        return;
                    }
                    for (y, v) in [(a, b), (b, a)] {
                        if let Some(&(d, u)) = lists[v].iter().find(|e| ids[y].binary_search(&e.1).is_err()) {
                            let len = add(w, d);
                            if len <= gamma {
                                seeds.push((y, len, u));
                            }
                        }
                    }
                });
            }
            let mut best: Vec<Option<(Dist, NodeId)>> = vec![None; n];
            let mut levels = BTreeSet::new();
            let mut tentative = 0u64;
            for &(v, d, label) in &seeds {
                if d <= gamma && best[v].is_none_or(|b| (d, label) < b) {
                    tentative += best[v].is_none() as u64;
                    best[v] = Some((d, label));
                    levels.insert(d);
                }
            }
            self.ledger.space(held + stored + seeds.len() as u64 + tentative);
            let mut frontier: Vec<Option<NodeId>> = vec![None; n];
            while let Some(level) = levels.pop_first() {
                for v in 0..n {
                    frontier[v] = best[v].filter(|b| b.0 == level).map(|b| b.1);
                }
                if frontier.iter().all(Option::is_none) {
                    continue;
                }
                let mut newly = Vec::new();
                self.scan(layer, &mut |a, b, w| {
                    if ids[a] != ids[b] {
                        return;
                    }
                    for (u, v) in [(a, b), (b, a)] {
                        let Some(label) = frontier[u] else { continue };
                        let key = (add(level, w), label);
                        if key.0 <= gamma && best[v].is_none_or(|b| key < b) {
                            tentative += best[v].is_none() as u64;
                            best[v] = Some(key);
                            newly.push(key.0);
                        }
                    }
                });
                levels.extend(newly);
                self.ledger.space(held + stored + seeds.len() as u64 + tentative);
            }
            let mut found = 0;
            for (v, entry) in best.into_iter().enumerate() {
                if let Some((d, s)) = entry {
                    lists[v].push((d, s));
                    let at = ids[v].partition_point(|&x| x < s);
                    ids[v].insert(at, s);
                    found += 1;
                }
            }
            stored += found;
            self.ledger.space(held + stored);
            if found == 0 {
                break;
            }
        }
        DetectionList { gamma, sigma, lists }
    }

    fn clusters(&mut self, layer: &Layer, h: &PriorityHierarchy, range: Dist) -> ClusterMap {
        let n = layer.n();
        let held = layer.extra().len() as u64;
        let mut bounds = vec![vec![INF; n]; h.p + 1];
        let mut rows = 0u64;
        for (i, row) in bounds.iter_mut().enumerate().skip(1) {
            if !h.level(i).is_empty() {
                *row = self.sssp(layer, h.level(i), range, "cluster-bounds").dist;
                rows += 1;
            }
        }
        self.ledger.begin("clusters", held + rows * n as u64);
        let bound = |root: NodeId, v: NodeId| bounds[h.priority(root) + 1][v];
        // Only offers that can still join are stored, so every stored entry
        // ends up in its cluster.
        let mut tentative: Vec<HashMap<NodeId, Dist>> = (0..n).map(|u| HashMap::from([(u, 0)])).collect();
        let mut stored = n as u64;
        let mut buckets: BTreeMap<Dist, Vec<(NodeId, NodeId)>> = BTreeMap::new();
        buckets.insert(0, (0..n).map(|u| (u, u)).collect());
        self.ledger.space(held + rows * n as u64 + stored);
        let mut frontier: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        while let Some((level, items)) = buckets.pop_first() {
            frontier.iter_mut().for_each(Vec::clear);
            let mut any = false;
            for (root, v) in items {
                if tentative[root][&v] == level && !frontier[v].contains(&root) {
                    frontier[v].push(root);
                    any = true;
                }
            }
            if !any {
                continue;
            }
            self.scan(layer, &mut |a, b, w| {
                for (u, x) in [(a, b), (b, a)] {
                    for &root in &frontier[u] {
                        let nd = add(level, w);
                        if nd > range || nd >= bound(root, x) {
                            continue;
                        }
                        let slot = tentative[root].entry(x);
                        match slot {
                            std::collections::hash_map::Entry::Occupied(mut o) if nd < *o.get() => {
                                o.insert(nd);
                                buckets.entry(nd).or_default().push((root, x));
                            }
                            std::collections::hash_map::Entry::Vacant(e) => {
                                e.insert(nd);
                                stored += 1;
                                buckets.entry(nd).or_default().push((root, x));
                            }
                            _ => {}
                        }
                    }
                }
            });
            self.ledger.space(held + rows * n as u64 + stored);
        }
        let clusters = tentative.into_iter().map(|t| t.into_iter().collect()).collect();
        ClusterMap::from_clusters(range, clusters)
    }

    fn bounded_sssp(&mut self, layer: &Layer, roots: &[NodeId], range: Dist) -> DistanceTable {
        self.sssp(layer, roots, range, "sssp")
    }
}

/// Sequential engine that also predicts, from its exact results, how many
/// passes the streaming engine needs for the same calls.
#[derive(Debug, Default)]
pub struct PassPredictor {
    pub passes: u64,
    /// Σ_v |C(v)| of every cluster computation, in call order.
    pub cluster_sizes: Vec<u64>,
}

fn distinct_levels(d: impl IntoIterator<Item = Dist>) -> u64 {
    d.into_iter().filter(|&x| x != INF).collect::<BTreeSet<_>>().len() as u64
}

impl Engine for PassPredictor {
    fn detect(&mut self, layer: &Layer, sources: &[NodeId], gamma: Dist, sigma: usize) -> DetectionList {
        let mut passes = 0;
        let (lists, _) = detect_rtz_with(layer.graph(), sources, gamma, sigma, |pg| {
            let tree = solve_phase(pg);
            passes += (pg.phase > 1) as u64 + distinct_levels(tree.iter().flatten().map(|e| e.0));
            tree
        });
        self.passes += passes;
        lists
    }

    fn clusters(&mut self, layer: &Layer, h: &PriorityHierarchy, range: Dist) -> ClusterMap {
        let g = layer.graph();
        for i in 1..=h.p {
            if !h.level(i).is_empty() {
                self.passes += distinct_levels(dijkstra_multi(g, h.level(i), range).dist);
            }
        }
        let c = compute_clusters(g, h, range);
        self.passes += distinct_levels((0..c.n()).flat_map(|v| c.cluster(v).iter().map(|e| e.1)));
        self.cluster_sizes.push(c.total_size() as u64);
        c
    }

    fn bounded_sssp(&mut self, layer: &Layer, roots: &[NodeId], range: Dist) -> DistanceTable {
        let t = dijkstra_multi(layer.graph(), roots, range);
        self.passes += distinct_levels(t.dist.iter().copied());
        t
    }
}

#[derive(Debug, Clone)]
pub struct StreamRun {
    pub result: HopSetSssp,
    pub ledger: StreamLedger,
    pub warnings: Vec<String>,
}

/// The in-memory pipeline with the base graph read only from `stream`; F stays in memory.
pub fn stream_sssp<S: EdgeStream>(
    stream: S,
    s: NodeId,
    eps: Rational,
    w: u64,
    cfg: HopSetConfig,
) -> Result<StreamRun, StreamError> {
    let source = StreamSource::new(stream);
    let n = source.node_count();
    let mut warnings = Vec::new();
    let polylog = (ceil_log2(n.max(2) as u128) as u64).pow(2);
    if w > polylog {
        warnings.push(format!("W={w} exceeds the polylog assumption (log2 n)^2 = {polylog}"));
    }
    let mut engine = StreamEngine::default();
    let result = hopset_sssp_with(&mut engine, &source, s, eps, w, cfg);
    if let Some(e) = source.error() {
        return Err(e);
    }
    assert_eq!(engine.ledger.passes, source.passes(), "every scan is one pass");
    Ok(StreamRun { result, ledger: engine.ledger, warnings })
}
