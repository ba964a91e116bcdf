//! The primitives the hop-set construction is built from, behind one trait
//! so the same procedure can run in memory, under overlay round charges or
//! over an edge stream.

use crate::clusters::{compute_clusters, priorities_by, ClusterMap, PriorityHierarchy};
use crate::detection::{detect_rtz, DetectionList};
use crate::graph::{dijkstra_multi, Dist, DistanceTable, NodeId};
use crate::layer::Layer;

pub trait Engine {
    /// (S, γ, σ)-detection on `layer`.
    fn detect(&mut self, layer: &Layer, sources: &[NodeId], gamma: Dist, sigma: usize) -> DetectionList;

    /// Procedure Priorities; detection lists come from [`Engine::detect`].
    fn priorities(&mut self, layer: &Layer, p: usize, range: Dist, q: usize) -> PriorityHierarchy {
        if p == 1 {
            return PriorityHierarchy::trivial(layer.n(), q);
        }
        priorities_by(layer.n(), p, q, |a| self.detect(layer, a, range, q))
    }

    fn clusters(&mut self, layer: &Layer, hierarchy: &PriorityHierarchy, range: Dist) -> ClusterMap;

    /// Distances up to `range` from zero-initialised `roots`.
    fn bounded_sssp(&mut self, layer: &Layer, roots: &[NodeId], range: Dist) -> DistanceTable;

    /// Called after scale `scale` of hop-set level `level` added `added` pairs.
    fn scale_done(&mut self, _level: usize, _scale: u32, _added: usize) {}
}

/// Plain in-memory execution.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sequential;

impl Engine for Sequential {
    fn detect(&mut self, layer: &Layer, sources: &[NodeId], gamma: Dist, sigma: usize) -> DetectionList {
        detect_rtz(layer.graph(), sources, gamma, sigma)
    }

    fn clusters(&mut self, layer: &Layer, hierarchy: &PriorityHierarchy, range: Dist) -> ClusterMap {
        compute_clusters(layer.graph(), hierarchy, range)
    }

    fn bounded_sssp(&mut self, layer: &Layer, roots: &[NodeId], range: Dist) -> DistanceTable {
        dijkstra_multi(layer.graph(), roots, range)
    }
}
