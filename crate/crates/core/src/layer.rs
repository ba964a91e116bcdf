//! Graphs derived from a base edge source: `round(unit·G ∪ F)`.
//!
//! The hop-set construction only ever works on graphs of this shape, so it
//! describes them lazily and lets each engine decide how to read them: the
//! in-memory engines materialise a [`Graph`], the streaming engine replays
//! the base stream once per pass.

use crate::graph::{Graph, NodeId, Scale};
use std::cell::OnceCell;

/// A source of undirected weighted edges that can be traversed repeatedly.
pub trait EdgeScan {
    fn node_count(&self) -> usize;
    /// Visits every edge once.
    fn scan(&self, f: &mut dyn FnMut(NodeId, NodeId, u64));
    /// The underlying graph when it is already in memory.
    fn as_graph(&self) -> Option<&Graph> {
        None
    }
}

impl EdgeScan for Graph {
    fn node_count(&self) -> usize {
        self.n()
    }

    fn scan(&self, f: &mut dyn FnMut(NodeId, NodeId, u64)) {
        for &(u, v, w) in self.edges() {
            f(u, v, w);
        }
    }

    fn as_graph(&self) -> Option<&Graph> {
        Some(self)
    }
}

pub struct Layer<'a> {
    base: &'a dyn EdgeScan,
    base_unit: u64,
    extra: &'a [(NodeId, NodeId, u64)],
    rounding: Option<Scale>,
    cache: OnceCell<Graph>,
}

impl<'a> Layer<'a> {
    /// `base` itself.
    pub fn plain(base: &'a dyn EdgeScan) -> Layer<'a> {
        Layer::new(base, 1, &[], None)
    }

    /// `round_ρ(base_unit · base ∪ extra)`; `extra` weights are already in the scaled unit.
    pub fn new(
        base: &'a dyn EdgeScan,
        base_unit: u64,
        extra: &'a [(NodeId, NodeId, u64)],
        rounding: Option<Scale>,
    ) -> Layer<'a> {
        assert!(base_unit >= 1);
        Layer { base, base_unit, extra, rounding, cache: OnceCell::new() }
    }

    /// Same union, rounded by `rho` instead.
    pub fn rounded(&self, rho: Scale) -> Layer<'a> {
        Layer::new(self.base, self.base_unit, self.extra, Some(rho))
    }

    pub fn n(&self) -> usize {
        self.base.node_count()
    }

    pub fn extra(&self) -> &'a [(NodeId, NodeId, u64)] {
        self.extra
    }

    #[inline]
    fn finish(&self, w: u64) -> u64 {
        match self.rounding {
            Some(r) => r.round(w),
            None => w,
        }
    }

    #[inline]
    pub fn base_weight(&self, w: u64) -> u64 {
        self.finish(w.checked_mul(self.base_unit).expect("weight overflow"))
    }

    #[inline]
    pub fn extra_weight(&self, w: u64) -> u64 {
        self.finish(w)
    }

    /// Traverses the base source once; `extra` edges are visited from memory.
    pub fn scan(&self, f: &mut dyn FnMut(NodeId, NodeId, u64)) {
        self.base.scan(&mut |u, v, w| f(u, v, self.base_weight(w)));
        for &(u, v, w) in self.extra {
            f(u, v, self.extra_weight(w));
        }
    }

    /// Visits only the in-memory `extra` edges.
    pub fn scan_extra(&self, f: &mut dyn FnMut(NodeId, NodeId, u64)) {
        for &(u, v, w) in self.extra {
            f(u, v, self.extra_weight(w));
        }
    }

    /// The layer as an in-memory graph, built on first use.
    pub fn graph(&self) -> &Graph {
        if self.base_unit == 1 && self.extra.is_empty() && self.rounding.is_none() {
            if let Some(g) = self.base.as_graph() {
                return g;
            }
        }
        self.cache.get_or_init(|| {
            let mut edges = Vec::new();
            self.scan(&mut |u, v, w| edges.push((u, v, w)));
            Graph::from_edges_min(self.n(), edges)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_then_round() {
        let g = Graph::from_edges(3, [(0, 1, 3), (1, 2, 4)]).unwrap();
        let extra = [(0, 2, 10), (0, 1, 5)];
        // unit 2: base weights 6, 8; extra 10, 5; ρ = 3 rounds to 2, 3, 4, 2
        let layer = Layer::new(&g, 2, &extra, Some(Scale::new(3, 1)));
        let h = layer.graph();
        assert_eq!(h.weight(0, 1), Some(2));
        assert_eq!(h.weight(1, 2), Some(3));
        assert_eq!(h.weight(0, 2), Some(4));
        assert!(std::ptr::eq(Layer::plain(&g).graph(), &g));
    }
}
