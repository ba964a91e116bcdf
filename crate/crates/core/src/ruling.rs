//! Deterministic (c, b·c)-ruling sets by bitwise beeping, b = a·⌈log2 n⌉.

use crate::arith::ceil_log2;
use crate::graph::{dijkstra_bounded, dijkstra_multi, Dist, Graph, NodeId, INF};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RulingError {
    #[error("node ID {id} does not fit in {bits} bits")]
    IdWidthExceeded { id: NodeId, bits: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RulingSetResult {
    pub members: Vec<NodeId>,
    pub c: Dist,
    pub bits: u32,
    /// b·c; equals a·c·⌈log2 n⌉.
    pub beta: Dist,
    pub rounds_used: u64,
}

/// Bits per ID: a·⌈log2 n⌉, at least 1.
pub fn id_bits(n: usize, a: u32) -> u32 {
    (a * ceil_log2(n.max(1) as u128)).max(1)
}

pub fn ruling_set(g: &Graph, u: &[NodeId], c: Dist, a: u32) -> Result<RulingSetResult, RulingError> {
    ruling_set_traced(g, u, c, a).map(|(r, _)| r)
}

/// Also returns T_j after every iteration j = 1..b.
pub fn ruling_set_traced(
    g: &Graph,
    u: &[NodeId],
    c: Dist,
    a: u32,
) -> Result<(RulingSetResult, Vec<Vec<NodeId>>), RulingError> {
    assert!(c >= 1 && a >= 1);
    let bits = id_bits(g.n(), a);
    let mut t: Vec<NodeId> = u.to_vec();
    t.sort_unstable();
    t.dedup();
    if let Some(&id) = t.iter().find(|&&id| bits < 64 && id as u64 >= 1u64 << bits) {
        return Err(RulingError::IdWidthExceeded { id, bits });
    }
    let mut trace = Vec::with_capacity(bits as usize);
    for j in 1..=bits {
        let shift = bits - j;
        let bit = |v: NodeId| (v as u64 >> shift) & 1;
        let zeros: Vec<NodeId> = t.iter().copied().filter(|&v| bit(v) == 0).collect();
        let heard = if zeros.is_empty() { vec![INF; g.n()] } else { dijkstra_multi(g, &zeros, c - 1).dist };
        t.retain(|&v| bit(v) == 0 || heard[v] == INF);
        trace.push(t.clone());
    }
    let result = RulingSetResult {
        members: t,
        c,
        bits,
        beta: bits as Dist * c,
        rounds_used: bits as u64 * (c - 1),
    };
    Ok((result, trace))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RulingCheck {
    /// Smallest distance between two members (∞ if fewer than two are connected).
    pub min_pair_distance: Dist,
    /// Largest distance from a node of U to its nearest member.
    pub max_coverage: Dist,
    pub pairwise_ok: bool,
    pub coverage_ok: bool,
}

/// Checks both ruling-set invariants exactly.
pub fn check_ruling(g: &Graph, u: &[NodeId], r: &RulingSetResult) -> RulingCheck {
    let mut min_pair = INF;
    for &x in &r.members {
        let d = dijkstra_bounded(g, x, r.c.saturating_sub(1)).dist;
        for &y in &r.members {
            if y != x && d[y] < min_pair {
                min_pair = d[y];
            }
        }
    }
    let cover = if r.members.is_empty() { vec![INF; g.n()] } else { dijkstra_multi(g, &r.members, INF).dist };
    let max_coverage = u.iter().map(|&v| cover[v]).max().unwrap_or(0);
    RulingCheck {
        min_pair_distance: min_pair,
        max_coverage,
        pairwise_ok: min_pair == INF || min_pair >= r.c,
        coverage_ok: max_coverage <= r.beta,
    }
}
