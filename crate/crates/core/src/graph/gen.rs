//! Seeded graph generators.
//!
//! Spec strings: `path:n[,W,seed]`, `grid:r,c[,W,seed]`, `random:n,m,W,seed`
//! (connected: random spanning tree plus extra edges), `gnm:n,m,W,seed`
//! (uniform, possibly disconnected), `star:n[,W,seed]`, `complete:n[,W,seed]`.
//! Weights are uniform in 1..=W; W = 1 gives unit weights.

use super::{Graph, NodeId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

/// Name of the PRNG behind every generator, recorded in reports.
pub const PRNG: &str = "ChaCha8Rng";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad generator spec {spec:?}: {reason}")]
pub struct GenError {
    pub spec: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    Path { n: usize, w: u64, seed: u64 },
    Grid { rows: usize, cols: usize, w: u64, seed: u64 },
    Random { n: usize, m: usize, w: u64, seed: u64 },
    Gnm { n: usize, m: usize, w: u64, seed: u64 },
    Star { n: usize, w: u64, seed: u64 },
    Complete { n: usize, w: u64, seed: u64 },
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorSpec::Path { n, w, seed } => write!(f, "path:{n},{w},{seed}"),
            GeneratorSpec::Grid { rows, cols, w, seed } => write!(f, "grid:{rows},{cols},{w},{seed}"),
            GeneratorSpec::Random { n, m, w, seed } => write!(f, "random:{n},{m},{w},{seed}"),
            GeneratorSpec::Gnm { n, m, w, seed } => write!(f, "gnm:{n},{m},{w},{seed}"),
            GeneratorSpec::Star { n, w, seed } => write!(f, "star:{n},{w},{seed}"),
            GeneratorSpec::Complete { n, w, seed } => write!(f, "complete:{n},{w},{seed}"),
        }
    }
}

impl GeneratorSpec {
    pub fn parse(spec: &str) -> Result<GeneratorSpec, GenError> {
        let bad = |reason: &str| GenError { spec: spec.to_string(), reason: reason.to_string() };
        let (kind, rest) = spec.split_once(':').ok_or_else(|| bad("expected kind:args"))?;
        let args: Vec<u64> = rest
            .split(',')
            .map(|a| a.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("arguments must be non-negative integers"))?;
        let opt = |i: usize, default: u64| args.get(i).copied().unwrap_or(default);
        let need = |lo: usize, hi: usize| {
            if args.len() < lo || args.len() > hi {
                Err(bad(&format!("expected {lo}..={hi} arguments")))
            } else {
                Ok(())
            }
        };
        let parsed = match kind {
            "path" => {
                need(1, 3)?;
                GeneratorSpec::Path { n: args[0] as usize, w: opt(1, 1), seed: opt(2, 0) }
            }
            "grid" => {
                need(2, 4)?;
                GeneratorSpec::Grid { rows: args[0] as usize, cols: args[1] as usize, w: opt(2, 1), seed: opt(3, 0) }
            }
            "random" | "gnm" => {
                need(4, 4)?;
                let (n, m, w, seed) = (args[0] as usize, args[1] as usize, args[2], args[3]);
                if kind == "random" {
                    GeneratorSpec::Random { n, m, w, seed }
                } else {
                    GeneratorSpec::Gnm { n, m, w, seed }
                }
            }
            "star" => {
                need(1, 3)?;
                GeneratorSpec::Star { n: args[0] as usize, w: opt(1, 1), seed: opt(2, 0) }
            }
            "complete" => {
                need(1, 3)?;
                GeneratorSpec::Complete { n: args[0] as usize, w: opt(1, 1), seed: opt(2, 0) }
            }
            _ => return Err(bad("unknown kind")),
        };
        parsed.validate().map_err(|r| bad(&r))?;
        Ok(parsed)
    }

    fn validate(&self) -> Result<(), String> {
        let (n, w) = match *self {
            GeneratorSpec::Path { n, w, .. }
            | GeneratorSpec::Star { n, w, .. }
            | GeneratorSpec::Complete { n, w, .. } => (n, w),
            GeneratorSpec::Grid { rows, cols, w, .. } => (rows * cols, w),
            GeneratorSpec::Random { n, m, w, .. } | GeneratorSpec::Gnm { n, m, w, .. } => {
                let max = n * n.saturating_sub(1) / 2;
                if m > max {
                    return Err(format!("m={m} exceeds {max} possible edges"));
                }
                if matches!(self, GeneratorSpec::Random { .. }) && n > 0 && m + 1 < n {
                    return Err(format!("a connected graph on {n} nodes needs m ≥ {}", n - 1));
                }
                (n, w)
            }
        };
        if n == 0 {
            return Err("n must be positive".into());
        }
        if w == 0 {
            return Err("W must be positive".into());
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match *self {
            GeneratorSpec::Path { n, .. }
            | GeneratorSpec::Star { n, .. }
            | GeneratorSpec::Complete { n, .. }
            | GeneratorSpec::Random { n, .. }
            | GeneratorSpec::Gnm { n, .. } => n,
            GeneratorSpec::Grid { rows, cols, .. } => rows * cols,
        }
    }

    /// The same family at about `n` nodes (grids stay near-square,
    /// random graphs keep their average degree).
    pub fn resized(&self, n: usize) -> GeneratorSpec {
        match *self {
            GeneratorSpec::Path { w, seed, .. } => GeneratorSpec::Path { n, w, seed },
            GeneratorSpec::Star { w, seed, .. } => GeneratorSpec::Star { n, w, seed },
            GeneratorSpec::Complete { w, seed, .. } => GeneratorSpec::Complete { n, w, seed },
            GeneratorSpec::Grid { w, seed, .. } => {
                let rows = (crate::arith::ceil_sqrt(n as u128) as usize).max(1);
                GeneratorSpec::Grid { rows, cols: n.div_ceil(rows), w, seed }
            }
            GeneratorSpec::Random { n: n0, m, w, seed } => {
                let m = (m * n / n0.max(1)).max(n.saturating_sub(1)).min(n * n.saturating_sub(1) / 2);
                GeneratorSpec::Random { n, m, w, seed }
            }
            GeneratorSpec::Gnm { n: n0, m, w, seed } => {
                GeneratorSpec::Gnm { n, m: (m * n / n0.max(1)).min(n * n.saturating_sub(1) / 2), w, seed }
            }
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            GeneratorSpec::Path { seed, .. }
            | GeneratorSpec::Grid { seed, .. }
            | GeneratorSpec::Random { seed, .. }
            | GeneratorSpec::Gnm { seed, .. }
            | GeneratorSpec::Star { seed, .. }
            | GeneratorSpec::Complete { seed, .. } => seed,
        }
    }

    pub fn build(&self) -> Result<Graph, GenError> {
        self.validate().map_err(|reason| GenError { spec: self.to_string(), reason })?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed());
        let mut weight = |w: u64| if w == 1 { 1 } else { rng.gen_range(1..=w) };
        let mut edges: Vec<(NodeId, NodeId, u64)> = Vec::new();
        let bound = match *self {
            GeneratorSpec::Path { n, w, .. } => {
                edges.extend((1..n).map(|v| (v - 1, v, weight(w))));
                w
            }
            GeneratorSpec::Star { n, w, .. } => {
                edges.extend((1..n).map(|v| (0, v, weight(w))));
                w
            }
            GeneratorSpec::Complete { n, w, .. } => {
                for u in 0..n {
                    for v in u + 1..n {
                        edges.push((u, v, weight(w)));
                    }
                }
                w
            }
            GeneratorSpec::Grid { rows, cols, w, .. } => {
                for r in 0..rows {
                    for c in 0..cols {
                        let u = r * cols + c;
                        if c + 1 < cols {
                            edges.push((u, u + 1, weight(w)));
                        }
                        if r + 1 < rows {
                            edges.push((u, u + cols, weight(w)));
                        }
                    }
                }
                w
            }
            GeneratorSpec::Random { n, m, w, .. } | GeneratorSpec::Gnm { n, m, w, .. } => {
                let connected = matches!(self, GeneratorSpec::Random { .. });
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed());
                let mut seen = HashSet::new();
                let mut pairs = Vec::with_capacity(m);
                if connected {
                    let mut order: Vec<NodeId> = (0..n).collect();
                    order.shuffle(&mut rng);
                    for i in 1..n {
                        let j = rng.gen_range(0..i);
                        let (u, v) = (order[i].min(order[j]), order[i].max(order[j]));
                        seen.insert((u, v));
                        pairs.push((u, v));
                    }
                }
                while pairs.len() < m {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u != v && seen.insert((u.min(v), u.max(v))) {
                        pairs.push((u.min(v), u.max(v)));
                    }
                }
                edges.extend(pairs.into_iter().map(|(u, v)| (u, v, if w == 1 { 1 } else { rng.gen_range(1..=w) })));
                w
            }
        };
        Ok(Graph::new(self.n(), bound, edges).expect("generator produced an invalid graph"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build() {
        let g = GeneratorSpec::parse("path:16").unwrap().build().unwrap();
        assert_eq!((g.n(), g.m()), (16, 15));
        let g = GeneratorSpec::parse("grid:3,4").unwrap().build().unwrap();
        assert_eq!((g.n(), g.m()), (12, 17));
        let spec = GeneratorSpec::parse("random:64,200,8,1").unwrap();
        let g = spec.build().unwrap();
        assert_eq!((g.n(), g.m()), (64, 200));
        assert!(g.is_connected());
        assert!(g.max_weight() <= 8);
        assert_eq!(g, spec.build().unwrap());
        assert_eq!(GeneratorSpec::parse(&spec.to_string()).unwrap(), spec);
        let k = GeneratorSpec::parse("complete:5").unwrap().build().unwrap();
        assert_eq!(k.m(), 10);
    }

    #[test]
    fn rejects_nonsense() {
        for s in ["path", "path:0", "grid:3", "random:5,2,1,0", "gnm:4,7,1,0", "tree:5", "path:4,0", "path:a"] {
            assert!(GeneratorSpec::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn resizing_keeps_family() {
        let spec = GeneratorSpec::parse("random:64,128,4,3").unwrap();
        let big = spec.resized(256);
        assert_eq!(big, GeneratorSpec::Random { n: 256, m: 512, w: 4, seed: 3 });
        let grid = GeneratorSpec::parse("grid:8,8").unwrap().resized(128);
        assert!(grid.n() >= 128);
    }
}
