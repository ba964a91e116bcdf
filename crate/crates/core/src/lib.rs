//! Deterministic (1+ε)-approximate single-source shortest paths through hop
//! sets, with cost accounting for the CONGEST, congested clique and
//! semi-streaming models.

pub mod altmodels;
pub mod arith;
pub mod clusters;
pub mod detection;
pub mod engine;
pub mod graph;
pub mod hopset;
pub mod layer;
pub mod overlay;
pub mod par;
pub mod ruling;
pub mod simharness;
