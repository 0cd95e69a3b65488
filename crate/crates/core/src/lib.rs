//! Adaptive-schedule (r, p)-divisions of sparse graphs, balanced separators,
//! and negative-weight single-source shortest paths that consume them.

pub mod graph;
pub mod separator;
pub mod division;
pub mod sssp;
pub mod cli;
