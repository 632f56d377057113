//! Seeded inputs shared by the benchmarks.

use walkmult_core::generators::{planted_random_graph, Fixture};

/// Vertex counts exercised by the size-scaling benchmarks.
pub const SIZES: [usize; 4] = [8, 12, 16, 24];

/// A planted-pair random graph with edge density 0.35.
pub fn planted(n: usize) -> Fixture {
    planted_random_graph(n, 0.35, n as u64).expect("valid planted graph parameters")
}
