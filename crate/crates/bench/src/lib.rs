//! Criterion benchmarks for the offline solver and simulator live in `benches/`.
