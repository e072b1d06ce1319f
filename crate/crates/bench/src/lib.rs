//! Benchmarks for the distance and bound routines; see `benches/`.
