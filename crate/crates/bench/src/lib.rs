//! Benchmarks for the construction and search paths. See `benches/`.
