//! Benchmarks for the koszulkit engine live in `benches/`.
