//! Benchmark-only crate; the measurement targets live in `benches/`.
