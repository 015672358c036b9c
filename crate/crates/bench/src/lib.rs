//! Criterion benchmarks for the generator; see `benches/generator.rs`.
