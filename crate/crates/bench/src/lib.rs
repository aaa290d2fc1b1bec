//! Benchmark-only crate; the benchmarks live in `benches/`.

pub use phin_core;
