//! Benchmarks for the discres kernels live in `benches/`.
