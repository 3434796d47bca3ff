//! Criterion benchmarks for the subdivlab search kernels; see `benches/`.
