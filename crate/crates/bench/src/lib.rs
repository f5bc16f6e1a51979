//! Criterion benchmarks for the `muntz` kernels; see `benches/`.
