//! Criterion benchmarks for `ncdomain-core`; see `benches/kernels.rs`.
