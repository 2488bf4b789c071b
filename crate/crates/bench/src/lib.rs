//! Criterion benchmarks for qcm-core; see `benches/`.
