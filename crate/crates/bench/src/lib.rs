//! Criterion benchmarks for `dome-core`; see `benches/`.
