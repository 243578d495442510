//! Criterion benchmarks for `abideal-core`; see `benches/`.
