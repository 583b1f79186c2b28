//! Criterion benchmarks for `tritangle-core`; see `benches/`.
