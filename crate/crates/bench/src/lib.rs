//! Criterion benchmarks for sstkit live in `benches/`.
