//! Criterion benchmarks for `xfermi-core`; see `benches/`.
