//! Benchmarks live in `benches/`; see `queries.rs`.
