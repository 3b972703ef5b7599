//! Benchmark-only crate; see `benches/sdap.rs`.
