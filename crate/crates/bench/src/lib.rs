//! Benchmark-only crate; see `benches/snr.rs`.
