//! Criterion benchmarks for `icsaead`. See `benches/aead.rs`; run with
//! `cargo bench -p icsaead-bench`.
