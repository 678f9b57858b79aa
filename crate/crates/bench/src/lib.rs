//! Benchmarks live in `benches/`; run them with `cargo bench -p ll1kit-bench`.
