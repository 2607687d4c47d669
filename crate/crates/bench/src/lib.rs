//! Criterion benchmarks for `ordstat-core`; run with `cargo bench -p ordstat-bench`.
