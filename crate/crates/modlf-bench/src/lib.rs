//! Benchmark helper crate; see benches/pipeline.rs.
