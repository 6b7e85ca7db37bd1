//! Supporting tools: a seeded book generator, the engine-based sort, and
//! the scaling benchmark.

pub mod bench;
pub mod generator;
pub mod sort;

pub use bench::{run_bench, write_csv, BenchCorpus, BenchRow};
pub use generator::{adversarial_book, gen_book, GenParams};
pub use sort::sort_via_cda;
