//! Growth of both engines over tenfold size steps, as CSV.
//!
//! cargo run --release --example scaling_bench

use cda_core::engine::EngineKind;
use cda_core::toolkit::bench::{run_bench, write_csv, BenchCorpus};

fn main() {
    let tree = run_bench(&[20_000, 200_000], &[EngineKind::Tree], 1, BenchCorpus::Random, 3);
    let list = run_bench(&[1_000, 10_000], &[EngineKind::List], 1, BenchCorpus::Adversarial, 3);
    let rows: Vec<_> = tree.into_iter().chain(list).collect();
    write_csv(&rows, std::io::stdout().lock()).unwrap();
}
