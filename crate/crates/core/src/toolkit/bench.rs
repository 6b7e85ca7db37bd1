//! Wall-clock scaling comparison of the two engines.
//!
//! Timings are machine-bound; the column worth reading is `ratio_10x`,
//! the time at `n` divided by the time at `n / 10` for the same engine
//! (blank when `n / 10` was not measured). Linearithmic growth lands a bit
//! above 10, quadratic growth near 100.

use std::io::{self, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::engine::EngineKind;
use crate::logio::OrderBook;
use crate::toolkit::generator::{adversarial_book, gen_book, GenParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BenchCorpus {
    /// Generator defaults at the given seed.
    #[default]
    Random,
    /// Strictly falling bids; worst case for the list engine.
    Adversarial,
}

impl BenchCorpus {
    pub fn name(self) -> &'static str {
        match self {
            BenchCorpus::Random => "random",
            BenchCorpus::Adversarial => "adversarial",
        }
    }

    pub fn book(self, n: usize, seed: u64) -> OrderBook {
        match self {
            BenchCorpus::Random => gen_book(&GenParams {
                n,
                seed,
                ..Default::default()
            })
            .expect("default generator parameters are valid"),
            BenchCorpus::Adversarial => adversarial_book(n),
        }
    }
}

impl FromStr for BenchCorpus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(BenchCorpus::Random),
            "adversarial" => Ok(BenchCorpus::Adversarial),
            other => Err(format!("unknown corpus `{other}` (expected random or adversarial)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub engine: EngineKind,
    pub corpus: BenchCorpus,
    pub seconds: f64,
    pub ratio_10x: Option<f64>,
}

pub const CSV_HEADER: &str = "n,engine,corpus,seconds,ratio_10x";

/// Time for one full `run_book`, structure check included.
pub fn time_book(engine: EngineKind, book: &OrderBook) -> Duration {
    let start = Instant::now();
    let out = engine.run_book(book);
    let elapsed = start.elapsed();
    std::hint::black_box(out.expect("benchmark books are structured"));
    elapsed
}

/// Fastest of `repeats` runs.
pub fn best_of(engine: EngineKind, book: &OrderBook, repeats: usize) -> Duration {
    (0..repeats.max(1))
        .map(|_| time_book(engine, book))
        .min()
        .expect("at least one run")
}

pub fn run_bench(
    sizes: &[usize],
    engines: &[EngineKind],
    seed: u64,
    corpus: BenchCorpus,
    repeats: usize,
) -> Vec<BenchRow> {
    let mut rows: Vec<BenchRow> = Vec::new();
    for &n in sizes {
        let book = corpus.book(n, seed);
        for &engine in engines {
            let seconds = best_of(engine, &book, repeats).as_secs_f64();
            rows.push(BenchRow {
                n,
                engine,
                corpus,
                seconds,
                ratio_10x: None,
            });
        }
    }
    fill_ratios(&mut rows);
    rows
}

fn fill_ratios(rows: &mut [BenchRow]) {
    for i in 0..rows.len() {
        let (n, engine) = (rows[i].n, rows[i].engine);
        if n % 10 != 0 {
            continue;
        }
        let base = rows
            .iter()
            .find(|r| r.engine == engine && r.n == n / 10 && r.seconds > 0.0)
            .map(|r| r.seconds);
        rows[i].ratio_10x = base.map(|b| rows[i].seconds / b);
    }
}

pub fn write_csv<W: Write>(rows: &[BenchRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let ratio = r.ratio_10x.map(|x| format!("{x:.2}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{:.6},{}",
            r.n,
            r.engine,
            r.corpus.name(),
            r.seconds,
            ratio
        )?;
    }
    out.flush()
}
