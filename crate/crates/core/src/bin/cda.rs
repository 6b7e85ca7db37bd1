use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cda_core::checker::{check_logs, CheckOptions, CompareMode};
use cda_core::engine::EngineKind;
use cda_core::logio::{parse_order_book, parse_trade_book, write_order_book, write_trade_book};
use cda_core::toolkit::bench::{run_bench, write_csv, BenchCorpus};
use cda_core::toolkit::generator::{fraction_to_ppm, gen_book, GenParams};
use cda_core::toolkit::sort::sort_via_cda;

#[derive(Parser)]
#[command(name = "cda", version, about = "Continuous double auction engine and trade-log checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay an order book and compare against a trade book.
    Check {
        #[arg(long)]
        orders: PathBuf,
        #[arg(long)]
        trades: PathBuf,
        #[arg(long, default_value = "set")]
        mode: CompareMode,
        #[arg(long)]
        fail_fast: bool,
        #[arg(long, default_value = "tree")]
        engine: EngineKind,
    },
    /// Replay an order book and write the trade book it produces.
    Run {
        #[arg(long)]
        orders: PathBuf,
        #[arg(long, default_value = "tree")]
        engine: EngineKind,
        #[arg(long)]
        trades_out: Option<PathBuf>,
    },
    /// Generate a random structured order book.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 9000)]
        price_lo: u64,
        #[arg(long, default_value_t = 11000)]
        price_hi: u64,
        #[arg(long, default_value_t = 1)]
        qty_lo: u64,
        #[arg(long, default_value_t = 100)]
        qty_hi: u64,
        #[arg(long, default_value_t = 0.1)]
        delete_fraction: f64,
        #[arg(long, default_value_t = 0.45)]
        buy_fraction: f64,
        #[arg(long, default_value_t = 0.0)]
        update_fraction: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time both engines over growing books and print a CSV table.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "tree,list")]
        engines: Vec<EngineKind>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "random")]
        corpus: BenchCorpus,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
    /// Sort distinct positive integers descending by running an auction.
    Sortdemo {
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<u64>,
    },
}

fn open_input(path: &Path) -> io::Result<Box<dyn Read>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(io::stdin().lock()))
    } else {
        Ok(Box::new(File::open(path)?))
    }
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(Box::new(BufWriter::new(File::create(p)?))),
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn ppm(flag: &str, f: f64) -> Result<u32, String> {
    fraction_to_ppm(f).ok_or_else(|| format!("--{flag} must lie in [0, 1], got {f}"))
}

// Ok(true) means "conforming" for check; every other command returns true.
fn execute(cmd: Command) -> Result<bool, String> {
    let show = |p: &Path, e: &dyn std::fmt::Display| format!("{}: {e}", p.display());
    match cmd {
        Command::Check {
            orders,
            trades,
            mode,
            fail_fast,
            engine,
        } => {
            let book = open_input(&orders)
                .map_err(|e| show(&orders, &e))
                .and_then(|r| parse_order_book(BufReader::new(r)).map_err(|e| show(&orders, &e)))?;
            let trade_book = open_input(&trades)
                .map_err(|e| show(&trades, &e))
                .and_then(|r| parse_trade_book(BufReader::new(r)).map_err(|e| show(&trades, &e)))?;
            let opts = CheckOptions {
                mode,
                engine,
                fail_fast,
            };
            let report = check_logs(&book, &trade_book, opts).map_err(|e| show(&orders, &e))?;
            let mut out = io::stdout().lock();
            for entry in &report.entries {
                writeln!(out, "{entry}").map_err(|e| e.to_string())?;
            }
            Ok(report.is_conforming())
        }
        Command::Run {
            orders,
            engine,
            trades_out,
        } => {
            let book = open_input(&orders)
                .map_err(|e| show(&orders, &e))
                .and_then(|r| parse_order_book(BufReader::new(r)).map_err(|e| show(&orders, &e)))?;
            let matchings = engine.run_book(&book).map_err(|e| show(&orders, &e))?;
            let out = open_output(trades_out.as_deref()).map_err(|e| e.to_string())?;
            write_trade_book(&matchings, out).map_err(|e| e.to_string())?;
            Ok(true)
        }
        Command::Gen {
            n,
            seed,
            price_lo,
            price_hi,
            qty_lo,
            qty_hi,
            delete_fraction,
            buy_fraction,
            update_fraction,
            out,
        } => {
            let params = GenParams {
                n,
                seed,
                price_range: (price_lo, price_hi),
                qty_range: (qty_lo, qty_hi),
                delete_ppm: ppm("delete-fraction", delete_fraction)?,
                buy_ppm: ppm("buy-fraction", buy_fraction)?,
                update_ppm: ppm("update-fraction", update_fraction)?,
            };
            let book = gen_book(&params).map_err(|e| e.to_string())?;
            let out = open_output(out.as_deref()).map_err(|e| e.to_string())?;
            write_order_book(&book, out).map_err(|e| e.to_string())?;
            Ok(true)
        }
        Command::Bench {
            sizes,
            engines,
            seed,
            corpus,
            repeats,
        } => {
            let rows = run_bench(&sizes, &engines, seed, corpus, repeats);
            write_csv(&rows, io::stdout().lock()).map_err(|e| e.to_string())?;
            Ok(true)
        }
        Command::Sortdemo { values } => {
            let sorted = sort_via_cda(&values).map_err(|e| e.to_string())?;
            let text: Vec<String> = sorted.iter().map(u64::to_string).collect();
            println!("{}", text.join(","));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
