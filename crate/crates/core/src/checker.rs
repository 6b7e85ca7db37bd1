//! Trade-log audit: replay an order book and compare what the engine
//! produces with what an exchange reported. Since the matching at every
//! step is uniquely determined by the market rules, any difference means
//! the exchange broke one of them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::engine::{EngineError, EngineKind};
use crate::logio::{OrderBook, TradeBook};
use crate::order::{canonical_set, Matching, Transaction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompareMode {
    /// Within-step transaction order is ignored.
    #[default]
    Set,
    /// Transactions must appear in generation order.
    Ordered,
}

impl FromStr for CompareMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "set" => Ok(CompareMode::Set),
            "ordered" => Ok(CompareMode::Ordered),
            other => Err(format!("unknown mode `{other}` (expected set or ordered)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchKind {
    /// The engine traded at this step; the trade book has nothing.
    MissingStep,
    /// The trade book has trades at a step where the engine traded nothing.
    ExtraStep,
    DifferentTransactions,
}

impl fmt::Display for MismatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MismatchKind::MissingStep => "missing-step",
            MismatchKind::ExtraStep => "extra-step",
            MismatchKind::DifferentTransactions => "different-transactions",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub step: usize,
    pub expected: Matching,
    pub found: Matching,
    pub kind: MismatchKind,
}

fn render(m: &[Transaction]) -> String {
    let parts: Vec<String> = m.iter().map(|t| t.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {}: {} expected={} found={}",
            self.step,
            self.kind,
            render(&self.expected),
            render(&self.found)
        )
    }
}

/// Mismatches sorted by step; empty when the logs conform.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MismatchReport {
    pub entries: Vec<Mismatch>,
}

impl MismatchReport {
    pub fn is_conforming(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn steps(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckOptions {
    pub mode: CompareMode,
    pub engine: EngineKind,
    pub fail_fast: bool,
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn same(mode: CompareMode, a: &[Transaction], b: &[Transaction]) -> bool {
    match mode {
        CompareMode::Ordered => a == b,
        CompareMode::Set => a.len() == b.len() && canonical_set(a) == canonical_set(b),
    }
}

/// Compares precomputed engine matchings (step k at index k-1) against a
/// trade book.
pub fn compare(
    expected: &[Matching],
    trades: &TradeBook,
    mode: CompareMode,
    fail_fast: bool,
) -> MismatchReport {
    let mut found: BTreeMap<usize, &Matching> = BTreeMap::new();
    for (step, m) in &trades.steps {
        found.insert(*step, m);
    }
    let mut entries = Vec::new();
    let push = |e: Mismatch, entries: &mut Vec<Mismatch>| {
        entries.push(e);
        fail_fast
    };

    for (idx, exp) in expected.iter().enumerate() {
        let step = idx + 1;
        let got = found.remove(&step);
        let entry = match (exp.is_empty(), got) {
            (true, None) => None,
            (false, None) => Some(MismatchKind::MissingStep),
            (true, Some(g)) if !g.is_empty() => Some(MismatchKind::ExtraStep),
            (true, Some(_)) => None,
            (false, Some(g)) if same(mode, exp, g) => None,
            (false, Some(_)) => Some(MismatchKind::DifferentTransactions),
        };
        if let Some(kind) = entry {
            let m = Mismatch {
                step,
                expected: exp.clone(),
                found: got.cloned().unwrap_or_default(),
                kind,
            };
            if push(m, &mut entries) {
                return MismatchReport { entries };
            }
        }
    }
    // Trades reported past the end of the order book.
    for (step, g) in found {
        let m = Mismatch {
            step,
            expected: Vec::new(),
            found: g.clone(),
            kind: MismatchKind::ExtraStep,
        };
        if push(m, &mut entries) {
            break;
        }
    }
    MismatchReport { entries }
}

/// Replays a structured order book and reports every step where the trade
/// book disagrees with the engine.
pub fn check_logs(
    orders: &OrderBook,
    trades: &TradeBook,
    opts: CheckOptions,
) -> Result<MismatchReport, CheckError> {
    let expected = opts.engine.run_book(orders)?;
    Ok(compare(&expected, trades, opts.mode, opts.fail_fast))
}
