//! Text formats for order books and trade books, plus the structure check
//! every replayed order book must pass.
//!
//! Order book, one instruction per line:
//!
//! ```text
//! BUY,<id>,<timestamp>,<price>,<qty>
//! SELL,<id>,<timestamp>,<price>,<qty>
//! DEL,<id>,<timestamp>
//! ```
//!
//! Trade book, one transaction per line, grouped by 1-based step index
//! with steps in increasing order. Steps that traded nothing are omitted:
//!
//! ```text
//! <step>,<bid_id>,<ask_id>,<qty>
//! ```
//!
//! Fields are unsigned decimal integers (prices in cents). Blank lines are
//! ignored on input and a trailing CR is tolerated.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::order::{Instruction, Matching, Order, OrderId, Transaction};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderBook {
    pub instructions: Vec<Instruction>,
}

impl OrderBook {
    pub fn new(instructions: Vec<Instruction>) -> Self {
        OrderBook { instructions }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }
}

/// Nonempty matchings keyed by their 1-based step index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TradeBook {
    pub steps: Vec<(usize, Matching)>,
}

impl TradeBook {
    /// Keeps only the steps that traded.
    pub fn from_matchings(matchings: &[Matching]) -> Self {
        TradeBook {
            steps: matchings
                .iter()
                .enumerate()
                .filter(|(_, m)| !m.is_empty())
                .map(|(i, m)| (i + 1, m.clone()))
                .collect(),
        }
    }

    pub fn transaction_count(&self) -> usize {
        self.steps.iter().map(|(_, m)| m.len()).sum()
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("read failed: {0}")]
    Io(#[from] io::Error),
}

impl ParseError {
    fn at(line: usize, reason: impl Into<String>) -> Self {
        ParseError::Malformed {
            line,
            reason: reason.into(),
        }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Malformed { line, .. } => Some(*line),
            ParseError::Io(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureRule {
    /// Timestamps must strictly increase, deletes included.
    NonIncreasingTimestamp,
    /// A Buy/Sell id repeats without the immediately preceding instruction
    /// being a delete of that id.
    DuplicateId(OrderId),
    /// Zero id, timestamp or quantity.
    MalformedOrder,
}

/// First offending line (1-based) of a book that is not structured.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub struct StructureViolation {
    pub line: usize,
    pub rule: StructureRule,
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            StructureRule::NonIncreasingTimestamp => {
                write!(f, "timestamp does not increase at line {}", self.line)
            }
            StructureRule::DuplicateId(id) => write!(f, "duplicate id {id} at line {}", self.line),
            StructureRule::MalformedOrder => {
                write!(f, "zero id, timestamp or qty at line {}", self.line)
            }
        }
    }
}

/// Checks that timestamps strictly increase and that Buy/Sell ids are
/// distinct, except that an id may be reused right after a delete of it.
pub fn validate_structured(book: &OrderBook) -> Result<(), StructureViolation> {
    let mut seen: HashSet<OrderId> = HashSet::with_capacity(book.len());
    let mut prev: Option<&Instruction> = None;
    for (idx, instr) in book.instructions.iter().enumerate() {
        let line = idx + 1;
        let fail = |rule| Err(StructureViolation { line, rule });
        if instr.id() == 0 || instr.timestamp() == 0 {
            return fail(StructureRule::MalformedOrder);
        }
        if prev.is_some_and(|p| p.timestamp() >= instr.timestamp()) {
            return fail(StructureRule::NonIncreasingTimestamp);
        }
        if let Some(order) = instr.order() {
            if order.qty == 0 {
                return fail(StructureRule::MalformedOrder);
            }
            let reuse_after_delete =
                prev.is_some_and(|p| p.is_delete() && p.id() == order.id);
            if !seen.insert(order.id) && !reuse_after_delete {
                return fail(StructureRule::DuplicateId(order.id));
            }
        }
        prev = Some(instr);
    }
    Ok(())
}

fn parse_uint(field: &str, name: &str, line: usize) -> Result<u64, ParseError> {
    if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::at(line, format!("{name} must be a non-negative integer, got `{field}`")));
    }
    field
        .parse()
        .map_err(|_| ParseError::at(line, format!("{name} out of range: `{field}`")))
}

fn parse_positive(field: &str, name: &str, line: usize) -> Result<u64, ParseError> {
    let v = parse_uint(field, name, line)?;
    if v == 0 {
        return Err(ParseError::at(line, format!("{name} must be positive")));
    }
    Ok(v)
}

// Yields (1-based line number, line text) for every non-blank line.
fn lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String), ParseError>> {
    reader
        .split(b'\n')
        .enumerate()
        .filter_map(|(idx, raw)| {
            let line = idx + 1;
            let raw = match raw {
                Ok(r) => r,
                Err(e) => return Some(Err(ParseError::Io(e))),
            };
            let text = match String::from_utf8(raw) {
                Ok(t) => t,
                Err(_) => return Some(Err(ParseError::at(line, "not valid UTF-8"))),
            };
            let text = text.strip_suffix('\r').unwrap_or(&text).to_string();
            if text.trim().is_empty() {
                None
            } else {
                Some(Ok((line, text)))
            }
        })
}

fn parse_instruction(text: &str, line: usize) -> Result<Instruction, ParseError> {
    let fields: Vec<&str> = text.split(',').collect();
    match fields[0] {
        cmd @ ("BUY" | "SELL") => {
            if fields.len() != 5 {
                return Err(ParseError::at(
                    line,
                    format!("{cmd} expects 5 fields, got {}", fields.len()),
                ));
            }
            let order = Order::new(
                parse_positive(fields[1], "id", line)?,
                parse_positive(fields[2], "timestamp", line)?,
                parse_uint(fields[3], "price", line)?,
                parse_positive(fields[4], "qty", line)?,
            );
            Ok(if cmd == "BUY" {
                Instruction::Buy(order)
            } else {
                Instruction::Sell(order)
            })
        }
        "DEL" => {
            if fields.len() != 3 {
                return Err(ParseError::at(
                    line,
                    format!("DEL expects 3 fields, got {}", fields.len()),
                ));
            }
            Ok(Instruction::Delete {
                id: parse_positive(fields[1], "id", line)?,
                timestamp: parse_positive(fields[2], "timestamp", line)?,
            })
        }
        other => Err(ParseError::at(line, format!("unknown command `{other}`"))),
    }
}

pub fn parse_order_book<R: BufRead>(reader: R) -> Result<OrderBook, ParseError> {
    let mut instructions = Vec::new();
    for item in lines(reader) {
        let (line, text) = item?;
        instructions.push(parse_instruction(&text, line)?);
    }
    Ok(OrderBook { instructions })
}

pub fn parse_order_book_str(text: &str) -> Result<OrderBook, ParseError> {
    parse_order_book(text.as_bytes())
}

pub fn write_instruction<W: Write>(out: &mut W, instr: &Instruction) -> io::Result<()> {
    match instr {
        Instruction::Buy(o) => writeln!(out, "BUY,{},{},{},{}", o.id, o.timestamp, o.price, o.qty),
        Instruction::Sell(o) => writeln!(out, "SELL,{},{},{},{}", o.id, o.timestamp, o.price, o.qty),
        Instruction::Delete { id, timestamp } => writeln!(out, "DEL,{id},{timestamp}"),
    }
}

pub fn write_order_book<W: Write>(book: &OrderBook, mut out: W) -> io::Result<()> {
    for instr in &book.instructions {
        write_instruction(&mut out, instr)?;
    }
    out.flush()
}

/// Writes every nonempty step of `matchings`, numbering steps from 1.
pub fn write_trade_book<W: Write>(matchings: &[Matching], mut out: W) -> io::Result<()> {
    for (idx, m) in matchings.iter().enumerate() {
        for tx in m {
            writeln!(out, "{},{},{},{}", idx + 1, tx.bid_id, tx.ask_id, tx.qty)?;
        }
    }
    out.flush()
}

/// Writes an already-grouped trade book.
pub fn write_trade_steps<W: Write>(book: &TradeBook, mut out: W) -> io::Result<()> {
    for (step, m) in &book.steps {
        for tx in m {
            writeln!(out, "{},{},{},{}", step, tx.bid_id, tx.ask_id, tx.qty)?;
        }
    }
    out.flush()
}

pub fn parse_trade_book<R: BufRead>(reader: R) -> Result<TradeBook, ParseError> {
    let mut steps: Vec<(usize, Matching)> = Vec::new();
    for item in lines(reader) {
        let (line, text) = item?;
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 4 {
            return Err(ParseError::at(
                line,
                format!("trade line expects 4 fields, got {}", fields.len()),
            ));
        }
        let step = usize::try_from(parse_positive(fields[0], "step", line)?)
            .map_err(|_| ParseError::at(line, "step out of range"))?;
        let tx = Transaction::new(
            parse_positive(fields[1], "bid id", line)?,
            parse_positive(fields[2], "ask id", line)?,
            parse_positive(fields[3], "qty", line)?,
        );
        match steps.last_mut() {
            Some((last, m)) if *last == step => m.push(tx),
            Some((last, _)) if *last > step => {
                return Err(ParseError::at(line, "step indices must increase"));
            }
            _ => steps.push((step, vec![tx])),
        }
    }
    Ok(TradeBook { steps })
}

pub fn parse_trade_book_str(text: &str) -> Result<TradeBook, ParseError> {
    parse_trade_book(text.as_bytes())
}
