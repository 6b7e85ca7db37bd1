//! Tree-backed matching engine. Each side of the book is a [`DualBook`], so
//! inserts, deletes by id and best-order extraction all cost O(log n), and
//! a whole order book of n instructions runs in O(n log n).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dualbook::{BookError, DualBook};
use crate::logio::{validate_structured, OrderBook, StructureViolation};
use crate::order::{Instruction, Matching, Order, OrderId, Side, Transaction};
use crate::rbtree::OpStats;
use crate::reference::ListEngine;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Book(#[from] BookError),
    #[error("malformed order {0}: id, timestamp and qty must be positive")]
    InvalidOrder(Order),
    #[error("order book is not structured: {0}")]
    NotStructured(#[from] StructureViolation),
}

/// Common surface of the tree engine and the list reference engine, so
/// that the checker, the benchmarks and the property audit can drive
/// either one.
pub trait MatchingEngine {
    fn process(&mut self, instr: &Instruction) -> Result<Matching, EngineError>;

    /// Resident bids, most competitive first.
    fn resident_bids(&self) -> Vec<Order>;

    /// Resident asks, most competitive first.
    fn resident_asks(&self) -> Vec<Order>;
}

/// Which engine replays a book.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineKind {
    #[default]
    Tree,
    List,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Tree => "tree",
            EngineKind::List => "list",
        }
    }

    /// Runs a structured book through the selected engine.
    pub fn run_book(self, book: &OrderBook) -> Result<Vec<Matching>, EngineError> {
        match self {
            EngineKind::Tree => run_book(book),
            EngineKind::List => crate::reference::ref_run_book(book),
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tree" => Ok(EngineKind::Tree),
            "list" => Ok(EngineKind::List),
            other => Err(format!("unknown engine `{other}` (expected tree or list)")),
        }
    }
}

/// Resident bids and asks between steps.
#[derive(Debug, Clone)]
pub struct Engine {
    bids: DualBook,
    asks: DualBook,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            bids: DualBook::new(Side::Bid),
            asks: DualBook::new(Side::Ask),
        }
    }

    pub fn bids(&self) -> &DualBook {
        &self.bids
    }

    pub fn asks(&self) -> &DualBook {
        &self.asks
    }

    /// Looks an id up on both sides.
    pub fn resident(&self, id: OrderId) -> Option<(Side, &Order)> {
        self.bids
            .get(id)
            .map(|o| (Side::Bid, o))
            .or_else(|| self.asks.get(id).map(|o| (Side::Ask, o)))
    }

    pub fn stats(&self) -> OpStats {
        self.bids.stats() + self.asks.stats()
    }

    pub fn reset_stats(&self) {
        self.bids.reset_stats();
        self.asks.reset_stats();
    }

    pub fn process_instruction(&mut self, instr: &Instruction) -> Result<Matching, EngineError> {
        match *instr {
            Instruction::Delete { id, .. } => Ok(self.del_order(id)),
            Instruction::Buy(order) => self.match_bid(order),
            Instruction::Sell(order) => self.match_ask(order),
        }
    }

    /// Matches an incoming ask against resident bids, best bid first, then
    /// shelves any remainder in the ask book.
    pub fn match_ask(&mut self, ask: Order) -> Result<Matching, EngineError> {
        if !ask.is_well_formed() {
            return Err(EngineError::InvalidOrder(ask));
        }
        let mut remaining = ask;
        let mut matching = Vec::new();
        loop {
            let best = match self.bids.peek_most_competitive() {
                Some(b) if b.price >= remaining.price => *b,
                _ => {
                    self.asks.insert(remaining)?;
                    return Ok(matching);
                }
            };
            self.bids.extract_most_competitive();
            if best.qty >= remaining.qty {
                matching.push(Transaction::new(best.id, remaining.id, remaining.qty));
                if best.qty > remaining.qty {
                    self.bids.insert(best.with_qty(best.qty - remaining.qty))?;
                }
                return Ok(matching);
            }
            matching.push(Transaction::new(best.id, remaining.id, best.qty));
            remaining.qty -= best.qty;
        }
    }

    /// Mirror of [`Engine::match_ask`]; transactions still list the bid first.
    pub fn match_bid(&mut self, bid: Order) -> Result<Matching, EngineError> {
        if !bid.is_well_formed() {
            return Err(EngineError::InvalidOrder(bid));
        }
        let mut remaining = bid;
        let mut matching = Vec::new();
        loop {
            let best = match self.asks.peek_most_competitive() {
                Some(a) if a.price <= remaining.price => *a,
                _ => {
                    self.bids.insert(remaining)?;
                    return Ok(matching);
                }
            };
            self.asks.extract_most_competitive();
            if best.qty >= remaining.qty {
                matching.push(Transaction::new(remaining.id, best.id, remaining.qty));
                if best.qty > remaining.qty {
                    self.asks.insert(best.with_qty(best.qty - remaining.qty))?;
                }
                return Ok(matching);
            }
            matching.push(Transaction::new(remaining.id, best.id, best.qty));
            remaining.qty -= best.qty;
        }
    }

    /// Removes the id from whichever side holds it. Unknown ids are a no-op.
    pub fn del_order(&mut self, id: OrderId) -> Matching {
        if self.bids.delete_by_id(id).is_none() {
            self.asks.delete_by_id(id);
        }
        Vec::new()
    }
}

impl MatchingEngine for Engine {
    fn process(&mut self, instr: &Instruction) -> Result<Matching, EngineError> {
        self.process_instruction(instr)
    }

    fn resident_bids(&self) -> Vec<Order> {
        self.bids.to_sorted_list()
    }

    fn resident_asks(&self) -> Vec<Order> {
        self.asks.to_sorted_list()
    }
}

/// Feeds every instruction through `engine` in order, collecting one
/// matching per step. Does not check that the book is structured.
pub fn replay<E: MatchingEngine>(
    engine: &mut E,
    instructions: &[Instruction],
) -> Result<Vec<Matching>, EngineError> {
    instructions.iter().map(|i| engine.process(i)).collect()
}

/// Matchings of every step of a structured book, step k at index k-1.
pub fn run_book(book: &OrderBook) -> Result<Vec<Matching>, EngineError> {
    validate_structured(book)?;
    replay(&mut Engine::new(), &book.instructions)
}

/// Same as [`run_book`], also returning the engine's accumulated work
/// counters.
pub fn run_book_counted(book: &OrderBook) -> Result<(Vec<Matching>, OpStats), EngineError> {
    validate_structured(book)?;
    let mut engine = Engine::new();
    let out = replay(&mut engine, &book.instructions)?;
    Ok((out, engine.stats()))
}

/// Runs the book through both engines; used by tests and the differential
/// example.
pub fn run_both(book: &OrderBook) -> Result<(Vec<Matching>, Vec<Matching>), EngineError> {
    validate_structured(book)?;
    let tree = replay(&mut Engine::new(), &book.instructions)?;
    let list = replay(&mut ListEngine::new(), &book.instructions)?;
    Ok((tree, list))
}
