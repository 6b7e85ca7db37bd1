//! Sorted-list engine. A direct transcription of the classic matching
//! routines over lists kept in priority order: head extraction is O(1),
//! but every insert and delete is a linear scan, so a book of n
//! instructions costs O(n^2).
//!
//! It exists to be obviously correct. It serves as the differential oracle
//! for the tree engine and as the quadratic baseline in benchmarks, and it
//! is deliberately left unoptimized.

use std::collections::VecDeque;

use crate::engine::{replay, EngineError, MatchingEngine};
use crate::logio::{validate_structured, OrderBook};
use crate::order::{Instruction, Matching, Order, OrderId, Side, Transaction};

/// One side of the book as a list sorted most-competitive first.
#[derive(Debug, Clone)]
pub struct ListBook {
    side: Side,
    orders: VecDeque<Order>,
}

impl ListBook {
    pub fn new(side: Side) -> Self {
        ListBook {
            side,
            orders: VecDeque::new(),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> Vec<Order> {
        self.orders.iter().copied().collect()
    }

    /// Inserts by scanning from the head until a less competitive order.
    pub fn insert(&mut self, order: Order) {
        let key = order.competitive_key(self.side);
        let mut pos = 0;
        while pos < self.orders.len() && self.orders[pos].competitive_key(self.side) < key {
            pos += 1;
        }
        self.orders.insert(pos, order);
    }

    pub fn pop_head(&mut self) -> Option<Order> {
        self.orders.pop_front()
    }

    pub fn push_head(&mut self, order: Order) {
        self.orders.push_front(order);
    }

    pub fn contains_id(&self, id: OrderId) -> bool {
        self.orders.iter().any(|o| o.id == id)
    }

    /// Drops every order carrying `id`.
    pub fn remove_id(&mut self, id: OrderId) {
        self.orders.retain(|o| o.id != id);
    }
}

fn match_ask(bids: &mut ListBook, asks: &mut ListBook, ask: Order) -> Matching {
    let Some(best) = bids.pop_head() else {
        asks.insert(ask);
        return Vec::new();
    };
    if best.price < ask.price {
        bids.push_head(best);
        asks.insert(ask);
        return Vec::new();
    }
    if best.qty == ask.qty {
        return vec![Transaction::new(best.id, ask.id, ask.qty)];
    }
    if best.qty > ask.qty {
        bids.push_head(best.with_qty(best.qty - ask.qty));
        return vec![Transaction::new(best.id, ask.id, ask.qty)];
    }
    let m = Transaction::new(best.id, ask.id, best.qty);
    let rest = match_ask(bids, asks, ask.with_qty(ask.qty - best.qty));
    let mut out = Vec::with_capacity(rest.len() + 1);
    out.push(m);
    out.extend(rest);
    out
}

fn match_bid(bids: &mut ListBook, asks: &mut ListBook, bid: Order) -> Matching {
    let Some(best) = asks.pop_head() else {
        bids.insert(bid);
        return Vec::new();
    };
    if best.price > bid.price {
        asks.push_head(best);
        bids.insert(bid);
        return Vec::new();
    }
    if best.qty == bid.qty {
        return vec![Transaction::new(bid.id, best.id, bid.qty)];
    }
    if best.qty > bid.qty {
        asks.push_head(best.with_qty(best.qty - bid.qty));
        return vec![Transaction::new(bid.id, best.id, bid.qty)];
    }
    let m = Transaction::new(bid.id, best.id, best.qty);
    let rest = match_bid(bids, asks, bid.with_qty(bid.qty - best.qty));
    let mut out = Vec::with_capacity(rest.len() + 1);
    out.push(m);
    out.extend(rest);
    out
}

fn del_order(bids: &mut ListBook, asks: &mut ListBook, id: OrderId) -> Matching {
    if bids.contains_id(id) {
        bids.remove_id(id);
    }
    if asks.contains_id(id) {
        asks.remove_id(id);
    }
    Vec::new()
}

/// Processes one instruction against the two lists.
pub fn ref_process_instruction(
    bids: &mut ListBook,
    asks: &mut ListBook,
    instr: &Instruction,
) -> Matching {
    match *instr {
        Instruction::Delete { id, .. } => del_order(bids, asks, id),
        Instruction::Buy(order) => match_bid(bids, asks, order),
        Instruction::Sell(order) => match_ask(bids, asks, order),
    }
}

#[derive(Debug, Clone)]
pub struct ListEngine {
    bids: ListBook,
    asks: ListBook,
}

impl Default for ListEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl ListEngine {
    pub fn new() -> Self {
        ListEngine {
            bids: ListBook::new(Side::Bid),
            asks: ListBook::new(Side::Ask),
        }
    }

    pub fn bids(&self) -> &ListBook {
        &self.bids
    }

    pub fn asks(&self) -> &ListBook {
        &self.asks
    }
}

impl MatchingEngine for ListEngine {
    fn process(&mut self, instr: &Instruction) -> Result<Matching, EngineError> {
        Ok(ref_process_instruction(&mut self.bids, &mut self.asks, instr))
    }

    fn resident_bids(&self) -> Vec<Order> {
        self.bids.orders()
    }

    fn resident_asks(&self) -> Vec<Order> {
        self.asks.orders()
    }
}

/// Matchings of every step of a structured book using the list engine.
pub fn ref_run_book(book: &OrderBook) -> Result<Vec<Matching>, EngineError> {
    validate_structured(book)?;
    replay(&mut ListEngine::new(), &book.instructions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(instrs: &[Instruction]) -> (ListEngine, Vec<Matching>) {
        let mut e = ListEngine::new();
        let out = replay(&mut e, instrs).unwrap();
        (e, out)
    }

    #[test]
    fn shared_examples() {
        let (e, out) = run(&[Instruction::Buy(Order::new(1, 1, 100, 5))]);
        assert_eq!(out, vec![vec![]]);
        assert_eq!(e.bids().orders(), vec![Order::new(1, 1, 100, 5)]);

        let (e, out) = run(&[
            Instruction::Buy(Order::new(1, 1, 100, 5)),
            Instruction::Sell(Order::new(2, 2, 90, 3)),
        ]);
        assert_eq!(out[1], vec![Transaction::new(1, 2, 3)]);
        assert_eq!(e.bids().orders(), vec![Order::new(1, 1, 100, 2)]);
        assert!(e.asks().is_empty());

        let (_, out) = run(&[
            Instruction::Buy(Order::new(1, 1, 100, 2)),
            Instruction::Buy(Order::new(2, 2, 95, 4)),
            Instruction::Sell(Order::new(3, 3, 90, 5)),
        ]);
        assert_eq!(out[2], vec![Transaction::new(1, 3, 2), Transaction::new(2, 3, 3)]);
    }

    #[test]
    fn insert_lands_between_neighbours() {
        let mut asks = ListBook::new(Side::Ask);
        asks.insert(Order::new(1, 1, 90, 1));
        asks.insert(Order::new(2, 2, 110, 1));
        asks.insert(Order::new(3, 3, 100, 1));
        let prices: Vec<_> = asks.orders().iter().map(|o| o.price).collect();
        assert_eq!(prices, vec![90, 100, 110]);
    }

    #[test]
    fn delete_middle_keeps_order() {
        let (mut e, _) = run(&[
            Instruction::Buy(Order::new(1, 1, 100, 1)),
            Instruction::Buy(Order::new(2, 2, 99, 1)),
            Instruction::Buy(Order::new(3, 3, 98, 1)),
        ]);
        e.process(&Instruction::Delete { id: 2, timestamp: 4 }).unwrap();
        let ids: Vec<_> = e.bids().orders().iter().map(|o| o.id).collect();
        assert_eq!(ids, vec![1, 3]);
    }

    #[test]
    fn ref_run_book_single() {
        let book = OrderBook::new(vec![Instruction::Buy(Order::new(1, 1, 100, 5))]);
        assert_eq!(ref_run_book(&book).unwrap(), vec![vec![]]);
    }
}
