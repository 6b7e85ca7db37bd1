//! Predicates over a single engine step `(bids, asks, instruction) ->
//! (bids', asks', matching)` encoding the three market rules: positive
//! bid-ask spread, price-time priority and conservation.
//!
//! They work on plain priority-sorted snapshots rather than on engine
//! internals, so they can audit any engine's transitions, including a
//! reconstruction of a third-party exchange.

use std::collections::HashMap;

use crate::engine::{EngineError, MatchingEngine};
use crate::order::{Instruction, Matching, Order, OrderId, Qty, Side};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub before_bids: Vec<Order>,
    pub before_asks: Vec<Order>,
    pub instr: Instruction,
    pub after_bids: Vec<Order>,
    pub after_asks: Vec<Order>,
    pub matching: Matching,
}

/// The books with the incoming order added, or with the deleted id removed.
pub fn augmented_books(t: &Transition) -> (Vec<Order>, Vec<Order>) {
    let mut bids = t.before_bids.clone();
    let mut asks = t.before_asks.clone();
    match t.instr {
        Instruction::Buy(o) => bids.push(o),
        Instruction::Sell(o) => asks.push(o),
        Instruction::Delete { id, .. } => {
            bids.retain(|o| o.id != id);
            asks.retain(|o| o.id != id);
        }
    }
    (bids, asks)
}

/// Every resident bid is priced strictly below every resident ask. Equal
/// prices would be matchable, so they fail.
pub fn check_positive_spread(after_bids: &[Order], after_asks: &[Order]) -> bool {
    let best_bid = after_bids.iter().map(|o| o.price).max();
    let best_ask = after_asks.iter().map(|o| o.price).min();
    match (best_bid, best_ask) {
        (Some(b), Some(a)) => b < a,
        _ => true,
    }
}

fn traded_by(matching: &Matching, side: Side) -> HashMap<OrderId, Qty> {
    let mut traded = HashMap::new();
    for tx in matching {
        let id = match side {
            Side::Bid => tx.bid_id,
            Side::Ask => tx.ask_id,
        };
        *traded.entry(id).or_insert(0) += tx.qty;
    }
    traded
}

/// If the incoming order traded with some counterparty, every counterparty
/// strictly more competitive than the least competitive one it traded with
/// must have been consumed in full.
pub fn check_priority(t: &Transition) -> bool {
    let counter_side = match t.instr {
        Instruction::Buy(_) => Side::Ask,
        Instruction::Sell(_) => Side::Bid,
        Instruction::Delete { .. } => return true,
    };
    if t.matching.is_empty() {
        return true;
    }
    let (bids, asks) = augmented_books(t);
    let pool = match counter_side {
        Side::Bid => bids,
        Side::Ask => asks,
    };
    let traded = traded_by(&t.matching, counter_side);
    let Some(worst_traded) = pool
        .iter()
        .filter(|o| traded.contains_key(&o.id))
        .map(|o| o.competitive_key(counter_side))
        .max()
    else {
        // Trades against ids not in the book; conservation reports that.
        return true;
    };
    pool.iter()
        .filter(|o| o.competitive_key(counter_side) < worst_traded)
        .all(|o| traded.get(&o.id).copied().unwrap_or(0) == o.qty)
}

fn conserves_side(pool: &[Order], after: &[Order], traded: &HashMap<OrderId, Qty>) -> bool {
    let by_id: HashMap<OrderId, &Order> = pool.iter().map(|o| (o.id, o)).collect();
    if traded.keys().any(|id| !by_id.contains_key(id)) {
        return false;
    }
    let mut expected: Vec<Order> = Vec::new();
    for o in pool {
        let q = traded.get(&o.id).copied().unwrap_or(0);
        if q > o.qty {
            return false;
        }
        if q < o.qty {
            expected.push(o.with_qty(o.qty - q));
        }
    }
    let mut got = after.to_vec();
    expected.sort_unstable_by_key(|o| o.id);
    got.sort_unstable_by_key(|o| o.id);
    expected == got
}

/// Residuals equal original quantity minus traded quantity, fully traded
/// orders leave, nothing else changes, and every trade names orders that
/// were in the (augmented) books.
pub fn check_conservation(t: &Transition) -> bool {
    let (bids, asks) = augmented_books(t);
    if t.matching.iter().any(|tx| tx.qty == 0) {
        return false;
    }
    conserves_side(&bids, &t.after_bids, &traded_by(&t.matching, Side::Bid))
        && conserves_side(&asks, &t.after_asks, &traded_by(&t.matching, Side::Ask))
}

/// Which of the three rules a transition breaks, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Verdict {
    pub spread: bool,
    pub priority: bool,
    pub conservation: bool,
}

impl Verdict {
    pub fn all(&self) -> bool {
        self.spread && self.priority && self.conservation
    }
}

pub fn check_all(t: &Transition) -> Verdict {
    Verdict {
        spread: check_positive_spread(&t.after_bids, &t.after_asks),
        priority: check_priority(t),
        conservation: check_conservation(t),
    }
}

/// Replays `instructions`, snapshotting the books around every step.
pub fn record_transitions<E: MatchingEngine>(
    engine: &mut E,
    instructions: &[Instruction],
) -> Result<Vec<Transition>, EngineError> {
    let mut out = Vec::with_capacity(instructions.len());
    let mut bids = engine.resident_bids();
    let mut asks = engine.resident_asks();
    for instr in instructions {
        let matching = engine.process(instr)?;
        let after_bids = engine.resident_bids();
        let after_asks = engine.resident_asks();
        out.push(Transition {
            before_bids: std::mem::replace(&mut bids, after_bids.clone()),
            before_asks: std::mem::replace(&mut asks, after_asks.clone()),
            instr: *instr,
            after_bids,
            after_asks,
            matching,
        });
    }
    Ok(out)
}
