//! Domain types shared by every engine: orders, sides, instructions and
//! the transactions a step emits.

use std::cmp::Ordering;
use std::fmt;

pub type OrderId = u64;
pub type Timestamp = u64;
/// Limit price in cents.
pub type Price = u64;
pub type Qty = u64;

/// A limit order `(id, timestamp, price, qty)`. `qty` is the remaining
/// maximum quantity, so a partially filled resident order keeps every other
/// field and only shrinks here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Order {
    pub id: OrderId,
    pub timestamp: Timestamp,
    pub price: Price,
    pub qty: Qty,
}

impl Order {
    pub const fn new(id: OrderId, timestamp: Timestamp, price: Price, qty: Qty) -> Self {
        Order {
            id,
            timestamp,
            price,
            qty,
        }
    }

    /// True when the field ranges hold: id, timestamp and qty are all at least 1.
    pub fn is_well_formed(&self) -> bool {
        self.id >= 1 && self.timestamp >= 1 && self.qty >= 1
    }

    pub fn with_qty(self, qty: Qty) -> Self {
        Order { qty, ..self }
    }

    pub fn competitive_key(&self, side: Side) -> CompetitiveKey {
        CompetitiveKey {
            side,
            price: self.price,
            timestamp: self.timestamp,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.id, self.timestamp, self.price, self.qty
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Bid,
    Ask,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Bid => Side::Ask,
            Side::Ask => Side::Bid,
        }
    }
}

/// Price-time priority key. Smaller means more competitive: for bids a
/// higher price wins, for asks a lower one, and ties go to the earlier
/// timestamp on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompetitiveKey {
    pub side: Side,
    pub price: Price,
    pub timestamp: Timestamp,
}

impl CompetitiveKey {
    pub fn bid(price: Price, timestamp: Timestamp) -> Self {
        CompetitiveKey {
            side: Side::Bid,
            price,
            timestamp,
        }
    }

    pub fn ask(price: Price, timestamp: Timestamp) -> Self {
        CompetitiveKey {
            side: Side::Ask,
            price,
            timestamp,
        }
    }
}

impl Ord for CompetitiveKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // Keys from different sides never share a tree; ordering them by
        // side keeps the relation total.
        self.side.cmp(&other.side).then_with(|| {
            let by_price = match self.side {
                Side::Bid => other.price.cmp(&self.price),
                Side::Ask => self.price.cmp(&other.price),
            };
            by_price.then_with(|| self.timestamp.cmp(&other.timestamp))
        })
    }
}

impl PartialOrd for CompetitiveKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One line of an order book.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    Buy(Order),
    Sell(Order),
    /// Deletes carry no price or quantity.
    Delete { id: OrderId, timestamp: Timestamp },
}

impl Instruction {
    pub fn id(&self) -> OrderId {
        match self {
            Instruction::Buy(o) | Instruction::Sell(o) => o.id,
            Instruction::Delete { id, .. } => *id,
        }
    }

    pub fn timestamp(&self) -> Timestamp {
        match self {
            Instruction::Buy(o) | Instruction::Sell(o) => o.timestamp,
            Instruction::Delete { timestamp, .. } => *timestamp,
        }
    }

    pub fn order(&self) -> Option<&Order> {
        match self {
            Instruction::Buy(o) | Instruction::Sell(o) => Some(o),
            Instruction::Delete { .. } => None,
        }
    }

    pub fn is_delete(&self) -> bool {
        matches!(self, Instruction::Delete { .. })
    }
}

/// A trade between a bid and an ask. Prices are not recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transaction {
    pub bid_id: OrderId,
    pub ask_id: OrderId,
    pub qty: Qty,
}

impl Transaction {
    pub const fn new(bid_id: OrderId, ask_id: OrderId, qty: Qty) -> Self {
        Transaction {
            bid_id,
            ask_id,
            qty,
        }
    }
}

impl fmt::Display for Transaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.bid_id, self.ask_id, self.qty)
    }
}

/// The transactions emitted by one step, in generation order (the trade
/// against the most competitive resident counterpart first).
pub type Matching = Vec<Transaction>;

/// Sorts a matching into a comparison-friendly order, for set-style
/// equality where serialization order should not matter.
pub fn canonical_set(matching: &[Transaction]) -> Vec<Transaction> {
    let mut v = matching.to_vec();
    v.sort_unstable();
    v
}
