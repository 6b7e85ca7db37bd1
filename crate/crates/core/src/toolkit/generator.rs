//! Random structured order books.
//!
//! Randomness comes from ChaCha8 seeded with `ChaCha8Rng::seed_from_u64`.
//! Bounded draws take one `next_u64` and scale it into `[0, span)` with a
//! 128-bit widening multiply (`(x * span) >> 64`), so a given seed yields
//! the same book on every platform and is easy to reproduce elsewhere.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::Engine;
use crate::logio::OrderBook;
use crate::order::{Instruction, Order, OrderId, Price, Qty};

/// Fractions are expressed in parts per million.
pub const PPM: u32 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub seed: u64,
    pub price_range: (Price, Price),
    pub qty_range: (Qty, Qty),
    /// Share of instructions that are deletes.
    pub delete_ppm: u32,
    /// Share of instructions that are buys; sells take what is left.
    pub buy_ppm: u32,
    /// Chance that a delete of a live order is immediately followed by a
    /// re-entry under the same id (an update). Zero keeps every Buy/Sell id
    /// fresh.
    pub update_ppm: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 1000,
            seed: 0,
            price_range: (9000, 11000),
            qty_range: (1, 100),
            delete_ppm: 100_000,
            buy_ppm: 450_000,
            update_ppm: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("price range {0}..={1} is empty")]
    PriceRange(Price, Price),
    #[error("qty range {0}..={1} is empty or includes zero")]
    QtyRange(Qty, Qty),
    #[error("delete and buy fractions must each lie in [0, 1] and sum to at most 1")]
    Fractions,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenError> {
        let (plo, phi) = self.price_range;
        if plo > phi {
            return Err(GenError::PriceRange(plo, phi));
        }
        let (qlo, qhi) = self.qty_range;
        if qlo == 0 || qlo > qhi {
            return Err(GenError::QtyRange(qlo, qhi));
        }
        if self.delete_ppm > PPM
            || self.buy_ppm > PPM
            || self.update_ppm > PPM
            || self.delete_ppm + self.buy_ppm > PPM
        {
            return Err(GenError::Fractions);
        }
        Ok(())
    }
}

/// Converts a fraction in `[0, 1]` to parts per million, rounding.
pub fn fraction_to_ppm(f: f64) -> Option<u32> {
    if !(0.0..=1.0).contains(&f) {
        return None;
    }
    Some((f * f64::from(PPM)).round() as u32)
}

/// The seeded draw stream used by the generator.
#[derive(Debug, Clone)]
pub struct Draws {
    rng: ChaCha8Rng,
}

impl Draws {
    pub fn new(seed: u64) -> Self {
        Draws {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, span)`; `span` must be nonzero.
    pub fn below(&mut self, span: u64) -> u64 {
        ((u128::from(self.rng.next_u64()) * u128::from(span)) >> 64) as u64
    }

    /// Uniform in `lo..=hi`.
    pub fn inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        match (hi - lo).checked_add(1) {
            Some(span) => lo + self.below(span),
            None => self.rng.next_u64(),
        }
    }

    pub fn chance(&mut self, ppm: u32) -> bool {
        self.below(u64::from(PPM)) < u64::from(ppm)
    }
}

// Live resident ids with O(1) insert, remove and uniform pick.
#[derive(Default)]
struct LiveSet {
    ids: Vec<OrderId>,
    pos: std::collections::HashMap<OrderId, usize>,
}

impl LiveSet {
    fn insert(&mut self, id: OrderId) {
        if !self.pos.contains_key(&id) {
            self.pos.insert(id, self.ids.len());
            self.ids.push(id);
        }
    }

    fn remove(&mut self, id: OrderId) {
        if let Some(i) = self.pos.remove(&id) {
            self.ids.swap_remove(i);
            if let Some(&moved) = self.ids.get(i) {
                self.pos.insert(moved, i);
            }
        }
    }
}

/// Generates a structured book: timestamps run 1..=n, Buy/Sell ids are
/// fresh and increasing (unless updates are enabled), and each delete
/// targets a uniformly chosen live resident. With nothing live, a delete
/// names an id that is not resident and so does nothing.
pub fn gen_book(p: &GenParams) -> Result<OrderBook, GenError> {
    p.validate()?;
    let mut draws = Draws::new(p.seed);
    let mut engine = Engine::new();
    let mut live = LiveSet::default();
    let mut instructions = Vec::with_capacity(p.n);
    let mut last_id: OrderId = 0;
    let mut pending_update: Option<OrderId> = None;

    for ts in 1..=p.n as u64 {
        let roll = draws.below(u64::from(PPM));
        let instr = if let Some(id) = pending_update.take() {
            let order = random_order(&mut draws, p, id, ts);
            if roll < u64::from(p.buy_ppm) {
                Instruction::Buy(order)
            } else {
                Instruction::Sell(order)
            }
        } else if roll < u64::from(p.delete_ppm) {
            let id = if live.ids.is_empty() {
                last_id.max(1)
            } else {
                let id = live.ids[draws.below(live.ids.len() as u64) as usize];
                if draws.chance(p.update_ppm) {
                    pending_update = Some(id);
                }
                id
            };
            Instruction::Delete { id, timestamp: ts }
        } else {
            last_id += 1;
            let order = random_order(&mut draws, p, last_id, ts);
            if roll < u64::from(p.delete_ppm + p.buy_ppm) {
                Instruction::Buy(order)
            } else {
                Instruction::Sell(order)
            }
        };

        let matching = engine
            .process_instruction(&instr)
            .expect("generated books are structured");
        match instr {
            Instruction::Delete { id, .. } => live.remove(id),
            Instruction::Buy(o) | Instruction::Sell(o) => {
                for tx in &matching {
                    for id in [tx.bid_id, tx.ask_id] {
                        if id != o.id && engine.resident(id).is_none() {
                            live.remove(id);
                        }
                    }
                }
                if engine.resident(o.id).is_some() {
                    live.insert(o.id);
                }
            }
        }
        instructions.push(instr);
    }
    Ok(OrderBook::new(instructions))
}

fn random_order(draws: &mut Draws, p: &GenParams, id: OrderId, ts: u64) -> Order {
    let price = draws.inclusive(p.price_range.0, p.price_range.1);
    let qty = draws.inclusive(p.qty_range.0, p.qty_range.1);
    Order::new(id, ts, price, qty)
}

/// Worst case for the list engine: `n` bids at strictly falling prices, so
/// every arrival is the least competitive order and nothing ever trades.
pub fn adversarial_book(n: usize) -> OrderBook {
    let n64 = n as u64;
    OrderBook::new(
        (1..=n64)
            .map(|i| Instruction::Buy(Order::new(i, i, n64 + 1 - i, 1)))
            .collect(),
    )
}
