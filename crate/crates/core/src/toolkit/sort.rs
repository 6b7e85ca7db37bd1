//! Sorting by way of an auction: n unit bids priced at the inputs, then n
//! unit asks at price 0. Each ask takes the best remaining bid, so the
//! trade log lists the bids by descending price. Any matching engine is
//! therefore at least as hard as comparison sorting.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::engine::run_book;
use crate::logio::OrderBook;
use crate::order::{Instruction, Order};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SortError {
    #[error("value {0} is not positive")]
    NonPositive(u64),
    #[error("value {0} appears more than once")]
    Duplicate(u64),
}

/// The 2n-instruction book whose trade log sorts `values`.
pub fn reduction_book(values: &[u64]) -> Result<OrderBook, SortError> {
    let mut seen = HashSet::with_capacity(values.len());
    for &v in values {
        if v == 0 {
            return Err(SortError::NonPositive(v));
        }
        if !seen.insert(v) {
            return Err(SortError::Duplicate(v));
        }
    }
    let n = values.len() as u64;
    let bids = values
        .iter()
        .zip(1..)
        .map(|(&price, i)| Instruction::Buy(Order::new(i, i, price, 1)));
    let asks = (n + 1..=2 * n).map(|i| Instruction::Sell(Order::new(i, i, 0, 1)));
    Ok(OrderBook::new(bids.chain(asks).collect()))
}

/// Distinct positive `values`, sorted descending by running the engine.
pub fn sort_via_cda(values: &[u64]) -> Result<Vec<u64>, SortError> {
    let book = reduction_book(values)?;
    let price_of: HashMap<u64, u64> = book
        .instructions
        .iter()
        .filter_map(|i| match i {
            Instruction::Buy(o) => Some((o.id, o.price)),
            _ => None,
        })
        .collect();
    let matchings = run_book(&book).expect("reduction books are structured");
    Ok(matchings
        .iter()
        .flatten()
        .map(|tx| price_of[&tx.bid_id])
        .collect())
}
