//! One side of the resident book, stored twice: once by price-time
//! priority for best-order extraction and once by id for deletes. Both
//! trees always hold the same set of orders.

use thiserror::Error;

use crate::order::{CompetitiveKey, Order, OrderId, Side};
use crate::rbtree::{OpStats, OrderedMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BookError {
    #[error("order id {0} is already resident on the {1:?} side")]
    DuplicateId(OrderId, Side),
    #[error("an order at price {price} and timestamp {timestamp} is already resident on the {side:?} side")]
    DuplicateKey {
        side: Side,
        price: u64,
        timestamp: u64,
    },
}

#[derive(Debug, Clone)]
pub struct DualBook {
    side: Side,
    by_comp: OrderedMap<CompetitiveKey, Order>,
    by_id: OrderedMap<OrderId, Order>,
}

impl DualBook {
    pub fn new(side: Side) -> Self {
        DualBook {
            side,
            by_comp: OrderedMap::new(),
            by_id: OrderedMap::new(),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn insert(&mut self, order: Order) -> Result<(), BookError> {
        let key = order.competitive_key(self.side);
        self.by_id
            .add(order.id, order)
            .map_err(|_| BookError::DuplicateId(order.id, self.side))?;
        if self.by_comp.add(key, order).is_err() {
            self.by_id.remove(&order.id);
            return Err(BookError::DuplicateKey {
                side: self.side,
                price: order.price,
                timestamp: order.timestamp,
            });
        }
        Ok(())
    }

    /// Looks the id up in the id tree, then removes the order from both.
    pub fn delete_by_id(&mut self, id: OrderId) -> Option<Order> {
        let order = self.by_id.remove(&id)?;
        let removed = self.by_comp.remove(&order.competitive_key(self.side));
        debug_assert_eq!(removed, Some(order), "trees out of sync");
        Some(order)
    }

    pub fn extract_most_competitive(&mut self) -> Option<Order> {
        let (_, order) = self.by_comp.extract_min()?;
        let removed = self.by_id.remove(&order.id);
        debug_assert_eq!(removed, Some(order), "trees out of sync");
        Some(order)
    }

    pub fn peek_most_competitive(&self) -> Option<&Order> {
        self.by_comp.min().map(|(_, o)| o)
    }

    pub fn get(&self, id: OrderId) -> Option<&Order> {
        self.by_id.find(&id)
    }

    pub fn contains_id(&self, id: OrderId) -> bool {
        self.by_id.contains_key(&id)
    }

    /// Resident orders, most competitive first.
    pub fn to_sorted_list(&self) -> Vec<Order> {
        self.by_comp.elements().into_iter().copied().collect()
    }

    /// Resident orders by ascending id.
    pub fn by_id_list(&self) -> Vec<Order> {
        self.by_id.elements().into_iter().copied().collect()
    }

    /// Combined work counters of both trees.
    pub fn stats(&self) -> OpStats {
        self.by_comp.stats() + self.by_id.stats()
    }

    pub fn reset_stats(&self) {
        self.by_comp.reset_stats();
        self.by_id.reset_stats();
    }

    /// Both trees structurally valid and holding the same order set.
    pub fn is_consistent(&self) -> bool {
        if !self.by_comp.validate() || !self.by_id.validate() {
            return false;
        }
        if self.by_comp.len() != self.by_id.len() {
            return false;
        }
        let mut a = self.to_sorted_list();
        let b = self.by_id_list();
        a.sort_unstable_by_key(|o| o.id);
        a == b
            && self
                .by_comp
                .entries()
                .iter()
                .all(|(k, o)| **k == o.competitive_key(self.side))
    }
}
