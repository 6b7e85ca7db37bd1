//! Continuous double auction matching with price-time priority.
//!
//! - [`engine`]: the O(n log n) engine built on two synchronized
//!   red-black trees per side ([`dualbook`], [`rbtree`]).
//! - [`reference`]: the O(n^2) sorted-list engine, kept as an oracle.
//! - [`properties`]: executable checks for positive spread, price-time
//!   priority and conservation on a single step.
//! - [`logio`]: order-book and trade-book text formats and the structure
//!   check that every replayed book must pass.
//! - [`checker`]: replays an order book and reports every step where an
//!   exchange's trade book disagrees.
//! - [`toolkit`]: book generator, sort-by-auction, and scaling benchmark.
//!
//! ```
//! use cda_core::engine::run_book;
//! use cda_core::logio::parse_order_book_str;
//! use cda_core::order::Transaction;
//!
//! let book = parse_order_book_str("BUY,1,1,100,5\nSELL,2,2,90,3\n").unwrap();
//! let steps = run_book(&book).unwrap();
//! assert_eq!(steps[1], vec![Transaction::new(1, 2, 3)]);
//! ```

pub mod checker;
pub mod dualbook;
pub mod engine;
pub mod logio;
pub mod order;
pub mod properties;
pub mod rbtree;
pub mod reference;
pub mod toolkit;

pub use engine::{run_book, Engine, EngineError, EngineKind, MatchingEngine};
pub use order::{CompetitiveKey, Instruction, Matching, Order, Side, Transaction};
pub use reference::{ref_run_book, ListEngine};
