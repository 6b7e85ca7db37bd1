//! One side of the book: the same orders indexed by priority and by id.

use cda_core::dualbook::DualBook;
use cda_core::order::{Order, Side};

fn main() {
    let mut bids = DualBook::new(Side::Bid);
    bids.insert(Order::new(1, 1, 100, 5)).unwrap();
    bids.insert(Order::new(2, 2, 101, 3)).unwrap();
    bids.insert(Order::new(3, 3, 100, 7)).unwrap();

    // Highest price first, then earliest timestamp.
    for o in bids.to_sorted_list() {
        println!("bid id={} price={} qty={}", o.id, o.price, o.qty);
    }

    println!("cancel id 1 -> {:?}", bids.delete_by_id(1));
    println!("best -> {:?}", bids.extract_most_competitive());
    println!("left: {:?}", bids.by_id_list());
    println!("trees agree: {}", bids.is_consistent());
}
