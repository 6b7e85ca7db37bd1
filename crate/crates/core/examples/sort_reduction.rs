//! Sorting by auction: bids at each value, then zero-priced asks that
//! consume them best price first.

use cda_core::toolkit::sort::{reduction_book, sort_via_cda};

fn main() {
    let values = [17, 3, 42, 8, 25];
    for instr in &reduction_book(&values).unwrap().instructions {
        println!("{instr:?}");
    }
    println!("sorted: {:?}", sort_via_cda(&values).unwrap());
}
