//! Audit an exchange's trade log: one honest step, one tampered step.

use cda_core::checker::{check_logs, CheckOptions};
use cda_core::logio::{parse_order_book_str, parse_trade_book_str};

fn main() {
    let orders = parse_order_book_str(
        "BUY,1,1,100,2\nBUY,2,2,95,4\nSELL,3,3,90,5\nSELL,4,4,120,1\nBUY,5,5,130,1\n",
    )
    .unwrap();

    // Step 3 should fill bid 1 before bid 2; this log favours bid 2.
    let reported = parse_trade_book_str("3,2,3,4\n3,1,3,1\n5,5,4,1\n").unwrap();

    let report = check_logs(&orders, &reported, CheckOptions::default()).unwrap();
    if report.is_conforming() {
        println!("trade log conforms");
    }
    for m in &report.entries {
        println!("{m}");
    }
}
