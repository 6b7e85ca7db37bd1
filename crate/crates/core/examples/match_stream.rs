//! Feed instructions one at a time and print each step's trades.

use cda_core::engine::Engine;
use cda_core::logio::parse_order_book_str;

const BOOK: &str = "\
BUY,1,1,100,2
BUY,2,2,95,4
SELL,3,3,90,5
SELL,4,4,120,1
BUY,5,5,130,1
DEL,2,6
SELL,6,7,95,3
";

fn main() {
    let book = parse_order_book_str(BOOK).expect("valid book");
    let mut engine = Engine::new();
    for (step, instr) in book.instructions.iter().enumerate() {
        let trades = engine.process_instruction(instr).expect("well-formed");
        let shown: Vec<String> = trades.iter().map(|t| t.to_string()).collect();
        println!("{:>2} {:?} -> [{}]", step + 1, instr, shown.join(" "));
    }
    println!("resting bids: {:?}", engine.bids().to_sorted_list());
    println!("resting asks: {:?}", engine.asks().to_sorted_list());
}
