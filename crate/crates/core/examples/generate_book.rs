//! Generate a small structured book and print it in the text format.

use cda_core::logio::{validate_structured, write_order_book};
use cda_core::toolkit::generator::{gen_book, GenParams};

fn main() {
    let params = GenParams {
        n: 20,
        seed: 42,
        price_range: (98, 102),
        qty_range: (1, 5),
        update_ppm: 300_000,
        ..Default::default()
    };
    let book = gen_book(&params).unwrap();
    validate_structured(&book).expect("generator output is structured");
    write_order_book(&book, std::io::stdout().lock()).unwrap();
}
