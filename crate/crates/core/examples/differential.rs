//! Tree engine against the sorted-list engine on random books.

use cda_core::engine::run_both;
use cda_core::order::canonical_set;
use cda_core::toolkit::generator::{gen_book, GenParams};

fn main() {
    let mut steps = 0;
    for seed in 0..200 {
        let book = gen_book(&GenParams {
            n: 400,
            seed,
            price_range: (95, 105),
            ..Default::default()
        })
        .unwrap();
        let (tree, list) = run_both(&book).unwrap();
        for (k, (a, b)) in tree.iter().zip(&list).enumerate() {
            assert_eq!(canonical_set(a), canonical_set(b), "seed {seed} step {}", k + 1);
        }
        steps += tree.len();
    }
    println!("200 books, {steps} steps: engines agree");
}
